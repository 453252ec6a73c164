"""Dispersion models: literature spot values and basic shape."""

import numpy as np
import pytest

from lnhom import materials

# Sellmeier evaluations frozen from the published coefficient sets
N_LN_EXTRAORDINARY_1550 = 2.1375596497855565
N_SILICA_1550 = 1.4440236217032607


def test_ln_extraordinary_at_1550():
    n = float(materials.lithium_niobate_extraordinary(1550.0))
    assert n == pytest.approx(N_LN_EXTRAORDINARY_1550, abs=1e-12)
    # congruent LN literature value ~2.138 at 1550 nm
    assert abs(n - 2.138) < 2e-3


def test_silica_at_1550():
    n = float(materials.silica(1550.0))
    assert n == pytest.approx(N_SILICA_1550, abs=1e-12)
    assert abs(n - 1.444) < 1e-3


def test_ln_is_negative_uniaxial():
    # ordinary index above extraordinary across the band
    for wl in (1300.0, 1550.0, 1700.0):
        assert materials.lithium_niobate_ordinary(wl) \
            > materials.lithium_niobate_extraordinary(wl)


def test_normal_dispersion_over_band():
    wl = np.linspace(1300.0, 1700.0, 41)
    for model in (materials.lithium_niobate_extraordinary,
                  materials.lithium_niobate_ordinary, materials.silica):
        n = model(wl)
        assert np.all(np.diff(n) < 0)


def test_core_index_dispatch():
    assert materials.core_index(1550.0, "te") \
        == materials.lithium_niobate_extraordinary(1550.0)
    assert materials.core_index(1550.0, "tm") \
        == materials.lithium_niobate_ordinary(1550.0)
    with pytest.raises(ValueError, match="polarization"):
        materials.core_index(1550.0, "tem")


def test_vectorized_evaluation():
    wl = np.array([1300.0, 1550.0, 1700.0])
    n = materials.silica(wl)
    assert n.shape == wl.shape
    assert float(n[1]) == pytest.approx(N_SILICA_1550, abs=1e-12)


def test_index_ordering_for_guiding():
    # film index must exceed substrate/cladding index everywhere in band
    wl = np.linspace(1300.0, 1700.0, 21)
    assert np.all(materials.lithium_niobate_extraordinary(wl)
                  > materials.silica(wl))
