"""One-shot reproduction of the published quantitative results.

Runs every desk-scale check against the published reference values: the
closed-form visibility numbers, fit roundtrips, the mode-solver geometry
checks and a seeded counting simulation.  Each check reports the expected
value, the computed value and its tolerance; the scenario passes only if
every row passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import reference as ref
from .coupler import bandwidth_scan, length_for_ratio, with_interaction_length
from .counting import simulate_counts
from .fitting import (PowerRatioSeries, coupling_length_statistics,
                      fabry_perot_fringes, fabry_perot_loss,
                      fit_coupling_sinusoid, fit_gaussian_dip,
                      fresnel_reflectivity, fringe_contrast)
from .hom import DelayScan, combined_visibility, hom_visibility_max
from .modes import guided_mode_count, supermode_coupling_length


@dataclass(frozen=True)
class CheckResult:
    name: str
    expected: str
    computed: str
    tolerance: str
    passed: bool


def _close(name, computed, expected, tolerance):
    return CheckResult(name, f"{expected:.6g}", f"{computed:.6g}",
                       f"{tolerance:.2g}", abs(computed - expected) <= tolerance)


def _within(name, computed, low, high):
    return CheckResult(name, f"[{low:g}, {high:g}]", f"{computed:.6g}", "band",
                       low <= computed <= high)


def _visibility_checks():
    yield _close("splitter-limited visibility at measured ratio",
                 hom_visibility_max(ref.SPLITTING_RATIO),
                 ref.SPLITTER_LIMITED_VISIBILITY, 2e-4)
    yield _close("balanced-splitter visibility",
                 hom_visibility_max(0.5), 1.0, 1e-12)
    yield _close("expected visibility, source times splitter",
                 combined_visibility(ref.SOURCE_VISIBILITY, ref.SPLITTING_RATIO),
                 ref.EXPECTED_VISIBILITY, 5e-4)


def _statistics_checks():
    mean, spread = coupling_length_statistics(ref.COUPLING_LENGTH_PORT_FITS_UM)
    yield _close("coupling length, two-port mean (um)",
                 mean, ref.COUPLING_LENGTH_UM, 5e-3)
    yield _close("coupling length, two-port spread (um)",
                 spread, ref.COUPLING_LENGTH_UNCERTAINTY_UM, 1e-2)


def _fit_roundtrip_checks():
    lengths = np.linspace(*ref.INTERACTION_LENGTH_SERIES_UM, 12)
    true_lc = ref.COUPLING_LENGTH_PORT_FITS_UM[0]
    ratios = np.sin(0.5 * math.pi * (lengths + 20.0) / true_lc) ** 2
    fit = fit_coupling_sinusoid(PowerRatioSeries(lengths, ratios))
    rel = abs(fit.parameters["coupling_length_um"] - true_lc) / true_lc
    yield _close("beat-length fit roundtrip, relative error", rel, 0.0, 1e-3)

    delays = np.linspace(-8.0, 8.0, 41)
    dip = 1.0 - ref.MEASURED_RAW_VISIBILITY * np.exp(-(delays**2) / (2 * 1.2**2))
    dip_fit = fit_gaussian_dip(DelayScan(delays, dip))
    yield _close("dip fit roundtrip, visibility",
                 dip_fit.parameters["visibility"],
                 ref.MEASURED_RAW_VISIBILITY, 1e-4)

    facet = fresnel_reflectivity(1.9)
    phase = np.arange(0.0, 4.0 * math.pi + 1e-9, math.pi / 500.0)
    fringes = fabry_perot_fringes(phase, ref.PROPAGATION_LOSS_DB_PER_CM, 1.0, facet)
    alpha = fabry_perot_loss(fringe_contrast(fringes), facet, 1.0)
    yield _close("facet-fringe loss roundtrip (dB/cm)",
                 alpha, ref.PROPAGATION_LOSS_DB_PER_CM,
                 0.002 * ref.PROPAGATION_LOSS_DB_PER_CM)


def _solver_checks(grid_pitch_nm):
    count = guided_mode_count(
        ref.reference_geometry(), ref.CHARACTERIZATION_WAVELENGTH_NM,
        grid_pitch_nm=grid_pitch_nm)
    yield CheckResult("single-mode waveguide (guided-mode count)", "1",
                      str(count), "exact", count == 1)
    pair_geometry = ref.reference_coupler_geometry()
    beat = supermode_coupling_length(pair_geometry,
                                     ref.CHARACTERIZATION_WAVELENGTH_NM,
                                     grid_pitch_nm=grid_pitch_nm)
    yield _within("simulated coupler beat length (um)", beat, 90.0, 180.0)


def _bandwidth_checks():
    device = ref.reference_device()
    order0 = with_interaction_length(device, length_for_ratio(device, 0.5, 0))
    scan0 = bandwidth_scan(order0, 1540.0, 1560.0, 0.25)
    yield _close("order-0 flatness over 1540-1560 nm (max |eta - 0.5|)",
                 float(np.max(np.abs(scan0.eta - 0.5))), 0.0, 0.01)

    order1 = with_interaction_length(device, length_for_ratio(device, 0.5, 1))
    widths = []
    for dev in (order0, order1):
        scan = bandwidth_scan(dev, 1460.0, 1640.0, 0.25)
        inside = np.abs(scan.eta - 0.5) < 0.01
        widths.append(0.25 * int(np.count_nonzero(inside)))
    yield CheckResult("higher-order device narrows the 1% bandwidth",
                      f"< {widths[0]:g} nm", f"{widths[1]:g} nm", "strict",
                      widths[1] < widths[0])


def _counting_check(seed, pulses_per_point, delay_points):
    scan = simulate_counts(
        ref.reference_photon_pair(), ref.SPLITTING_RATIO,
        ref.reference_source(), ref.reference_detectors(),
        np.linspace(-8.0, 8.0, delay_points), pulses_per_point, seed=seed)
    fit = fit_gaussian_dip(scan)
    yield _within("counting-simulation fitted visibility",
                  fit.parameters["visibility"], 0.93, 0.985)


def run_reproduction(seed=12345, pulses_per_point=1_000_000, delay_points=50,
                     grid_pitch_nm=20.0):
    """All reproduction checks in order; the solver pair dominates runtime."""
    results = []
    results.extend(_visibility_checks())
    results.extend(_statistics_checks())
    results.extend(_fit_roundtrip_checks())
    results.extend(_solver_checks(grid_pitch_nm))
    results.extend(_bandwidth_checks())
    results.extend(_counting_check(seed, pulses_per_point, delay_points))
    return results


def format_report(results):
    name_width = max(len(r.name) for r in results) + 2
    lines = [f"{'check':<{name_width}}{'expected':>16}{'computed':>16}"
             f"{'tolerance':>12}  status"]
    for r in results:
        lines.append(f"{r.name:<{name_width}}{r.expected:>16}{r.computed:>16}"
                     f"{r.tolerance:>12}  {'PASS' if r.passed else 'FAIL'}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
