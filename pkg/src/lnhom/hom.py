"""Two-photon interference at a beam splitter of arbitrary reflectivity.

Photons are Gaussian spectral wavepackets; their distinguishability enters
through a single overlap number

    I(tau) = M^2 |integral phi_s(w) phi_i*(w) exp(-i w tau) dw|^2,

where M lumps polarization and spatial mode mismatch.  The coincidence
probability between the two output arms follows the standard two-photon
law for a splitter with cross-port fraction eta,

    P_cc(tau) = eta^2 + (1-eta)^2 - 2 eta (1-eta) I(tau),

whose normalized dip depth is V = 2 eta (1-eta) I(0) / (eta^2 + (1-eta)^2).
All delays are picoseconds; optical-stage positions convert through an
explicit single- or double-pass factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT_UM_PER_PS = 299.792458
SPEED_OF_LIGHT_NM_PER_PS = 299_792.458
_FWHM_TO_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))

# extra path per um of stage travel: a retroreflector doubles it
STAGE_SINGLE_PASS_PS_PER_UM = 1.0 / SPEED_OF_LIGHT_UM_PER_PS
STAGE_DOUBLE_PASS_PS_PER_UM = 2.0 / SPEED_OF_LIGHT_UM_PER_PS


@dataclass(frozen=True)
class PhotonWavepacket:
    """Gaussian spectral wavepacket given by its intensity-FWHM bandwidth."""

    center_wavelength_nm: float
    bandwidth_fwhm_nm: float
    shape: str = "gaussian"
    delay_ps: float = 0.0

    def __post_init__(self):
        if self.center_wavelength_nm <= 0:
            raise ValueError("center_wavelength_nm must be positive")
        if self.bandwidth_fwhm_nm <= 0:
            raise ValueError("bandwidth_fwhm_nm must be positive")
        if self.shape != "gaussian":
            raise ValueError(f"unsupported spectral shape {self.shape!r}")

    @property
    def center_angular_frequency_rad_per_ps(self):
        return 2.0 * math.pi * SPEED_OF_LIGHT_NM_PER_PS / self.center_wavelength_nm

    @property
    def sigma_omega_rad_per_ps(self):
        """Intensity standard deviation of the angular-frequency spectrum."""
        sigma_lambda = self.bandwidth_fwhm_nm / _FWHM_TO_SIGMA
        return 2.0 * math.pi * SPEED_OF_LIGHT_NM_PER_PS * sigma_lambda \
            / self.center_wavelength_nm**2

    def spectral_amplitude(self, omega_rad_per_ps):
        """Real envelope phi(w), normalized so integral |phi|^2 dw = 1."""
        sigma = self.sigma_omega_rad_per_ps
        centered = np.asarray(omega_rad_per_ps) - self.center_angular_frequency_rad_per_ps
        return (2.0 * math.pi * sigma**2) ** -0.25 \
            * np.exp(-(centered**2) / (4.0 * sigma**2))

    def coherence_time_ps(self):
        return 1.0 / self.sigma_omega_rad_per_ps


@dataclass(frozen=True)
class TwoPhotonState:
    """Signal and idler wavepackets plus their mode overlap M in [0, 1];
    M = 1 means indistinguishable up to delay."""

    signal: PhotonWavepacket
    idler: PhotonWavepacket
    mode_overlap: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.mode_overlap <= 1.0:
            raise ValueError("mode_overlap must lie in [0, 1]")

    @classmethod
    def degenerate(cls, center_wavelength_nm, bandwidth_fwhm_nm, mode_overlap=1.0):
        """Identical signal and idler wavepackets."""
        packet = PhotonWavepacket(center_wavelength_nm, bandwidth_fwhm_nm)
        return cls(packet, packet, mode_overlap)

    @classmethod
    def from_source_visibility(cls, source_visibility, center_wavelength_nm,
                               bandwidth_fwhm_nm):
        """Degenerate pair whose zero-delay overlap equals the measured
        source-only visibility (M = sqrt(V_source))."""
        if not 0.0 <= source_visibility <= 1.0:
            raise ValueError("source_visibility must lie in [0, 1]")
        return cls.degenerate(center_wavelength_nm, bandwidth_fwhm_nm,
                              math.sqrt(source_visibility))


def spectral_overlap(state, delay_ps=0.0):
    """Indistinguishability I(tau) of the two wavepackets, in [0, 1].

    Closed form for Gaussians; per-packet arrival delays add to ``delay_ps``.
    Accepts scalar or array delay.
    """
    s1 = state.signal.sigma_omega_rad_per_ps
    s2 = state.idler.sigma_omega_rad_per_ps
    sum_var = s1**2 + s2**2
    delta_omega = state.signal.center_angular_frequency_rad_per_ps \
        - state.idler.center_angular_frequency_rad_per_ps
    tau = np.asarray(delay_ps, dtype=float) \
        + (state.signal.delay_ps - state.idler.delay_ps)
    shape_factor = 2.0 * s1 * s2 / sum_var \
        * math.exp(-delta_omega**2 / (2.0 * sum_var))
    overlap = state.mode_overlap**2 * shape_factor \
        * np.exp(-2.0 * s1**2 * s2**2 * tau**2 / sum_var)
    return overlap if np.ndim(delay_ps) else float(overlap)


def hom_visibility_max(eta):
    """Best achievable dip visibility for a splitter with cross fraction eta.

    Computed from q = eta - 1/2 so the eta <-> 1-eta symmetry is exact in
    floating point.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    q = eta - 0.5
    product = 0.25 - q * q  # eta (1 - eta)
    return 2.0 * product / (1.0 - 2.0 * product)


def combined_visibility(source_visibility, eta):
    """Expected dip visibility when an imperfect source (its own zero-delay
    visibility) meets an unbalanced splitter."""
    if not 0.0 <= source_visibility <= 1.0:
        raise ValueError("source_visibility must lie in [0, 1]")
    return source_visibility * hom_visibility_max(eta)


def pair_pattern_probabilities(eta, indistinguishability):
    """Probabilities of the four two-photon output patterns:
    (both in arm 1, both in arm 2, coincidence ordering A, ordering B).

    The two coincidence orderings are equal halves of P_cc.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if not 0.0 <= indistinguishability <= 1.0:
        raise ValueError("indistinguishability must lie in [0, 1]")
    product = eta * (1.0 - eta)
    bunched = product * (1.0 + indistinguishability)
    coincidence = eta**2 + (1.0 - eta) ** 2 \
        - 2.0 * product * indistinguishability
    return bunched, bunched, 0.5 * coincidence, 0.5 * coincidence


@dataclass
class DelayScan:
    """Coincidence data over a delay axis.

    ``values`` holds probabilities (normalized or not) or integer counts.
    When the scan came from an optical stage, the positions and their
    declared position-to-delay conversion ride along.
    """

    delay_ps: np.ndarray
    values: np.ndarray
    normalized: bool = False
    stage_um: np.ndarray | None = None
    stage_conversion_ps_per_um: float | None = None

    def __post_init__(self):
        self.delay_ps = np.asarray(self.delay_ps, dtype=float)
        self.values = np.asarray(self.values)
        if self.delay_ps.ndim != 1 or self.delay_ps.size < 1:
            raise ValueError("delay axis must be a non-empty 1D array")
        if np.any(np.diff(self.delay_ps) <= 0):
            raise ValueError("delays must be strictly increasing")
        if self.values.shape != self.delay_ps.shape:
            raise ValueError("values and delays must have matching shape")
        if np.any(self.values < 0):
            raise ValueError("coincidence values must be non-negative")

    @classmethod
    def from_stage_positions(cls, stage_um, values,
                             conversion_ps_per_um=STAGE_DOUBLE_PASS_PS_PER_UM,
                             normalized=False):
        stage = np.asarray(stage_um, dtype=float)
        return cls(delay_ps=stage * conversion_ps_per_um, values=values,
                   normalized=normalized, stage_um=stage,
                   stage_conversion_ps_per_um=conversion_ps_per_um)


def coincidence_curve(state, eta, delays_ps, normalized=True):
    """Two-photon coincidence probability over a delay grid.

    Normalized scans divide by the far-delay baseline eta^2 + (1-eta)^2 so
    the wings sit at 1 and the dip depth equals
    combined_visibility(I(0) at zero relative delay, eta).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    delays = np.asarray(delays_ps, dtype=float)
    overlap = spectral_overlap(state, delays)
    baseline = eta**2 + (1.0 - eta) ** 2
    values = baseline - 2.0 * eta * (1.0 - eta) * overlap
    if normalized:
        values = values / baseline
    return DelayScan(delay_ps=delays, values=values, normalized=normalized)
