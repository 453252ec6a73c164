"""Model fitting and loss analysis for coupler and interference data.

Three smooth, low-dimensional models are fitted with damped Gauss-Newton
(Levenberg-Marquardt) using analytic Jacobians:

  * splitting ratio versus interaction length,
        P(L) = B + A sin^2(pi (L + L0) / (2 Lc)),
  * Gaussian coincidence dip versus delay,
        C(tau) = B (1 - V exp(-(tau - tau0)^2 / (2 w^2))),
  * Fabry-Perot facet fringes, whose contrast inverts to a propagation
    loss in dB/cm.

Raw counts get Poisson weights (sigma_i = sqrt(max(c_i, 1))); probability
data is weighted uniformly, with the covariance rescaled by the reduced
chi-square.  Fits are deterministic: fixed iteration schedule, no random
restarts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import ConvergenceError, NegativeLossWarning, UnidentifiableDataError

MAX_ITERATIONS = 500
STEP_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PowerRatioSeries:
    """Measured cross-port power fraction versus coupler interaction length."""

    interaction_length_um: np.ndarray
    ratio: np.ndarray
    input_port: str = "a"

    def __post_init__(self):
        object.__setattr__(self, "interaction_length_um",
                           np.asarray(self.interaction_length_um, dtype=float))
        object.__setattr__(self, "ratio", np.asarray(self.ratio, dtype=float))
        if self.interaction_length_um.ndim != 1 \
                or self.interaction_length_um.shape != self.ratio.shape:
            raise ValueError("lengths and ratios must be matching 1D arrays")
        if np.any(np.diff(self.interaction_length_um) <= 0):
            raise ValueError("interaction lengths must be strictly increasing")
        if np.any((self.ratio < 0) | (self.ratio > 1)):
            raise ValueError("power ratios must lie in [0, 1]")


@dataclass
class FitResult:
    """Parameter estimates with covariance; 1-sigma uncertainties are the
    square roots of the covariance diagonal."""

    parameters: dict
    covariance: np.ndarray
    residual_rms: float
    converged: bool
    residuals: np.ndarray = field(repr=False, default=None)

    @property
    def uncertainties(self):
        sigmas = np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))
        return dict(zip(self.parameters, (float(s) for s in sigmas)))


def _run_fit(residual_fn, jacobian_fn, x0, names, data_sigma, n_points):
    result = least_squares(residual_fn, x0, jac=jacobian_fn, method="lm",
                           xtol=STEP_TOLERANCE, max_nfev=MAX_ITERATIONS)
    if not result.success:
        raise ConvergenceError(
            f"fit did not converge within {MAX_ITERATIONS} evaluations: "
            f"{result.message}",
            residual_norm=float(np.linalg.norm(result.fun)),
        )
    jac = result.jac
    dof = max(n_points - len(x0), 1)
    gram_inv = np.linalg.pinv(jac.T @ jac)
    if data_sigma is None:
        # unknown uniform noise level: scale by reduced chi-square
        gram_inv = gram_inv * (2.0 * result.cost / dof)
    covariance = 0.5 * (gram_inv + gram_inv.T)
    weighted_rms = math.sqrt(2.0 * result.cost / n_points)
    return FitResult(
        parameters=dict(zip(names, (float(x) for x in result.x))),
        covariance=covariance,
        residual_rms=weighted_rms,
        converged=True,
        residuals=result.fun,
    )


def _sinusoid_initial_guess(lengths, ratios):
    amplitude = float(np.ptp(ratios))
    baseline = float(ratios.min())
    # dominant period from an FFT on a resampled uniform grid
    uniform = np.linspace(lengths[0], lengths[-1], 4 * lengths.size)
    resampled = np.interp(uniform, lengths, ratios)
    spectrum = np.abs(np.fft.rfft(resampled - resampled.mean()))
    freqs = np.fft.rfftfreq(uniform.size, uniform[1] - uniform[0])
    peak = 1 + int(np.argmax(spectrum[1:]))
    coupling_length = 0.5 / freqs[peak]
    # project onto the quadratures at that frequency to place the phase
    omega = math.pi / coupling_length
    centered = ratios - ratios.mean()
    cos_part = float(np.sum(centered * np.cos(omega * lengths)))
    sin_part = float(np.sum(centered * np.sin(omega * lengths)))
    phase = math.atan2(sin_part, -cos_part) % (2.0 * math.pi)
    return [coupling_length, phase / omega, amplitude, baseline]


def fit_coupling_sinusoid(series, initial_guess=None):
    """Fit the sin^2 power-exchange model; returns coupling_length_um,
    offset_um, amplitude and baseline.

    Raises UnidentifiableDataError for a constant series and
    ConvergenceError if the solver stalls.
    """
    lengths = series.interaction_length_um
    ratios = series.ratio
    if lengths.size < 6:
        raise ValueError("need at least 6 points to fit the sinusoid")
    if np.ptp(ratios) == 0.0:
        raise UnidentifiableDataError("constant power ratio carries no period")
    names = ("coupling_length_um", "offset_um", "amplitude", "baseline")
    x0 = list(initial_guess) if initial_guess is not None \
        else _sinusoid_initial_guess(lengths, ratios)

    def model_terms(params):
        coupling_length, offset, amplitude, _ = params
        theta = 0.5 * math.pi * (lengths + offset) / coupling_length
        return theta, amplitude * np.sin(2.0 * theta)

    def residual_fn(params):
        coupling_length, offset, amplitude, baseline = params
        theta = 0.5 * math.pi * (lengths + offset) / coupling_length
        return baseline + amplitude * np.sin(theta) ** 2 - ratios

    def jacobian_fn(params):
        coupling_length, offset, amplitude, _ = params
        theta, swing = model_terms(params)
        jac = np.empty((lengths.size, 4))
        jac[:, 0] = -swing * theta / coupling_length
        jac[:, 1] = swing * 0.5 * math.pi / coupling_length
        jac[:, 2] = np.sin(theta) ** 2
        jac[:, 3] = 1.0
        return jac

    return _run_fit(residual_fn, jacobian_fn, x0, names, None, lengths.size)


def coupling_length_statistics(fitted_lengths):
    """Sample mean and sample standard deviation (ddof=1) of per-port
    coupling-length fits."""
    values = np.asarray(fitted_lengths, dtype=float)
    if values.size < 2:
        raise ValueError("need at least two fitted values")
    return float(values.mean()), float(values.std(ddof=1))


def _dip_initial_guess(delays, values):
    baseline = float(np.maximum(values[0], values[-1]))
    if baseline <= 0:
        baseline = max(float(values.max()), 1.0)
    lowest = int(np.argmin(values))
    center = float(delays[lowest])
    visibility = min(max(1.0 - values[lowest] / baseline, 0.01), 1.0)
    half_level = baseline * (1.0 - 0.5 * visibility)
    below = np.flatnonzero(values < half_level)
    if below.size >= 2:
        fwhm = float(delays[below[-1]] - delays[below[0]])
    else:
        fwhm = float(delays[-1] - delays[0]) / 4.0
    width = max(fwhm, float(delays[1] - delays[0])) / (2.0 * math.sqrt(2.0 * math.log(2.0)))
    return [visibility, center, width, baseline]


def fit_gaussian_dip(scan, initial_guess=None):
    """Fit the Gaussian dip model to a DelayScan; returns visibility,
    center_ps, width_ps and baseline.

    Integer-valued scans are treated as raw counts and get Poisson weights.
    """
    delays = scan.delay_ps
    values = np.asarray(scan.values, dtype=float)
    if delays.size < 10:
        raise ValueError("need at least 10 points to fit the dip")
    names = ("visibility", "center_ps", "width_ps", "baseline")
    x0 = list(initial_guess) if initial_guess is not None \
        else _dip_initial_guess(delays, values)
    poisson = np.issubdtype(scan.values.dtype, np.integer) and not scan.normalized
    sigma = np.sqrt(np.maximum(values, 1.0)) if poisson else np.ones_like(values)

    def envelope(params):
        _, center, width, _ = params
        pulled = delays - center
        return pulled, np.exp(-(pulled**2) / (2.0 * width**2))

    def residual_fn(params):
        visibility, _, _, baseline = params
        _, shape = envelope(params)
        return (baseline * (1.0 - visibility * shape) - values) / sigma

    def jacobian_fn(params):
        visibility, _, width, baseline = params
        pulled, shape = envelope(params)
        jac = np.empty((delays.size, 4))
        jac[:, 0] = -baseline * shape
        jac[:, 1] = -baseline * visibility * shape * pulled / width**2
        jac[:, 2] = -baseline * visibility * shape * pulled**2 / width**3
        jac[:, 3] = 1.0 - visibility * shape
        return (jac.T / sigma).T

    return _run_fit(residual_fn, jacobian_fn, x0, names,
                    sigma if poisson else None, delays.size)


def normalized_scan(scan, fit_result):
    """Scan divided by the fitted baseline, so the wings sit at 1."""
    from .hom import DelayScan

    baseline = fit_result.parameters["baseline"]
    return DelayScan(delay_ps=scan.delay_ps,
                     values=np.asarray(scan.values, dtype=float) / baseline,
                     normalized=True, stage_um=scan.stage_um,
                     stage_conversion_ps_per_um=scan.stage_conversion_ps_per_um)


def fresnel_reflectivity(n_eff):
    """Normal-incidence facet reflectivity from the mode's effective index."""
    if n_eff <= 0:
        raise ValueError("n_eff must be positive")
    return ((n_eff - 1.0) / (n_eff + 1.0)) ** 2


def fabry_perot_loss(contrast, facet_reflectivity, length_cm):
    """Propagation loss (dB/cm) from facet-cavity fringe contrast.

    A contrast exceeding the lossless bound gives a negative loss, returned
    as-is with a NegativeLossWarning rather than clamped.
    """
    if not 0.0 < contrast < 1.0:
        raise ValueError("contrast must lie strictly between 0 and 1")
    if not 0.0 < facet_reflectivity < 1.0:
        raise ValueError("facet reflectivity must lie strictly between 0 and 1")
    if length_cm <= 0:
        raise ValueError("length_cm must be positive")
    effective = (1.0 - math.sqrt(1.0 - contrast**2)) / contrast
    alpha = -(10.0 / length_cm) * math.log10(effective / facet_reflectivity)
    if alpha < -1e-9:  # ignore rounding noise around the lossless point
        warnings.warn(
            f"fringe contrast {contrast} implies gain ({alpha:.3f} dB/cm); "
            "check the assumed facet reflectivity",
            NegativeLossWarning,
            stacklevel=2,
        )
    return alpha


def fabry_perot_fringes(phase_rad, loss_db_per_cm, length_cm, facet_reflectivity):
    """Synthetic facet-cavity transmission versus round-trip phase (Airy
    function), for closing the contrast-extraction roundtrip."""
    if not 0.0 < facet_reflectivity < 1.0:
        raise ValueError("facet reflectivity must lie strictly between 0 and 1")
    if length_cm <= 0:
        raise ValueError("length_cm must be positive")
    phase = np.asarray(phase_rad, dtype=float)
    single_pass = 10.0 ** (-loss_db_per_cm * length_cm / 10.0)
    loop = facet_reflectivity * single_pass
    numerator = (1.0 - facet_reflectivity) ** 2 * single_pass
    return numerator / ((1.0 - loop) ** 2 + 4.0 * loop * np.sin(0.5 * phase) ** 2)


def fringe_contrast(values):
    """Michelson contrast (max - min)/(max + min) of a fringe trace."""
    values = np.asarray(values, dtype=float)
    top = float(values.max())
    bottom = float(values.min())
    if top + bottom <= 0:
        raise ValueError("fringe trace must contain positive values")
    return (top - bottom) / (top + bottom)


def hom_visibility_slope(eta):
    """d V_max / d eta for the splitter-limited visibility."""
    product = eta * (1.0 - eta)
    return 2.0 * (1.0 - 2.0 * eta) / (1.0 - 2.0 * product) ** 2


def propagate_visibility_uncertainty(eta, sigma_eta, source_visibility=1.0,
                                     sigma_source=0.0):
    """First-order uncertainty of V = V_source * V_max(eta).

    Returns (value, sigma).
    """
    from .hom import hom_visibility_max

    if sigma_eta < 0 or sigma_source < 0:
        raise ValueError("uncertainties must be non-negative")
    vmax = hom_visibility_max(eta)
    value = source_visibility * vmax
    d_eta = source_visibility * hom_visibility_slope(eta)
    variance = (d_eta * sigma_eta) ** 2 + (vmax * sigma_source) ** 2
    return value, math.sqrt(variance)
