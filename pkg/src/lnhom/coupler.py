"""Lumped coupled-mode model of a two-waveguide directional coupler.

Power exchange over an interaction length L_I (plus a bend-region offset
L_0 acting as extra effective length) is governed by the accumulated
coupling phase

    theta(lambda) = kappa(lambda) * (L_I + L_0),
    kappa(lambda) = kappa0 + slope * (lambda - lambda0),

with the cross-port power fraction eta = sin^2(theta).  ``kappa0`` comes
from the beat length at the reference wavelength, kappa0 = pi / (2 L_c).
The linear kappa slope can be supplied directly, derived from a slope of
the supermode index splitting, or calibrated from two mode-solver runs.
Cross coupling carries the -i quadrature phase of the symmetric coupler
convention; two-photon coincidence rates do not depend on that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import UnreachableTargetError
from .modes import supermode_coupling_length


@dataclass(frozen=True)
class CouplerDevice:
    """Directional coupler with a linear-in-wavelength coupling rate.

    ``dispersion_slope`` is d(kappa)/d(wavelength) in rad/(um nm); zero
    makes the splitting ratio wavelength-independent.  Lengths are in um,
    wavelengths in nm.
    """

    coupling_length_um: float
    reference_wavelength_nm: float = 1550.0
    dispersion_slope: float = 0.0
    interaction_length_um: float = 0.0
    bend_offset_um: float = 0.0

    def __post_init__(self):
        if self.coupling_length_um <= 0:
            raise ValueError("coupling_length_um must be positive")
        if self.reference_wavelength_nm <= 0:
            raise ValueError("reference_wavelength_nm must be positive")
        if self.interaction_length_um < 0:
            raise ValueError("interaction_length_um must be non-negative")
        if self.bend_offset_um < 0:
            raise ValueError("bend_offset_um must be non-negative")

    @classmethod
    def from_delta_n_slope(cls, coupling_length_um, delta_n_slope_per_nm=0.0,
                           reference_wavelength_nm=1550.0, **lengths):
        """Device whose supermode index splitting varies linearly:
        delta_n(lambda) = delta_n0 + s (lambda - lambda0).

        A zero index-splitting slope still leaves the chromatic 1/lambda
        dependence of kappa = pi delta_n / lambda.
        """
        kappa0 = math.pi / (2.0 * coupling_length_um)
        slope = (1000.0 * math.pi * delta_n_slope_per_nm - kappa0) \
            / reference_wavelength_nm
        return cls(coupling_length_um, reference_wavelength_nm, slope, **lengths)

    @classmethod
    def from_mode_solver(cls, geometry, reference_wavelength_nm=1550.0,
                         probe_offset_nm=10.0, interaction_length_um=0.0,
                         bend_offset_um=0.0, **solver_kwargs):
        """Calibrate kappa0 and its slope from two supermode solves at
        lambda0 +/- probe_offset_nm."""
        kappa = []
        for wl in (reference_wavelength_nm - probe_offset_nm,
                   reference_wavelength_nm + probe_offset_nm):
            lc = supermode_coupling_length(geometry, wl, **solver_kwargs)
            kappa.append(math.pi / (2.0 * lc))
        kappa0 = 0.5 * (kappa[0] + kappa[1])
        slope = (kappa[1] - kappa[0]) / (2.0 * probe_offset_nm)
        return cls(math.pi / (2.0 * kappa0), reference_wavelength_nm, slope,
                   interaction_length_um=interaction_length_um,
                   bend_offset_um=bend_offset_um)

    def coupling_rate_per_um(self, wavelength_nm):
        """kappa(lambda) in rad/um; positive within the supported band."""
        kappa0 = math.pi / (2.0 * self.coupling_length_um)
        kappa = kappa0 + self.dispersion_slope \
            * (np.asarray(wavelength_nm, dtype=float) - self.reference_wavelength_nm)
        if np.any(kappa <= 0.0):
            raise ValueError(
                "wavelength outside the supported band of the dispersion "
                "parametrization (coupling rate would be non-positive)"
            )
        return kappa if np.ndim(wavelength_nm) else float(kappa)

    def coupling_phase(self, wavelength_nm):
        """Accumulated phase theta = kappa(lambda) (L_I + L_0)."""
        total = self.interaction_length_um + self.bend_offset_um
        return self.coupling_rate_per_um(wavelength_nm) * total


def transfer_matrix(device, wavelength_nm):
    """2x2 unitary mapping input to output waveguide amplitudes."""
    theta = device.coupling_phase(wavelength_nm)
    return np.array([[math.cos(theta), -1j * math.sin(theta)],
                     [-1j * math.sin(theta), math.cos(theta)]])


def splitting_ratio(device, wavelength_nm):
    """Cross-port power fraction eta = sin^2(theta); bar port gets 1 - eta."""
    theta = device.coupling_phase(wavelength_nm)
    return np.sin(theta) ** 2 if np.ndim(theta) else math.sin(theta) ** 2


def _branch_phase(target_eta, order):
    # theta on the order-th half-period of sin^2: rising for even branches,
    # falling for odd ones
    root = math.asin(math.sqrt(target_eta))
    half_period = 0.5 * math.pi
    if order % 2 == 0:
        return order * half_period + root
    return (order + 1) * half_period - root


def length_for_ratio(device, target_eta, order=0):
    """Smallest interaction length (um) reaching ``target_eta`` on the given
    half-period branch at the device's reference wavelength.

    Raises :class:`UnreachableTargetError` when the bend offset alone already
    overshoots that branch.
    """
    if not 0.0 <= target_eta <= 1.0:
        raise ValueError("target_eta must lie in [0, 1]")
    if order < 0 or order != int(order):
        raise ValueError("order must be a non-negative integer")
    kappa0 = device.coupling_rate_per_um(device.reference_wavelength_nm)
    length = _branch_phase(target_eta, int(order)) / kappa0 - device.bend_offset_um
    if length < 0.0:
        raise UnreachableTargetError(
            f"target ratio {target_eta} on branch {order} needs a negative "
            f"interaction length with bend offset {device.bend_offset_um} um"
        )
    return length


def offset_for_ratio(device, target_eta, order):
    """Bend offset (um) that makes the device's fixed interaction length hit
    ``target_eta`` on the given branch at the reference wavelength."""
    if not 0.0 <= target_eta <= 1.0:
        raise ValueError("target_eta must lie in [0, 1]")
    kappa0 = device.coupling_rate_per_um(device.reference_wavelength_nm)
    offset = _branch_phase(target_eta, int(order)) / kappa0 \
        - device.interaction_length_um
    if offset < 0.0:
        raise UnreachableTargetError(
            f"target ratio {target_eta} on branch {order} lies before the "
            f"fixed interaction length {device.interaction_length_um} um"
        )
    return offset


def with_interaction_length(device, interaction_length_um):
    """Copy of ``device`` at a different interaction length."""
    return replace(device, interaction_length_um=interaction_length_um)


@dataclass(frozen=True)
class SplittingCurve:
    """Tabulated splitting ratio versus wavelength."""

    wavelength_nm: np.ndarray
    eta: np.ndarray


def bandwidth_scan(device, wavelength_min_nm, wavelength_max_nm, step_nm=0.5):
    """Splitting ratio sampled over [min, max] inclusive with the given step."""
    if wavelength_min_nm > wavelength_max_nm:
        raise ValueError("wavelength range is inverted")
    if step_nm <= 0:
        raise ValueError("step_nm must be positive")
    wl = np.arange(wavelength_min_nm, wavelength_max_nm + 0.5 * step_nm, step_nm)
    # linear kappa: positivity at the endpoints covers the whole range
    device.coupling_rate_per_um(wavelength_min_nm)
    device.coupling_rate_per_um(wavelength_max_nm)
    theta = device.coupling_phase(wl)
    return SplittingCurve(wavelength_nm=wl, eta=np.sin(theta) ** 2)


@dataclass(frozen=True)
class SplitterSetting:
    """Beam-splitter abstraction handed to the interference engine: a
    reflectivity plus the fixed -i cross-coupling phase convention."""

    reflectivity: float

    def __post_init__(self):
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValueError("reflectivity must lie in [0, 1]")

    @classmethod
    def from_device(cls, device, wavelength_nm=None):
        wl = device.reference_wavelength_nm if wavelength_nm is None else wavelength_nm
        return cls(float(splitting_ratio(device, wl)))

    def matrix(self):
        t = math.sqrt(1.0 - self.reflectivity)
        r = math.sqrt(self.reflectivity)
        return np.array([[t, -1j * r], [-1j * r, t]])
