"""Finite-difference mode solving on waveguide cross-sections.

The solver treats the dominant transverse field component semi-vectorially:
the scalar Helmholtz equation

    (d2/dx2 + d2/dy2) f + k0^2 n^2(x, y) f = beta^2 f

is discretised with the standard 5-point stencil on the uniform
:class:`~lnhom.geometry.IndexMap` grid and solved as a sparse symmetric
eigenproblem.  Guided modes cluster just below the film index, so ARPACK
runs in shift-invert mode with the target placed slightly below the
largest index on the map.  Boundaries are zero-field by default
(guided modes decay exponentially into the padding); a reflecting
("neumann") variant exists for homogeneous-medium and slab checks where
the field does not decay in one direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ConvergenceError, DecoupledWaveguidesError
from .geometry import build_cross_section

PARITY_SYMMETRIC = "symmetric"
PARITY_ANTISYMMETRIC = "antisymmetric"
PARITY_NONE = "none"


@dataclass
class ModeSolution:
    """One guided mode: effective index plus the dominant field component,
    normalised to unit power on the grid."""

    n_eff: float
    field: np.ndarray  # [iy, ix], same grid as the source IndexMap
    parity: str
    wavelength_nm: float
    x_nm: np.ndarray
    y_nm: np.ndarray


def _second_difference(n, h, boundary):
    main = np.full(n, -2.0)
    if boundary == "neumann":
        main[0] = main[-1] = -1.0
    elif boundary != "dirichlet":
        raise ValueError(f"unknown boundary {boundary!r}")
    off = np.ones(n - 1)
    return sp.diags([off, main, off], [-1, 0, 1]) / h**2


def _helmholtz_operator(index_map, k0, boundary):
    ny, nx = index_map.shape
    dxx = _second_difference(nx, index_map.dx_nm, boundary)
    dyy = _second_difference(ny, index_map.dy_nm, boundary)
    lap = sp.kron(sp.identity(ny), dxx) + sp.kron(dyy, sp.identity(nx))
    return (lap + sp.diags(k0**2 * index_map.index.ravel() ** 2)).tocsc()


def _classify_parity(field, index_map):
    if index_map.symmetry_x_nm is None:
        return PARITY_NONE
    mirrored = field[:, ::-1]
    overlap = float(np.sum(field * mirrored) / np.sum(field * field))
    if overlap > 0.5:
        return PARITY_SYMMETRIC
    if overlap < -0.5:
        return PARITY_ANTISYMMETRIC
    return PARITY_NONE


def solve_modes(index_map, n_modes=1, *, wavelength_nm=None, boundary="dirichlet",
                cutoff_index=None, max_iterations=10_000, tol=1e-10):
    """Guided modes of an index map, sorted by descending effective index.

    Modes with n_eff at or below ``cutoff_index`` (default: the map's
    substrate index) are discarded, so fewer than ``n_modes`` solutions may
    come back.  Raises :class:`ConvergenceError` if ARPACK hits the
    iteration cap.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    wavelength = wavelength_nm if wavelength_nm is not None else index_map.wavelength_nm
    if cutoff_index is None:
        cutoff_index = index_map.substrate_index
        if cutoff_index is None:
            cutoff_index = float(index_map.index.min())

    k0 = 2.0 * np.pi / wavelength
    op = _helmholtz_operator(index_map, k0, boundary)
    n_max = float(index_map.index.max())
    n_cells = op.shape[0]
    k = min(n_modes + 4, n_cells - 2)

    # target just below the film index, nudging upward if the factorisation
    # happens to land on an eigenvalue
    last_error = None
    for shift in (n_max - 1e-3, n_max + 1e-3, n_max + 1e-2):
        try:
            vals, vecs = eigsh(op, k=k, sigma=(k0 * shift) ** 2, which="LM",
                               maxiter=max_iterations, tol=tol)
            break
        except ArpackNoConvergence as exc:
            residual = None
            if len(exc.eigenvalues):
                v = exc.eigenvectors[:, -1]
                residual = float(np.linalg.norm(op @ v - exc.eigenvalues[-1] * v))
            raise ConvergenceError(
                f"eigen-solver did not converge within {max_iterations} iterations",
                residual_norm=residual,
            ) from exc
        except RuntimeError as exc:  # singular shift factorisation
            last_error = exc
    else:
        raise ConvergenceError(f"shift-invert factorisation failed: {last_error}")

    order = np.argsort(vals)[::-1]
    cell_area = index_map.dx_nm * index_map.dy_nm
    solutions = []
    for idx in order:
        if vals[idx] <= 0:
            continue
        n_eff = float(np.sqrt(vals[idx]) / k0)
        if n_eff <= cutoff_index:
            continue
        field = vecs[:, idx].reshape(index_map.shape)
        field = field / np.sqrt(np.sum(field**2) * cell_area)
        if field.ravel()[np.abs(field).argmax()] < 0:
            field = -field
        solutions.append(
            ModeSolution(
                n_eff=n_eff,
                field=field,
                parity=_classify_parity(field, index_map),
                wavelength_nm=wavelength,
                x_nm=index_map.x_nm,
                y_nm=index_map.y_nm,
            )
        )
        if len(solutions) == n_modes:
            break
    return solutions


def coupling_length_from_indices(n_symmetric, n_antisymmetric, wavelength_nm):
    """Beat length (um) for full power transfer, from the supermode splitting."""
    delta_n = n_symmetric - n_antisymmetric
    if delta_n <= 0:
        raise ValueError("symmetric supermode index must exceed the antisymmetric one")
    return (wavelength_nm / 1000.0) / (2.0 * delta_n)


def supermode_coupling_length(geometry, wavelength_nm, *, grid_pitch_nm=10.0,
                              padding_um=2.0, polarization="te",
                              degeneracy_tol=1e-9):
    """Coupling length (um) of a two-rib coupler from its supermode splitting.

    Solves the two lowest supermodes, checks their mirror parity, and raises
    :class:`DecoupledWaveguidesError` when the splitting is degenerate within
    ``degeneracy_tol`` (effectively decoupled waveguides).
    """
    if geometry.gap_um is None:
        raise ValueError("geometry has no gap: not a two-waveguide coupler")
    index_map = build_cross_section(geometry, wavelength_nm,
                                    grid_pitch_nm=grid_pitch_nm,
                                    padding_um=padding_um,
                                    polarization=polarization)
    modes = solve_modes(index_map, 2, wavelength_nm=wavelength_nm)
    if len(modes) < 2:
        raise DecoupledWaveguidesError(
            "fewer than two guided supermodes found; waveguides are effectively "
            "decoupled at this gap"
        )
    sym, anti = modes[0], modes[1]
    delta_n = sym.n_eff - anti.n_eff
    # degeneracy first: an exactly degenerate pair may come back as arbitrary
    # left/right mixtures with no definite parity
    if delta_n < degeneracy_tol:
        raise DecoupledWaveguidesError(
            f"supermode splitting {delta_n:.3e} below tolerance {degeneracy_tol:.0e}"
        )
    if (sym.parity, anti.parity) != (PARITY_SYMMETRIC, PARITY_ANTISYMMETRIC):
        raise RuntimeError(
            "lowest two modes are not a symmetric/antisymmetric supermode pair "
            f"(got {sym.parity!r}, {anti.parity!r})"
        )
    return coupling_length_from_indices(sym.n_eff, anti.n_eff, wavelength_nm)


def _profile_effective_indices(profile, pitch_nm, wavelength_nm, count=3):
    """Largest effective indices of a 1D layered index profile (zero-field ends)."""
    k0 = 2.0 * np.pi / wavelength_nm
    diag = -2.0 / pitch_nm**2 + k0**2 * profile**2
    off = np.full(profile.size - 1, 1.0 / pitch_nm**2)
    vals = eigh_tridiagonal(diag, off, select="i",
                            select_range=(profile.size - count, profile.size - 1))[0]
    vals = vals[vals > 0]
    return np.sqrt(vals[::-1]) / k0


def guided_mode_count(geometry, wavelength_nm, *, grid_pitch_nm=10.0,
                      padding_um=2.0, polarization="te", margin=1e-3,
                      max_candidates=4):
    """Number of laterally confined modes of a single rib.

    A rib mode only counts as guided when its effective index exceeds the
    etched-slab effective index (otherwise it leaks sideways into the slab);
    that cutoff is computed from the 1D layer profile far from the rib, with
    ``margin`` as the separation required above it.
    """
    single = geometry if geometry.gap_um is None else None
    if single is None:
        raise ValueError("single-waveguide geometry required")
    index_map = build_cross_section(geometry, wavelength_nm,
                                    grid_pitch_nm=grid_pitch_nm,
                                    padding_um=padding_um,
                                    polarization=polarization)
    edge_profile = index_map.index[:, 0]
    slab = _profile_effective_indices(edge_profile, index_map.dy_nm, wavelength_nm)
    cutoff = float(slab[0]) if slab.size else float(index_map.substrate_index)
    cutoff = max(cutoff, float(index_map.substrate_index))
    modes = solve_modes(index_map, max_candidates, wavelength_nm=wavelength_nm,
                        cutoff_index=cutoff + margin)
    return len(modes)
