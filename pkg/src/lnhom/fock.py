"""Exact few-photon enumeration for multi-pair emission at the splitter.

A pulse carrying n pairs puts n photons into each input arm.  Partial
distinguishability is handled with two internal modes per arm: the idler
creation operator is split as

    b+ = lam * (matched mode) + sqrt(1 - lam^2) * (orthogonal mode),

with lam^2 = I the pairwise indistinguishability.  The splitter mixes the
arms mode-by-mode with the -i cross phase; expanding the resulting
creation-operator polynomial over the four output modes gives every output
occupation amplitude exactly.  Coincidences use threshold detectors (any
photon number >= 1 clicks).  Pulses are truncated at two pairs, so rate
ratios carry an O(mu^3) error; the guard limit keeps that below ~1e-3
relative.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .errors import TruncationError

MAX_MEAN_PAIRS = 0.1
MAX_ENUMERATED_PAIRS = 2

PAIR_STATISTICS = ("poissonian-pairs", "thermal-pairs")


def pair_number_probabilities(mu, statistics="poissonian-pairs", max_pairs=2):
    """P(n pairs) for n = 0..max_pairs under the chosen emission statistics.

    The returned entries deliberately do not sum to 1; the tail mass sits in
    n > max_pairs.
    """
    if mu < 0:
        raise ValueError("mean pair number must be non-negative")
    if statistics == "poissonian-pairs":
        probs = np.zeros(max_pairs + 1)
        probs[0] = math.exp(-mu)
        for k in range(1, max_pairs + 1):
            probs[k] = probs[k - 1] * mu / k
        return probs
    if statistics == "thermal-pairs":
        n = np.arange(max_pairs + 1)
        return mu**n / (1.0 + mu) ** (n + 1)
    raise ValueError(f"unknown pair statistics {statistics!r}")


def _poly_multiply(p, q):
    out = defaultdict(complex)
    for occ1, c1 in p.items():
        for occ2, c2 in q.items():
            key = tuple(a + b for a, b in zip(occ1, occ2))
            out[key] += c1 * c2
    return out


def _pair_state_polynomial(n_pairs, amplitude_overlap, eta):
    """Creation-operator polynomial of the n-pair output state over the four
    modes (arm1-matched, arm1-orth, arm2-matched, arm2-orth)."""
    t = math.sqrt(1.0 - eta)
    r = math.sqrt(eta)
    lam = amplitude_overlap
    ortho = math.sqrt(max(0.0, 1.0 - lam * lam))
    signal_out = {(1, 0, 0, 0): t + 0j, (0, 0, 1, 0): -1j * r}
    idler_out = {
        (1, 0, 0, 0): -1j * r * lam,
        (0, 0, 1, 0): t * lam + 0j,
        (0, 1, 0, 0): -1j * r * ortho,
        (0, 0, 0, 1): t * ortho + 0j,
    }
    poly = {(0, 0, 0, 0): 1.0 + 0j}
    for _ in range(n_pairs):
        poly = _poly_multiply(poly, signal_out)
        poly = _poly_multiply(poly, idler_out)
    norm = 1.0 / math.factorial(n_pairs)
    return {occ: c * norm for occ, c in poly.items()}


def splitter_output_distribution(n_pairs, indistinguishability, eta=0.5):
    """Probability of each output occupation (n0, n1, n2, n3) for an n-pair
    pulse; modes ordered arm1-matched, arm1-orth, arm2-matched, arm2-orth."""
    if not 0.0 <= indistinguishability <= 1.0:
        raise ValueError("indistinguishability must lie in [0, 1]")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if n_pairs < 0:
        raise ValueError("n_pairs must be non-negative")
    lam = math.sqrt(indistinguishability)
    poly = _pair_state_polynomial(n_pairs, lam, eta)
    dist = {}
    for occ, coeff in poly.items():
        weight = math.prod(math.factorial(k) for k in occ)
        prob = abs(coeff) ** 2 * weight
        if prob > 0.0:
            dist[occ] = prob
    return dist


def arm_occupation_distribution(n_pairs, indistinguishability, eta=0.5):
    """Distribution of photon numbers per output arm, internal modes summed
    out: {(n_arm1, n_arm2): probability}."""
    dist = defaultdict(float)
    full = splitter_output_distribution(n_pairs, indistinguishability, eta)
    for (n0, n1, n2, n3), prob in full.items():
        dist[(n0 + n1, n2 + n3)] += prob
    return dict(dist)


def threshold_coincidence_probability(n_pairs, indistinguishability, eta=0.5):
    """P(both arms receive at least one photon) for an n-pair pulse with
    ideal threshold detectors."""
    arms = arm_occupation_distribution(n_pairs, indistinguishability, eta)
    return sum(p for (a, b), p in arms.items() if a >= 1 and b >= 1)


def multi_pair_visibility(mu, single_pair_visibility=1.0,
                          statistics="poissonian-pairs", eta=0.5):
    """Dip visibility including multi-pair emission, V = 1 - C(0)/C(inf).

    Coincidence rates at zero and far delay are summed over 0-, 1- and
    2-pair pulses weighted by the emission statistics; mu = 0 returns the
    single-pair visibility as the limit.  Raises TruncationError above the
    two-pair truncation's validity limit.
    """
    if mu < 0:
        raise ValueError("mean pair number must be non-negative")
    if mu > MAX_MEAN_PAIRS:
        raise TruncationError(
            f"mean pair number {mu} exceeds the two-pair truncation limit "
            f"{MAX_MEAN_PAIRS}"
        )
    if not 0.0 <= single_pair_visibility <= 1.0:
        raise ValueError("single_pair_visibility must lie in [0, 1]")
    if mu == 0:
        return float(single_pair_visibility)
    weights = pair_number_probabilities(mu, statistics, MAX_ENUMERATED_PAIRS)
    dip = baseline = 0.0
    for n in range(1, MAX_ENUMERATED_PAIRS + 1):
        dip += weights[n] * threshold_coincidence_probability(
            n, single_pair_visibility, eta)
        baseline += weights[n] * threshold_coincidence_probability(n, 0.0, eta)
    return 1.0 - dip / baseline
