"""Root finding and zero statistics for the monic polynomials.

Roots come from the companion-matrix eigenvalues with a few Newton polish
steps; zeros are then split into the interior set, the band hugging the
critical circle, and the rest, and the band is summarized by the statistics
the clustering and equidistribution laws speak about.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MatchResult",
    "ZeroClassification",
    "ZeroSet",
    "classify",
    "equidistribution_check",
    "match",
    "roots",
]


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Roots of one monic polynomial, with multiplicity clustering."""

    n: int
    zeros: np.ndarray
    residual: float
    clusters: tuple   # (representative, multiplicity) pairs


def _polish(coeffs: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    deriv = np.polynomial.polynomial.polyder(coeffs)
    for _ in range(steps):
        p = np.polynomial.polynomial.polyval(z, coeffs)
        dp = np.polynomial.polynomial.polyval(z, deriv)
        ok = np.abs(dp) > 0
        step = np.zeros_like(z)
        np.divide(p, dp, out=step, where=ok)
        step = np.where(np.abs(step) < 0.5, step, 0.0)  # reject wild steps
        z = z - step
    return z


def roots(monic_coeffs, cluster_tol: float = 1e-7) -> ZeroSet:
    """Zeros of a monic polynomial given by ascending coefficients."""
    c = np.asarray(monic_coeffs, dtype=complex)
    if c.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if not np.all(np.isfinite(c.real) & np.isfinite(c.imag)):
        raise ValueError("non-finite coefficients")
    n = c.size - 1
    zs = np.roots(c[::-1]).astype(complex)   # balanced companion eigenvalues
    zs = _polish(c, zs)
    resid = float(np.max(np.abs(np.polynomial.polynomial.polyval(zs, c))))
    clusters = []
    used = np.zeros(n, dtype=bool)
    order = np.argsort(np.abs(zs))
    for i in order:
        if used[i]:
            continue
        group = np.abs(zs - zs[i]) < cluster_tol
        group &= ~used
        used |= group
        clusters.append((complex(np.mean(zs[group])), int(np.count_nonzero(group))))
    return ZeroSet(n, zs, resid, tuple(clusters))


@dataclass(frozen=True, eq=False)
class ZeroClassification:
    """Partition of a zero set around the critical circle."""

    rho: float
    margin: float
    interior: np.ndarray      # |z| <= rho - margin
    band: np.ndarray          # | |z| - rho | <= margin
    other: np.ndarray
    band_mean_modulus: float
    band_modulus_spread: float
    angular_gaps: np.ndarray  # consecutive gaps of band zeros sorted by argument
    degenerate: bool          # no band (rho = 0 or too few band zeros)


def classify(zs: ZeroSet, rho: float, margin: float | None = None) -> ZeroClassification:
    """Split zeros into interior / critical-band / other and collect band stats."""
    if margin is None:
        margin = 0.15 * rho if rho > 0 else 0.0
    z = zs.zeros
    absz = np.abs(z)
    if rho <= 0.0:
        empty = np.array([], dtype=complex)
        return ZeroClassification(rho, margin, empty, empty, z.copy(),
                                  math.nan, math.nan, np.array([]), True)
    band_mask = np.abs(absz - rho) <= margin
    interior_mask = (absz <= rho - margin) & ~band_mask
    band = z[band_mask]
    interior = z[interior_mask]
    other = z[~band_mask & ~interior_mask]
    if band.size < 4:
        return ZeroClassification(rho, margin, interior, band, other,
                                  math.nan, math.nan, np.array([]), True)
    args = np.sort(np.angle(band))
    gaps = np.diff(np.concatenate([args, args[:1] + 2.0 * np.pi]))
    mods = np.abs(band)
    return ZeroClassification(rho, margin, interior, band, other,
                              float(np.mean(mods)),
                              float(np.max(mods) - np.min(mods)),
                              gaps, False)


def equidistribution_check(cl: ZeroClassification, n: int, m: int = 1) -> dict:
    """Band statistics against the equidistribution pattern.

    Reports the fraction of consecutive angular gaps within 15 percent of
    2 pi / n, the worst relative gap deviation, and the deviation of the mean
    band modulus from rho (1 + log binom(n, m-1) / n).
    """
    if cl.degenerate:
        return {"degenerate": True, "flag": "no band"}
    target = 2.0 * np.pi / n
    rel_dev = np.abs(cl.angular_gaps - target) / target
    pred_mod = cl.rho * (1.0 + math.log(math.comb(n, m - 1)) / n)
    return {
        "degenerate": False,
        "gap_target": target,
        "gap_rel_dev_max": float(np.max(rel_dev)),
        "gap_within_15pct": float(np.mean(rel_dev <= 0.15)),
        "mean_modulus": cl.band_mean_modulus,
        "mean_modulus_minus_pred": cl.band_mean_modulus - pred_mod,
        "n_band": int(cl.band.size),
    }


@dataclass(frozen=True, eq=False)
class MatchResult:
    pairs: tuple            # (predicted index, actual index, distance)
    distances: np.ndarray
    unmatched_predicted: tuple
    unmatched_actual: tuple


def match(predicted, actual, exhaustive_limit: int = 7) -> MatchResult:
    """Pair predicted with actual points by distance.

    Exhaustive assignment (optimal) when the smaller list has at most
    exhaustive_limit entries, greedy nearest-neighbor beyond that; the
    surplus of the longer list is reported unmatched.
    """
    pred = np.asarray(list(predicted), dtype=complex)
    act = np.asarray(list(actual), dtype=complex)
    if pred.size == 0 or act.size == 0:
        raise ValueError("both point lists must be nonempty")
    swap = pred.size > act.size
    small, large = (act, pred) if swap else (pred, act)
    dist = np.abs(small[:, None] - large[None, :])
    k = small.size
    if k <= exhaustive_limit:
        best, best_cost = None, math.inf
        for perm in itertools.permutations(range(large.size), k):
            cost = float(sum(dist[i, perm[i]] for i in range(k)))
            if cost < best_cost:
                best, best_cost = perm, cost
        assign = list(best)
    else:
        assign, taken = [], set()
        for i in np.argsort(np.min(dist, axis=1)):
            j = min((j for j in range(large.size) if j not in taken),
                    key=lambda j: dist[i, j])
            taken.add(j)
            assign.append(j)
        # restore row order
        order = np.argsort(np.argsort(np.min(dist, axis=1)))
        assign = [assign[o] for o in order]
    pairs = []
    for i, j in enumerate(assign):
        pi, ai = (j, i) if swap else (i, j)
        pairs.append((pi, ai, float(dist[i, j])))
    pairs.sort()
    matched_large = set(assign)
    unmatched_large = tuple(j for j in range(large.size) if j not in matched_large)
    if swap:
        unmatched_pred, unmatched_act = unmatched_large, ()
    else:
        unmatched_pred, unmatched_act = (), unmatched_large
    return MatchResult(tuple(pairs), np.array([p[2] for p in pairs]),
                       unmatched_pred, unmatched_act)
