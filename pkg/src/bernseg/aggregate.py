"""Aggregation of per-sequence segmentations into joint change points.

Per-sequence rate estimates are stacked into an (n, v) matrix of
piecewise-constant values; joint change points come from clustering the
rows with a contiguity-constrained Ward linkage, scored by the
within-group variance statistic.  A maximally-selected chi-square scan
covers the single-change-point case.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bernoulli import check_change_points
from .errors import DegenerateCounts, KTooLarge, LengthMismatch


@dataclass(frozen=True)
class RateMatrix:
    """(n, v) matrix of estimated rates, one piecewise-constant column per sequence."""

    values: np.ndarray
    segmentations: tuple = ()

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def v(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class MultiCPResult:
    change_points: np.ndarray
    g_value: float
    merge_history: np.ndarray  # head row of the left cluster, per merge


def _matrix_values(matrix) -> np.ndarray:
    values = matrix.values if isinstance(matrix, RateMatrix) else np.asarray(matrix)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("rate matrix must be 2-d")
    return values


def build_rate_matrix(bundle, segmentations) -> RateMatrix:
    """Column j repeats segmentation j's rate over each of its segments."""
    n = bundle.n
    segmentations = tuple(segmentations)
    if len(segmentations) != bundle.v:
        raise LengthMismatch(
            f"{bundle.v} sequences but {len(segmentations)} segmentations"
        )
    values = np.empty((n, len(segmentations)), dtype=np.float64)
    for j, seg in enumerate(segmentations):
        if seg.n != n:
            raise LengthMismatch(f"segmentation {j} is over {seg.n} points, not {n}")
        bounds = np.concatenate(([0], seg.change_points, [n]))
        values[:, j] = np.repeat(seg.rates, np.diff(bounds))
    return RateMatrix(values=values, segmentations=segmentations)


def g_statistic(matrix, change_points) -> float:
    """Sum over segments of within-segment squared deviation over segment length."""
    values = _matrix_values(matrix)
    n = values.shape[0]
    cps = check_change_points(change_points, n)
    bounds = np.concatenate(([0], cps, [n]))
    total = 0.0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        block = values[lo:hi]
        total += float(((block - block.mean(axis=0)) ** 2).sum()) / (hi - lo)
    return total


def constrained_hclust(matrix, k: int) -> MultiCPResult:
    """Agglomerate adjacent rows by minimal Ward cost down to k+1 clusters.

    Only temporally adjacent clusters may merge, so the returned cluster
    boundaries are k sorted interior change points.  Ties pick the
    leftmost pair.
    """
    values = _matrix_values(matrix)
    n = values.shape[0]
    if not 1 <= k < n:
        raise KTooLarge(f"k must satisfy 1 <= k < {n}, got {k}")
    bounds, heads = kernels.ward_adjacent_merge(np.ascontiguousarray(values), k)
    return MultiCPResult(
        change_points=bounds,
        g_value=g_statistic(values, bounds),
        merge_history=heads,
    )


def max_chisq_scan(bundle, trim: float = 0.05):
    """Maximally selected two-sample chi-square over candidate split points.

    At each candidate split the marked counts of every sequence before and
    after are compared against the pooled rate (standard two-sample 2x2
    form, summed over sequences).  Sequences that are all 0 or all 1
    contribute nothing; if every sequence is degenerate the statistic is
    undefined and :class:`DegenerateCounts` is raised.  Returns
    ``(split, value)`` with the smallest maximizing split.
    """
    if not 0.0 <= trim < 0.5:
        raise ValueError("trim must lie in [0, 0.5)")
    seqs = bundle.sequences if hasattr(bundle, "sequences") else np.asarray(bundle)
    seqs = np.atleast_2d(np.asarray(seqs, dtype=np.float64))
    v, n = seqs.shape
    if v < 1 or n < 2:
        raise ValueError("need at least one sequence of length 2")
    lo = max(1, int(np.ceil(trim * n)))
    hi = min(n - 1, n - int(np.ceil(trim * n)))
    if lo > hi:
        raise ValueError("trim leaves no candidate split points")
    totals = seqs.sum(axis=1)
    keep = (totals > 0) & (totals < n)
    if not keep.any():
        raise DegenerateCounts("every sequence is constant; no valid cells")
    seqs = seqs[keep]
    pooled = totals[keep] / n  # (v',)
    cum = np.cumsum(seqs, axis=1)  # (v', n)
    taus = np.arange(lo, hi + 1)
    o1 = cum[:, taus - 1].T  # (t, v') marked counts in the first tau points
    o2 = totals[keep][None, :] - o1
    t1 = taus[:, None].astype(np.float64)
    t2 = n - t1
    denom = pooled * (1.0 - pooled)
    stats = ((o1 - t1 * pooled) ** 2 / (t1 * denom)).sum(axis=1)
    stats += ((o2 - t2 * pooled) ** 2 / (t2 * denom)).sum(axis=1)
    best = int(np.argmax(stats))
    return int(taus[best]), float(stats[best])
