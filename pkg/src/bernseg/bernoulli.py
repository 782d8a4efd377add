"""Multiple change-point search within a single 0/1 sequence.

A sequence with M ones is represented by its M+1 recurrence times (runs
of zeros before, between, and after the ones).  Candidate segmentations
come from merging the smallest recurrence times first while sweeping a
count threshold; every candidate is scored by the penalized Bernoulli
likelihood and the global minimizer is returned.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AllZeros, InvalidChangePoints


@dataclass(frozen=True)
class RecurrenceSeq:
    """Gap representation of a 0/1 sequence.

    ``times[i]`` is the number of zeros before the i-th one (and
    ``times[-1]`` the zeros after the last one), so
    ``times.sum() + len(one_positions) == n``.
    """

    times: np.ndarray
    one_positions: np.ndarray  # 1-based, strictly increasing
    n: int


@dataclass(frozen=True)
class Segmentation:
    """Change points (as prefix lengths), per-segment MLE rates, and loss."""

    change_points: np.ndarray
    rates: np.ndarray
    loss: float
    penalty_coeff: float
    n: int

    @property
    def k(self) -> int:
        return len(self.change_points)


def as_binary(seq) -> np.ndarray:
    """Validate and coerce a 0/1 sequence to an int8 array."""
    arr = np.asarray(seq)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("binary sequence must be a non-empty 1-d array")
    out = arr.astype(np.int8, copy=False)
    if not np.all((out == 0) | (out == 1)):
        raise ValueError("binary sequence may only contain 0 and 1")
    return out


def check_change_points(change_points, n) -> np.ndarray:
    """Validate change points: integer, strictly increasing, inside (0, n)."""
    cps = np.asarray(change_points, dtype=np.int64).ravel()
    if cps.size == 0:
        return cps
    if np.any(cps <= 0) or np.any(cps >= n):
        raise InvalidChangePoints(f"change points must lie strictly inside (0, {n})")
    if np.any(np.diff(cps) <= 0):
        raise InvalidChangePoints("change points must be strictly increasing")
    return cps


def encode_recurrence(seq) -> RecurrenceSeq:
    """Recurrence times between consecutive 1's (0 when 1's are adjacent)."""
    values = as_binary(seq)
    ones = np.flatnonzero(values == 1) + 1  # 1-based
    if ones.size == 0:
        raise AllZeros("sequence has no 1's")
    n = values.size
    times = np.empty(ones.size + 1, dtype=np.int64)
    times[0] = ones[0] - 1
    times[1:-1] = np.diff(ones) - 1
    times[-1] = n - ones[-1]
    return RecurrenceSeq(times=times, one_positions=ones.astype(np.int64), n=n)


def _prefix_ones(values: np.ndarray) -> np.ndarray:
    cum = np.zeros(values.size + 1, dtype=np.int64)
    np.cumsum(values, out=cum[1:])
    return cum


def penalized_loss(seq, change_points, penalty_coeff) -> float:
    """-2 * sum of per-segment Bernoulli log-likelihoods + phi * (2k+1)."""
    values = as_binary(seq)
    n = values.size
    cps = check_change_points(change_points, n)
    if penalty_coeff < 0:
        raise ValueError("penalty coefficient must be nonnegative")
    cum1 = _prefix_ones(values)
    loss = penalty_coeff * (2.0 * cps.size + 1.0)
    prev = 0
    for c in cps:
        loss += -2.0 * kernels.seg_loglik(cum1, prev, int(c))
        prev = int(c)
    loss += -2.0 * kernels.seg_loglik(cum1, prev, n)
    return float(loss)


def segment_rates(seq, change_points) -> np.ndarray:
    """Per-segment count of 1's divided by segment length."""
    values = as_binary(seq)
    n = values.size
    cps = check_change_points(change_points, n)
    bounds = np.concatenate(([0], cps, [n]))
    cum1 = _prefix_ones(values)
    counts = np.diff(cum1[bounds])
    lengths = np.diff(bounds)
    return counts / lengths


def _empty_segmentation(values: np.ndarray, penalty_coeff: float) -> Segmentation:
    n = values.size
    rate = float(values.mean()) if n else 0.0
    cum1 = _prefix_ones(values)
    loss = -2.0 * kernels.seg_loglik(cum1, 0, n) + penalty_coeff
    return Segmentation(
        change_points=np.empty(0, dtype=np.int64),
        rates=np.array([rate]),
        loss=float(loss),
        penalty_coeff=float(penalty_coeff),
        n=n,
    )


def algorithm1(seq, penalty_coeff=2.0) -> Segmentation:
    """Find the penalized-likelihood-optimal multiple change points.

    Sweeps the window-count threshold over 0..M and, for each value,
    merges recurrence times in increasing order, scoring the qualifying
    window boundaries at every merge.  Degenerate inputs (length 1,
    all zeros, all ones) return the empty segmentation.
    """
    if penalty_coeff <= 0:
        raise ValueError("penalty coefficient must be positive")
    values = as_binary(seq)
    n = values.size
    m = int(values.sum())
    if n < 2 or m == 0 or m == n:
        return _empty_segmentation(values, penalty_coeff)
    one_pos = (np.flatnonzero(values == 1) + 1).astype(np.int64)
    cum1 = _prefix_ones(values)
    cuts, loss, _ = kernels.sweep_best_partition(one_pos, cum1, n, float(penalty_coeff))
    return Segmentation(
        change_points=cuts,
        rates=segment_rates(values, cuts),
        loss=float(loss),
        penalty_coeff=float(penalty_coeff),
        n=n,
    )
