"""Relevance weights for the encoded sequences.

Simple weights rescale and flip the per-sequence losses; iterative
weights alternate clustering with an entropy score of how concentrated
each marked set is within the recovered segments.
"""

from dataclasses import dataclass

import numpy as np

from .aggregate import MultiCPResult, RateMatrix, constrained_hclust
from .errors import DimMismatch


def scale_map(x) -> np.ndarray:
    """Affine map to [0, 1] with flipped orientation: 1 - (x-min)/(max-min).

    Constant input maps to all ones (the formula is 0/0 there).
    """
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError("scale_map needs at least one value")
    span = arr.max() - arr.min()
    if span == 0:
        return np.ones_like(arr)
    return 1.0 - (arr - arr.min()) / span


def simple_weights(losses) -> np.ndarray:
    """Normalized flipped losses: the smallest loss gets the largest weight."""
    scaled = scale_map(losses)
    return scaled / scaled.sum()


def apply_weights(matrix, weights) -> RateMatrix:
    """Scale column j by weights[j]."""
    values = matrix.values if isinstance(matrix, RateMatrix) else np.asarray(matrix)
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size != values.shape[1]:
        raise DimMismatch(f"{values.shape[1]} columns but {w.size} weights")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    segs = matrix.segmentations if isinstance(matrix, RateMatrix) else ()
    return RateMatrix(values=values * w[None, :], segmentations=segs)


def membership_entropy(members, change_points, n) -> float:
    """Shannon entropy (natural log) of a marked set across segments.

    Zero when all members fall in one segment; log(k+1) when they spread
    uniformly over all k+1 segments.
    """
    members = np.asarray(members)
    if members.size == 0:
        return 0.0
    seg_ids = np.searchsorted(np.asarray(change_points), members, side="right")
    counts = np.bincount(seg_ids)
    probs = counts[counts > 0] / members.size
    return float(-(probs * np.log(probs)).sum())


@dataclass(frozen=True)
class IterativeWeightsResult:
    weights: np.ndarray
    clustering: MultiCPResult
    converged: bool
    n_iterations: int


def iterative_weights(matrix, bundle, k, init=None, max_iter=150,
                      tol=1e-6, patience=10) -> IterativeWeightsResult:
    """Alternate weighted clustering and entropy-based weight refinement.

    Each round clusters the weighted matrix, scores every marked set by
    the entropy of its split across the recovered segments, and moves the
    weights halfway toward the normalized flipped entropies.  Stops when
    the weights stay within ``tol`` for ``patience`` consecutive rounds,
    or after ``max_iter`` rounds (reported via ``converged``).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    v = matrix.values.shape[1]
    if len(bundle.membership) != v:
        raise DimMismatch("bundle and matrix disagree on the number of sequences")
    if init is None:
        w = np.full(v, 1.0 / v)
    else:
        w = np.asarray(init, dtype=np.float64).ravel()
        if w.size != v:
            raise DimMismatch(f"init has {w.size} entries, expected {v}")
        w = w / w.sum()

    result = None
    stable = 0
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        result = constrained_hclust(apply_weights(matrix, w), k)
        ent = np.array([
            membership_entropy(members, result.change_points, bundle.n)
            for members in bundle.membership
        ])
        scores = scale_map(ent)
        w_new = 0.5 * w + 0.5 * scores / scores.sum()
        stable = stable + 1 if np.max(np.abs(w_new - w)) < tol else 0
        w = w_new
        if stable >= patience:
            converged = True
            break
    return IterativeWeightsResult(
        weights=w, clustering=result, converged=converged, n_iterations=iterations
    )
