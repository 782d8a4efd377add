"""End-to-end detection pipelines shared by the CLI and the experiments.

Known-k detection: encode, segment every sequence, stack the rate
matrix, optionally weight, and cluster down to k+1 segments.  Stability
detection: turn every sequence's estimates into (expanded) selection
sets and aggregate them into a selection-probability profile.
"""

from dataclasses import dataclass

import numpy as np

from .aggregate import MultiCPResult, RateMatrix, build_rate_matrix, constrained_hclust
from .bernoulli import algorithm1
from .encode import EncodedBundle, EncodingSpec, Series, encode
from .stability import SelectionProfile, selection_profile, selection_set
from .weighting import apply_weights, iterative_weights, simple_weights


def penalty_value(penalty, n: int) -> float:
    """Resolve 'aic' / 'bic' / an explicit coefficient for length n."""
    if isinstance(penalty, str):
        name = penalty.lower()
        if name == "aic":
            return 2.0
        if name == "bic":
            return float(np.log(n))
        raise ValueError(f"unknown penalty: {penalty!r}")
    value = float(penalty)
    if value <= 0:
        raise ValueError("penalty coefficient must be positive")
    return value


def _encoding_spec(v, subsample_fraction, seed, encoder, thresholds,
                   thresholds_are_quantiles, pattern) -> EncodingSpec:
    mode = {
        "kmeans": "kmeans_subsample",
        "kmeans_subsample": "kmeans_subsample",
        "quantile": "quantile",
        "pattern": "pattern",
    }.get(encoder)
    if mode is None:
        raise ValueError(f"unknown encoder: {encoder!r}")
    return EncodingSpec(
        mode=mode,
        v=v,
        subsample_fraction=subsample_fraction,
        seed=seed,
        thresholds=thresholds,
        thresholds_are_quantiles=thresholds_are_quantiles,
        pattern=pattern,
    )


def encode_and_segment(series, *, v=50, subsample_fraction=0.1, penalty="aic",
                       seed=0, encoder="kmeans", thresholds=None,
                       thresholds_are_quantiles=False, pattern=None):
    """Encode the series and run the per-sequence search on every column."""
    spec = _encoding_spec(
        v, subsample_fraction, seed, encoder, thresholds,
        thresholds_are_quantiles, pattern,
    )
    bundle = encode(series, spec)
    phi = penalty_value(penalty, bundle.n)
    segmentations = [algorithm1(seq, phi) for seq in bundle.sequences]
    return bundle, segmentations


@dataclass(frozen=True)
class DetectionResult:
    change_points: np.ndarray
    g_value: float
    weights: np.ndarray | None
    weighting: str
    bundle: EncodedBundle
    segmentations: tuple
    rate_matrix: RateMatrix
    clustering: MultiCPResult
    iterations: int = 0
    converged: bool = True


def detect_known_k(series, k: int, *, weighting="simple", v=50,
                   subsample_fraction=0.1, penalty="aic", seed=0,
                   encoder="kmeans", thresholds=None,
                   thresholds_are_quantiles=False, pattern=None,
                   max_iter=150) -> DetectionResult:
    """Full known-k pipeline returning k aggregated change points."""
    bundle, segmentations = encode_and_segment(
        series, v=v, subsample_fraction=subsample_fraction, penalty=penalty,
        seed=seed, encoder=encoder, thresholds=thresholds,
        thresholds_are_quantiles=thresholds_are_quantiles, pattern=pattern,
    )
    matrix = build_rate_matrix(bundle, segmentations)
    iterations, converged = 0, True
    if weighting == "none":
        weights = None
        clustering = constrained_hclust(matrix, k)
    elif weighting == "simple":
        weights = simple_weights([seg.loss for seg in segmentations])
        clustering = constrained_hclust(apply_weights(matrix, weights), k)
    elif weighting == "iterative":
        res = iterative_weights(matrix, bundle, k, max_iter=max_iter)
        weights = res.weights
        clustering = res.clustering
        iterations, converged = res.n_iterations, res.converged
    else:
        raise ValueError(f"unknown weighting: {weighting!r}")
    return DetectionResult(
        change_points=clustering.change_points,
        g_value=clustering.g_value,
        weights=weights,
        weighting=weighting,
        bundle=bundle,
        segmentations=tuple(segmentations),
        rate_matrix=matrix,
        clustering=clustering,
        iterations=iterations,
        converged=converged,
    )


@dataclass(frozen=True)
class StabilityResult:
    profile: SelectionProfile
    selection_sets: tuple
    weights: np.ndarray | None
    bundle: EncodedBundle
    segmentations: tuple


def stability_detect(series, *, v=50, subsample_fraction=0.1, penalty="aic",
                     seed=0, weighted=True, expand=True, encoder="kmeans",
                     thresholds=None, thresholds_are_quantiles=False,
                     pattern=None) -> StabilityResult:
    """Aggregate per-sequence estimates into a selection-probability profile."""
    bundle, segmentations = encode_and_segment(
        series, v=v, subsample_fraction=subsample_fraction, penalty=penalty,
        seed=seed, encoder=encoder, thresholds=thresholds,
        thresholds_are_quantiles=thresholds_are_quantiles, pattern=pattern,
    )
    sets = tuple(
        selection_set(seq, seg, expand=expand)
        for seq, seg in zip(bundle.sequences, segmentations)
    )
    weights = None
    if weighted:
        weights = simple_weights([seg.loss for seg in segmentations])
    profile = selection_profile(sets, bundle.n, weights=weights)
    return StabilityResult(
        profile=profile,
        selection_sets=sets,
        weights=weights,
        bundle=bundle,
        segmentations=tuple(segmentations),
    )
