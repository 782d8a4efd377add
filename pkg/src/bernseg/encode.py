"""Encoding a raw series into 0/1 sequences.

Three routes: K-means subsampling (each of V centroids marks its M
nearest rows), a two-sided quantile rule for univariate data, and exact
pattern matching for categorical data.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadThresholds, DegenerateData, PatternLongerThanSeries


@dataclass(frozen=True)
class Series:
    """An observed series: (n, p) float array or length-n symbol vector."""

    values: np.ndarray
    categorical: bool = False
    columns: tuple = ()

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]


@dataclass(frozen=True)
class EncodingSpec:
    mode: str = "kmeans_subsample"  # kmeans_subsample | quantile | pattern
    v: int = 50
    subsample_fraction: float = 0.1
    seed: int = 0
    thresholds: tuple | None = None
    thresholds_are_quantiles: bool = False
    pattern: tuple | None = None


@dataclass(frozen=True)
class EncodedBundle:
    """V binary sequences plus the marked index sets that produced them."""

    sequences: np.ndarray  # (v, n) int8
    membership: tuple  # per sequence, sorted 0-based marked indices
    centroids: np.ndarray | None = None

    @property
    def v(self) -> int:
        return self.sequences.shape[0]

    @property
    def n(self) -> int:
        return self.sequences.shape[1]


def _as_matrix(series) -> np.ndarray:
    if isinstance(series, Series):
        values = series.values
    else:
        values = np.asarray(series)
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("series must have at least 2 rows")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains missing or non-finite values")
    return x


def standardize(x: np.ndarray) -> np.ndarray:
    """Center on the median and scale by IQR; mean/sd fallback when IQR is 0."""
    med = np.median(x, axis=0)
    q75, q25 = np.percentile(x, [75, 25], axis=0)
    scale = q75 - q25
    center = med.copy()
    for j in np.flatnonzero(scale == 0):
        center[j] = x[:, j].mean()
        scale[j] = x[:, j].std()
    scale[scale == 0] = 1.0
    return (x - center) / scale


def _kmeans(x: np.ndarray, v: int, rng: np.random.Generator,
            max_iter: int = 100, tol: float = 1e-8) -> np.ndarray:
    """Lloyd iterations from a k-means++ style seeding."""
    n = x.shape[0]
    centroids = np.empty((v, x.shape[1]))
    centroids[0] = x[rng.integers(n)]
    d2 = np.sum((x - centroids[0]) ** 2, axis=1)
    for j in range(1, v):
        total = d2.sum()
        if total <= 0:
            centroids[j] = x[rng.integers(n)]
            continue
        centroids[j] = x[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((x - centroids[j]) ** 2, axis=1))
    for _ in range(max_iter):
        dists = np.sum((x[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
        labels = np.argmin(dists, axis=1)
        new = np.empty_like(centroids)
        for j in range(v):
            members = labels == j
            if not members.any():
                # reseed an empty cluster at the worst-represented point
                far = int(np.argmax(dists[np.arange(n), labels]))
                new[j] = x[far]
                labels[far] = j
                dists[far, :] = 0.0
            else:
                new[j] = x[members].mean(axis=0)
        move = np.sqrt(np.sum((new - centroids) ** 2, axis=1)).max()
        centroids = new
        if move < tol:
            break
    return centroids


def kmeans_encode(series, spec: EncodingSpec) -> EncodedBundle:
    """Mark, per K-means centroid, its M nearest rows as the 1's of a sequence.

    M = floor(subsample_fraction * n); every returned sequence has exactly
    M ones.  Distance ties at the M-th radius resolve to the lowest time
    index.  Rows are standardized per coordinate before clustering.
    """
    x = _as_matrix(series)
    n = x.shape[0]
    if spec.v < 1:
        raise ValueError("v must be at least 1")
    if not 0.0 < spec.subsample_fraction < 1.0:
        raise ValueError("subsample_fraction must be in (0, 1)")
    m = int(spec.subsample_fraction * n)
    if m < 1:
        raise DegenerateData("subsample fraction leaves no rows to mark")
    if np.unique(x, axis=0).shape[0] < spec.v:
        raise DegenerateData(
            f"need at least {spec.v} distinct rows for {spec.v} clusters"
        )
    xs = standardize(x)
    rng = np.random.Generator(np.random.Philox(spec.seed))
    centroids = _kmeans(xs, spec.v, rng)
    sequences = np.zeros((spec.v, n), dtype=np.int8)
    membership = []
    for j in range(spec.v):
        d = np.sum((xs - centroids[j]) ** 2, axis=1)
        marked = np.sort(np.argsort(d, kind="stable")[:m])
        sequences[j, marked] = 1
        membership.append(marked.astype(np.int64))
    return EncodedBundle(
        sequences=sequences, membership=tuple(membership), centroids=centroids
    )


def quantile_encode(series, spec: EncodingSpec) -> EncodedBundle:
    """Mark values at or beyond a pair of thresholds: 1 iff x <= a or x >= b."""
    x = _as_matrix(series)
    if x.shape[1] != 1:
        raise ValueError("quantile encoding requires a univariate series")
    x = x[:, 0]
    if spec.thresholds is None:
        raise BadThresholds("quantile mode needs a (lower, upper) threshold pair")
    a, b = spec.thresholds
    if not a < b:
        raise BadThresholds(f"lower threshold {a} must be below upper {b}")
    if spec.thresholds_are_quantiles:
        if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
            raise BadThresholds("quantile levels must lie in [0, 1]")
        a, b = np.quantile(x, [a, b])
    seq = ((x <= a) | (x >= b)).astype(np.int8)
    return EncodedBundle(
        sequences=seq[None, :], membership=(np.flatnonzero(seq).astype(np.int64),)
    )


def pattern_encode(series, spec: EncodingSpec) -> EncodedBundle:
    """Mark every window that matches the symbol pattern exactly.

    The output sequence has length n - L + 1 for a length-L pattern;
    overlapping windows are scanned at every offset.
    """
    values = series.values if isinstance(series, Series) else np.asarray(series)
    if values.ndim != 1:
        raise ValueError("pattern encoding requires a 1-d symbol series")
    if not spec.pattern:
        raise ValueError("pattern mode needs a non-empty pattern")
    pattern = tuple(spec.pattern)
    n, length = values.shape[0], len(pattern)
    if length > n:
        raise PatternLongerThanSeries(
            f"pattern of length {length} exceeds series of length {n}"
        )
    out = n - length + 1
    seq = np.ones(out, dtype=np.int8)
    for i, sym in enumerate(pattern):
        seq &= (values[i : out + i] == sym).astype(np.int8)
    return EncodedBundle(
        sequences=seq[None, :], membership=(np.flatnonzero(seq).astype(np.int64),)
    )


def encode(series, spec: EncodingSpec) -> EncodedBundle:
    """Dispatch on ``spec.mode``."""
    if spec.mode == "kmeans_subsample":
        return kmeans_encode(series, spec)
    if spec.mode == "quantile":
        return quantile_encode(series, spec)
    if spec.mode == "pattern":
        return pattern_encode(series, spec)
    raise ValueError(f"unknown encoding mode: {spec.mode!r}")
