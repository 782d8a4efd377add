"""Stability change-point detection.

Per-sequence estimates become selection sets (optionally expanded to the
gap between the flanking 1's), which aggregate into a per-time-point
selection probability profile.  The profile supports thresholding,
binning, smoothing with local-maxima extraction, and closed-form bounds
on the expected false positive/negative rates.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, InvalidRegime


@dataclass(frozen=True)
class SelectionProfile:
    """Selection probabilities per time point; pi[t-1] belongs to time t."""

    pi: np.ndarray
    v: int
    weighted: bool = False

    @property
    def n(self) -> int:
        return self.pi.shape[0]


@dataclass(frozen=True)
class BinnedProfile:
    values: np.ndarray  # summed profile mass per bin
    starts: np.ndarray  # 1-based first time point of each bin
    bin_width: int
    last_partial: bool


@dataclass(frozen=True)
class ErrorBoundInputs:
    pn: float  # noise selection rate
    pa: float  # admissive selection rate
    xi: float
    pi_threshold: float
    v: int


def selection_set(seq, segmentation, expand: bool = False) -> np.ndarray:
    """Time points selected by one sequence's estimated change points.

    Without expansion this is the change points themselves.  With
    expansion each estimate also absorbs every index strictly between the
    1-position at or before it and the next 1-position after it.
    """
    values = np.asarray(seq)
    n = values.size
    cps = np.asarray(segmentation.change_points, dtype=np.int64)
    if not expand or cps.size == 0:
        return cps.copy()
    ones = np.flatnonzero(values == 1) + 1  # 1-based
    members = set()
    for tau in cps:
        at_or_before = ones[ones <= tau]
        after = ones[ones > tau]
        lo = int(at_or_before[-1]) if at_or_before.size else 0
        hi = int(after[0]) if after.size else n + 1
        members.add(int(tau))
        members.update(range(lo + 1, hi))
    return np.array(sorted(members), dtype=np.int64)


def selection_profile(sets, n: int, weights=None) -> SelectionProfile:
    """Fraction (or weight mass) of sets selecting each time point."""
    sets = list(sets)
    v = len(sets)
    if v == 0:
        raise ValueError("need at least one selection set")
    if weights is not None:
        w = np.asarray(weights, dtype=np.float64).ravel()
        if w.size != v:
            raise DimMismatch(f"{v} sets but {w.size} weights")
    pi = np.zeros(n, dtype=np.float64)
    for j, members in enumerate(sets):
        members = np.asarray(members, dtype=np.int64)
        if members.size == 0:
            continue
        if members.min() < 1 or members.max() > n:
            raise DimMismatch("selection set indices must lie in 1..n")
        share = w[j] if weights is not None else 1.0 / v
        pi[members - 1] += share
    return SelectionProfile(pi=pi, v=v, weighted=weights is not None)


def threshold_select(profile: SelectionProfile, pi: float) -> np.ndarray:
    """Time points whose selection probability reaches the threshold."""
    if not 0.0 < pi < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    return np.flatnonzero(profile.pi >= pi) + 1


def connected_windows(selected) -> list:
    """Group sorted selected time points into maximal consecutive runs."""
    selected = np.asarray(selected, dtype=np.int64)
    if selected.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(selected) > 1)
    windows = []
    start = 0
    for b in np.append(breaks, selected.size - 1):
        windows.append((int(selected[start]), int(selected[b])))
        start = b + 1
    return windows


def bin_profile(profile: SelectionProfile, bin_width: int) -> BinnedProfile:
    """Sum profile mass over consecutive disjoint bins; a short final bin is kept."""
    if bin_width < 1:
        raise ValueError("bin width must be at least 1")
    n = profile.n
    nbins = (n + bin_width - 1) // bin_width
    values = np.zeros(nbins, dtype=np.float64)
    for b in range(nbins):
        values[b] = profile.pi[b * bin_width : (b + 1) * bin_width].sum()
    starts = np.arange(nbins, dtype=np.int64) * bin_width + 1
    return BinnedProfile(
        values=values,
        starts=starts,
        bin_width=bin_width,
        last_partial=n % bin_width != 0,
    )


def smooth_profile(profile: SelectionProfile, window: int) -> np.ndarray:
    """Centered moving average with zero padding beyond the ends."""
    if window < 1 or window % 2 == 0:
        raise ValueError("smoothing window must be odd and positive")
    if window == 1:
        return profile.pi.copy()
    return np.convolve(profile.pi, np.full(window, 1.0 / window), mode="same")


def default_smooth_window(n: int) -> int:
    w = max(1, int(np.ceil(n / 50)))
    return w if w % 2 == 1 else w + 1


def local_maxima(profile: SelectionProfile, smooth_window: int | None = None,
                 top_k: int | None = None) -> np.ndarray:
    """Strict local maxima of the smoothed profile, tallest first.

    Plateaus report their leftmost index; equal heights tie-break by
    time order.  ``top_k`` truncates the ranked list.
    """
    if smooth_window is None:
        smooth_window = default_smooth_window(profile.n)
    y = smooth_profile(profile, smooth_window)
    n = y.size
    peaks = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and y[j + 1] == y[i]:
            j += 1
        left_ok = i == 0 or y[i - 1] < y[i]
        right_ok = j == n - 1 or y[j + 1] < y[i]
        if left_ok and right_ok and y[i] > 0:
            peaks.append((i, y[i]))
        i = j + 1
    peaks.sort(key=lambda p: (-p[1], p[0]))
    if top_k is not None:
        peaks = peaks[:top_k]
    return np.array([p[0] + 1 for p in peaks], dtype=np.int64)


def _check_rate(name, value):
    if not 0.0 < value < 1.0:
        raise InvalidRegime(f"{name} must lie in (0, 1), got {value}")


def theorem3_bounds(inputs: ErrorBoundInputs):
    """Closed-form expected false positive/negative rate bounds.

    Each bound is returned only when its validity condition holds and is
    ``None`` otherwise: the FPR bound needs pi > (1+xi)*pn with
    0 < xi < 1/pn - 1, the FNR bound needs pi < (1-xi)*pa with 0 < xi < 1.
    """
    _check_rate("pn", inputs.pn)
    _check_rate("pa", inputs.pa)
    _check_rate("pi_threshold", inputs.pi_threshold)
    if inputs.xi <= 0:
        raise InvalidRegime(f"xi must be positive, got {inputs.xi}")
    if inputs.v < 1:
        raise InvalidRegime("v must be at least 1")
    xi, pi, v = inputs.xi, inputs.pi_threshold, inputs.v

    fpr = None
    if xi < 1.0 / inputs.pn - 1.0 and pi > (1.0 + xi) * inputs.pn:
        infl = (1.0 + xi) * inputs.pn
        fpr = (1.0 - infl) / (pi - infl) * np.exp(-xi * xi * v * inputs.pn / (xi + 2.0))

    fnr = None
    if xi < 1.0 and pi < (1.0 - xi) * inputs.pa:
        defl = (1.0 - xi) * inputs.pa
        fnr = defl / (defl - pi) * np.exp(-xi * xi * v * inputs.pa / (xi + 2.0))

    return fpr, fnr


def estimate_selection_rates(profile: SelectionProfile, true_change_points,
                             admissive_width: int | None = None,
                             noise_width: int | None = None):
    """Empirical admissive/noise selection rates around known change points.

    Admissive points lie within ``admissive_width`` of a true change point
    (default 2% of n); noise points lie farther than ``noise_width`` from
    all of them (default 5% of n).  Returns ``(pa, pn)``.
    """
    n = profile.n
    if admissive_width is None:
        admissive_width = max(1, int(0.02 * n))
    if noise_width is None:
        noise_width = max(1, int(0.05 * n))
    t = np.arange(1, n + 1)
    cps = np.asarray(true_change_points, dtype=np.int64)
    dist = np.min(np.abs(t[:, None] - cps[None, :]), axis=1)
    admissive = dist < admissive_width
    noise = dist >= noise_width
    if not admissive.any() or not noise.any():
        raise ValueError("window widths leave an empty admissive or noise set")
    return float(profile.pi[admissive].mean()), float(profile.pi[noise].mean())
