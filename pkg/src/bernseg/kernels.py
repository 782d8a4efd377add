"""Hot numeric kernels, numba-compiled with a pure-Python fallback.

Two inner loops dominate the package's runtime and live here:

* :func:`sweep_best_partition` -- the merging search over recurrence
  times of a single 0/1 sequence, swept over every count threshold.
  O(M^2) merge events for M ones.
* :func:`ward_adjacent_merge` -- agglomerative Ward clustering of the
  rate matrix restricted to temporally adjacent clusters.  O(N^2) scans.

Both are compiled via :func:`bernseg._accel.maybe_njit`; the uncompiled
functions stay reachable as ``<kernel>.py_func``.
"""

import numpy as np

from ._accel import maybe_njit


@maybe_njit
def seg_loglik(cum1, lo, hi):
    # Bernoulli log-likelihood of positions lo+1..hi at the segment MLE
    # rate, with the 0*log(0) = 0 convention for pure segments.
    m = cum1[hi] - cum1[lo]
    length = hi - lo
    if m == 0 or m == length:
        return 0.0
    p = m / length
    return m * np.log(p) + (length - m) * np.log1p(-p)


@maybe_njit
def sweep_best_partition(one_pos, cum1, n, phi):
    """Run the threshold-swept merging search and return the best cut set.

    Parameters
    ----------
    one_pos : int64[M]
        1-based positions of the 1's, strictly increasing.
    cum1 : int64[n+1]
        Prefix counts of 1's (cum1[i] = number of 1's among the first i).
    n : int
        Sequence length.
    phi : float
        Penalty coefficient multiplying the parameter count 2k+1.

    Returns ``(cuts, loss, events)``: the loss-minimizing change points as
    prefix lengths in (0, n), the achieved penalized loss, and the total
    number of merge events across the whole threshold sweep.

    The M+1 recurrence times (leading and trailing gaps included) are
    processed in increasing order, ties left to right.  Runs of marked
    gaps form candidate high-intensity windows spanning the absorbed 1's;
    windows touching either end of the series extend to it.  Whenever a
    merged window's absorbed-gap count exceeds the current threshold, the
    boundaries of all qualifying windows are evaluated as change points
    and the global minimum (including the empty partition) is kept.
    """
    m = one_pos.shape[0]
    g = m + 1
    gaps = np.empty(g, np.int64)
    gaps[0] = one_pos[0] - 1
    for i in range(1, m):
        gaps[i] = one_pos[i] - one_pos[i - 1] - 1
    gaps[m] = n - one_pos[m - 1]

    # stable processing order: by gap value, ties left to right
    key = gaps * g + np.arange(g, dtype=np.int64)
    order = np.argsort(key)

    marked = np.zeros(g, np.bool_)
    run_start = np.zeros(g, np.int64)
    run_end = np.zeros(g, np.int64)
    q_start = np.empty(g, np.int64)  # sorted starts of qualifying runs
    q_end = np.empty(g, np.int64)
    cutbuf = np.empty(2 * g, np.int64)
    best_cuts = np.empty(2 * g, np.int64)

    best_loss = -2.0 * seg_loglik(cum1, 0, n) + phi
    best_k = 0
    events = 0

    for cstar in range(m + 1):
        for i in range(g):
            marked[i] = False
        nq = 0
        for oi in range(g):
            t = order[oi]
            a = t
            b = t
            n_consumed = 0
            if t > 0 and marked[t - 1]:
                a = run_start[t - 1]
                if t - a > cstar:
                    n_consumed += 1
            if t < g - 1 and marked[t + 1]:
                b = run_end[t + 1]
                if b - t > cstar:
                    n_consumed += 1
            marked[t] = True
            run_start[b] = a
            run_end[a] = b
            events += 1
            if b - a + 1 <= cstar:
                continue

            # splice the merged run into the sorted qualifying list; any
            # consumed components sit contiguously at the insertion point
            lo = np.searchsorted(q_start[:nq], a)
            if n_consumed == 0:
                for r in range(nq, lo, -1):
                    q_start[r] = q_start[r - 1]
                    q_end[r] = q_end[r - 1]
                nq += 1
            elif n_consumed == 2:
                for r in range(lo + 1, nq - 1):
                    q_start[r] = q_start[r + 1]
                    q_end[r] = q_end[r + 1]
                nq -= 1
            q_start[lo] = a
            q_end[lo] = b

            # boundaries of the qualifying windows; a run of gaps [a, b]
            # spans the 1's a-1..b, so its segment is [P[a-1], P[b]]
            k = 0
            for r in range(nq):
                if q_start[r] > 0:
                    c = one_pos[q_start[r] - 1] - 1
                    if c > 0:
                        cutbuf[k] = c
                        k += 1
                if q_end[r] < g - 1:
                    c = one_pos[q_end[r]]
                    if c < n:
                        cutbuf[k] = c
                        k += 1
            loss = phi * (2.0 * k + 1.0)
            prev = 0
            for r in range(k):
                loss += -2.0 * seg_loglik(cum1, prev, cutbuf[r])
                prev = cutbuf[r]
            loss += -2.0 * seg_loglik(cum1, prev, n)
            if loss < best_loss:
                best_loss = loss
                best_k = k
                for r in range(k):
                    best_cuts[r] = cutbuf[r]

    return best_cuts[:best_k].copy(), best_loss, events


@maybe_njit
def _ward_cost(sums, size, i, j):
    si = size[i]
    sj = size[j]
    acc = 0.0
    for c in range(sums.shape[1]):
        d = sums[i, c] / si - sums[j, c] / sj
        acc += d * d
    return si * sj / (si + sj) * acc


@maybe_njit
def ward_adjacent_merge(mat, k):
    """Merge adjacent clusters by minimal Ward cost until k+1 remain.

    ``mat`` is the float64 (n, v) design matrix; rows start as singleton
    clusters.  Ties pick the leftmost pair.  Returns ``(bounds, heads)``:
    the k cluster boundaries as prefix lengths, and the head row index of
    the left cluster of each merge, in merge order.
    """
    n = mat.shape[0]
    size = np.ones(n, np.int64)
    sums = mat.copy()
    nxt = np.empty(n, np.int64)
    prv = np.empty(n, np.int64)
    cost = np.empty(n, np.float64)
    for i in range(n):
        nxt[i] = i + 1
        prv[i] = i - 1
        cost[i] = np.inf
    for i in range(n - 1):
        cost[i] = _ward_cost(sums, size, i, i + 1)

    n_merges = n - 1 - k
    heads = np.empty(n_merges, np.int64)
    h = 0
    n_clusters = n
    while n_clusters > k + 1:
        best = np.inf
        bi = -1
        i = 0
        while i < n:
            if cost[i] < best:
                best = cost[i]
                bi = i
            i = nxt[i]
        j = nxt[bi]
        size[bi] += size[j]
        for c in range(sums.shape[1]):
            sums[bi, c] += sums[j, c]
        nj = nxt[j]
        nxt[bi] = nj
        if nj < n:
            prv[nj] = bi
            cost[bi] = _ward_cost(sums, size, bi, nj)
        else:
            cost[bi] = np.inf
        pi = prv[bi]
        if pi >= 0:
            cost[pi] = _ward_cost(sums, size, pi, bi)
        heads[h] = bi
        h += 1
        n_clusters -= 1

    bounds = np.empty(k, np.int64)
    r = 0
    i = nxt[0]
    while i < n:
        bounds[r] = i
        r += 1
        i = nxt[i]
    return bounds, heads
