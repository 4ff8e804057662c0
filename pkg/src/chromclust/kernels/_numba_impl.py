"""Compiled backend: scalar loops under @njit(cache=True).

Must stay observably identical to _numpy_impl; the RNG constants and
update order below are shared with it, and uint64 arithmetic wraps the
same way in both.  Any semantic change here needs the mirror change
there, plus the cross-backend equality tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TRIAL_SALT = np.uint64(0x6A09E667F3BCC909)
_U0 = np.uint64(0)
_U1 = np.uint64(1)
_S11 = np.uint64(11)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_F53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def _partition_cost(labels, n, n_colors, a, inside, plus_in):
    n_blocks = 0
    for i in range(n):
        if a[i] >= n_blocks:
            n_blocks = a[i] + 1
    for b in range(n_blocks):
        inside[b] = 0
        for c in range(n_colors):
            plus_in[b, c] = 0
    cross = 0
    pidx = 0
    for u in range(n):
        bu = a[u]
        for v in range(u + 1, n):
            lab = labels[pidx]
            pidx += 1
            if bu == a[v]:
                inside[bu] += 1
                if lab >= 0:
                    plus_in[bu, lab] += 1
            elif lab >= 0:
                cross += 1
    cost = cross
    for b in range(n_blocks):
        top = 0
        for c in range(n_colors):
            if plus_in[b, c] > top:
                top = plus_in[b, c]
        cost += inside[b] - top
    return cost


@njit(cache=True)
def _next_rgs(a, n):
    """Advance to the lexicographic successor in place; False at the end."""
    j = n - 1
    while j >= 1:
        prefix_max = np.int8(0)
        for i in range(j):
            if a[i] > prefix_max:
                prefix_max = a[i]
        if a[j] <= prefix_max:
            a[j] += 1
            for i in range(j + 1, n):
                a[i] = 0
            return True
        j -= 1
    return False


@njit(cache=True)
def exact_scan(labels, n, n_colors):
    a = np.zeros(n, np.int8)
    inside = np.zeros(n, np.int64)
    plus_in = np.zeros((n, n_colors), np.int64)
    best = np.int64(1) << 60
    n_best = 0
    total = 0
    while True:
        total += 1
        cost = _partition_cost(labels, n, n_colors, a, inside, plus_in)
        if cost < best:
            best = cost
            n_best = 1
        elif cost == best:
            n_best += 1
        if not _next_rgs(a, n):
            break
    return best, n_best, total


@njit(cache=True)
def exact_collect(labels, n, n_colors, best_cost, optima_count):
    a = np.zeros(n, np.int8)
    inside = np.zeros(n, np.int64)
    plus_in = np.zeros((n, n_colors), np.int64)
    out = np.empty((optima_count, n), np.int8)
    k = 0
    while True:
        if _partition_cost(labels, n, n_colors, a, inside, plus_in) == best_cost:
            for i in range(n):
                out[k, i] = a[i]
            k += 1
        if not _next_rgs(a, n):
            break
    assert k == optima_count
    return out


@njit(cache=True)
def _draw_column(cumw, u):
    lo = 0
    hi = cumw.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if cumw[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    if lo >= cumw.shape[0]:
        lo = cumw.shape[0] - 1
    return lo


@njit(cache=True)
def rounding_trials(labels, n, n_colors, masks, set_colors, cumw, seed, trials, cap):
    p = labels.shape[0]
    not_separated = np.zeros(p, np.int64)
    together_colored = np.zeros((n_colors, p), np.int64)
    iter_hist = np.zeros(cap + 1, np.int64)
    total_cost = 0
    total_sq = 0
    max_iters = 0
    n_failed = 0
    membership = np.empty(n, np.int8)
    cluster_colors = np.empty(n, np.int8)
    full = (_U1 << np.uint64(n)) - _U1
    for t in range(trials):
        state = _mix64(seed ^ _mix64(np.uint64(t) + _TRIAL_SALT))
        unclustered = full
        for v in range(n):
            membership[v] = -1
        n_clusters = 0
        iters = 0
        failed = False
        while unclustered != _U0:
            if iters >= cap:
                failed = True
                break
            state = state + _PHI
            u = np.float64(_mix64(state) >> _S11) * _F53
            idx = _draw_column(cumw, u)
            iters += 1
            drawn = masks[idx]
            inter = unclustered & drawn
            if inter != _U0:
                for v in range(n):
                    if (inter >> np.uint64(v)) & _U1:
                        membership[v] = n_clusters
                cluster_colors[n_clusters] = set_colors[idx]
                n_clusters += 1
                unclustered = unclustered & ~drawn
        iter_hist[iters] += 1
        if iters > max_iters:
            max_iters = iters
        if failed:
            n_failed += 1
            continue
        cost = 0
        pidx = 0
        for uu in range(n):
            cu = membership[uu]
            for vv in range(uu + 1, n):
                lab = labels[pidx]
                if cu == membership[vv]:
                    not_separated[pidx] += 1
                    col = cluster_colors[cu]
                    together_colored[col, pidx] += 1
                    if lab != col:
                        cost += 1
                elif lab >= 0:
                    cost += 1
                pidx += 1
        total_cost += cost
        total_sq += cost * cost
    return (
        total_cost,
        total_sq,
        not_separated,
        together_colored,
        iter_hist,
        max_iters,
        n_failed,
    )


@njit(cache=True)
def round_single(labels, n, n_colors, masks, set_colors, cumw, seed, trial_index, cap):
    membership = np.full(n, -1, np.int8)
    cluster_colors = np.zeros(n, np.int8)
    state = _mix64(seed ^ _mix64(np.uint64(trial_index) + _TRIAL_SALT))
    unclustered = (_U1 << np.uint64(n)) - _U1
    n_clusters = 0
    iters = 0
    failed = False
    while unclustered != _U0:
        if iters >= cap:
            failed = True
            break
        state = state + _PHI
        u = np.float64(_mix64(state) >> _S11) * _F53
        idx = _draw_column(cumw, u)
        iters += 1
        drawn = masks[idx]
        inter = unclustered & drawn
        if inter != _U0:
            for v in range(n):
                if (inter >> np.uint64(v)) & _U1:
                    membership[v] = n_clusters
            cluster_colors[n_clusters] = set_colors[idx]
            n_clusters += 1
            unclustered = unclustered & ~drawn
    return membership, cluster_colors, n_clusters, iters, failed
