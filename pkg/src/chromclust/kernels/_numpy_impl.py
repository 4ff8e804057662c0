"""Pure-numpy backend.

Vectorizes over partitions (exact scan) and over trials (rounding),
chunked so intermediate boolean tables stay small.  The RNG is
counter-based splitmix64 on uint64 arrays; numpy's wrapping unsigned
arithmetic gives the same mod-2^64 behavior as the compiled backend, so
outputs match it bit for bit.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TRIAL_SALT = np.uint64(0x6A09E667F3BCC909)
_U1 = np.uint64(1)
_F53 = 1.0 / 9007199254740992.0  # 2**-53

_PARTITION_CHUNK = 8192
_TRIAL_CHUNK = 16384


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _pair_endpoints(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu, iv = np.triu_indices(n, k=1)
    return iu, iv


def all_rgs(n: int) -> np.ndarray:
    """Every restricted-growth string of length n, lexicographic order."""
    rgs = np.zeros((1, 1), np.int8)
    mx = np.zeros(1, np.int8)
    for _ in range(n - 1):
        counts = mx.astype(np.int64) + 2
        rows = np.repeat(np.arange(rgs.shape[0]), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        digit = (np.arange(counts.sum()) - starts).astype(np.int8)
        rgs = np.concatenate([rgs[rows], digit[:, None]], axis=1)
        mx = np.maximum(mx[rows], digit)
    return rgs


def _partition_costs(labels: np.ndarray, n: int, n_colors: int, rgs: np.ndarray) -> np.ndarray:
    """Disagreement cost of each partition row under its best coloring."""
    iu, iv = _pair_endpoints(n)
    plus = labels >= 0
    lab64 = labels.astype(np.int64)
    out = np.empty(rgs.shape[0], np.int64)
    for lo in range(0, rgs.shape[0], _PARTITION_CHUNK):
        block = rgs[lo : lo + _PARTITION_CHUNK].astype(np.int64)
        b = block.shape[0]
        au, av = block[:, iu], block[:, iv]
        same = au == av
        cross = (~same & plus).sum(axis=1)
        rowbase = np.arange(b)[:, None] * n
        cell = rowbase + au
        inside = np.bincount(cell[same], minlength=b * n).reshape(b, n)
        colored = same & plus
        plus_in = np.bincount(
            (cell * n_colors + lab64)[colored], minlength=b * n * n_colors
        ).reshape(b, n, n_colors)
        out[lo : lo + b] = cross + (inside - plus_in.max(axis=2)).sum(axis=1)
    return out


def exact_scan(labels: np.ndarray, n: int, n_colors: int):
    costs = _partition_costs(labels, n, n_colors, all_rgs(n))
    best = int(costs.min())
    return best, int((costs == best).sum()), int(costs.size)


def exact_collect(labels: np.ndarray, n: int, n_colors: int, best_cost: int, optima_count: int):
    rgs = all_rgs(n)
    costs = _partition_costs(labels, n, n_colors, rgs)
    out = rgs[costs == best_cost]
    assert out.shape[0] == optima_count
    return np.ascontiguousarray(out)


def _simulate(
    t_indices: np.ndarray,
    labels: np.ndarray,
    n: int,
    masks: np.ndarray,
    set_colors: np.ndarray,
    cumw: np.ndarray,
    seed: np.uint64,
    cap: int,
):
    """Run the rounding chain for each trial index; all trials in lockstep."""
    t = t_indices.shape[0]
    m = masks.shape[0]
    full = (_U1 << np.uint64(n)) - _U1
    state = _mix64(seed ^ _mix64(t_indices + _TRIAL_SALT))
    unclustered = np.full(t, full, np.uint64)
    membership = np.full((t, n), -1, np.int8)
    cluster_colors = np.zeros((t, n), np.int8)
    n_clusters = np.zeros(t, np.int64)
    iters = np.zeros(t, np.int64)
    failed = np.zeros(t, bool)
    active = np.ones(t, bool)
    while True:
        act = np.nonzero(active)[0]
        if act.size == 0:
            break
        capped = iters[act] >= cap
        if capped.any():
            failed[act[capped]] = True
            active[act[capped]] = False
            act = act[~capped]
            if act.size == 0:
                break
        state[act] += _PHI
        r = _mix64(state[act])
        u = (r >> np.uint64(11)).astype(np.float64) * _F53
        idx = np.minimum(np.searchsorted(cumw, u, side="right"), m - 1)
        drawn = masks[idx]
        inter = unclustered[act] & drawn
        iters[act] += 1
        hit = inter != 0
        rows = act[hit]
        if rows.size:
            inter_hit = inter[hit]
            cid = n_clusters[rows]
            for v in range(n):
                took = ((inter_hit >> np.uint64(v)) & _U1).astype(bool)
                membership[rows[took], v] = cid[took]
            cluster_colors[rows, cid] = set_colors[idx[hit]]
            n_clusters[rows] += 1
            unclustered[act] &= ~drawn
            active[act] = unclustered[act] != 0
    return membership, cluster_colors, n_clusters, iters, failed


def rounding_trials(
    labels: np.ndarray,
    n: int,
    n_colors: int,
    masks: np.ndarray,
    set_colors: np.ndarray,
    cumw: np.ndarray,
    seed: np.uint64,
    trials: int,
    cap: int,
):
    p = labels.shape[0]
    iu, iv = _pair_endpoints(n)
    not_separated = np.zeros(p, np.int64)
    together_colored = np.zeros((n_colors, p), np.int64)
    iter_hist = np.zeros(cap + 1, np.int64)
    total_cost = 0
    total_sq = 0
    max_iters = 0
    n_failed = 0
    for lo in range(0, trials, _TRIAL_CHUNK):
        t_idx = np.arange(lo, min(lo + _TRIAL_CHUNK, trials), dtype=np.uint64)
        membership, cluster_colors, _, iters, failed = _simulate(
            t_idx, labels, n, masks, set_colors, cumw, seed, cap
        )
        iter_hist += np.bincount(iters, minlength=cap + 1)
        max_iters = max(max_iters, int(iters.max()))
        n_failed += int(failed.sum())
        ok = ~failed
        mem = membership[ok].astype(np.int64)
        mu, mv = mem[:, iu], mem[:, iv]
        same = mu == mv
        col_u = np.take_along_axis(cluster_colors[ok].astype(np.int64), mu, axis=1)
        disagree = np.where(same, labels != col_u, labels >= 0)
        costs = disagree.sum(axis=1)
        total_cost += int(costs.sum())
        total_sq += int((costs * costs).sum())
        not_separated += same.sum(axis=0)
        for c in range(n_colors):
            together_colored[c] += (same & (col_u == c)).sum(axis=0)
    return (
        total_cost,
        total_sq,
        not_separated,
        together_colored,
        iter_hist,
        max_iters,
        n_failed,
    )


def round_single(
    labels: np.ndarray,
    n: int,
    n_colors: int,
    masks: np.ndarray,
    set_colors: np.ndarray,
    cumw: np.ndarray,
    seed: np.uint64,
    trial_index: int,
    cap: int,
):
    t_idx = np.array([trial_index], np.uint64)
    membership, cluster_colors, n_clusters, iters, failed = _simulate(
        t_idx, labels, n, masks, set_colors, cumw, seed, cap
    )
    return (
        membership[0].copy(),
        cluster_colors[0].copy(),
        int(n_clusters[0]),
        int(iters[0]),
        bool(failed[0]),
    )
