"""Exhaustive solver against hand values and a naive re-implementation."""

from itertools import product

import numpy as np
import pytest

from conftest import random_instance

from chromclust.errors import CapacityError
from chromclust.exact import best_color, best_respecting, rgs_to_partition, solve_exact
from chromclust.model import Clustering, count_disagreements, respects


def naive_optimum(inst):
    """Partitions by direct recursion, colors by trying the whole palette."""
    verts = list(range(inst.n))

    def partitions(rest):
        if not rest:
            yield []
            return
        head, *tail = rest
        for sub in partitions(tail):
            for i in range(len(sub)):
                yield sub[:i] + [sub[i] | {head}] + sub[i + 1 :]
            yield sub + [{head}]

    best = None
    witnesses = []
    for parts in partitions(verts):
        frozen = tuple(frozenset(p) for p in parts)
        cost = min(
            count_disagreements(
                inst, Clustering(parts=frozen, part_color=tuple(combo))
            )
            for combo in product(range(inst.n_colors), repeat=len(frozen))
        )
        if best is None or cost < best:
            best, witnesses = cost, [frozenset(frozen)]
        elif cost == best:
            witnesses.append(frozenset(frozen))
    return best, set(witnesses)


def test_t3_report(t3):
    report = solve_exact(t3)
    assert report.opt_cost == 1
    assert report.partitions_enumerated == 5  # Bell(3)
    expected = {
        frozenset({frozenset({0, 1}), frozenset({2})}),
        frozenset({frozenset({1, 2}), frozenset({0})}),
    }
    assert {frozenset(p) for p in report.all_optimal_partitions} == expected
    assert count_disagreements(t3, report.one_optimal) == 1
    # lexicographically first witness is {{0,1},{2}}, cluster {0,1} colored r
    assert report.one_optimal.parts[0] == frozenset({0, 1})
    assert report.one_optimal.part_color[0] == 0


def test_best_color_ties_to_smallest_id(t3):
    assert best_color(t3, {0}) == (0, 0)
    assert best_color(t3, {0, 1}) == (0, 0)
    assert best_color(t3, {1, 2}) == (1, 0)
    assert best_color(t3, {0, 1, 2})[1] == 2  # either color leaves two bad pairs


def test_matches_naive_enumeration():
    rng = np.random.default_rng(101)
    for _ in range(25):
        inst = random_instance(rng, int(rng.integers(2, 6)), int(rng.integers(1, 4)))
        report = solve_exact(inst)
        naive_cost, naive_witnesses = naive_optimum(inst)
        assert report.opt_cost == naive_cost
        assert {frozenset(p) for p in report.all_optimal_partitions} == naive_witnesses
        assert count_disagreements(inst, report.one_optimal) == naive_cost


def test_backends_agree():
    rng = np.random.default_rng(202)
    for _ in range(10):
        inst = random_instance(rng, 6, 2)
        a = solve_exact(inst, backend="numpy")
        b = solve_exact(inst, backend="numba")
        assert a == b


def test_vertex_limit_enforced():
    rng = np.random.default_rng(3)
    inst = random_instance(rng, 7, 2)
    with pytest.raises(CapacityError):
        solve_exact(inst, limit=6)


def test_rgs_to_partition():
    assert rgs_to_partition([0, 0, 1, 0, 2]) == (
        frozenset({0, 1, 3}),
        frozenset({2}),
        frozenset({4}),
    )


def test_single_vertex():
    inst = random_instance(np.random.default_rng(1), 1, 2)
    report = solve_exact(inst)
    assert report.opt_cost == 0
    assert report.partitions_enumerated == 1
    assert report.one_optimal.parts == (frozenset({0}),)


def test_best_respecting_unconstrained_matches_optimum(t3):
    from chromclust.model import PreclusteredInstance, iter_pairs

    pre = PreclusteredInstance(
        preclusters=tuple(frozenset({v}) for v in range(3)),
        precolor={},
        admissible=frozenset(iter_pairs(3)),
    )
    cost, sol = best_respecting(t3, pre)
    assert cost == solve_exact(t3).opt_cost == 1
    assert respects(t3, pre, sol)


def test_best_respecting_honors_admissibility(t3):
    from chromclust.model import PreclusteredInstance

    # nothing may merge: the only respecting solution is all singletons
    pre = PreclusteredInstance(
        preclusters=tuple(frozenset({v}) for v in range(3)),
        precolor={},
        admissible=frozenset(),
    )
    cost, sol = best_respecting(t3, pre)
    assert cost == 2
    assert sol == Clustering.singletons(3)
    # allowing just (0, 1) recovers the optimum
    pre = PreclusteredInstance(
        preclusters=pre.preclusters, precolor={}, admissible=frozenset({(0, 1)})
    )
    cost, sol = best_respecting(t3, pre)
    assert cost == 1
    assert sol == Clustering(
        parts=(frozenset({0, 1}), frozenset({2})), part_color=(0, 0)
    )


def test_best_respecting_matches_filtered_enumeration():
    from chromclust.model import PreclusteredInstance, iter_pairs, respects

    rng = np.random.default_rng(55)
    for trial in range(15):
        n = int(rng.integers(2, 7))
        inst = random_instance(rng, n, 2)
        membership = rng.integers(0, max(1, n - 1), size=n).tolist()
        groups = {}
        for v, g in enumerate(membership):
            groups.setdefault(g, set()).add(v)
        preclusters = tuple(frozenset(g) for g in sorted(groups.values(), key=min))
        index = {v: i for i, part in enumerate(preclusters) for v in part}
        cross = [(u, v) for u, v in iter_pairs(n) if index[u] != index[v]]
        admissible = frozenset(
            pair for pair in cross if rng.random() < 0.6
        )
        precolor = {
            i: int(rng.integers(0, 2))
            for i, part in enumerate(preclusters)
            if len(part) > 1
        }
        pre = PreclusteredInstance(preclusters, precolor, admissible)
        cost, sol = best_respecting(inst, pre)
        assert respects(inst, pre, sol)
        assert count_disagreements(inst, sol) == cost
        # oracle: filter the full enumeration by the respects predicate
        best = None
        for report_sol in _all_solutions(inst):
            if respects(inst, pre, report_sol):
                c = count_disagreements(inst, report_sol)
                best = c if best is None else min(best, c)
        assert cost == best


def _all_solutions(inst):
    from itertools import product

    from chromclust.exact import _iter_rgs, rgs_to_partition

    for row in _iter_rgs(inst.n):
        parts = rgs_to_partition(row)
        k = len(parts)
        for colors in product(range(inst.n_colors), repeat=k):
            yield Clustering(parts=parts, part_color=colors)
