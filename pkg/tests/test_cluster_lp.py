"""Cluster LP: objective identities, marginal laws, oracle agreement."""

from fractions import Fraction

import numpy as np
import pytest

from _lp_oracle import brute_force_lp
from conftest import random_instance

from chromclust.cluster_lp import (
    FractionalClusterSolution,
    build_lp,
    column_objective,
    embed_clustering,
    lp_objective_value,
    marginals,
    mix_solutions,
    obj_x,
    separation_mass,
    solve_cluster_lp,
)
from chromclust.errors import CapacityError, StructuralError
from chromclust.exact import solve_exact
from chromclust.model import Clustering, count_disagreements, iter_pairs

F = Fraction
ONE = F(1)


def random_clustering(rng: np.random.Generator, n: int, n_colors: int) -> Clustering:
    member = rng.integers(0, n, size=n)
    colors = rng.integers(0, n_colors, size=n)
    return Clustering.from_membership(member, colors)


def random_feasible_z(rng, inst, max_parts=5) -> FractionalClusterSolution:
    """Convex mix of a few embedded clusterings: feasible by construction."""
    k = int(rng.integers(1, max_parts + 1))
    sols = [embed_clustering(inst, random_clustering(rng, inst.n, inst.n_colors)) for _ in range(k)]
    cuts = sorted(int(v) for v in rng.integers(0, 24, size=k - 1))
    bounds = [0] + cuts + [24]
    weights = [F(bounds[i + 1] - bounds[i], 24) for i in range(k)]
    keep = [i for i, w in enumerate(weights) if w > 0]
    return mix_solutions([sols[i] for i in keep], [weights[i] for i in keep])


def test_t3_column_costs(t3):
    assert column_objective(t3, 0, 0b011) == F(1, 2)  # {0,1} as r: half of one + edge out
    assert column_objective(t3, 1, 0b011) == F(3, 2)  # {0,1} as b: inner pair now wrong too
    assert column_objective(t3, 0, 0b111) == F(2)
    assert column_objective(t3, 1, 0b111) == F(2)
    assert column_objective(t3, 0, 0b100) == F(1, 2)  # {2} leaves one + edge cut in half


def test_t3_lp_matches_brute_force(t3):
    lp, legend = build_lp(t3)
    assert len(legend) == 14
    status, value = brute_force_lp(lp.objective, lp.matrix, lp.rhs)
    assert (status, value) == ("optimal", ONE)
    result = solve_cluster_lp(t3)
    assert result.value == ONE  # equals the integral optimum here
    assert len(result.solution.entries) <= t3.n
    result.solution.require_feasible()


def test_embedding_costs_match_disagreements(t3):
    rng = np.random.default_rng(5)
    for _ in range(40):
        inst = random_instance(rng, int(rng.integers(2, 7)), int(rng.integers(1, 4)))
        sol = random_clustering(rng, inst.n, inst.n_colors)
        z = embed_clustering(inst, sol)
        z.require_feasible()
        assert lp_objective_value(inst, z) == count_disagreements(inst, sol)
        assert obj_x(inst, marginals(inst, z)) == count_disagreements(inst, sol)


def test_objective_identity_on_mixes():
    rng = np.random.default_rng(17)
    for _ in range(40):
        inst = random_instance(rng, int(rng.integers(2, 7)), int(rng.integers(1, 4)))
        z = random_feasible_z(rng, inst)
        assert lp_objective_value(inst, z) == obj_x(inst, marginals(inst, z))


def test_marginal_identities():
    rng = np.random.default_rng(23)
    for _ in range(25):
        inst = random_instance(rng, int(rng.integers(2, 6)), int(rng.integers(1, 4)))
        z = random_feasible_z(rng, inst)
        marg = marginals(inst, z)
        for v in range(inst.n):
            assert sum(marg.t[c][v] for c in range(inst.n_colors)) == inst.n_colors - 1
        for u, v in iter_pairs(inst.n):
            assert ONE - marg.x(u, v) == sum(
                ONE - marg.x_ell(c, u, v) for c in range(inst.n_colors)
            )
            for c in range(inst.n_colors):
                assert separation_mass(z, c, u, v) == marg.x_ell(c, u, v) - marg.t_val(c, u)
                assert separation_mass(z, c, v, u) == marg.x_ell(c, u, v) - marg.t_val(c, v)
                assert F(0) <= marg.x_ell(c, u, v) <= ONE
            assert F(0) <= marg.x(u, v) <= ONE


def test_lp_lower_bounds_optimum():
    rng = np.random.default_rng(31)
    for _ in range(8):
        inst = random_instance(rng, int(rng.integers(2, 6)), int(rng.integers(1, 3)))
        lp_value = solve_cluster_lp(inst).value
        opt = solve_exact(inst).opt_cost
        assert lp_value <= opt
        best_embed = embed_clustering(inst, solve_exact(inst).one_optimal)
        assert lp_objective_value(inst, best_embed) == opt


def test_infeasible_z_rejected(t3):
    z = FractionalClusterSolution(n=3, n_colors=2, entries={(0, 0b011): ONE})
    with pytest.raises(StructuralError):
        marginals(t3, z)
    with pytest.raises(StructuralError):
        FractionalClusterSolution(n=3, n_colors=2, entries={(0, 0b1000): ONE})
    with pytest.raises(StructuralError):
        FractionalClusterSolution(n=3, n_colors=2, entries={(0, 0b11): F(-1, 2)})


def test_column_cap(t3):
    with pytest.raises(CapacityError):
        build_lp(t3, column_cap=13)


def test_mix_weights_validated(t3):
    z = embed_clustering(t3, Clustering.singletons(3))
    with pytest.raises(StructuralError):
        mix_solutions([z, z], [F(1, 2), F(1, 3)])
