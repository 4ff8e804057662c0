"""Preclustering: marking pass, admissible edges, and bound reports.

Starting from any constant-factor solution, the marking pass demotes
every vertex that is badly attached to its cluster (too many hostile
edges inside, or too many positive edges leaving) to a singleton; if a
beta fraction of a cluster got demoted the whole cluster is.  What
survives is the precluster partition K with inherited colors.  The
point of the exercise: non-singleton preclusters are eta-clean (every
member has strictly fewer than eta(|K|-1) bad edges in either sense)
while the preclustering itself is still a constant-factor solution,
with blowup at most 1 + 2/(alpha beta).

On top of K, a similarity graph is built from positive-edge densities:
d(K) is a size-normalized degree, N1(K) collects preclusters of
comparable d, N2(K) the mutually comparable ones, and W(K,K',scope) a
weighted common-neighborhood score.  K ~ K' when K' is in N2(K) and
W over N1(K) cap N1(K') beats eps (d(K)+d(K')).  The admissible edges
are all vertex pairs across ~-related preclusters; a counting argument
bounds their number per precluster by (2/eps^2 + 2/eps) w+(K, V-K),
which each AdmissibilityReport exposes as nonnegative slack.

All arithmetic is exact (Fraction); iteration orders are pinned so
rebuilds are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContractError, StructuralError
from .model import (
    ChromaticInstance,
    Clustering,
    PreclusteredInstance,
    is_valid,
    w_minus,
    w_plus,
)

ZERO = Fraction(0)
ONE = Fraction(1)

ETA_CEILING = Fraction(1, 13)


@dataclass(frozen=True)
class PreclusterParams:
    """Marking thresholds alpha, beta and the admissibility epsilon."""

    alpha: Fraction
    beta: Fraction
    epsilon: Fraction

    def __post_init__(self) -> None:
        alpha, beta, eps = Fraction(self.alpha), Fraction(self.beta), Fraction(self.epsilon)
        if not ZERO < alpha < ONE:
            raise StructuralError("alpha must lie in (0, 1)")
        if not ZERO < beta < ONE:
            raise StructuralError("beta must lie in (0, 1)")
        if not ZERO < eps < ONE:
            raise StructuralError("epsilon must lie in (0, 1)")
        eta = (alpha + beta) / (ONE - beta)
        if not ZERO < eta < ETA_CEILING:
            raise StructuralError(
                f"(alpha+beta)/(1-beta) = {eta} escapes (0, {ETA_CEILING})"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "epsilon", eps)

    @property
    def eta(self) -> Fraction:
        return (self.alpha + self.beta) / (ONE - self.beta)


DEFAULT_ALPHA = Fraction(1, 50)
DEFAULT_BETA = Fraction(1, 50)
DEFAULT_EPSILON = Fraction(1, 10)


def default_params(epsilon: Fraction = DEFAULT_EPSILON) -> PreclusterParams:
    # alpha = beta = 1/50 gives eta = 2/49, comfortably below 1/13
    return PreclusterParams(alpha=DEFAULT_ALPHA, beta=DEFAULT_BETA, epsilon=epsilon)


def _mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def hostile_inside(inst: ChromaticInstance, u: int, cluster_mask: int, color: int) -> int:
    """Edges from u to the rest of the cluster that fight the color.

    Counts v in the cluster (v != u) with a negative edge or a positive
    edge of a different color.
    """
    others = cluster_mask & ~(1 << u)
    friendly = bin(inst.plus_adjacency[color][u] & others).count("1")
    return bin(others).count("1") - friendly


def plus_outside(inst: ChromaticInstance, u: int, cluster_mask: int) -> int:
    """Positive edges from u leaving the cluster."""
    return bin(inst.plus_any[u] & ~cluster_mask).count("1")


def build_preclusters(
    inst: ChromaticInstance, init: Clustering, params: PreclusterParams
) -> tuple[tuple[frozenset[int], ...], dict[int, int]]:
    """Two-pass marking; returns (preclusters, precolor by index)."""
    if not is_valid(inst, init):
        raise ContractError("init is not a valid solution for this instance")
    marked: set[int] = set()
    for part, color in zip(init.parts, init.part_color):
        mask = _mask_of(part)
        threshold = params.alpha * (len(part) - 1)
        for u in sorted(part):
            if hostile_inside(inst, u, mask, color) >= threshold:
                marked.add(u)
            elif plus_outside(inst, u, mask) >= threshold:
                marked.add(u)
    for part in init.parts:
        hit = sum(1 for u in part if u in marked)
        if hit >= params.beta * (len(part) - 1):
            marked |= set(part)
    preclusters: list[frozenset[int]] = []
    colors: list[int | None] = []
    for part, color in zip(init.parts, init.part_color):
        rest = part - marked
        if rest:
            preclusters.append(frozenset(rest))
            colors.append(color if len(rest) >= 2 else None)
        for u in sorted(part & marked):
            preclusters.append(frozenset({u}))
            colors.append(None)
    order = sorted(range(len(preclusters)), key=lambda i: min(preclusters[i]))
    ordered = tuple(preclusters[i] for i in order)
    precolor = {
        new: colors[old] for new, old in enumerate(order) if colors[old] is not None
    }
    return ordered, precolor


def preclustering_as_solution(
    preclusters: Sequence[frozenset[int]], precolor: dict[int, int]
) -> Clustering:
    """K read as a clustering; uncolored singletons take color 0."""
    return Clustering(
        parts=tuple(preclusters),
        part_color=tuple(precolor.get(i, 0) for i in range(len(preclusters))),
    )


def degree_d(inst: ChromaticInstance, cluster: Iterable[int]) -> Fraction:
    """Size-normalized positive degree: w+(K, V-K)/|K| + |K|/2."""
    verts = set(cluster)
    if not verts:
        raise ContractError("degree_d needs a nonempty precluster")
    outside = set(range(inst.n)) - verts
    return Fraction(w_plus(inst, verts, outside), len(verts)) + Fraction(len(verts), 2)


def n1(
    d_values: Sequence[Fraction], index: int, epsilon: Fraction
) -> tuple[int, ...]:
    """Indices with comparable degree: eps*d(K') < d(K) < d(K')/eps."""
    d_k = d_values[index]
    return tuple(
        j
        for j, d_other in enumerate(d_values)
        if epsilon * d_other < d_k < d_other / epsilon
    )


def w_similarity(
    inst: ChromaticInstance,
    k_first: frozenset[int],
    k_second: frozenset[int],
    scope: Iterable[frozenset[int]],
) -> Fraction:
    """Common positive-neighborhood weight of two preclusters over a scope."""
    if k_first == k_second:
        raise ContractError("w_similarity needs two distinct preclusters")
    total = ZERO
    for other in scope:
        if other == k_first or other == k_second:
            continue
        total += (
            len(other)
            * Fraction(w_plus(inst, k_first, other), len(k_first) * len(other))
            * Fraction(w_plus(inst, k_second, other), len(k_second) * len(other))
        )
    total += Fraction(w_plus(inst, k_first, k_second), len(k_first))
    total += Fraction(w_plus(inst, k_second, k_first), len(k_second))
    return total


@dataclass(frozen=True)
class AdmissibilityReport:
    """d, N1/N2, W values, the ~ pairs, E_adm, and per-K bound slack."""

    epsilon: Fraction
    d: tuple[Fraction, ...]
    n1_lists: tuple[tuple[int, ...], ...]
    n2_lists: tuple[tuple[int, ...], ...]
    w_values: dict[tuple[int, int], Fraction]
    similar_pairs: frozenset[tuple[int, int]]
    admissible: frozenset[tuple[int, int]]
    bound_slack: tuple[Fraction, ...]

    @property
    def all_slack_nonnegative(self) -> bool:
        return all(s >= ZERO for s in self.bound_slack)


def build_admissible(
    inst: ChromaticInstance,
    preclusters: Sequence[frozenset[int]],
    params: PreclusterParams,
) -> AdmissibilityReport:
    """Evaluate the ~ relation over all precluster pairs."""
    eps = params.epsilon
    k = len(preclusters)
    d_values = tuple(degree_d(inst, part) for part in preclusters)
    n1_lists = tuple(n1(d_values, i, eps) for i in range(k))
    n1_sets = [set(lst) for lst in n1_lists]
    n2_lists = tuple(
        tuple(j for j in n1_lists[i] if j != i and i in n1_sets[j])
        for i in range(k)
    )
    w_values: dict[tuple[int, int], Fraction] = {}
    similar: set[tuple[int, int]] = set()
    for i in range(k):
        for j in n2_lists[i]:
            if j < i:
                continue
            shared = n1_sets[i] & n1_sets[j]
            scope = [preclusters[s] for s in sorted(shared)]
            w = w_similarity(inst, preclusters[i], preclusters[j], scope)
            w_values[(i, j)] = w
            if w > eps * (d_values[i] + d_values[j]):
                similar.add((i, j))
    admissible: set[tuple[int, int]] = set()
    for i, j in similar:
        for u in preclusters[i]:
            for v in preclusters[j]:
                admissible.add((min(u, v), max(u, v)))
    neighbors_size = [
        sum(len(preclusters[j]) for j in range(k) if (min(i, j), max(i, j)) in similar)
        for i in range(k)
    ]
    factor = 2 / (eps * eps) + 2 / eps
    bound_slack = tuple(
        factor * w_plus(inst, preclusters[i], set(range(inst.n)) - preclusters[i])
        - len(preclusters[i]) * neighbors_size[i]
        for i in range(k)
    )
    return AdmissibilityReport(
        epsilon=eps,
        d=d_values,
        n1_lists=n1_lists,
        n2_lists=n2_lists,
        w_values=w_values,
        similar_pairs=frozenset(similar),
        admissible=frozenset(admissible),
        bound_slack=bound_slack,
    )


def precluster_instance(
    inst: ChromaticInstance, init: Clustering, params: PreclusterParams
) -> tuple[PreclusteredInstance, AdmissibilityReport]:
    """Marking pass plus admissibility, bundled into one immutable result."""
    preclusters, precolor = build_preclusters(inst, init, params)
    report = build_admissible(inst, preclusters, params)
    pre = PreclusteredInstance(
        preclusters=preclusters, precolor=precolor, admissible=report.admissible
    )
    pre.validate(inst)
    return pre, report


@dataclass(frozen=True)
class PreclusterBoundReport:
    """Guarantee checks on one (K, chi_pre): strict eta-cleanliness."""

    eta: Fraction
    passed: bool
    witnesses: tuple[tuple[int, int, str], ...]  # (precluster, vertex, which)


def verify_precluster_bounds(
    inst: ChromaticInstance,
    preclusters: Sequence[frozenset[int]],
    precolor: dict[int, int],
    params: PreclusterParams,
) -> PreclusterBoundReport:
    """Check both strict bounds for every member of a colored precluster."""
    eta = params.eta
    witnesses: list[tuple[int, int, str]] = []
    for i, part in enumerate(preclusters):
        if len(part) < 2:
            continue
        if i not in precolor:
            raise ContractError(f"non-singleton precluster {i} has no color")
        color = precolor[i]
        mask = _mask_of(part)
        limit = eta * (len(part) - 1)
        for u in sorted(part):
            if not hostile_inside(inst, u, mask, color) < limit:
                witnesses.append((i, u, "hostile-inside"))
            if not plus_outside(inst, u, mask) < limit:
                witnesses.append((i, u, "plus-outside"))
    return PreclusterBoundReport(
        eta=eta, passed=not witnesses, witnesses=tuple(witnesses)
    )


def constant_blowup_bound(params: PreclusterParams) -> Fraction:
    """Cost inflation cap for the marking pass: 1 + 2/(alpha beta)."""
    return ONE + Fraction(2) / (params.alpha * params.beta)


def near_optimal_split(
    inst: ChromaticInstance,
    sol: Clustering,
    preclusters: Sequence[frozenset[int]],
    epsilon: Fraction,
) -> Clustering:
    """Split clusters along precluster boundaries while it is cheap.

    A precluster K inside cluster C leaves (taking its color along)
    whenever w+(K, C-K) - w-(K, C-K) <= 2 eps (w+(K, V-K) + w-(K, K)).
    Scan order is pinned: clusters by minimum vertex, preclusters inside
    by minimum vertex, first eligible split applies and the scan
    restarts.  Terminates because each split adds a cluster.
    """
    epsilon = Fraction(epsilon)
    if not is_valid(inst, sol):
        raise ContractError("sol is not a valid solution for this instance")
    owner: dict[int, int] = {}
    member = sol.membership(inst.n)
    for idx, part in enumerate(preclusters):
        owners = {member[v] for v in part}
        if len(owners) != 1:
            raise ContractError(f"precluster {sorted(part)} straddles clusters of sol")
        owner[idx] = owners.pop()
    groups: dict[int, list[int]] = {}
    for idx, cl in owner.items():
        groups.setdefault(cl, []).append(idx)
    clusters: list[tuple[list[int], int]] = [
        (sorted(idxs, key=lambda i: min(preclusters[i])), sol.part_color[cl])
        for cl, idxs in sorted(groups.items())
    ]
    everything = set(range(inst.n))
    while True:
        clusters.sort(key=lambda entry: min(min(preclusters[i]) for i in entry[0]))
        split_at = None
        for ci, (idxs, _) in enumerate(clusters):
            if len(idxs) < 2:
                continue
            cluster_verts = set().union(*(preclusters[i] for i in idxs))
            for pos, ki in enumerate(idxs):
                k_verts = preclusters[ki]
                rest = cluster_verts - k_verts
                lhs = w_plus(inst, k_verts, rest) - w_minus(inst, k_verts, rest)
                rhs = 2 * epsilon * (
                    w_plus(inst, k_verts, everything - k_verts)
                    + w_minus(inst, k_verts, k_verts)
                )
                if lhs <= rhs:
                    split_at = (ci, pos)
                    break
            if split_at:
                break
        if split_at is None:
            break
        ci, pos = split_at
        idxs, color = clusters[ci]
        ki = idxs.pop(pos)
        clusters[ci] = (idxs, color)
        clusters.append(([ki], color))
    parts = tuple(
        frozenset().union(*(preclusters[i] for i in idxs)) for idxs, _ in clusters
    )
    colors = tuple(color for _, color in clusters)
    return Clustering(parts=parts, part_color=colors)
