"""LP relaxation over colored cluster columns.

One LP variable per pair (color ell, nonempty vertex subset S).  Its
objective coefficient charges half the positive edges leaving S plus
the pairs inside S that are negative or positively colored other than
ell; the constraints say the columns covering each vertex carry total
weight one.  Any colored partition embeds as a 0/1 point, so the LP
value lower-bounds the best clustering cost.

Fractional solutions are kept as sparse {(color, subset bitmask):
weight} maps with exact Fraction weights.  From such a z the rounding
analysis needs three marginal families, all computed here exactly:

    t[ell][v]       uncovered mass at v for color ell,
    x[ell][(u,v)]   mass NOT putting u,v together in an ell-colored set,
    x[(u,v)]        mass not putting u,v together at all.

The column count is palette * (2^n - 1), so building the full LP is
gated by an explicit cap; everything else here works on sparse
solutions and stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapacityError, DiagnosticError, StructuralError
from .model import (
    ChromaticInstance,
    Clustering,
    delta_plus_count,
    iter_pairs,
    minus_ell_inside_count,
    pair_count,
    pair_index,
)
from .simplex import LPStatus, StandardFormLP, solve_lp

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_COLUMN_CAP = 1 << 20


@dataclass(frozen=True)
class FractionalClusterSolution:
    """Sparse nonnegative weighting of (color, subset) columns."""

    n: int
    n_colors: int
    entries: dict[tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        cleaned = {}
        for (color, mask), w in self.entries.items():
            w = Fraction(w)
            if w < ZERO:
                raise StructuralError("negative column weight")
            if w == ZERO:
                continue
            if not 0 <= color < self.n_colors:
                raise StructuralError(f"color {color} outside palette")
            if mask <= 0 or mask >= 1 << self.n:
                raise StructuralError(f"subset mask {mask:#x} out of range")
            cleaned[(int(color), int(mask))] = w
        object.__setattr__(self, "entries", cleaned)

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.entries)

    def coverage(self, v: int) -> Fraction:
        bit = 1 << v
        return sum((w for (_, mask), w in self.entries.items() if mask & bit), ZERO)

    def is_feasible(self) -> bool:
        return all(self.coverage(v) == ONE for v in range(self.n))

    def require_feasible(self) -> None:
        for v in range(self.n):
            if self.coverage(v) != ONE:
                raise StructuralError(f"column weights covering vertex {v} do not sum to 1")


def column_objective(inst: ChromaticInstance, color: int, mask: int) -> Fraction:
    """LP cost of one (color, subset) column."""
    return Fraction(delta_plus_count(inst, mask), 2) + minus_ell_inside_count(inst, mask, color)


def build_lp(
    inst: ChromaticInstance, column_cap: int = DEFAULT_COLUMN_CAP
) -> tuple[StandardFormLP, tuple[tuple[int, int], ...]]:
    """Full column enumeration; legend[j] names column j as (color, mask)."""
    n, n_colors = inst.n, inst.n_colors
    n_cols = n_colors * ((1 << n) - 1)
    if n_cols > column_cap:
        raise CapacityError(
            f"cluster LP needs {n_cols} columns, above the cap of {column_cap}"
        )
    legend = tuple(
        (color, mask) for color in range(n_colors) for mask in range(1, 1 << n)
    )
    objective = tuple(column_objective(inst, color, mask) for color, mask in legend)
    matrix = tuple(
        tuple(ONE if mask >> v & 1 else ZERO for _, mask in legend) for v in range(n)
    )
    rhs = tuple(ONE for _ in range(n))
    return StandardFormLP(objective=objective, matrix=matrix, rhs=rhs), legend


@dataclass(frozen=True)
class ClusterLPResult:
    solution: FractionalClusterSolution
    value: Fraction
    n_columns: int
    pivots: int


def solve_cluster_lp(
    inst: ChromaticInstance, column_cap: int = DEFAULT_COLUMN_CAP
) -> ClusterLPResult:
    """Solve the relaxation to optimality; never infeasible or unbounded."""
    lp, legend = build_lp(inst, column_cap)
    sol = solve_lp(lp)
    if sol.status is not LPStatus.OPTIMAL:
        raise DiagnosticError(
            f"cluster LP reported {sol.status.value}; singleton columns make it solvable"
        )
    entries = {
        legend[j]: w for j, w in enumerate(sol.x) if w != ZERO
    }
    z = FractionalClusterSolution(n=inst.n, n_colors=inst.n_colors, entries=entries)
    if len(z.entries) > inst.n:
        raise DiagnosticError(
            f"basic solution has support {len(z.entries)} on {inst.n} constraint rows"
        )
    z.require_feasible()
    return ClusterLPResult(
        solution=z, value=sol.value, n_columns=len(legend), pivots=sol.pivots
    )


def lp_objective_value(inst: ChromaticInstance, z: FractionalClusterSolution) -> Fraction:
    """c . z over the sparse support, without enumerating all columns."""
    return sum(
        (column_objective(inst, color, mask) * w for (color, mask), w in z.entries.items()),
        ZERO,
    )


@dataclass(frozen=True)
class Marginals:
    """Exact per-vertex and per-pair masses derived from one z."""

    n: int
    n_colors: int
    t: tuple[tuple[Fraction, ...], ...]  # [color][vertex]
    x_colored: tuple[tuple[Fraction, ...], ...]  # [color][pair]
    x_plain: tuple[Fraction, ...]  # [pair]

    def x(self, u: int, v: int) -> Fraction:
        return self.x_plain[pair_index(self.n, u, v)]

    def x_ell(self, color: int, u: int, v: int) -> Fraction:
        return self.x_colored[color][pair_index(self.n, u, v)]

    def t_val(self, color: int, v: int) -> Fraction:
        return self.t[color][v]


def marginals(inst: ChromaticInstance, z: FractionalClusterSolution) -> Marginals:
    """Compute (t, x^ell, x) for a feasible z; everything exact."""
    if (z.n, z.n_colors) != (inst.n, inst.n_colors):
        raise StructuralError("solution shape does not match the instance")
    z.require_feasible()
    n, n_colors = inst.n, inst.n_colors
    np_ = pair_count(n)
    cover_v = [[ZERO] * n for _ in range(n_colors)]
    cover_p = [[ZERO] * np_ for _ in range(n_colors)]
    for (color, mask), w in z.entries.items():
        verts = [v for v in range(n) if mask >> v & 1]
        for v in verts:
            cover_v[color][v] += w
        for i, u in enumerate(verts):
            for v in verts[i + 1 :]:
                cover_p[color][pair_index(n, u, v)] += w
    t = tuple(tuple(ONE - cover_v[c][v] for v in range(n)) for c in range(n_colors))
    x_colored = tuple(tuple(ONE - cover_p[c][p] for p in range(np_)) for c in range(n_colors))
    x_plain = tuple(
        ONE - sum((cover_p[c][p] for c in range(n_colors)), ZERO) for p in range(np_)
    )
    return Marginals(n=n, n_colors=n_colors, t=t, x_colored=x_colored, x_plain=x_plain)


def obj_x(inst: ChromaticInstance, marg: Marginals) -> Fraction:
    """Objective rewritten over marginals; equals c . z for feasible z."""
    total = ZERO
    for (u, v), lab in zip(iter_pairs(inst.n), inst.labels):
        p = pair_index(inst.n, u, v)
        if lab >= 0:
            total += marg.x_colored[lab][p]
        else:
            for c in range(inst.n_colors):
                total += ONE - marg.x_colored[c][p]
    return total


def separation_mass(
    z: FractionalClusterSolution, color: int, u: int, v: int
) -> Fraction:
    """Weight of ell-colored columns containing u but not v."""
    return sum(
        (
            w
            for (c, mask), w in z.entries.items()
            if c == color and mask >> u & 1 and not mask >> v & 1
        ),
        ZERO,
    )


def embed_clustering(inst: ChromaticInstance, sol: Clustering) -> FractionalClusterSolution:
    """The 0/1 column weighting equivalent to a concrete clustering."""
    entries: dict[tuple[int, int], Fraction] = {}
    for part, color in zip(sol.parts, sol.part_color):
        mask = 0
        for v in part:
            mask |= 1 << v
        entries[(color, mask)] = entries.get((color, mask), ZERO) + ONE
    return FractionalClusterSolution(n=inst.n, n_colors=inst.n_colors, entries=entries)


def mix_solutions(
    solutions: Sequence[FractionalClusterSolution], weights: Iterable[Fraction]
) -> FractionalClusterSolution:
    """Convex combination; feasibility is preserved from the parts."""
    weights = [Fraction(w) for w in weights]
    if len(weights) != len(solutions) or not solutions:
        raise StructuralError("need one weight per solution")
    if any(w < ZERO for w in weights) or sum(weights) != ONE:
        raise StructuralError("weights must be nonnegative and sum to 1")
    n, n_colors = solutions[0].n, solutions[0].n_colors
    entries: dict[tuple[int, int], Fraction] = {}
    for z, w in zip(solutions, weights):
        if (z.n, z.n_colors) != (n, n_colors):
            raise StructuralError("mixing solutions of different shapes")
        for key, val in z.entries.items():
            entries[key] = entries.get(key, ZERO) + w * val
    return FractionalClusterSolution(n=n, n_colors=n_colors, entries=entries)
