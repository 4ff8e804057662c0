"""Exact-rational simplex for LPs in standard equality form.

Minimize c.x subject to A x = b, x >= 0, with every number a
fractions.Fraction.  Two phases with a crash basis (unit columns are
reused before artificials are invented), Bland's anti-cycling rule in
both phases: entering variable is the lowest-index column with negative
reduced cost, the leaving row breaks ratio ties by lowest basic column
index.  Dense tableau; fine for the small, dense systems this package
produces.

Every terminal status is certified from the pre-tableau data before it
is returned: optimal solutions against primal feasibility plus an
exactly recomputed dual, infeasibility against a Farkas vector,
unboundedness against an improving ray.  A certificate failure raises
DiagnosticError because it means the pivoting logic itself is wrong.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ContractError, DiagnosticError, StructuralError

ZERO = Fraction(0)
ONE = Fraction(1)


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class StandardFormLP:
    """min objective . x  s.t.  matrix @ x = rhs, x >= 0."""

    objective: tuple[Fraction, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        obj = tuple(Fraction(v) for v in self.objective)
        mat = tuple(tuple(Fraction(v) for v in row) for row in self.matrix)
        rhs = tuple(Fraction(v) for v in self.rhs)
        if len(mat) != len(rhs):
            raise StructuralError("matrix and rhs row counts differ")
        for row in mat:
            if len(row) != len(obj):
                raise StructuralError("matrix row length differs from objective")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n_rows(self) -> int:
        return len(self.matrix)

    @property
    def n_cols(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    x: tuple[Fraction, ...] | None
    value: Fraction | None
    basis: tuple[int, ...] | None
    pivots: int


def _pivot(rows: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    prow = rows[r]
    piv = prow[c]
    if piv != ONE:
        inv = ONE / piv
        rows[r] = prow = [v * inv for v in prow]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
    basis[r] = c


def _bland_step(
    rows: list[list[Fraction]],
    obj: list[Fraction],
    basis: list[int],
    width: int,
) -> str:
    """One simplex step; returns 'optimal', 'unbounded' or 'pivoted'."""
    enter = -1
    for j in range(width):
        if obj[j] < ZERO:
            enter = j
            break
    if enter < 0:
        return "optimal"
    leave = -1
    best = None
    for i, row in enumerate(rows):
        a = row[enter]
        if a > ZERO:
            ratio = row[-1] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                best, leave = ratio, i
    if leave < 0:
        return "unbounded"
    _pivot(rows, basis, leave, enter)
    f = obj[enter]
    if f:
        prow = rows[leave]
        for j, b in enumerate(prow):
            if b:
                obj[j] -= f * b
    return "pivoted"


def _reduced_costs(
    costs: Sequence[Fraction], rows: list[list[Fraction]], basis: list[int], width: int
) -> list[Fraction]:
    """Canonical objective row [r_0 .. r_{width-1}, -value] for given costs."""
    obj = list(costs[:width]) + [ZERO]
    for i, bcol in enumerate(basis):
        cb = costs[bcol]
        if cb:
            for j, a in enumerate(rows[i]):
                if a:
                    obj[j] -= cb * a
    return obj


def _solve_square(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination with exact pivots; None if singular."""
    m = len(mat)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != ZERO), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b if b else a for a, b in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


Entry = Callable[[int, int], Fraction]


def _dual_vector(
    costs: Sequence[Fraction], basis: list[int], m: int, entry: Entry
) -> list[Fraction]:
    """Solve y . B = c_B exactly for the current basis matrix."""
    bt = [[entry(i, basis[j]) for i in range(m)] for j in range(m)]
    y = _solve_square(bt, [costs[basis[j]] for j in range(m)])
    if y is None:
        raise DiagnosticError("basis matrix is singular at a terminal state")
    return y


def _certify_optimal(lp: StandardFormLP, x, value, y, keep, work_matrix, work_rhs) -> None:
    if any(v < ZERO for v in x):
        raise DiagnosticError("negative entry in claimed optimal solution")
    for row, b in zip(lp.matrix, lp.rhs):
        if sum(a * xv for a, xv in zip(row, x) if xv) != b:
            raise DiagnosticError("claimed optimal solution violates a constraint")
    if sum(c * xv for c, xv in zip(lp.objective, x) if xv) != value:
        raise DiagnosticError("objective value mismatch")
    m = len(keep)
    for j in range(lp.n_cols):
        if lp.objective[j] - sum(y[i] * work_matrix[keep[i]][j] for i in range(m)) < ZERO:
            raise DiagnosticError("negative reduced cost at claimed optimum")
    if sum(y[i] * work_rhs[keep[i]] for i in range(m)) != value:
        raise DiagnosticError("dual value does not match primal value")


def _certify_infeasible(lp: StandardFormLP, y, work_matrix, work_rhs) -> None:
    m = len(work_rhs)
    for j in range(lp.n_cols):
        if sum(y[i] * work_matrix[i][j] for i in range(m)) > ZERO:
            raise DiagnosticError("Farkas vector fails y.A <= 0")
    if sum(y[i] * work_rhs[i] for i in range(m)) <= ZERO:
        raise DiagnosticError("Farkas vector fails y.b > 0")


def _certify_unbounded(lp: StandardFormLP, rows, basis, keep, enter, work_matrix) -> None:
    n = lp.n_cols
    ray = [ZERO] * n
    ray[enter] = ONE
    for i, bcol in enumerate(basis):
        ray[bcol] = -rows[i][enter]
    if any(v < ZERO for v in ray):
        raise DiagnosticError("improving ray has a negative component")
    for i in range(len(keep)):
        if sum(work_matrix[keep[i]][j] * ray[j] for j in range(n) if ray[j]) != ZERO:
            raise DiagnosticError("improving ray leaves the null space")
    if sum(lp.objective[j] * ray[j] for j in range(n) if ray[j]) >= ZERO:
        raise DiagnosticError("improving ray does not improve the objective")


def solve_lp(lp: StandardFormLP, max_pivots: int | None = None) -> LPSolution:
    """Two-phase simplex with exact arithmetic and certified statuses."""
    m, n = lp.n_rows, lp.n_cols
    if max_pivots is None:
        max_pivots = 10 * (m + n + 1) ** 2
    if max_pivots <= 0:
        raise ContractError("max_pivots must be positive")

    # sign-normalize so every right-hand side is nonnegative
    work_matrix: list[tuple[Fraction, ...]] = []
    work_rhs: list[Fraction] = []
    for row, b in zip(lp.matrix, lp.rhs):
        if b < ZERO:
            work_matrix.append(tuple(-v for v in row))
            work_rhs.append(-b)
        else:
            work_matrix.append(tuple(row))
            work_rhs.append(b)

    # crash basis: reuse exact unit columns, invent artificials for the rest
    owner_row: dict[int, int] = {}
    for j in range(n):
        nz = [i for i in range(m) if work_matrix[i][j] != ZERO]
        if len(nz) == 1 and work_matrix[nz[0]][j] == ONE and nz[0] not in owner_row:
            owner_row[nz[0]] = j
    artificial_rows = [i for i in range(m) if i not in owner_row]
    n_art = len(artificial_rows)
    art_row_of = {n + k: i for k, i in enumerate(artificial_rows)}
    width = n + n_art

    def entry(i: int, j: int) -> Fraction:
        # basis-matrix accessor valid while no rows have been dropped
        if j < n:
            return work_matrix[i][j]
        return ONE if art_row_of[j] == i else ZERO

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    for i in range(m):
        row = list(work_matrix[i]) + [ZERO] * n_art + [work_rhs[i]]
        if i in owner_row:
            basis.append(owner_row[i])
        else:
            col = n + artificial_rows.index(i)
            row[col] = ONE
            basis.append(col)
        rows.append(row)
    keep = list(range(m))
    pivots = 0

    if n_art:
        phase1_costs = [ZERO] * n + [ONE] * n_art
        obj = _reduced_costs(phase1_costs, rows, basis, width)
        while True:
            if pivots >= max_pivots:
                raise DiagnosticError(f"phase 1 exceeded {max_pivots} pivots")
            step = _bland_step(rows, obj, basis, width)
            if step == "optimal":
                break
            if step == "unbounded":
                raise DiagnosticError("phase 1 objective is bounded below by zero")
            pivots += 1
        if -obj[-1] > ZERO:
            y = _dual_vector(phase1_costs, basis, m, entry)
            _certify_infeasible(lp, y, work_matrix, work_rhs)
            return LPSolution(LPStatus.INFEASIBLE, None, None, None, pivots)
        # drive leftover artificials out of the (degenerate) basis
        for i in reversed(range(len(basis))):
            if basis[i] < n:
                continue
            enter = next((j for j in range(n) if rows[i][j] != ZERO), None)
            if enter is None:
                del rows[i]
                del basis[i]
                del keep[i]  # row was redundant
            else:
                _pivot(rows, basis, i, enter)
                pivots += 1
        rows = [row[:n] + [row[-1]] for row in rows]
        width = n

    obj = _reduced_costs(lp.objective, rows, basis, width)
    while True:
        if pivots >= max_pivots:
            raise DiagnosticError(f"phase 2 exceeded {max_pivots} pivots")
        enter_probe = next((j for j in range(width) if obj[j] < ZERO), -1)
        step = _bland_step(rows, obj, basis, width)
        if step == "optimal":
            break
        if step == "unbounded":
            _certify_unbounded(lp, rows, basis, keep, enter_probe, work_matrix)
            return LPSolution(LPStatus.UNBOUNDED, None, None, None, pivots)
        pivots += 1

    x = [ZERO] * n
    for i, bcol in enumerate(basis):
        x[bcol] = rows[i][-1]
    value = -obj[-1]
    y = _dual_vector(
        lp.objective,
        basis,
        len(keep),
        lambda i, j: work_matrix[keep[i]][j],
    )
    _certify_optimal(lp, x, value, y, keep, work_matrix, work_rhs)
    return LPSolution(LPStatus.OPTIMAL, tuple(x), value, tuple(basis), pivots)
