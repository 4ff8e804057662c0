"""Randomized rounding of fractional cluster solutions.

The chain: while vertices remain, draw a column (color ell, set S) with
probability proportional to its weight, and if S meets the remaining
vertices, emit the intersection as a cluster colored ell and remove it.
Draws that miss entirely are no-ops but still count against the
iteration cap, which is C * support * ln(n) with a generous constant;
hitting it is astronomically unlikely and treated as an internal error.

For a feasible z two exact per-pair laws govern the chain and are what
the Monte Carlo estimates are tested against:

    P[u, v end up in one cluster]          = (1 - x) / (1 + x)
    P[NOT (together in an ell-colored cluster)]
                                           = (x + x_ell) / (1 + x)

with x = x(u, v) and x_ell = x_ell(ell, u, v) from the marginals.  The
expected clustering cost is at most twice the LP objective of z.

Heavy lifting happens in the kernels module; this file prepares the
sampling table (exact weights rounded once to float64 cumulative form)
and wraps results.  Given equal seeds, both kernel backends return the
same clusterings bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .cluster_lp import FractionalClusterSolution, Marginals
from .errors import ContractError, DiagnosticError
from .model import ChromaticInstance, Clustering, pair_index

CAP_FACTOR = 40


def iteration_cap(support_size: int, n: int, factor: int = CAP_FACTOR) -> int:
    """Draw budget per trial; generous against the whp termination bound."""
    return max(1, math.ceil(factor * support_size * math.log(max(n, 2))))


def chain_not_separated_probability(marg: Marginals, u: int, v: int) -> Fraction:
    """Exact law for u, v landing in the same output cluster."""
    x = marg.x(u, v)
    return (1 - x) / (1 + x)


def chain_not_together_colored_probability(
    marg: Marginals, color: int, u: int, v: int
) -> Fraction:
    """Exact law for u, v NOT sharing an output cluster colored `color`."""
    x = marg.x(u, v)
    return (x + marg.x_ell(color, u, v)) / (1 + x)


def _sampling_table(z: FractionalClusterSolution):
    """Deterministic column order plus float64 cumulative weights."""
    support = z.support()
    masks = np.array([mask for _, mask in support], np.uint64)
    colors = np.array([color for color, _ in support], np.int8)
    total = sum(z.entries[key] for key in support)
    acc = Fraction(0)
    cumw = np.empty(len(support), np.float64)
    for i, key in enumerate(support):
        acc += z.entries[key]
        cumw[i] = float(acc / total)
    cumw[-1] = 1.0  # guard against downward rounding at the top
    return masks, colors, cumw


def _prepare(inst: ChromaticInstance, z: FractionalClusterSolution, cap: int | None):
    if (z.n, z.n_colors) != (inst.n, inst.n_colors):
        raise ContractError("solution shape does not match the instance")
    z.require_feasible()
    masks, colors, cumw = _sampling_table(z)
    if cap is None:
        cap = iteration_cap(len(masks), inst.n)
    elif cap < 1:
        raise ContractError("iteration cap must be at least 1")
    return masks, colors, cumw, cap


def round_once(
    inst: ChromaticInstance,
    z: FractionalClusterSolution,
    seed: int,
    trial_index: int = 0,
    cap: int | None = None,
    backend: str | None = None,
) -> Clustering:
    """One clustering from the chain; trial_index selects the RNG stream.

    round_once(inst, z, seed, t) returns exactly the clustering that
    trial t of estimate(inst, z, trials, seed) produced.
    """
    masks, colors, cumw, cap = _prepare(inst, z, cap)
    membership, cluster_colors, n_clusters, iters, failed = kernels.round_single(
        inst.labels, inst.n, inst.n_colors, masks, colors, cumw, seed, trial_index, cap,
        backend=backend,
    )
    if failed:
        raise DiagnosticError(f"rounding trial hit the {cap}-draw cap")
    return Clustering.from_membership(
        membership.tolist(), cluster_colors[:n_clusters].tolist()
    )


@dataclass(frozen=True)
class RoundingStats:
    """Aggregates over Monte Carlo trials of the chain."""

    n: int
    trials: int
    mean_cost: Fraction
    stderr: float
    not_separated_freq: np.ndarray  # [pair] fraction of trials together
    not_together_colored_freq: np.ndarray  # [color][pair]
    iteration_histogram: np.ndarray  # draws used per trial
    max_iterations: int
    cap: int

    def freq_not_separated(self, u: int, v: int) -> float:
        return float(self.not_separated_freq[pair_index(self.n, u, v)])

    def freq_not_together_colored(self, color: int, u: int, v: int) -> float:
        return float(self.not_together_colored_freq[color][pair_index(self.n, u, v)])


def estimate(
    inst: ChromaticInstance,
    z: FractionalClusterSolution,
    trials: int,
    seed: int,
    cap: int | None = None,
    backend: str | None = None,
) -> RoundingStats:
    """Run the chain `trials` times and aggregate costs and pair events."""
    if trials < 1:
        raise ContractError("need at least one trial")
    masks, colors, cumw, cap = _prepare(inst, z, cap)
    (
        total_cost,
        total_sq,
        not_separated,
        together_colored,
        iter_hist,
        max_iters,
        n_failed,
    ) = kernels.rounding_trials(
        inst.labels, inst.n, inst.n_colors, masks, colors, cumw, seed, trials, cap,
        backend=backend,
    )
    if n_failed:
        raise DiagnosticError(
            f"{n_failed} of {trials} rounding trials hit the {cap}-draw cap"
        )
    mean = Fraction(total_cost, trials)
    if trials > 1:
        var = (total_sq - trials * float(mean) ** 2) / (trials - 1)
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = 0.0
    return RoundingStats(
        n=inst.n,
        trials=trials,
        mean_cost=mean,
        stderr=stderr,
        not_separated_freq=not_separated / trials,
        not_together_colored_freq=1.0 - together_colored / trials,
        iteration_histogram=iter_hist,
        max_iterations=max_iters,
        cap=cap,
    )
