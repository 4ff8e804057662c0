"""Experiment orchestration: one instance through every stage.

The record it produces is the unit of experiment output.  Stage results
are optional because each stage can be disabled or can refuse oversized
input; a refusal is recorded, never silently swallowed.  The ordering
invariants (relaxation below optimum, optimum below every heuristic)
are asserted on every run, so a record that exists is internally
consistent.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .baselines import chromatic_pivot, singletons
from .cluster_lp import DEFAULT_COLUMN_CAP, solve_cluster_lp
from .errors import CapacityError, DiagnosticError
from .exact import DEFAULT_VERTEX_LIMIT, solve_exact
from .model import ChromaticInstance, count_disagreements
from .preclustering import PreclusterParams, default_params, precluster_instance
from .rounding import estimate


@dataclass(frozen=True)
class PipelineConfig:
    run_exact: bool = True
    exact_limit: int = DEFAULT_VERTEX_LIMIT
    run_lp: bool = True
    lp_column_cap: int = DEFAULT_COLUMN_CAP
    run_rounding: bool = True
    rounding_trials: int = 2000
    rounding_seed: int = 7
    run_baselines: bool = True
    baseline_seed: int = 11
    run_preclustering: bool = True
    precluster_params: PreclusterParams = field(default_factory=default_params)
    backend: str | None = None


@dataclass(frozen=True)
class ExperimentRecord:
    """Per-instance results; None marks a stage that did not run."""

    instance_id: str
    seed: int
    n: int
    n_colors: int
    opt_cost: int | None
    lp_value: Fraction | None
    rounding_mean: Fraction | None
    rounding_stderr: float | None
    rounding_trials: int | None
    pivot_cost: int | None
    singletons_cost: int | None
    precluster_nontrivial: int | None
    admissible_count: int | None
    bound_slacks: tuple[Fraction, ...] | None
    wall_times: dict[str, float]
    skipped: tuple[str, ...]

    def check_invariants(self) -> None:
        if self.lp_value is not None and self.opt_cost is not None:
            if not self.lp_value <= self.opt_cost:
                raise DiagnosticError(
                    f"relaxation value {self.lp_value} exceeds optimum {self.opt_cost}"
                )
        if self.opt_cost is not None:
            for name, cost in (
                ("pivot", self.pivot_cost),
                ("singletons", self.singletons_cost),
            ):
                if cost is not None and cost < self.opt_cost:
                    raise DiagnosticError(
                        f"{name} cost {cost} beats the optimum {self.opt_cost}"
                    )
            if self.rounding_mean is not None and self.rounding_mean < self.opt_cost:
                raise DiagnosticError(
                    f"rounding mean {self.rounding_mean} beats the optimum"
                )


def run_pipeline(
    inst: ChromaticInstance,
    config: PipelineConfig | None = None,
    instance_id: str = "instance",
    seed: int = 0,
) -> ExperimentRecord:
    config = config or PipelineConfig()
    skipped: list[str] = []
    times: dict[str, float] = {}

    def staged(name: str, enabled: bool, thunk):
        if not enabled:
            return None
        start = time.perf_counter()
        try:
            result = thunk()
        except CapacityError:
            skipped.append(name)
            return None
        finally:
            times[name] = time.perf_counter() - start
        return result

    report = staged("exact", config.run_exact, lambda: solve_exact(inst, config.exact_limit))
    lp = staged("lp", config.run_lp, lambda: solve_cluster_lp(inst, config.lp_column_cap))
    stats = None
    if lp is not None:
        stats = staged(
            "rounding",
            config.run_rounding,
            lambda: estimate(
                inst,
                lp.solution,
                trials=config.rounding_trials,
                seed=config.rounding_seed,
                backend=config.backend,
            ),
        )
    elif config.run_rounding:
        skipped.append("rounding")

    pivot_cost = singles_cost = None
    if config.run_baselines:
        start = time.perf_counter()
        pivot_cost = count_disagreements(inst, chromatic_pivot(inst, config.baseline_seed))
        singles_cost = count_disagreements(inst, singletons(inst))
        times["baselines"] = time.perf_counter() - start

    pre_stats = staged(
        "preclustering",
        config.run_preclustering,
        lambda: precluster_instance(
            inst, chromatic_pivot(inst, config.baseline_seed), config.precluster_params
        ),
    )
    nontrivial = adm_count = slacks = None
    if pre_stats is not None:
        pre, adm_report = pre_stats
        nontrivial = sum(1 for k in pre.preclusters if len(k) > 1)
        adm_count = len(pre.admissible)
        slacks = adm_report.bound_slack

    record = ExperimentRecord(
        instance_id=instance_id,
        seed=seed,
        n=inst.n,
        n_colors=inst.n_colors,
        opt_cost=None if report is None else report.opt_cost,
        lp_value=None if lp is None else lp.value,
        rounding_mean=None if stats is None else stats.mean_cost,
        rounding_stderr=None if stats is None else stats.stderr,
        rounding_trials=None if stats is None else stats.trials,
        pivot_cost=pivot_cost,
        singletons_cost=singles_cost,
        precluster_nontrivial=nontrivial,
        admissible_count=adm_count,
        bound_slacks=slacks,
        wall_times=times,
        skipped=tuple(skipped),
    )
    record.check_invariants()
    return record
