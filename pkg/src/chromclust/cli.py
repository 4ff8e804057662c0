"""Command-line surface.

Subcommands mirror the library stages: gen, solve-exact, solve-lp,
round, baseline, preclust, pipeline, bench.  One explicit seed drives
all randomness; --format picks json, csv, or text where the payload
supports it.  The process exits 0 only when every inline invariant
held.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import kernels
from .baselines import chromatic_pivot, singletons
from .cluster_lp import solve_cluster_lp
from .errors import ChromclustError, DiagnosticError, StructuralError
from .exact import solve_exact
from .generate import PlantedModel, generate_planted
from .model import ChromaticInstance, Clustering, count_disagreements
from .pipeline import PipelineConfig, run_pipeline
from .preclustering import (
    PreclusterParams,
    precluster_instance,
    verify_precluster_bounds,
)
from .rounding import estimate
from .serialize import (
    dumps_json,
    emit_instance_text,
    instance_from_json,
    instance_to_json,
    parse_instance_text,
    record_to_json,
    records_to_csv,
    solution_to_json,
)

import json


def _write(args: argparse.Namespace, payload: str) -> None:
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)


def _read_instance(path: str) -> ChromaticInstance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return instance_from_json(json.loads(text))
    return parse_instance_text(text)


def _clustering_json(inst: ChromaticInstance, sol: Clustering) -> dict[str, Any]:
    return {
        "clusters": [
            {"vertices": sorted(part), "color": inst.colors[color]}
            for part, color in zip(sol.parts, sol.part_color)
        ],
        "cost": count_disagreements(inst, sol),
    }


def _clustering_text(inst: ChromaticInstance, sol: Clustering) -> list[str]:
    return [
        f"cluster {inst.colors[color]}: " + " ".join(str(v) for v in sorted(part))
        for part, color in zip(sol.parts, sol.part_color)
    ]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


# ---------------------------------------------------------- subcommands


def _cmd_gen(args: argparse.Namespace) -> int:
    model = PlantedModel(
        n=args.n,
        k=args.k,
        n_colors=args.palette,
        flip_prob=args.p,
        recolor_prob=args.q,
        seed=args.seed,
    )
    inst = generate_planted(model)
    if args.format == "json":
        _write(args, dumps_json(instance_to_json(inst)))
    elif args.format == "text":
        _write(args, emit_instance_text(inst))
    else:
        raise StructuralError("instances have no CSV form; use text or json")
    return 0


def _cmd_solve_exact(args: argparse.Namespace) -> int:
    inst = _read_instance(args.input)
    report = solve_exact(inst, limit=args.limit)
    if args.format == "json":
        _write(
            args,
            dumps_json(
                {
                    "opt_cost": report.opt_cost,
                    "optima_count": report.optima_count,
                    "partitions_enumerated": report.partitions_enumerated,
                    "one_optimal": _clustering_json(inst, report.one_optimal),
                }
            ),
        )
    else:
        lines = [f"opt {report.opt_cost}", f"optima {report.optima_count}"]
        lines += _clustering_text(inst, report.one_optimal)
        _write(args, "\n".join(lines) + "\n")
    return 0


def _cmd_solve_lp(args: argparse.Namespace) -> int:
    inst = _read_instance(args.input)
    result = solve_cluster_lp(inst)
    if args.format == "json":
        payload = solution_to_json(result.solution)
        payload["value"] = str(result.value)
        payload["pivots"] = result.pivots
        _write(args, dumps_json(payload))
    else:
        lines = [f"value {result.value}", f"pivots {result.pivots}"]
        for (color, mask), weight in sorted(result.solution.entries.items()):
            verts = " ".join(str(v) for v in range(inst.n) if mask >> v & 1)
            lines.append(f"z[{inst.colors[color]} | {verts}] = {weight}")
        _write(args, "\n".join(lines) + "\n")
    return 0


def _cmd_round(args: argparse.Namespace) -> int:
    inst = _read_instance(args.input)
    result = solve_cluster_lp(inst)
    stats = estimate(
        inst, result.solution, trials=args.trials, seed=args.seed, backend=args.backend
    )
    if stats.mean_cost < result.value:
        raise DiagnosticError("rounding mean fell below the relaxation value")
    payload = {
        "lp_value": str(result.value),
        "trials": stats.trials,
        "mean_cost": str(stats.mean_cost),
        "stderr": stats.stderr,
        "max_iterations": stats.max_iterations,
        "iteration_cap": stats.cap,
        "backend": kernels.resolve_backend(args.backend).NAME,
    }
    if args.format == "json":
        _write(args, dumps_json(payload))
    else:
        _write(args, "".join(f"{k} {v}\n" for k, v in payload.items()))
    return 0


def _cmd_baseline(args: argparse.Namespace) -> int:
    inst = _read_instance(args.input)
    sol = chromatic_pivot(inst, args.seed) if args.alg == "pivot" else singletons(inst)
    if args.format == "json":
        _write(args, dumps_json(_clustering_json(inst, sol)))
    else:
        cost = count_disagreements(inst, sol)
        _write(args, "\n".join([f"cost {cost}"] + _clustering_text(inst, sol)) + "\n")
    return 0


def _cmd_preclust(args: argparse.Namespace) -> int:
    inst = _read_instance(args.input)
    params = PreclusterParams(alpha=args.alpha, beta=args.beta, epsilon=args.epsilon)
    init = chromatic_pivot(inst, args.seed)
    pre, report = precluster_instance(inst, init, params)
    bounds = verify_precluster_bounds(inst, pre.preclusters, pre.precolor, params)
    if not bounds.passed:
        raise DiagnosticError(f"cleanliness violated: {bounds.witnesses}")
    payload = {
        "preclusters": [sorted(part) for part in pre.preclusters],
        "precolor": {str(i): inst.colors[c] for i, c in sorted(pre.precolor.items())},
        "admissible": [list(pair) for pair in sorted(pre.admissible)],
        "eta": str(params.eta),
        "eta_clean": bounds.passed,
        "d": [str(d) for d in report.d],
        "n1": [list(row) for row in report.n1_lists],
        "n2": [list(row) for row in report.n2_lists],
        "similar": [list(pair) for pair in sorted(report.similar_pairs)],
        "bound_slack": [str(s) for s in report.bound_slack],
    }
    if args.format == "json":
        _write(args, dumps_json(payload))
    else:
        lines = [f"preclusters {len(pre.preclusters)}"]
        for i, part in enumerate(pre.preclusters):
            color = (
                inst.colors[pre.precolor[i]] if i in pre.precolor else "-"
            )
            lines.append(f"K{i} [{color}] " + " ".join(str(v) for v in sorted(part)))
        lines.append(f"admissible {len(pre.admissible)}")
        lines.append(f"eta {params.eta} clean {bounds.passed}")
        _write(args, "\n".join(lines) + "\n")
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    inst = _read_instance(args.input)
    config = PipelineConfig(
        rounding_trials=args.trials,
        rounding_seed=args.seed,
        baseline_seed=args.seed,
        backend=args.backend,
    )
    record = run_pipeline(inst, config, instance_id=args.input, seed=args.seed)
    if args.format == "json":
        _write(args, dumps_json(record_to_json(record)))
    elif args.format == "csv":
        _write(args, records_to_csv([record]))
    else:
        data = record_to_json(record)
        _write(args, "".join(f"{k} {data[k]}\n" for k in sorted(data)))
    return 0


def _bench_one(size: int, seed: int, trials: int, backends: list[str]) -> dict[str, Any]:
    model = PlantedModel(
        n=size, k=max(1, size // 3), n_colors=2, flip_prob=0.1, recolor_prob=0.1, seed=seed
    )
    inst = generate_planted(model)
    lp = solve_cluster_lp(inst)
    row: dict[str, Any] = {"n": size, "seed": seed, "lp_value": str(lp.value)}
    reference = None
    for backend in backends:
        start = time.perf_counter()
        scan = solve_exact(inst, backend=backend)
        mid = time.perf_counter()
        stats = estimate(inst, lp.solution, trials=trials, seed=seed, backend=backend)
        done = time.perf_counter()
        row[f"{backend}_exact_s"] = round(mid - start, 6)
        row[f"{backend}_round_s"] = round(done - mid, 6)
        digest = (
            scan.opt_cost,
            scan.all_optimal_partitions,
            stats.mean_cost,
            stats.stderr,
            tuple(int(c) for c in stats.iteration_histogram),
            stats.max_iterations,
        )
        if reference is None:
            reference = digest
            row["opt"] = scan.opt_cost
            row["mean_cost"] = str(stats.mean_cost)
        elif digest != reference:
            raise DiagnosticError(
                f"backends disagree on n={size} seed={seed}"
            )
    return row


def _cmd_bench(args: argparse.Namespace) -> int:
    backends = (
        list(kernels.available_backends())
        if args.compare_backends
        else [kernels.resolve_backend(None).NAME]
    )
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes:
        raise StructuralError("need at least one size")
    jobs = [
        (size, args.seed + i * 1009 + j, args.trials, backends)
        for i, size in enumerate(sizes)
        for j in range(args.per_size)
    ]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(lambda job: _bench_one(*job), jobs))
    if args.format == "json":
        _write(args, dumps_json({"backends": backends, "rows": rows}))
    else:
        lines = [f"backends: {' '.join(backends)}"]
        for row in rows:
            cells = " ".join(f"{k}={v}" for k, v in row.items())
            lines.append(cells)
        if len(backends) == 1:
            lines.append("single backend available; nothing to compare")
        _write(args, "\n".join(lines) + "\n")
    return 0


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromclust",
        description="edge-colored correlation clustering toolkit",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument(
        "--format", choices=("json", "csv", "text"), default="text", help="output format"
    )
    # same flags accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value parsed before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a planted instance", parents=[common])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--palette", type=int, default=2)
    gen.add_argument("--p", type=float, default=0.0, help="sign flip probability")
    gen.add_argument("--q", type=float, default=0.0, help="recolor probability")
    gen.set_defaults(func=_cmd_gen)

    for name, func in (
        ("solve-exact", _cmd_solve_exact),
        ("solve-lp", _cmd_solve_lp),
    ):
        cmd = sub.add_parser(name, help=f"{name} on an instance file", parents=[common])
        cmd.add_argument("--input", required=True, help="instance path or - for stdin")
        if name == "solve-exact":
            cmd.add_argument("--limit", type=int, default=10)
        cmd.set_defaults(func=func)

    rnd = sub.add_parser("round", help="solve the relaxation and round it", parents=[common])
    rnd.add_argument("--input", required=True)
    rnd.add_argument("--trials", type=int, default=2000)
    rnd.add_argument("--backend", choices=("numpy", "numba"), default=None)
    rnd.set_defaults(func=_cmd_round)

    base = sub.add_parser("baseline", help="run a baseline algorithm", parents=[common])
    base.add_argument("--input", required=True)
    base.add_argument("--alg", choices=("pivot", "singletons"), required=True)
    base.set_defaults(func=_cmd_baseline)

    pre = sub.add_parser("preclust", help="marking pass plus admissible edges", parents=[common])
    pre.add_argument("--input", required=True)
    pre.add_argument("--alpha", type=_fraction, default=Fraction(1, 50))
    pre.add_argument("--beta", type=_fraction, default=Fraction(1, 50))
    pre.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    pre.set_defaults(func=_cmd_preclust)

    pipe = sub.add_parser("pipeline", help="every stage on one instance", parents=[common])
    pipe.add_argument("--input", required=True)
    pipe.add_argument("--trials", type=int, default=2000)
    pipe.add_argument("--backend", choices=("numpy", "numba"), default=None)
    pipe.set_defaults(func=_cmd_pipeline)

    bench = sub.add_parser("bench", help="time the kernels over planted instances", parents=[common])
    bench.add_argument("--sizes", default="6,7,8", help="comma-separated vertex counts")
    bench.add_argument("--per-size", type=int, default=2)
    bench.add_argument("--trials", type=int, default=20000)
    bench.add_argument("--workers", type=int, default=4)
    bench.add_argument(
        "--compare-backends",
        action="store_true",
        help="run every available backend and insist on identical output",
    )
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChromclustError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
