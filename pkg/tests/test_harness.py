import json
from fractions import Fraction

import numpy as np
import pytest

from chromclust.baselines import singletons
from chromclust.cli import main
from chromclust.cluster_lp import solve_cluster_lp
from chromclust.errors import StructuralError
from chromclust.exact import solve_exact
from chromclust.generate import PlantedModel, generate_planted, planted_solution
from chromclust.model import MINUS, ChromaticInstance, count_disagreements
from chromclust.pipeline import PipelineConfig, run_pipeline
from chromclust.serialize import (
    emit_instance_text,
    instance_from_json,
    instance_to_json,
    parse_instance_text,
    record_from_json,
    record_to_json,
    records_from_csv,
    records_to_csv,
    solution_from_json,
    solution_to_json,
)

from conftest import random_instance


# ------------------------------------------------------------- generator


def test_noiseless_planted_model_is_perfect():
    model = PlantedModel(n=7, k=3, n_colors=2, flip_prob=0, recolor_prob=0, seed=5)
    inst = generate_planted(model)
    sol = planted_solution(model)
    assert count_disagreements(inst, sol) == 0
    assert solve_exact(inst).opt_cost == 0


def test_full_flip_single_cluster_is_all_minus():
    model = PlantedModel(n=6, k=1, n_colors=3, flip_prob=1, recolor_prob=0, seed=9)
    inst = generate_planted(model)
    assert all(inst.label(u, v) == MINUS for u in range(6) for v in range(u + 1, 6))
    assert count_disagreements(inst, singletons(inst)) == 0
    assert solve_exact(inst).opt_cost == 0


def test_generator_deterministic():
    model = PlantedModel(n=8, k=3, n_colors=2, flip_prob=0.3, recolor_prob=0.3, seed=123)
    a, b = generate_planted(model), generate_planted(model)
    assert a.colors == b.colors and np.array_equal(a.labels, b.labels)


def test_model_validation():
    with pytest.raises(StructuralError):
        PlantedModel(n=0, k=1, n_colors=1, flip_prob=0, recolor_prob=0, seed=0)
    with pytest.raises(StructuralError):
        PlantedModel(n=4, k=5, n_colors=1, flip_prob=0, recolor_prob=0, seed=0)
    with pytest.raises(StructuralError):
        PlantedModel(n=4, k=2, n_colors=0, flip_prob=0, recolor_prob=0, seed=0)
    with pytest.raises(StructuralError):
        PlantedModel(n=4, k=2, n_colors=1, flip_prob=1.5, recolor_prob=0, seed=0)
    with pytest.raises(StructuralError):
        PlantedModel(n=4, k=2, n_colors=1, flip_prob=0, recolor_prob=-0.1, seed=0)


# ------------------------------------------------------------ serialization


def test_instance_text_round_trip(t3):
    rng = np.random.default_rng(3)
    for inst in [t3] + [random_instance(rng, int(rng.integers(1, 9)), 3) for _ in range(10)]:
        again = parse_instance_text(emit_instance_text(inst))
        assert again.n == inst.n and again.colors == inst.colors
        assert np.array_equal(again.labels, inst.labels)


def test_instance_json_round_trip(t3):
    blob = json.dumps(instance_to_json(t3))
    again = instance_from_json(json.loads(blob))
    assert again.colors == t3.colors and np.array_equal(again.labels, t3.labels)


def test_instance_parser_rejects_garbage():
    with pytest.raises(StructuralError):
        parse_instance_text("colors r\nn 2\n0 1 -\n")
    with pytest.raises(StructuralError):
        parse_instance_text("n 3\ncolors r\n0 1 -\n0 2 -\n")  # missing (1,2)
    with pytest.raises(StructuralError):
        parse_instance_text("n 2\ncolors r\n0 1 -\n0 1 -\n")  # duplicate
    with pytest.raises(StructuralError):
        parse_instance_text("n 2\ncolors r\n0 1 + b\n")  # undeclared color
    with pytest.raises(StructuralError):
        parse_instance_text("n 2\ncolors r\n0 2 -\n")  # endpoint range
    with pytest.raises(StructuralError):
        parse_instance_text("n 2\ncolors r r\n0 1 -\n")  # duplicate color name


def test_z_solution_round_trip(t3):
    z = solve_cluster_lp(t3).solution
    again = solution_from_json(json.loads(json.dumps(solution_to_json(z))))
    assert again == z
    hand = solution_to_json(z)
    hand["entries"][0]["value"] = "2/3"
    changed = solution_from_json(hand)
    assert changed != z


def test_record_round_trips(t3):
    rng = np.random.default_rng(8)
    records = []
    for i in range(4):
        inst = random_instance(rng, int(rng.integers(2, 8)), 2)
        config = PipelineConfig(rounding_trials=50)
        records.append(run_pipeline(inst, config, instance_id=f"case{i}", seed=i))
    records.append(
        run_pipeline(
            t3,
            PipelineConfig(run_exact=False, run_rounding=False, run_preclustering=False),
            instance_id="partial",
        )
    )
    for record in records:
        assert record_from_json(json.loads(json.dumps(record_to_json(record)))) == record
    assert records_from_csv(records_to_csv(records)) == records


def test_record_csv_rejects_bad_header():
    with pytest.raises(StructuralError):
        records_from_csv("nope,header\n1,2\n")
    with pytest.raises(StructuralError):
        records_from_csv("")


# --------------------------------------------------------------- pipeline


def test_pipeline_on_t3(t3):
    record = run_pipeline(t3, PipelineConfig(rounding_trials=400), instance_id="t3")
    assert record.opt_cost == 1
    assert record.lp_value <= 1
    assert float(record.rounding_mean) <= 2 * float(record.lp_value) + 4 * record.rounding_stderr + 1e-9
    assert record.skipped == ()
    assert record.pivot_cost >= record.opt_cost
    assert record.singletons_cost == 2


def test_pipeline_all_minus():
    labels = np.full(10, MINUS, dtype=np.int16)
    inst = ChromaticInstance(n=5, colors=("r",), labels=labels)
    record = run_pipeline(inst, PipelineConfig(rounding_trials=100))
    assert record.opt_cost == 0
    assert record.lp_value == 0
    assert record.rounding_mean == 0
    assert record.pivot_cost == 0 and record.singletons_cost == 0


def test_pipeline_oversized_instance_skips_stages():
    rng = np.random.default_rng(30)
    inst = random_instance(rng, 30, 2)
    record = run_pipeline(inst, PipelineConfig(rounding_trials=10))
    assert "exact" in record.skipped
    assert record.opt_cost is None
    # stages that fit still ran
    assert record.pivot_cost is not None and record.singletons_cost is not None
    assert record.precluster_nontrivial is not None
    record.check_invariants()


# -------------------------------------------------------------------- cli


def test_cli_gen_solve_round_trip(tmp_path):
    inst_path = tmp_path / "inst.txt"
    assert main(["gen", "--n", "6", "--k", "2", "--p", "0.2", "--q", "0.1",
                 "--seed", "4", "--out", str(inst_path)]) == 0
    inst = parse_instance_text(inst_path.read_text())
    assert inst.n == 6

    out = tmp_path / "exact.json"
    assert main(["solve-exact", "--input", str(inst_path), "--format", "json",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["opt_cost"] == solve_exact(inst).opt_cost

    out = tmp_path / "lp.json"
    assert main(["solve-lp", "--input", str(inst_path), "--format", "json",
                 "--out", str(out)]) == 0
    lp_payload = json.loads(out.read_text())
    assert Fraction(lp_payload["value"]) == solve_cluster_lp(inst).value
    assert solution_from_json(lp_payload) == solve_cluster_lp(inst).solution


def test_cli_round_and_baseline(tmp_path):
    inst_path = tmp_path / "inst.txt"
    main(["gen", "--n", "5", "--k", "2", "--seed", "7", "--out", str(inst_path)])
    out = tmp_path / "round.json"
    assert main(["--seed", "11", "round", "--input", str(inst_path),
                 "--trials", "300", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["trials"] == 300
    assert payload["max_iterations"] <= payload["iteration_cap"]

    out = tmp_path / "base.json"
    assert main(["baseline", "--input", str(inst_path), "--alg", "singletons",
                 "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["cost"] >= 0


def test_cli_preclust_and_pipeline(tmp_path):
    inst_path = tmp_path / "inst.txt"
    main(["gen", "--n", "6", "--k", "2", "--seed", "2", "--out", str(inst_path)])
    out = tmp_path / "pre.json"
    assert main(["preclust", "--input", str(inst_path), "--alpha", "1/50",
                 "--beta", "1/50", "--epsilon", "1/10", "--format", "json",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["eta_clean"] is True
    assert payload["eta"] == "2/49"

    out = tmp_path / "record.csv"
    assert main(["pipeline", "--input", str(inst_path), "--trials", "100",
                 "--format", "csv", "--out", str(out)]) == 0
    [record] = records_from_csv(out.read_text())
    assert record.opt_cost is not None and record.lp_value <= record.opt_cost


def test_cli_bench_compares_backends(tmp_path):
    out = tmp_path / "bench.json"
    assert main(["bench", "--sizes", "5", "--per-size", "1", "--trials", "500",
                 "--compare-backends", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["rows"]
    row = payload["rows"][0]
    for backend in payload["backends"]:
        assert f"{backend}_round_s" in row


def test_cli_reports_errors_with_nonzero_exit(tmp_path, capsys):
    assert main(["gen", "--n", "4", "--k", "2", "--format", "csv"]) == 1
    assert "error:" in capsys.readouterr().err
    bad = tmp_path / "bad.txt"
    bad.write_text("n 2\ncolors r\n0 1 + b\n")
    assert main(["solve-exact", "--input", str(bad)]) == 1
    assert main(["preclust", "--input", str(bad), "--alpha", "1/2"]) == 1
