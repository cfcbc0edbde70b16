"""Command-line surface: output formats, exit codes, file loading, figures."""

import csv
import io
import json

import pytest

from icgames.cli import (
    EXIT_BOUND_VIOLATED,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_USAGE,
    main,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- rac ----------------------------------------------------------------------


def test_rac_json_report(capsys):
    code, out, _ = run_cli(
        capsys, "rac", "--n", "2", "--m", "1", "--strategy", "majority",
        "--format", "json",
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["report"]["success_probability"] == pytest.approx(0.75)
    assert data["report"]["I_bits"] == pytest.approx(1.0)
    assert data["verdict"]["satisfied"] == "saturated"
    assert data["config"]["strategy"] == "majority"
    assert data["chain"]["kind"] == "entropic-chain"


def test_rac_json_is_deterministic(capsys):
    args = ("rac", "--n", "4", "--m", "1", "--strategy", "pyramid:0.6:2",
            "--format", "json")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_rac_table_output_format(capsys):
    code, out, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                           "--strategy", "send-bit:1")
    assert code == EXIT_OK
    assert "success_probability 0.750000" in out
    assert "I_bits 1.000000" in out
    assert "k=1 E=1.000000" in out
    assert "k=2 E=0.000000" in out
    assert "chain_slack endpoint" in out


def test_rac_csv_output(capsys):
    code, out, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                           "--strategy", "send-bit:1", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "E_k", "I_k_bits"]
    assert float(rows[1][1]) == 1.0
    assert len(rows) == 3


def test_rac_expect_holds_flags_violations(capsys):
    code, out, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                           "--strategy", "chsh:1.0", "--expect-holds")
    assert code == EXIT_BOUND_VIOLATED
    ok_code, _, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                            "--strategy", "chsh:0.70710678", "--expect-holds")
    assert ok_code == EXIT_OK


def test_rac_biased_inputs_from_file(capsys, tmp_path):
    dist = tmp_path / "dist.json"
    dist.write_text(json.dumps({"probabilities": [0.97, 0.01, 0.01, 0.01]}))
    code, out, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                           "--strategy", "send-bit:1",
                           "--dist", str(dist), "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    # x=00 and x=11 are guessed perfectly, the mixed values half the time
    assert data["report"]["success_probability"] == pytest.approx(0.99)
    assert data["verdict"]["kind"] == "endpoint-fallback"


def test_rac_resource_exit(capsys):
    code, _, err = run_cli(capsys, "rac", "--n", "16", "--m", "1",
                           "--strategy", "majority")
    assert code == EXIT_RESOURCE
    assert "cap" in err


def test_rac_usage_errors(capsys):
    code, _, err = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                           "--strategy", "no-such-strategy")
    assert code == EXIT_USAGE
    assert err.strip()
    code2, _, _ = run_cli(capsys, "rac", "--n", "two", "--m", "1",
                          "--strategy", "majority")
    assert code2 == EXIT_USAGE
    code3, _, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                          "--strategy", "majority", "--format", "yaml")
    assert code3 == EXIT_USAGE


def test_rac_missing_dist_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                           "--strategy", "majority",
                           "--dist", str(tmp_path / "absent.json"))
    assert code == EXIT_USAGE


# -- inner-product ---------------------------------------------------------------


def test_inner_product_saturator(capsys):
    code, out, _ = run_cli(capsys, "inner-product", "--n", "2",
                           "--saturator", "2", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    checks = {c["kind"]: c["status"] for c in data["bounds"]}
    assert checks["vector-quadratic"] == "saturated"
    assert checks["generalized-quadratic"] == "saturated"


def test_inner_product_gram_biases(capsys, tmp_path):
    biases = tmp_path / "biases.json"
    biases.write_text(json.dumps({"biases": [0.6, 0.5, 0.3, 0.2]}))
    code, out, _ = run_cli(capsys, "inner-product", "--n", "2",
                           "--biases", str(biases), "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["report"]["bias_per_k"] == pytest.approx([0.6, 0.5, 0.3, 0.2])


def test_inner_product_single_pair_bias(capsys):
    code, out, _ = run_cli(capsys, "inner-product", "--n", "1",
                           "--bias", "0.5", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["report"]["success_probability"] == pytest.approx(0.75)


def test_inner_product_weight_one(capsys, tmp_path):
    biases = tmp_path / "biases.json"
    biases.write_text(json.dumps([0.70710678, 0.70710678]))
    code, out, _ = run_cli(capsys, "inner-product", "--n", "2",
                           "--biases", str(biases), "--weight-one",
                           "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["report"]["bias_labels"] == [1, 2]


def test_inner_product_source_contract(capsys):
    code, _, err = run_cli(capsys, "inner-product", "--n", "2", "--bias", "0.5")
    assert code == EXIT_USAGE  # --bias needs n = 1
    code2, _, _ = run_cli(capsys, "inner-product", "--n", "1",
                          "--bias", "0.5", "--saturator", "0")
    assert code2 == EXIT_USAGE  # two sources
    code3, _, _ = run_cli(capsys, "inner-product", "--n", "1")
    assert code3 == EXIT_USAGE  # no source


def test_inner_product_infeasible_biases(capsys, tmp_path):
    biases = tmp_path / "biases.json"
    biases.write_text(json.dumps([0.9, 0.9]))
    code, _, err = run_cli(capsys, "inner-product", "--n", "1",
                           "--biases", str(biases))
    assert code == EXIT_USAGE


# -- bounds -----------------------------------------------------------------------


def test_bounds_from_bias_file(capsys, tmp_path):
    biases = tmp_path / "b.json"
    biases.write_text(json.dumps([0.5, 0.5, 0.5, 0.5]))
    code, out, _ = run_cli(capsys, "bounds", "--biases", str(biases),
                           "--m", "1", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    kinds = {c["kind"] for c in data["bounds"]}
    assert kinds == {"information-quadratic", "vector-quadratic",
                     "generalized-quadratic"}
    statuses = {c["kind"]: c["status"] for c in data["bounds"]}
    assert statuses["vector-quadratic"] == "saturated"
    assert data["source"].startswith("file:")


def test_bounds_from_strategy(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--strategy", "pyramid:1.0:2",
                           "--n", "4", "--expect-holds", "--format", "json")
    assert code == EXIT_BOUND_VIOLATED
    data = json.loads(out)
    statuses = {c["kind"]: c["status"] for c in data["bounds"]}
    assert statuses["information-quadratic"] == "violated"


def test_bounds_needs_exactly_one_source(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "bounds")
    assert code == EXIT_USAGE
    biases = tmp_path / "b.json"
    biases.write_text(json.dumps([0.5]))
    code2, _, _ = run_cli(capsys, "bounds", "--biases", str(biases),
                          "--strategy", "majority", "--n", "2")
    assert code2 == EXIT_USAGE


# -- entropy-suite ------------------------------------------------------------------


def test_entropy_suite_small_run(capsys):
    code, out, _ = run_cli(capsys, "entropy-suite", "--trials", "40",
                           "--seed", "3", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["all_hold"] is True
    assert data["config"]["trials"] == 40
    assert set(data["slacks"]) == {
        "subadditivity", "strong_subadditivity",
        "iterated_conditional_subadditivity",
        "conditional_entropy_positivity", "channel_discard",
    }
    for row in data["slacks"].values():
        assert row["min"] >= -1e-9
        assert row["mean"] >= row["min"]
    # grouped X block keeps every line nontrivial
    assert data["slacks"]["iterated_conditional_subadditivity"]["mean"] > 1e-6
    assert data["chain_identity_max_gap"] <= 1e-9


def test_entropy_suite_is_seeded(capsys):
    args = ("entropy-suite", "--trials", "25", "--seed", "7",
            "--format", "json")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second
    _, third, _ = run_cli(capsys, "entropy-suite", "--trials", "25",
                          "--seed", "8", "--format", "json")
    assert third != first


# -- oracle --------------------------------------------------------------------------


def test_oracle_two_bits(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--n", "2", "--m", "1",
                           "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    summary = data["oracle"]
    assert summary["count"] == 256
    assert summary["max_success"] == pytest.approx(0.75)
    assert summary["max_information_bits"] == pytest.approx(1.0)
    assert summary["matches_formula"] is True
    assert summary["information_within_message_bound"] is True
    assert summary["min_endpoint_slack"] >= -1e-9


def test_oracle_enumeration_cap(capsys):
    code, _, err = run_cli(capsys, "oracle", "--n", "4", "--m", "2")
    assert code == EXIT_RESOURCE


# -- tsirelson-demo ------------------------------------------------------------------


def test_tsirelson_demo_csv(capsys):
    code, out, _ = run_cli(capsys, "tsirelson-demo", "--bias", "0.75",
                           "--levels", "4", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "levels"
    assert len(rows) == 5
    assert rows[3][-1] == "True"  # crossover at depth 3


def test_tsirelson_demo_json_reports_crossover(capsys):
    code, out, _ = run_cli(capsys, "tsirelson-demo", "--bias", "0.75",
                           "--levels", "4", "--format", "json")
    data = json.loads(out)
    assert data["crossover_levels"] == 3
    code2, out2, _ = run_cli(capsys, "tsirelson-demo", "--bias", "0.5",
                             "--levels", "4", "--format", "json")
    assert json.loads(out2)["crossover_levels"] is None


# -- figures ------------------------------------------------------------------------


def test_plot_dir_renders_figures(capsys, tmp_path):
    plots = tmp_path / "figs"
    code, _, _ = run_cli(capsys, "rac", "--n", "2", "--m", "1",
                         "--strategy", "majority", "--plot-dir", str(plots))
    assert code == EXIT_OK
    names = {p.name for p in plots.iterdir()}
    assert names == {"rac_biases.png", "rac_information.png"}
    for p in plots.iterdir():
        assert p.stat().st_size > 0


def test_plot_dir_for_bounds_and_suite(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "entropy-suite", "--trials", "10",
                         "--seed", "1", "--plot-dir", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "entropy_suite_slacks.png").exists()
    code2, _, _ = run_cli(capsys, "tsirelson-demo", "--bias", "0.8",
                          "--levels", "3", "--plot-dir", str(tmp_path))
    assert code2 == EXIT_OK
    assert (tmp_path / "tsirelson_growth.png").exists()
