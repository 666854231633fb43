"""End-to-end CLI coverage through main(), asserting on the JSON documents."""

import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from feedback_centrality import (
    Graph,
    Mode,
    edge_multiplication,
    katz_prestige,
    out_regularity,
    parse_graph,
    serialize_graph,
)
from feedback_centrality.cli import main

from .conftest import GRAPH_DIR

DEMO5 = str(GRAPH_DIR / "demo5.dg")
DEMO6 = str(GRAPH_DIR / "demo6.dg")

DOC_KEYS = ["schema", "command", "arguments", "values", "values_full", "diagnostics"]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestCentrality:
    def test_exact_rational_katz_prestige(self, capsys):
        doc = run_json(capsys, "centrality", "--input", DEMO5, "--measure", "kp")
        assert list(doc) == DOC_KEYS
        assert doc["schema"] == "feedback-centrality/1"
        assert doc["values"] == {
            "v1": "2/13", "v2": "3/13", "v3": "3/13", "v4": "4/13", "v5": "1/13",
        }
        assert doc["values_full"]["v4"] == "4/13"
        assert doc["diagnostics"]["value_total"] == "1"
        assert doc["diagnostics"]["max_recursion_residual"] == "0"

    def test_eigenvector_needs_float_mode(self, capsys):
        code, _out, err = run(capsys, "centrality", "--input", DEMO5, "--measure", "ev")
        assert code == 1
        assert "error:" in err and "float" in err
        doc = run_json(
            capsys, "centrality", "--input", DEMO5, "--measure", "ev", "--mode", "float"
        )
        assert float(doc["values"]["v4"]) == pytest.approx(4 / 13, rel=1e-6)

    def test_pagerank_defaults_its_decay(self, capsys):
        doc = run_json(capsys, "centrality", "--input", DEMO5, "--measure", "pr")
        assert doc["arguments"]["alpha"] == "0.85"

    def test_katz_requires_alpha(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["centrality", "--input", DEMO5, "--measure", "katz"])
        assert exc.value.code == 2

    def test_missing_file_is_a_usage_level_error(self, capsys):
        code, _out, err = run(
            capsys, "centrality", "--input", "no-such-file.dg", "--measure", "kp"
        )
        assert code == 2 and "error:" in err

    def test_malformed_graph_reports_the_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.dg"
        bad.write_text("node a 1\nedge a a zero\n")
        code, _out, err = run(capsys, "centrality", "--input", str(bad), "--measure", "kp")
        assert code == 1 and "line 2" in err

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "result.json"
        code, out, _err = run(
            capsys, "centrality", "--input", DEMO5, "--measure", "kp",
            "--output", str(target),
        )
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["values"]["v5"] == "1/13"


class TestSimulate:
    def test_distributed_run_reports_the_limit_measure(self, capsys):
        doc = run_json(
            capsys, "simulate", "--input", DEMO5, "--mode", "float",
            "--process", "distributed", "--alpha", "0.85", "--steps", "60",
        )
        diag = doc["diagnostics"]
        assert diag["process"] == "distributed"
        assert diag["steps"] == 60
        assert diag["recursion"]["limit_measure"] == "pagerank(0.85)"
        assert diag["recursion"]["series_field"] == "partial_sum"
        assert diag["tail_bound_max"] is not None
        assert float(diag["initial_total"]) == 1.0

    def test_zero_steps_has_no_cesaro(self, capsys):
        doc = run_json(
            capsys, "simulate", "--input", DEMO5, "--mode", "rational",
            "--process", "distributed", "--alpha", "1/2", "--steps", "0",
        )
        assert doc["diagnostics"]["cesaro"] is None
        assert doc["values"] == {v: "1/5" for v in ("v1", "v2", "v3", "v4", "v5")}

    def test_parallel_critical_decay_reports_cesaro(self, capsys):
        doc = run_json(
            capsys, "simulate", "--input", DEMO5, "--mode", "float",
            "--process", "parallel", "--alpha", "0.5", "--steps", "200",
        )
        diag = doc["diagnostics"]
        assert diag["recursion"]["limit_measure"] == "eigenvector"
        assert diag["recursion"]["series_field"] == "cesaro"
        assert diag["tail_bound_max"] is None  # alpha * lambda = 1: no geometric tail
        assert diag["cesaro"] is not None

    def test_negative_steps_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main([
                "simulate", "--input", DEMO5, "--process", "distributed",
                "--alpha", "1/2", "--steps", "-3",
            ])
        assert exc.value.code == 2


class TestClassify:
    def test_demo5_facts(self, capsys):
        doc = run_json(capsys, "classify", "--input", DEMO5, "--alpha", "0.4")
        diag = doc["diagnostics"]
        assert diag["nodes"] == 5 and diag["edges"] == 7
        assert diag["strongly_connected"] is True
        assert diag["out_regular"] == "2"
        assert diag["semi_out_regular"] is True
        assert diag["component_count"] == 1
        assert float(diag["spectral_radius"]) == pytest.approx(2.0)
        classes = diag["classes"]
        assert classes["pagerank"]["ok"] is True
        assert classes["katz-prestige"]["ok"] is True
        assert classes["eigenvector"]["ok"] is True
        assert classes["katz"]["ok"] is True  # 0.4 * 2 < 1

    def test_decay_bound_violation_is_reported(self, capsys):
        doc = run_json(capsys, "classify", "--input", DEMO5, "--alpha", "0.5")
        entry = doc["diagnostics"]["classes"]["katz"]
        assert entry["ok"] is False
        assert entry["reason"]


class TestTransforms:
    def test_em_is_exact_and_reparseable(self, capsys, demo5):
        code, out, _err = run(
            capsys, "transform", "em", "--input", DEMO5, "--node", "v1",
            "--factor", "3/2",
        )
        assert code == 0
        assert parse_graph(out, Mode.RATIONAL) == edge_multiplication(demo5, "v1", F(3, 2))

    def test_opposite_is_an_involution(self, capsys, demo5, tmp_path):
        once = tmp_path / "opp.dg"
        code, _out, _err = run(
            capsys, "transform", "opposite", "--input", DEMO5, "--output", str(once)
        )
        assert code == 0
        code, out, _err = run(capsys, "transform", "opposite", "--input", str(once))
        assert code == 0
        assert out == serialize_graph(demo5, canonical=True)

    def test_normalize_yields_unit_out_degrees(self, capsys):
        code, out, _err = run(capsys, "transform", "normalize", "--input", DEMO5)
        assert code == 0
        assert out_regularity(parse_graph(out, Mode.RATIONAL)) == F(1)

    def test_combine_with_a_measure_adds_the_values(self, capsys, demo5):
        code, out, _err = run(
            capsys, "transform", "combine", "--input", DEMO5,
            "--nodes", "v1,v2", "--measure", "kp",
        )
        assert code == 0
        before = katz_prestige(demo5)
        after = katz_prestige(parse_graph(out, Mode.RATIONAL))
        assert after["v2"] == before["v1"] + before["v2"]

    def test_combine_validates_its_pairs(self):
        with pytest.raises(SystemExit) as exc:
            main(["transform", "combine", "--input", DEMO5, "--nodes", "v1,v2,v3",
                  "--values", "1,2"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["transform", "combine", "--input", DEMO5, "--nodes", "v1,v2"])
        assert exc.value.code == 2

    def test_regularize_defaults_to_float(self, capsys):
        code, out, _err = run(capsys, "transform", "regularize", "--input", DEMO5)
        assert code == 0
        g = parse_graph(out, Mode.FLOAT)
        assert out_regularity(g) == pytest.approx(2.0)


class TestEulerRoundTrip:
    @pytest.mark.parametrize(
        "demo, scale", [(DEMO5, 13), (DEMO6, 16)], ids=["demo5", "demo6"]
    )
    def test_construct_then_recombine_byte_identical(self, capsys, tmp_path, demo, scale):
        cycle_path = tmp_path / "cycle.dg"
        doc = run_json(
            capsys, "euler-construct", "--input", demo, "--output", str(cycle_path)
        )
        diag = doc["diagnostics"]
        assert diag["scale"] == scale
        assert diag["cycle_nodes"] == scale
        assert diag["edge_weight"] == "2"
        groups_path = tmp_path / "cycle.dg.groups"
        assert groups_path.exists()
        for line in groups_path.read_text().splitlines():
            assert line.startswith("group ")

        code, out, _err = run(
            capsys, "transform", "combine-groups", "--input", str(cycle_path),
            "--groups", str(groups_path),
        )
        assert code == 0
        source = parse_graph(Path(demo).read_text(), Mode.RATIONAL)
        assert out == serialize_graph(source, canonical=True)

    def test_repeat_runs_are_byte_identical(self, capsys, tmp_path):
        first, second = tmp_path / "a.dg", tmp_path / "b.dg"
        run_json(capsys, "euler-construct", "--input", DEMO5, "--output", str(first))
        run_json(capsys, "euler-construct", "--input", DEMO5, "--output", str(second))
        assert first.read_text() == second.read_text()
        assert (tmp_path / "a.dg.groups").read_text() == (
            tmp_path / "b.dg.groups"
        ).read_text()

    def test_irregular_input_fails_with_guidance(self, capsys, tmp_path):
        irregular = tmp_path / "irr.dg"
        g = Graph(Mode.RATIONAL)
        for n, wt in [("p", F(1, 3)), ("q", F(1, 3)), ("r", F(1, 3))]:
            g.add_node(n, wt)
        g.add_edge("p", "q", F(2))
        g.add_edge("q", "r", F(1))
        g.add_edge("r", "p", F(1))
        irregular.write_text(serialize_graph(g))
        code, _out, err = run(
            capsys, "euler-construct", "--input", str(irregular),
            "--output", str(tmp_path / "c.dg"),
        )
        assert code == 1 and "normaliz" in err

    def test_bad_groups_file_reports_its_line(self, capsys, tmp_path):
        cycle_path = tmp_path / "cycle.dg"
        run_json(capsys, "euler-construct", "--input", DEMO5, "--output", str(cycle_path))
        groups = tmp_path / "broken.groups"
        groups.write_text("group v1 v1\nnonsense here\n")
        code, _out, err = run(
            capsys, "transform", "combine-groups", "--input", str(cycle_path),
            "--groups", str(groups),
        )
        assert code == 1 and "line 2" in err


class TestCheckAxioms:
    def test_single_cell_run(self, capsys):
        doc = run_json(
            capsys, "check-axioms", "--axiom", "locality", "--measure", "pr",
            "--trials", "3", "--max-size", "6",
        )
        diag = doc["diagnostics"]
        assert diag["expected_mismatches"] == []
        assert list(diag["cells"]) == ["locality x pagerank"]
        cell = diag["cells"]["locality x pagerank"]
        assert cell["status"] == "PASS"
        assert cell["admissible"] == 3

    def test_failing_cell_ships_a_witness(self, capsys):
        doc = run_json(
            capsys, "check-axioms", "--axiom", "edge-multiplication",
            "--measure", "katz", "--trials", "3", "--max-size", "6",
        )
        cell = doc["diagnostics"]["cells"]["edge-multiplication x katz"]
        assert cell["status"] == "FAIL"
        assert cell["witness"] is not None
        assert "graph" in cell["witness"] and "factor" in cell["witness"]
        assert float(cell["witness_deviation"]) > 1e-8

    def test_deterministic_output(self, capsys):
        args = (
            "check-axioms", "--axiom", "cycle", "--measure", "kp",
            "--trials", "2", "--max-size", "6", "--seed", "5",
        )
        _code, first, _err = run(capsys, *args)
        _code, second, _err = run(capsys, *args)
        assert first == second

    def test_alpha_needs_a_measure(self):
        with pytest.raises(SystemExit) as exc:
            main(["check-axioms", "--alpha", "0.3"])
        assert exc.value.code == 2
