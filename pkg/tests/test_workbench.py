from __future__ import annotations

import json

import numpy as np
import pytest

from ldchoquet.model import EvaluationMatrix
from ldchoquet.workbench import (
    ProblemFormatError,
    evaluations_from_csv,
    evaluations_to_csv,
    load_fixture,
    pareto_fronts,
    problem_from_dict,
    problem_to_dict,
)
from ldchoquet.workbench.cli import main
from ldchoquet.workbench.fixtures import fixture_file_text

from oracles import fronts_by_peeling


@pytest.fixture()
def fixture_files(tmp_path):
    def write(name):
        problem_text, eval_text = fixture_file_text(name)
        p = tmp_path / f"{name}.json"
        e = tmp_path / f"{name}.csv"
        p.write_text(problem_text)
        e.write_text(eval_text)
        return str(p), str(e)

    return write


class TestFronts:
    def test_table_3a_single_front(self, universities):
        ev = universities.problem.evaluations
        ranked = universities.problem.ranked()
        sub = EvaluationMatrix(
            ranked,
            ev.criteria,
            tuple(ev.values[ev.alternatives.index(a)] for a in ranked),
        )
        fronts = pareto_fronts(sub)
        assert len(fronts) == 1
        assert sorted(fronts[0]) == sorted(ranked)

    def test_dominance_chain(self):
        ev = EvaluationMatrix(
            ("a", "b", "c"), ("x", "y"), ((3.0, 3.0), (2.0, 2.0), (1.0, 1.0))
        )
        assert pareto_fronts(ev) == [["a"], ["b"], ["c"]]

    @pytest.mark.parametrize("seed", range(10))
    def test_random_against_peeling_oracle(self, seed):
        rng = np.random.default_rng(seed)
        names = tuple(f"r{k}" for k in range(50))
        rows = tuple(tuple(rng.integers(0, 4, 4).astype(float)) for _ in names)
        ev = EvaluationMatrix(names, ("a", "b", "c", "d"), rows)
        got = [sorted(front) for front in pareto_fronts(ev)]
        want = [sorted(front) for front in fronts_by_peeling(names, rows)]
        assert got == want


class TestIo:
    @pytest.mark.parametrize(
        "name",
        [
            "students_interval",
            "students_piecewise",
            "students_weighted_sum",
            "students_single_capacity",
            "universities",
        ],
    )
    def test_round_trip(self, name):
        bundle = load_fixture(name)
        doc = problem_to_dict(bundle)
        csv_text = evaluations_to_csv(bundle.problem.evaluations)
        again = problem_from_dict(doc, evaluations_from_csv(csv_text))
        assert again.problem == bundle.problem
        assert again.name == bundle.name
        # field order does not matter
        shuffled = json.loads(json.dumps(doc, sort_keys=True))
        assert problem_from_dict(shuffled, bundle.problem.evaluations).problem == bundle.problem

    def test_csv_rejects_bad_header(self):
        with pytest.raises(ProblemFormatError, match="alternative"):
            evaluations_from_csv("id,M\nA,1\n")

    def test_csv_rejects_non_numeric(self):
        with pytest.raises(ProblemFormatError, match="non-numeric"):
            evaluations_from_csv("alternative,M\nA,1x\n")

    def test_csv_rejects_ragged(self):
        with pytest.raises(ProblemFormatError):
            evaluations_from_csv("alternative,M,Ph\nA,1\n")

    def test_bad_range_kind(self):
        bundle = load_fixture("students_interval")
        doc = problem_to_dict(bundle)
        doc["statements"].append({"type": "importance", "i": "M", "j": "Ph", "range": {"kind": "zzz"}})
        with pytest.raises(ProblemFormatError, match="range kind"):
            problem_from_dict(doc, bundle.problem.evaluations)


class TestCli:
    def test_check_universities(self, fixture_files, capsys):
        p, e = fixture_files("universities")
        assert main(["check", "-p", p, "-e", e]) == 0
        out = capsys.readouterr().out
        assert "epsilon_star=0.25" in out
        assert "compatible" in out

    def test_check_incompatible_exit_code(self, fixture_files, capsys):
        p, e = fixture_files("students_weighted_sum")
        assert main(["check", "-p", p, "-e", e]) == 3
        assert "incompatible" in capsys.readouterr().out

    def test_ror_students(self, fixture_files, capsys):
        p, e = fixture_files("students_interval")
        assert main(["ror", "-p", p, "-e", e, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert ["G", "H"] in payload["necessary_pairs"]
        assert ["I", "H"] in payload["necessary_pairs"]

    def test_validate_out_of_scale(self, tmp_path, capsys):
        problem_text, eval_text = fixture_file_text("students_interval")
        bad = eval_text.replace("30,27", "31,27")
        p = tmp_path / "p.json"
        e = tmp_path / "e.csv"
        p.write_text(problem_text)
        e.write_text(bad)
        assert main(["validate", "-p", str(p), "-e", str(e)]) == 2
        assert "out of scale" in capsys.readouterr().out

    def test_validate_ok(self, fixture_files, capsys):
        p, e = fixture_files("students_interval")
        assert main(["validate", "-p", p, "-e", e]) == 0

    def test_malformed_json_exit_code(self, tmp_path, capsys):
        p = tmp_path / "p.json"
        p.write_text("{not json")
        e = tmp_path / "e.csv"
        e.write_text("alternative,M\nA,1\n")
        assert main(["check", "-p", str(p), "-e", str(e)]) == 2

    def test_diagnose_weighted_sum(self, fixture_files, capsys):
        p, e = fixture_files("students_weighted_sum")
        assert main(["diagnose", "-p", p, "-e", e, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["conflicts"] == [[0, 1]]

    def test_diagnose_on_compatible_errors(self, fixture_files, capsys):
        p, e = fixture_files("students_interval")
        assert main(["diagnose", "-p", p, "-e", e]) == 1

    def test_smaa_seed_reproducible_output_file(self, fixture_files, tmp_path, capsys):
        p, e = fixture_files("students_interval")
        out1 = tmp_path / "r1.json"
        out2 = tmp_path / "r2.json"
        args = ["smaa", "-p", p, "-e", e, "--samples", "3000", "--seed", "5"]
        assert main(args + ["--out", str(out1)]) == 0
        capsys.readouterr()
        assert main(args + ["--out", str(out2)]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()
        payload = json.loads(out1.read_text())
        assert payload["alternatives"] == ["G", "H", "I"]
        assert sum(payload["rai"][0]) == pytest.approx(1.0)

    def test_smaa_incompatible_exit_code(self, fixture_files, capsys):
        p, e = fixture_files("students_weighted_sum")
        assert main(["smaa", "-p", p, "-e", e, "--samples", "100"]) == 3

    def test_explain_full_ranking(self, fixture_files, tmp_path, capsys):
        problem_text, eval_text = fixture_file_text("students_interval")
        doc = json.loads(problem_text)
        doc["statements"] = [
            {"type": "full_ranking", "groups": [["A"], ["C"], ["B"], ["E"], ["F"], ["D"]]}
        ]
        p = tmp_path / "p.json"
        e = tmp_path / "e.csv"
        p.write_text(json.dumps(doc))
        e.write_text(eval_text)
        assert main(["explain", "-p", str(p), "-e", str(e)]) == 0
        out = capsys.readouterr().out
        assert "importance" in out

    def test_fronts_command(self, fixture_files, capsys):
        _, e = fixture_files("universities")
        assert main(["fronts", "-e", e, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        # the ten reference universities dominate parts of the sample
        assert sorted(payload["fronts"][0]) == ["U20", "U22", "U29"]


class TestCliBadScale:
    def test_non_increasing_breakpoints_reported(self, tmp_path, capsys):
        problem_text, eval_text = fixture_file_text("students_interval")
        bad = problem_text.replace("[0, 25, 30]", "[0, 25, 25, 30]")
        p = tmp_path / "p.json"
        e = tmp_path / "e.csv"
        p.write_text(bad)
        e.write_text(eval_text)
        rc = main(["validate", "-p", str(p), "-e", str(e)])
        assert rc == 2


class TestCliFixtures:
    def test_list_and_export(self, tmp_path, capsys):
        assert main(["fixture"]) == 0
        listed = capsys.readouterr().out.split()
        assert "universities" in listed
        assert main(["fixture", "universities", "--dir", str(tmp_path)]) == 0
        capsys.readouterr()
        assert (tmp_path / "universities.json").exists()
        assert (tmp_path / "universities.csv").exists()
        assert main([
            "check", "-p", str(tmp_path / "universities.json"),
            "-e", str(tmp_path / "universities.csv"),
        ]) == 0
        assert "epsilon_star=0.25" in capsys.readouterr().out
