import csv
import io
import json

import pytest

from pencillab.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_fixture_report(self, fixtures_dir, capsys):
        code, out, _ = run_cli(
            ["analyze", str(fixtures_dir / "signed_diag_pair.json")], capsys
        )
        assert code == 0
        report = json.loads(out)
        cm = report["condition_matrix"]
        assert cm["0_zero_in_taylor"] is False
        assert cm["i_pencil_singular"] is False
        assert cm["ii_origin_in_joint_range"] is True
        assert cm["iii_range_is_plane"] is True
        points = {(round(p["z1"][0]), round(p["z2"][0])) for p in report["taylor_spectrum"]}
        assert points == {(1, 2), (-1, -2)}

    def test_zero_pencil_all_true(self, fixtures_dir, capsys):
        code, out, _ = run_cli(["analyze", str(fixtures_dir / "zero_pencil_2x2.json")], capsys)
        assert code == 0
        cm = json.loads(out)["condition_matrix"]
        assert all(
            cm[key]
            for key in (
                "0_zero_in_taylor",
                "i_pencil_singular",
                "ii_origin_in_joint_range",
                "iii_range_is_plane",
            )
        )

    def test_minimal_four_by_four(self, fixtures_dir, capsys):
        # canonical minimal-block sums do not have commuting coefficients,
        # so the report carries singularity but no condition matrix
        code, out, _ = run_cli(["analyze", str(fixtures_dir / "minimal_pair_4x4.json")], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["singular"]["verdict"] is True
        assert report["coefficients_commute"] is False
        assert "condition_matrix" not in report
        assert report["kronecker"]["row_minimal"] == [[0, 1], [1, 1]]
        assert report["kronecker"]["col_minimal"] == [[0, 1], [1, 1]]

    def test_malformed_json_exit_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"a": {"rows": 1, "cols": 1, "entries": [[1, 0], [2, 0]]}, '
                       '"b": {"rows": 1, "cols": 1, "entries": [[0, 0]]}}',
                       encoding="utf-8")
        code, _, err = run_cli(["analyze", str(bad)], capsys)
        assert code == 1
        assert "expected 1 entries" in err

    def test_syntax_error_positions(self, tmp_path, capsys):
        bad = tmp_path / "syntax.json"
        bad.write_text("{", encoding="utf-8")
        code, _, err = run_cli(["analyze", str(bad)], capsys)
        assert code == 1
        assert "line 1" in err

    def test_missing_file(self, capsys):
        code, _, err = run_cli(["analyze", "/nonexistent/p.json"], capsys)
        assert code == 1

    def test_byte_identical_reruns(self, fixtures_dir, capsys):
        outs = []
        for _ in range(2):
            code, out, _ = run_cli(
                ["analyze", str(fixtures_dir / "signed_diag_pair.json"), "--seed", "42"],
                capsys,
            )
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]

    def test_out_file(self, fixtures_dir, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(
            ["analyze", str(fixtures_dir / "zero_pencil_2x2.json"), "--out", str(target)],
            capsys,
        )
        assert code == 0
        assert out == ""
        json.loads(target.read_text(encoding="utf-8"))


class TestCampaign:
    def test_small_all_clean(self, tmp_path, capsys):
        code, out, _ = run_cli(
            ["campaign", "all", "--count", "2", "--failure-dir", str(tmp_path / "fails")],
            capsys,
        )
        assert code == 0
        summary = json.loads(out)
        for stats in summary["results"].values():
            assert stats["failed"] == 0
        assert summary["failure_artifacts"] == []

    def test_loose_tolerance_reports_unstable(self, tmp_path, capsys):
        code, out, _ = run_cli(
            [
                "campaign", "roundtrip", "--count", "8",
                "--tol-rank", "1e-2",
                "--failure-dir", str(tmp_path / "fails"),
            ],
            capsys,
        )
        summary = json.loads(out)
        assert summary["results"]["roundtrip"]["unstable"] > 0

    def test_unknown_generator(self, capsys):
        code, _, err = run_cli(["campaign", "bogus", "--count", "1"], capsys)
        assert code == 1
        assert "unknown generator" in err

    def test_count_zero_empty_summary(self, tmp_path, capsys):
        code, out, _ = run_cli(
            ["campaign", "necessity", "--count", "0",
             "--failure-dir", str(tmp_path / "fails")],
            capsys,
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["results"]["necessity"] == {"passed": 0, "failed": 0, "unstable": 0}


class TestShiftExperiment:
    def test_csv_rows(self, capsys):
        code, out, _ = run_cli(["shift-experiment", "--nmax", "4"], capsys)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["n"] for r in rows] == ["1", "2", "3", "4"]
        for row in rows:
            assert row["singular"] == "False"
            assert row["origin_in_taylor_spectrum"] == "False"
            assert float(row["det_coeff_lead_error"]) <= 1e-8
            assert float(row["det_coeff_max_other"]) <= 1e-8
            assert row["koszul_exact_at_origin"] == "True"

    def test_json_format(self, capsys):
        code, out, _ = run_cli(["shift-experiment", "--nmax", "2", "--format", "json"], capsys)
        assert code == 0
        rows = json.loads(out)
        assert rows[0]["n"] == 1
        assert rows[0]["koszul_rank_d1"] == 2

    def test_nmax_bounds(self, capsys):
        code, _, err = run_cli(["shift-experiment", "--nmax", "0"], capsys)
        assert code == 1
        assert "1..50" in err
