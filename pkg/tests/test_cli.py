import json
import sys
from unittest import mock

import numpy as np
import pytest

from vecdep.cli import main
from vecdep.io import parse_csv_matrix


def run_cli(args: list[str]) -> int:
    with mock.patch.object(sys, "argv", ["vecdep"] + list(args)):
        try:
            main()
        except SystemExit as exc:
            return int(exc.code or 0)
    return 0


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    data = root / "data.csv"
    groups = root / "groups.json"
    code = run_cli(
        ["simulate", "--family", "clayton", "--theta", "2.0", "--dims", "2,2",
         "--n", "120", "--seed", "11", "-o", str(data)]
    )
    assert code == 0
    groups.write_text(
        json.dumps({"groups": [
            {"name": "a", "columns": ["x1", "x2"]},
            {"name": "b", "columns": ["y1", "y2"]},
        ]}),
        encoding="utf-8",
    )
    return root


class TestSimulate:
    def test_deterministic_byte_identical(self, tmp_path):
        args = ["simulate", "--family", "gumbel", "--tau", "0.5", "--dims", "2,3",
                "--n", "50", "--seed", "3"]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(args + ["-o", str(f1)]) == 0
        assert run_cli(args + ["-o", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_output_parses(self, workspace):
        cols, values = parse_csv_matrix((workspace / "data.csv").read_text())
        assert cols == ["x1", "x2", "y1", "y2"]
        assert values.shape == (120, 4)
        assert ((values > 0) & (values < 1)).all()

    def test_missing_theta_is_usage_error(self, capsys):
        code = run_cli(["simulate", "--family", "clayton", "--dims", "2,2",
                        "--n", "10", "--seed", "0"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_dims_and_dim_both_rejected(self):
        code = run_cli(["simulate", "--family", "independence", "--dims", "2,2",
                        "--dim", "4", "--n", "10", "--seed", "0"])
        assert code == 2

    def test_missing_required_option(self):
        assert run_cli(["simulate", "--family", "clayton"]) == 2


class TestCollapse:
    def test_single_column_csv(self, workspace, tmp_path):
        out = tmp_path / "coll.csv"
        code = run_cli(
            ["collapse", "--input", str(workspace / "data.csv"),
             "--groups", str(workspace / "groups.json"), "--group", "a",
             "--kind", "weighted-average",
             "--collapse-params", '{"weights": [0.5, 0.5]}', "-o", str(out)]
        )
        assert code == 0
        cols, values = parse_csv_matrix(out.read_text())
        assert cols == ["a_collapsed"]
        assert values.shape == (120, 1)

    def test_unknown_group_is_usage_error(self, workspace):
        code = run_cli(
            ["collapse", "--input", str(workspace / "data.csv"),
             "--groups", str(workspace / "groups.json"), "--group", "zzz",
             "--kind", "maximum"]
        )
        assert code == 2

    def test_bad_cell_is_data_error(self, workspace, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x1,x2,y1,y2\n1,2,3,4\n1,oops,3,4\n", encoding="utf-8")
        code = run_cli(
            ["collapse", "--input", str(bad),
             "--groups", str(workspace / "groups.json"), "--group", "a",
             "--kind", "maximum"]
        )
        assert code == 3


class TestMeasure:
    def test_json_output_round_trip(self, workspace, tmp_path):
        out = tmp_path / "m.json"
        code = run_cli(
            ["measure", "--input", str(workspace / "data.csv"),
             "--groups", str(workspace / "groups.json"),
             "--group-a", "a", "--group-b", "b", "--collapse", "distance",
             "--measure", "tau", "--ci", "asymptotic", "-o", str(out)]
        )
        assert code == 0
        body = json.loads(out.read_text())
        assert body["schema"] == "vecdep/1"
        assert body["measure"] == "tau"
        assert body["ci"][0] <= body["estimate"] <= body["ci"][1]

    def test_degenerate_exit_code(self, workspace, tmp_path):
        const = tmp_path / "const.csv"
        const.write_text(
            "x1,x2,y1,y2\n" + "1,1,1,1\n" * 20, encoding="utf-8"
        )
        code = run_cli(
            ["measure", "--input", str(const),
             "--groups", str(workspace / "groups.json"),
             "--group-a", "a", "--group-b", "b",
             "--collapse", "weighted-average",
             "--collapse-params", '{"weights": [0.5, 0.5]}',
             "--measure", "tau"]
        )
        assert code == 4


class TestAssess:
    def test_csv_format(self, workspace, capsys):
        code = run_cli(
            ["assess", "--input", str(workspace / "data.csv"),
             "--groups", str(workspace / "groups.json"), "--collapse", "maximum"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "group_a,group_b,index,u_a,u_b"
        assert len(lines) == 1 + 120
        assert lines[1].startswith("a,b,1,")

    def test_svg_format(self, workspace, tmp_path):
        out = tmp_path / "p.svg"
        code = run_cli(
            ["assess", "--input", str(workspace / "data.csv"),
             "--groups", str(workspace / "groups.json"), "--collapse", "maximum",
             "--format", "svg", "-o", str(out)]
        )
        assert code == 0
        text = out.read_text()
        assert text.lstrip().startswith("<svg")
        assert text.count("<circle") == 120


class TestKendall:
    def test_univariate_csv(self, capsys):
        code = run_cli(
            ["kendall", "--family", "independence", "--dims", "2",
             "--mode", "univariate", "--grid", "0.5", "--format", "csv"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,value"
        assert float(lines[1].split(",")[1]) == pytest.approx(0.5 + 0.5 * np.log(2.0))

    def test_sample_defaults_to_csv(self, tmp_path):
        out = tmp_path / "s.csv"
        code = run_cli(
            ["kendall", "--family", "clayton", "--theta", "2.0", "--dims", "2,2",
             "--mode", "sample", "--n", "30", "--seed", "1", "-o", str(out)]
        )
        assert code == 0
        cols, values = parse_csv_matrix(out.read_text())
        assert cols == ["u1", "u2"]
        assert values.shape == (30, 2)

    def test_joint_json(self, capsys):
        code = run_cli(
            ["kendall", "--family", "gumbel", "--tau", "0.5", "--dims", "2,2",
             "--mode", "joint", "--grid", "0.25,0.75", "--format", "json"]
        )
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert body["schema"] == "vecdep/1"
        assert len(body["grid"]) == 4


class TestRolling:
    def test_row_count_756_250_1(self, tmp_path):
        data = tmp_path / "long.csv"
        groups = tmp_path / "g.json"
        assert run_cli(
            ["simulate", "--family", "clayton", "--theta", "2.0", "--dims", "1,1",
             "--n", "756", "--seed", "9", "-o", str(data)]
        ) == 0
        groups.write_text(
            json.dumps({"groups": [
                {"name": "a", "columns": ["x1"]}, {"name": "b", "columns": ["y1"]},
            ]}),
            encoding="utf-8",
        )
        out = tmp_path / "roll.csv"
        code = run_cli(
            ["rolling", "--input", str(data), "--groups", str(groups),
             "--group-a", "a", "--group-b", "b",
             "--collapse", "weighted-average",
             "--collapse-params", '{"weights": [1.0]}',
             "--window", "250", "--step", "1", "-o", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "window_end,estimate,std_error,ci_lo,ci_hi"
        assert len(lines) == 1 + 507
        assert lines[1].split(",")[0] == "250"
        assert lines[-1].split(",")[0] == "756"
        # no CI requested: trailing cells stay empty
        assert lines[1].endswith(",,,")

    def test_window_larger_than_data_refused(self, workspace):
        code = run_cli(
            ["rolling", "--input", str(workspace / "data.csv"),
             "--groups", str(workspace / "groups.json"),
             "--group-a", "a", "--group-b", "b", "--collapse", "maximum",
             "--window", "500"]
        )
        assert code == 2
