import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from scmarginal.cli import main

MEDICATION = """\
# medication (X) and genotype (Y) studies
p_z0_given_x0 = 1/2
p_z0_given_x1 = 2/5
p_x1 = 1/2
p_z0_given_y0 = 1/12
p_z0_given_y1 = 1
p_y1 = 2/5
"""

AND_JOINT = """\
theta_x = 1/2
theta_y = 3/4
theta_z_00 = 0
theta_z_01 = 0
theta_z_10 = 0
theta_z_11 = 1
"""

INCONSISTENT = """\
p_z0_given_x0 = 0.3
p_z0_given_x1 = 0.3
p_x1 = 0.5
p_z0_given_y0 = 0.6
p_z0_given_y1 = 0.6
p_y1 = 0.5
"""

COPY = """\
alpha_00 = 1/2
alpha_01 = 0
alpha_10 = 0
alpha_11 = 1/2
beta_00 = 1/4
beta_01 = 1/4
beta_10 = 1/4
beta_11 = 1/4
"""

COPY_DO = "z0_do0 = 1\nz1_do0 = 0\nz0_do1 = 0\nz1_do1 = 1\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in (("med", MEDICATION), ("and", AND_JOINT), ("bad", INCONSISTENT),
                       ("copy", COPY), ("do", COPY_DO)):
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        out[name] = str(path)
    return out


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMerge:
    def test_pretty(self, files, capsys):
        code, out, _ = run(["merge", files["med"]], capsys)
        assert code == 0
        assert "lambda_a merged  [2/5, 2/5]" in out
        assert "response a (unique)  (2/5, 1/2, 1/10, 0)" in out

    def test_csv_and_report(self, files, capsys, tmp_path):
        report = tmp_path / "r.json"
        code, out, _ = run(["merge", files["and"], "--format", "csv", "--report", str(report)], capsys)
        assert code == 0
        row = next(csv.DictReader(io.StringIO(out)))
        # Z = X and Y: P(Z=0|X=1) = 1 - 3/4 and P(Z=0|Y=1) = 1/2 pin both priors to points
        assert (row["lambda_a_merged_lo"], row["lambda_a_merged_hi"]) == ("1/4", "1/4")
        d = json.loads(report.read_text())
        assert d["lambda_b_merged"] == ["1/2", "1/2"] and d["prop1_member"] is True

    def test_support_method(self, files, capsys):
        _, hull, _ = run(["merge", files["and"]], capsys)
        _, support, _ = run(["merge", files["and"], "--method", "support"], capsys)
        assert hull == support

    def test_inconsistent_exit_2(self, files, capsys):
        code, _, err = run(["merge", files["bad"]], capsys)
        assert code == 2 and "inconsistent" in err

    def test_input_errors(self, files, capsys, tmp_path):
        assert run(["merge", str(tmp_path / "missing.txt")], capsys)[0] == 1
        partial = tmp_path / "partial.txt"
        partial.write_text("p_x1 = 1/2\n")
        assert run(["merge", str(partial)], capsys)[0] == 1
        garbage = tmp_path / "garbage.txt"
        garbage.write_text(MEDICATION.replace("1/12", "abc"))
        assert run(["merge", str(garbage)], capsys)[0] == 1
        degenerate = tmp_path / "degenerate.txt"
        degenerate.write_text(MEDICATION.replace("p_x1 = 1/2", "p_x1 = 0"))
        assert run(["merge", str(degenerate)], capsys)[0] == 1

    def test_usage_error_exit_1(self, files):
        with pytest.raises(SystemExit) as exc:
            main(["merge", files["med"], "--format", "xml"])
        assert exc.value.code == 1


class TestExampleAnd:
    def test_default(self, capsys):
        code, out, _ = run(["example-and"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 20
        assert all(r["reference_match"] == "True" for r in rows)

    def test_explicit(self, capsys):
        _, out, _ = run(["example-and", "--theta", "1/2", "3/4"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["lambda_a_merged_lo"] for r in rows] == ["1/2", "1/4"]
        assert rows[1]["lambda_b_star"] == "1/3"

    def test_out_of_range(self, capsys):
        assert run(["example-and", "--theta", "1/3"], capsys)[0] == 1


class TestExperiment:
    def test_columns_and_summary(self, capsys):
        code, out, _ = run(["experiment-cdf", "--n", "5", "--seed", "3"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 6
        assert [r["trial"] for r in rows] == ["0", "1", "2", "3", "4", "summary"]
        for r in rows[:-1]:
            assert r["nested"] == "True" and r["prop1_member"] == "True" and r["witness_valid"] == "True"
            assert F(r["box_ratio"]) <= 1
            assert abs(float(F(r["box_ratio"])) - float(r["box_ratio_dec"])) < 1e-11
        summary = rows[-1]
        box_lt1 = sum(F(r["box_ratio"]) < 1 for r in rows[:-1]) / 5
        assert float(summary["frac_box_lt1"]) == pytest.approx(box_lt1)
        assert "wall_time" not in rows[0]

    def test_reproducible_across_workers(self, tmp_path):
        outs = []
        for workers in ("1", "2", "1"):
            path = tmp_path / f"out{len(outs)}.csv"
            assert main(["experiment-cdf", "--n", "6", "--seed", "11", "--alpha", "0.5",
                         "--beta", "0.5", "--workers", workers, "-o", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_timing_column(self, capsys):
        _, out, _ = run(["experiment-cdf", "--n", "2", "--timing"], capsys)
        assert "wall_time" in out.splitlines()[0]

    def test_bad_n(self, capsys):
        assert run(["experiment-cdf", "--n", "0"], capsys)[0] == 1


class TestSweep:
    def test_single_frame(self, capsys):
        code, out, _ = run(["sweep", "--grid", "1"], capsys)
        frames = [json.loads(line) for line in out.splitlines()]
        assert code == 0 and len(frames) == 1
        assert frames[0]["p_x1"] == frames[0]["p_y1"] == "1/2"

    def test_generic_differs_from_prior(self, capsys):
        _, out, _ = run(["sweep", "--grid", "3"], capsys)
        frames = [json.loads(line) for line in out.splitlines()]
        assert len(frames) == 9 and any(not f["region_equals_prior"] for f in frames)

    def test_xor_and_custom(self, capsys):
        assert run(["sweep", "--conditionals", "xor", "--grid", "2"], capsys)[0] == 0
        code, out, _ = run(["sweep", "--conditionals", "0.1,0.2,0.3,0.9", "--grid", "1"], capsys)
        assert code == 0 and json.loads(out)["theta_z"] == ["1/10", "1/5", "3/10", "9/10"]

    def test_bad_conditionals(self, capsys):
        assert run(["sweep", "--conditionals", "0.1,0.2"], capsys)[0] == 1
        assert run(["sweep", "--conditionals", "0.1,0.2,0.3,2"], capsys)[0] == 1


class TestConfounded:
    def test_copy_model(self, files, capsys):
        code, out, _ = run(["confounded", files["copy"], "--objective", "ra=2", "--monotonic-x",
                            "--monotonic-y", "--do-x", files["do"]], capsys)
        assert code == 0 and "bounds [1, 1]" in out and "status feasible" in out
        assert "interventional=4" in out and "monotonicity=2" in out

    def test_loose_without_extra_data(self, files, capsys):
        code, out, _ = run(["confounded", files["copy"], "--objective", "ra=2"], capsys)
        # full confounding: X=0 -> constant 0, X=1 -> constant 1 explains the data too
        assert code == 0 and "bounds [0, 1]" in out

    def test_malformed_objective(self, files, capsys):
        assert run(["confounded", files["copy"], "--objective", "lambda_q"], capsys)[0] == 1
        assert run(["confounded", files["copy"], "--objective", "cf_x_given_xy"], capsys)[0] == 1

    def test_infeasible_exit_3(self, files, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text(COPY.replace("beta_00 = 1/4\nbeta_01 = 1/4", "beta_00 = 1/2\nbeta_01 = 0"))
        code, _, err = run(["confounded", str(bad), "--objective", "mass"], capsys)
        assert code == 3 and "infeasible" in err


def test_console_script_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "scmarginal.cli", "merge", files["bad"]],
                          capture_output=True, text=True)
    assert proc.returncode == 2
