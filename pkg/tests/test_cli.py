"""End-to-end tests of the command-line surface via cli_dispatch."""

import re

import pytest

from qdecision.cli import OUTPUT_DIR_ENV, cli_dispatch

HEADER = "label,p0,p1,q0,observed_pk"


def run(capsys, *argv):
    code = cli_dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestReport:
    def test_bundled_table(self, capsys):
        code, out, _ = run(capsys, "report", "bundled")
        assert code == 0
        lines = out.splitlines()
        by_label = {}
        for line in lines:
            m = re.match(r"(\S+?)(?: \[\d\])?\s{2,}", line)
            if m and m.group(1) in ("shafir", "croson", "li-taplin", "busemeyer"):
                by_label[m.group(1)] = line.split()
        assert set(by_label) == {"shafir", "croson", "li-taplin", "busemeyer"}
        # classical predictions at 2 decimals line up with the published table,
        # except croson, which carries a discrepancy footnote
        assert "0.91" in by_label["shafir"]
        assert "0.75" in by_label["li-taplin"]
        assert "0.88" in by_label["busemeyer"]
        assert "0.49" in by_label["croson"] or "0.50" in by_label["croson"]
        assert "[1]" in out  # croson footnote marker
        assert "0.45" in out  # footnote cites the published value

    def test_quantum_bounds_columns(self, capsys):
        code, out, _ = run(capsys, "report", "bundled")
        assert code == 0
        shafir = next(l for l in out.splitlines() if l.startswith("shafir"))
        assert "0.01" in shafir and "0.99" in shafir

    def test_output_csv(self, capsys, tmp_path):
        target = tmp_path / "rep.csv"
        code, _, err = run(capsys, "report", "bundled", "--output", str(target))
        assert code == 0
        assert target.exists()
        lines = target.read_text().splitlines()
        assert len(lines) == 5
        assert lines[0].startswith("label,")

    def test_figures_written(self, capsys, tmp_path):
        target = tmp_path / "rep.csv"
        code, _, _ = run(
            capsys,
            "report",
            "bundled",
            "--output",
            str(target),
            "--figures",
            "--resolution",
            "31",
        )
        assert code == 0
        pngs = sorted(p.name for p in tmp_path.glob("*.png"))
        assert pngs == [
            "rep_busemeyer.png",
            "rep_croson.png",
            "rep_li-taplin.png",
            "rep_shafir.png",
        ]

    def test_decimals_flag(self, capsys):
        code, out, _ = run(capsys, "report", "bundled", "--decimals", "3")
        assert code == 0
        assert "0.905" in out
        assert "0.495" in out


class TestBounds:
    def test_bundled(self, capsys):
        code, out, _ = run(capsys, "bounds", "bundled", "--decimals", "3")
        assert code == 0
        shafir = next(l for l in out.splitlines() if l.startswith("shafir"))
        assert "0.014" in shafir
        assert "0.986" in shafir


class TestTrajectory:
    def test_writes_samples(self, capsys, tmp_path):
        target = tmp_path / "traj.csv"
        code, out, _ = run(
            capsys,
            "trajectory",
            "bundled",
            "--label",
            "shafir",
            "--samples",
            "16",
            "--output",
            str(target),
        )
        assert code == 0
        lines = target.read_text().splitlines()
        assert lines[0] == "theta0,theta1,cos_theta0,cos_theta1"
        assert len(lines) > 1

    def test_unreachable_target(self, capsys):
        code, out, _ = run(
            capsys, "trajectory", "bundled", "--label", "shafir", "--target", "0.001"
        )
        assert code == 0
        assert "empty" in out

    def test_unknown_label(self, capsys):
        code, _, err = run(capsys, "trajectory", "bundled", "--label", "nope")
        assert code == 1
        assert "nope" in err


class TestIntersect:
    def test_pair(self, capsys):
        code, out, _ = run(
            capsys, "intersect", "bundled", "--labels", "shafir,croson"
        )
        assert code == 0
        assert "-0.917" in out
        assert "-0.720" in out
        assert "in_range=yes" in out

    def test_check_all_odd_man_out(self, capsys):
        code, out, _ = run(
            capsys,
            "intersect",
            "bundled",
            "--labels",
            "shafir,croson",
            "--check-all",
        )
        assert code == 0
        residuals = {
            m.group(1): abs(float(m.group(2)))
            for m in re.finditer(r"residual (\S+): ([+-]\d+\.\d+)", out)
        }
        assert residuals["li-taplin"] >= 10 * residuals["busemeyer"]

    def test_parallel_lines_exit_2(self, capsys, tmp_path):
        # two copies of the same experiment give coincident level sets
        path = tmp_path / "dup.csv"
        path.write_text(
            HEADER + "\na,0.97,0.84,0.5,0.63\nb,0.97,0.84,0.5,0.63\n"
        )
        code, _, err = run(capsys, "intersect", str(path), "--labels", "a,b")
        assert code == 2
        assert err


class TestContour:
    def test_csv_default_name(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        code, out, _ = run(
            capsys, "contour", "bundled", "--label", "croson", "--resolution", "5"
        )
        assert code == 0
        target = tmp_path / "contour_croson.csv"
        assert target.exists()
        assert target.read_text().splitlines()[0] == "theta0,theta1,value,region"

    def test_svg_explicit_output(self, capsys, tmp_path):
        target = tmp_path / "c.svg"
        code, _, _ = run(
            capsys,
            "contour",
            "bundled",
            "--label",
            "shafir",
            "--format",
            "svg",
            "--resolution",
            "21",
            "--output",
            str(target),
        )
        assert code == 0
        assert target.read_text().startswith("<?xml")

    def test_png(self, capsys, tmp_path):
        target = tmp_path / "c.png"
        code, _, _ = run(
            capsys,
            "contour",
            "bundled",
            "--label",
            "shafir",
            "--format",
            "png",
            "--resolution",
            "21",
            "--output",
            str(target),
        )
        assert code == 0
        assert target.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestOracleCheck:
    def test_bundled_passes(self, capsys):
        code, out, _ = run(capsys, "oracle-check", "bundled", "--grid", "7")
        assert code == 0
        assert "max |closed-form - amplitude|" in out


class TestExtremalQ:
    def test_prints_weights(self, capsys):
        code, out, _ = run(capsys, "extremal-q", "--p0", "0.97", "--p1", "0.84")
        assert code == 0
        assert "q_max" in out and "q_min" in out
        q_max = float(re.search(r"q_max\s*=\s*([\d.]+)", out).group(1))
        q_min = float(re.search(r"q_min\s*=\s*([\d.]+)", out).group(1))
        assert 0.0 < q_min < q_max < 1.0

    def test_boundary_rejected(self, capsys):
        code, _, err = run(capsys, "extremal-q", "--p0", "1.0", "--p1", "0.84")
        assert code == 1
        assert err


class TestExitCodes:
    def test_validation_error_is_1(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(HEADER + "\nwide,1.2,0.5,0.5,0.4\n")
        code, _, err = run(capsys, "report", str(path))
        assert code == 1
        assert "wide" in err

    def test_missing_file_is_3(self, capsys, tmp_path):
        code, _, err = run(capsys, "report", str(tmp_path / "missing.csv"))
        assert code == 3
        assert err

    def test_unknown_subcommand_is_1(self, capsys):
        code, _, _ = run(capsys, "frobnicate", "bundled")
        assert code == 1

    def test_usage_error_is_1(self, capsys):
        code, _, _ = run(capsys, "trajectory", "bundled")  # missing --label
        assert code == 1

    def test_empty_input_warns_and_exits_0(self, capsys, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(HEADER + "\n")
        code, out, err = run(capsys, "report", str(path))
        assert code == 0
        assert "no records" in err
