"""The rieszcert command line."""
import json
import subprocess
import sys
from pathlib import Path

import pytest

from rieszcert import cli

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestUsage:
    def test_no_command(self, capsys):
        assert run(capsys)[0] == 64

    @pytest.mark.parametrize("argv", [
        ["certify", "--max-depth", "x"],
        ["certify", "--s", "2", "--conjugate"],
        ["scan"],
        ["bogus"],
        ["certify", "--claim", "C99"],
        ["certify", "--claim", "C1", "--p", "0.5"],
        ["extremize"],
        ["report", "--in", "/no/such/dir"],
    ])
    def test_rejected(self, capsys, argv):
        try:
            code = cli.main(argv)
        except SystemExit as exc:  # argparse errors exit directly
            code = exc.code
        assert code == 64

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "rieszcert.cli", "certify", "--list"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and "C1 " in proc.stdout


class TestCertify:
    def test_proved(self, capsys, tmp_path):
        out = tmp_path / "c1.json"
        code, _, _ = run(capsys, "certify", "--claim", "C1", "--p", "1.5", "--conjugate", "--out", str(out))
        assert code == 0
        cert = json.loads(out.read_text())[0]
        assert cert["verdict"] == "proved" and cert["s"] == pytest.approx(3.0)

    def test_counterexample_needs_expect(self, capsys):
        code, out, _ = run(capsys, "certify", "--claim", "C1", "--p", "1.5", "--s", "4")
        assert code == 1
        cert = json.loads(out)[0]
        assert cert["verdict"] == "refuted"
        r, t = cert["counterexample"]["point"]
        assert abs(r - 0.5) < 0.15 and abs(t - 1.5708) < 0.25
        assert run(capsys, "certify", "--claim", "C1", "--p", "1.5", "--s", "4", "--expect", "refuted")[0] == 0

    def test_inconclusive(self, capsys):
        code, out, _ = run(capsys, "certify", "--claim", "C1", "--p", "1.5", "--max-depth", "5")
        assert code == 2
        assert json.loads(out)[0]["verdict"] == "inconclusive"

    def test_stable_output(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            run(capsys, "certify", "--claim", "C4", "--stable-output", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()
        assert "elapsed_ms" not in a.read_text()

    def test_workers_flag(self, capsys):
        outs = [run(capsys, "certify", "--claim", "C2", "--p", "1.5", "--stable-output",
                    "--workers", w)[1] for w in ("1", "3")]
        assert outs[0] == outs[1]


class TestOtherCommands:
    def test_ratio_single_frequency(self, capsys):
        code, out, _ = run(capsys, "ratio", "--coeffs", str(DATA / "exp_it.json"), "--p", "1.7", "--conjugate")
        assert code == 0
        rep = json.loads(out)
        assert rep["ratio_forward"] == pytest.approx(1.0, abs=1e-12)

    def test_ratio_bad_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert run(capsys, "ratio", "--coeffs", str(bad), "--p", "1.5")[0] == 64

    def test_scan(self, capsys, tmp_path):
        out = tmp_path / "scan.csv"
        code, text, _ = run(capsys, "scan", "--p-list", "1.5,3", "--trials", "20", "--degree", "4", "--out", str(out))
        assert code == 0 and "p=1.5" in text
        assert len(out.read_text().splitlines()) == 41

    def test_extremize(self, capsys, tmp_path):
        out = tmp_path / "best.json"
        code, text, _ = run(capsys, "extremize", "--p", "1.5", "--direction", "fwd", "--degree", "4",
                            "--budget", "500", "--out", str(out))
        assert code == 0
        res = json.loads(text)
        assert 1.0 < res["best_ratio"] <= res["constant"] + 1e-9
        assert json.loads(out.read_text())["degree"] == 4

    def test_stationary(self, capsys):
        code, text, _ = run(capsys, "stationary", "--p", "1.5", "--s", "3", "--tol", "1e-10")
        assert code == 0 and "r in [0.5374" in text

    def test_report(self, capsys, tmp_path):
        run(capsys, "certify", "--claim", "C4", "--out", str(tmp_path / "a.json"))
        run(capsys, "certify", "--claim", "C1", "--p", "1.5", "--s", "4", "--expect", "refuted",
            "--out", str(tmp_path / "b.json"))
        code, text, _ = run(capsys, "report", "--in", str(tmp_path))
        assert code == 0
        assert "C4" in text and "C1" in text and "refuted: 1" in text
        run(capsys, "certify", "--claim", "C1", "--p", "1.5", "--max-depth", "5",
            "--out", str(tmp_path / "c.json"))
        assert run(capsys, "report", "--in", str(tmp_path))[0] == 2
