import csv
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from katolab.config import RunConfig, parse_config_text
from katolab.errors import ConfigError

MINIMAL = """\
kernel.family = gaussian
kernel.dim = 1
measure.kind = point_masses
measure.atoms = 0:1.0
sweep.p = 1
sweep.centers_explicit = 0
sweep.centers_support = 0
sweep.centers_random = 0
"""


# --------------------------------------------------------------------------
# config parsing


def test_parse_config_basic():
    kv = parse_config_text("a.b = 1  # comment\n\nc.d = x = y\n")
    assert kv == {"a.b": "1", "c.d": "x = y"}


def test_parse_config_reports_line_numbers():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("a.b = 1\nnot an assignment\n")


def test_parse_config_rejects_undotted_keys():
    with pytest.raises(ConfigError, match="dotted"):
        parse_config_text("plainkey = 1\n")


def test_parse_config_rejects_duplicates():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config_text("a.b = 1\na.b = 2\n")


def test_run_config_from_dict():
    run = RunConfig.from_dict(parse_config_text(MINIMAL))
    assert run.model.family == "gaussian"
    assert run.measure.dim == 1
    assert run.p_list == [1.0]


def test_run_config_bad_kernel_block():
    with pytest.raises(ConfigError, match="kernel"):
        RunConfig.from_dict(parse_config_text(
            "kernel.family = gaussian\nkernel.nonsense = 3\n"))


def test_run_config_atoms_parse():
    run = RunConfig.from_dict(parse_config_text(
        "kernel.family = gaussian\nkernel.dim = 2\n"
        "measure.kind = point_masses\nmeasure.atoms = 0,0:1.0; 1,2:0.5\n"
        "sweep.p = 1\n"))
    assert run.measure.points.shape == (2, 2)
    assert run.measure.weights.tolist() == [1.0, 0.5]


# --------------------------------------------------------------------------
# CLI end to end


def _run_cli(*args):
    return subprocess.run([sys.executable, "-m", "katolab.cli", *args],
                          capture_output=True, text=True)


def test_cli_classify_round_trip(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(MINIMAL)
    out = tmp_path / "out"
    proc = _run_cli("classify", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert (out / "report.txt").exists()
    with open(out / "classify.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows
    # full-precision round trip: re-parsing the CSV reproduces the floats
    for row in rows:
        v = float(row["value"])
        assert f"{v:.16e}" == row["value"]


def test_cli_classify_deterministic(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(MINIMAL)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    p1 = _run_cli("classify", "--config", str(cfg), "--out", str(out1))
    p2 = _run_cli("classify", "--config", str(cfg), "--out", str(out2))
    assert p1.returncode == p2.returncode == 0
    assert (out1 / "classify.csv").read_text() == \
        (out2 / "classify.csv").read_text()


def test_cli_error_exit_code(tmp_path: Path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kernel.family = no-such-family\n")
    proc = _run_cli("classify", "--config", str(cfg),
                    "--out", str(tmp_path / "out"))
    assert proc.returncode == 1
    assert proc.stderr.strip()


def test_cli_missing_config_file(tmp_path: Path):
    proc = _run_cli("classify", "--config", str(tmp_path / "nope.cfg"),
                    "--out", str(tmp_path / "out"))
    assert proc.returncode == 1


def test_cli_p_override(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(MINIMAL)
    out = tmp_path / "out"
    proc = _run_cli("classify", "--config", str(cfg), "--out", str(out),
                    "--p", "1,2")
    assert proc.returncode == 0, proc.stderr
    with open(out / "classify.csv") as fh:
        ps = {row["p"] for row in csv.DictReader(fh)}
    assert len(ps) == 2


def test_cli_sweep_p(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "kernel.family = gaussian\nkernel.dim = 3\n"
        "measure.kind = lebesgue\nmeasure.dim = 3\n"
        "sweep.p = 1, 2\nsweep.centers_explicit = 0,0,0\n"
        "sweep.centers_support = 0\nsweep.centers_random = 0\n")
    out = tmp_path / "out"
    proc = _run_cli("sweep-p", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    with open(out / "sweep_p.csv") as fh:
        rows = list(csv.DictReader(fh))
    got = {float(r["p"]): float(r["delta_hat"]) for r in rows}
    assert got[1.0] == pytest.approx(1.0, rel=1e-3)
    assert got[2.0] == pytest.approx(0.25, rel=1e-3)


def test_cli_kernel_check(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kernel.family = gaussian\nkernel.dim = 1\n"
                   "measure.kind = lebesgue\nmeasure.dim = 1\n")
    out = tmp_path / "out"
    proc = _run_cli("kernel-check", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    text = (out / "kernel_check.csv").read_text()
    assert "phi1 <= phi2" in text
