import csv
import io
import json

import pytest

from pairsec import cli
from pairsec.cli import SCHEMA_VERSION, main, run
from pairsec.norm_mc import FAST_SAMPLES


def _json(argv):
    text, code, _ = run(argv)
    return json.loads(text), code


def test_list_curves_formats():
    rep, code = _json(["list-curves"])
    assert code == 0 and rep["schema_version"] == SCHEMA_VERSION
    names = [r["curve"] for r in rep["rows"]]
    assert len(names) == 11 and "BN256" in names
    text, _, _ = run(["list-curves", "--format", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert "curve" in rows[0]
    assert any("BN256" in r for r in rows[1:])
    md, _, _ = run(["list-curves", "--format", "markdown"])
    assert md.startswith("<!-- list-curves schema")
    assert "| BN256 |" in md


def test_asymptote_json():
    rep, code = _json(["asymptote", "3072"])
    assert code == 0
    assert rep["command"] == "asymptote"
    for key in ("schema_version", "tool_version", "config_hash", "samples", "seed", "model"):
        assert key in rep


def test_estimate_fast(capsys):
    rep, code = _json(["estimate", "BN256", "--fast"])
    assert code == 0
    assert rep["samples"] == FAST_SAMPLES
    assert rep["config"]["final_method"] == "float"
    row = rep["rows"][0]
    assert row["curve"] == "BN256" and row["status"] == "ok"
    assert abs(row["security_bits_raw"] - 99.92) < 3


def test_exit_codes(tmp_path, capsys):
    assert main(["estimate", "NOPE-1"]) == 2
    assert main(["estimate"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["estimate", "BN256", "--model", "XYZ"]) == 2
    assert main(["estimate", "BN256", "--samples", "0"]) == 2
    assert main(["list-curves", "--jobs", "0"]) == 2
    cfg = tmp_path / "tiny.ini"
    cfg.write_text("[grid]\nlog2B_max = 8\n[run]\nsamples = 64\n")
    assert main(["estimate", "BN256", "--fast", "--config", str(cfg), "--format", "csv"]) == 1
    assert main(["--version"]) == 0
    err = capsys.readouterr().err
    assert "pairsec: error" in err


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\nmodel = GS\nseed = 5\nsamples = 300\n[sweep]\np_min = 300\n")
    args = cli.build_parser().parse_args(["list-curves", "--config", str(cfg), "--seed", "7"])
    rc = cli.resolve_config(args)
    assert (rc.model, rc.seed, rc.samples, rc.p_min) == ("GS", 7, 300, 300)
    # --fast only fills samples in when nothing set them
    args = cli.build_parser().parse_args(["list-curves", "--config", str(cfg), "--fast"])
    assert cli.resolve_config(args).samples == 300
    args = cli.build_parser().parse_args(["list-curves", "--fast"])
    assert cli.resolve_config(args).samples == FAST_SAMPLES
    bad = tmp_path / "bad.ini"
    bad.write_text("[run]\nfrobs = 1\n")
    assert main(["list-curves", "--config", str(bad)]) == 2
    assert main(["list-curves", "--config", str(tmp_path / "missing.ini")]) == 2


def test_config_hash_tracks_config(tmp_path):
    a, _ = _json(["asymptote", "1024"])
    b, _ = _json(["asymptote", "1024", "--seed", "3"])
    c, _ = _json(["asymptote", "1024"])
    assert a["config_hash"] == c["config_hash"] != b["config_hash"]


def test_out_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["asymptote", "2048", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["schema_version"] == SCHEMA_VERSION


def test_sweep_csv_and_jobs_invariance():
    argv = ["sweep", "BN", "--p-min", "256", "--p-max", "296", "--p-step", "20",
            "--samples", "256", "--fast"]
    one, code1, _ = run(argv + ["--format", "csv"])
    two, code2, _ = run(argv + ["--format", "csv", "--jobs", "2"])
    assert code1 == code2 == 0
    assert one == two
    j1, _, _ = run(argv)
    j2, _, _ = run(argv + ["--jobs", "2"])
    assert j1 == j2


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "pairsec", "asymptote", "1024", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[0]
    proc = subprocess.run([sys.executable, "-m", "pairsec", "estimate"], capture_output=True)
    assert proc.returncode == 2


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        cli.render({"rows": []}, "xml")
