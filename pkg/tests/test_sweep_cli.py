import json
import math
import os

import numpy as np
import pytest

from hypergap.cli import main, read_config
from hypergap.sweep import COLUMNS, SweepSpec, evaluate_domain, read_csv, run_sweep, to_csv, to_json, meta

PI = math.pi


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gap_witness(capsys):
    code, out, _ = run(capsys, "gap", "--c", "0.2", "--theta0", "0.7853981634", "--theta1", "2.3561944902")
    assert code == 0
    assert json.loads(out)["normalized_gap"] < 1


def test_gap_large(capsys):
    code, out, _ = run(capsys, "gap", "--c", "4", "--theta-star", "1.45", "--symmetric")
    assert code == 0
    assert json.loads(out)["normalized_gap"] > 1


@pytest.mark.parametrize("argv", [("gap", "--c", "abc"), ("gap", "--bogus"), ("nosuch",), (),
                                  ("gap", "--c", "0.2", "--theta0", "1.8", "--theta1", "2.0"),
                                  ("gap", "--theta0", "0.5"), ("gap", "--c", "0.2", "--theta-star", "0.5", "--theta0", "0.5")])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_diameter_command(capsys):
    code, out, _ = run(capsys, "diameter", "--c", "0.2", "--theta-star", str(PI / 4), "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert rec["achieving_pair"] == "PR" and rec["bounds_hold"] == "true"


def _sweep_args(tmp_path, name, fmt, jobs):
    return ["sweep", "--c", "0.05", "0.2", "0.4", "--theta-star", "1.0", "0.6", str(PI / 4),
            "--format", fmt, "--out", str(tmp_path / name), "--jobs", str(jobs)]


def test_sweep_deterministic_across_jobs(tmp_path, capsys):
    assert main(_sweep_args(tmp_path, "a.csv", "csv", 1)) == 0
    assert main(_sweep_args(tmp_path, "b.csv", "csv", 3)) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_json_csv_same_values(tmp_path):
    main(_sweep_args(tmp_path, "s.csv", "csv", 1))
    main(_sweep_args(tmp_path, "s.json", "json", 1))
    rows_csv = read_csv((tmp_path / "s.csv").read_text())
    doc = json.loads((tmp_path / "s.json").read_text())
    assert set(doc) == {"meta", "records"}
    assert rows_csv == doc["records"]
    assert len(rows_csv) == 9


def test_csv_layout(tmp_path):
    main(_sweep_args(tmp_path, "s.csv", "csv", 1))
    lines = (tmp_path / "s.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# ")
    assert lines[1].split(",") == list(COLUMNS)
    keys = [tuple(float(v) for v in ln.split(",")[:3]) for ln in lines[2:]]
    assert keys == sorted(keys)


def test_sweep_monotone_in_theta_star():
    spec = SweepSpec([0.05, 0.1, 0.2, 0.4], list(np.linspace(0.6, 1.5, 7)), grid_size=800)
    records = run_sweep(spec)
    for c in spec.c_values:
        ng = [r["normalized_gap"] for r in sorted((r for r in records if r["c"] == c), key=lambda r: r["theta_star"])]
        steps = np.sign(np.diff(ng))
        assert np.all(steps == steps[0]) and steps[0] != 0


def test_sweep_skips_invalid(capsys):
    code, out, _ = run(capsys, "sweep", "--c", "0.2", "--theta0", "1.7", "0.7", "--theta1", "2.0", "2.2")
    assert code == 0
    rows = read_csv(out)
    assert rows[0]["status"] == "ok"
    assert rows[1]["status"].startswith("skipped") and rows[1]["gap"] is None


def test_sweep_empty_grid(capsys):
    assert run(capsys, "sweep", "--c", "0.2")[0] == 2
    with pytest.raises(ValueError):
        SweepSpec([]).validate()


def test_sweep_unwritable(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    assert run(capsys, "sweep", "--c", "0.2", "--theta-star", "1.0", "--out", str(target))[0] == 3


def test_jobs_env_default(monkeypatch, tmp_path):
    from hypergap.sweep import default_jobs

    monkeypatch.setenv("HYPERGAP_JOBS", "3")
    assert default_jobs() == 3
    monkeypatch.setenv("HYPERGAP_JOBS", "many")
    assert default_jobs() == 1


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# witness domain\nc = 0.2\ntheta_star = 0.7853981633974483\nformat = json\n")
    assert read_config(str(cfg)) == ["--c", "0.2", "--theta-star", "0.7853981633974483", "--format", "json"]
    code, out, _ = run(capsys, "gap", "--config", str(cfg))
    assert code == 0 and json.loads(out)["c"] == 0.2
    code, out, _ = run(capsys, "gap", "--config", str(cfg), "--c", "0.1")
    assert code == 0 and json.loads(out)["c"] == 0.1


def test_config_sweep_lists(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("c = 0.1, 0.2\ntheta_star = 1.0 1.2\nsymmetric = true\n")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and len(read_csv(out)) == 4


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("c 0.2\n")
    assert run(capsys, "gap", "--config", str(cfg))[0] == 2
    assert run(capsys, "gap", "--config", str(tmp_path / "none.cfg"))[0] == 2


def test_verify_passes_with_witnesses(capsys):
    code, out, _ = run(capsys, "verify", "--report", "witnesses")
    assert code == 0
    assert "failures: 0" in out
    count = int(out.split("witnesses (normalized gap < 1): ")[1].split()[0])
    assert count >= 1


def test_verify_detects_corruption(capsys):
    code, out, _ = run(capsys, "verify", "--corrupt-eigensolver")
    assert code == 1
    assert "FAIL oracle-equivalence" in out


def test_shih_defaults(capsys):
    code, out, _ = run(capsys, "shih")
    rec = json.loads(out)
    assert code == 0 and rec["certificate"] == "PASS"
    assert rec["positive_points"] >= 1


def test_shih_out_of_range(capsys):
    assert run(capsys, "shih", "--c", "0.3")[0] == 2
    assert run(capsys, "shih", "--theta1", "1.5")[0] == 2


def test_hessian_csv(capsys):
    code, out, _ = run(capsys, "hessian", "--shih", "--nr", "5", "--ntheta", "5", "--format", "csv")
    assert code == 0
    assert len(out.strip().splitlines()) == 26


def test_serializers_roundtrip():
    spec = SweepSpec([0.3], [1.1])
    recs = [evaluate_domain(p) for p in spec.domains()]
    info = meta(spec, len(recs))
    assert read_csv(to_csv(recs, info)) == json.loads(to_json(recs, info))["records"]


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "hypergap", "gap", "--shih"], capture_output=True, text=True,
                         env={**os.environ})
    assert res.returncode == 0 and "normalized_gap" in res.stdout
