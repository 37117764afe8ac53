import json
import subprocess
import sys
from pathlib import Path

import pytest

from icegt.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_golden_bytes(capsys):
    code, out, _ = run(capsys, "sample", "--pattern", "2/2,3/2,3,3/1,2,3,4", "--seed", "42", "--count", "8")
    assert code == 0
    assert out == (GOLDEN / "sample_seed42.jsonl").read_text()


def test_two_stage_sample_golden_bytes(capsys):
    code, out, _ = run(capsys, "sample", "--bottom", "1,2,3", "--seed", "7", "--count", "4")
    assert code == 0
    assert out == (GOLDEN / "sample_bottom_seed7.jsonl").read_text()


def test_sample_line_shape(capsys):
    _, out, _ = run(capsys, "sample", "--pattern", "2/2,3/2,3,3/1,2,3,4", "--seed", "1", "--count", "2")
    for line in out.splitlines():
        d = json.loads(line)
        assert set(d) == {"seed", "rng", "sample", "prob"}
        assert d["prob"] in ("1/8", "1/4")


def test_count_20v(capsys):
    code, out, _ = run(capsys, "count", "20v", "--k", "1,2,3")
    assert code == 0
    assert json.loads(out) == {"k": [1, 2, 3], "count": "60", "method": "dp"}


@pytest.mark.parametrize("method", ["dp", "explicit", "oracle"])
def test_count_20v_methods(capsys, method):
    _, out, _ = run(capsys, "count", "20v", "--k", "2,3,4,6", "--method", method, "--format", "text")
    assert out.strip() == "7760"


def test_count_timing_opt_in(capsys):
    _, out, _ = run(capsys, "count", "20v", "--k", "1,2", "--timing")
    assert "seconds" in json.loads(out)


def test_count_weighted(capsys):
    _, out, _ = run(capsys, "count", "gt", "--bottom", "1,2", "--weighted")
    assert json.loads(out)["sum_omega_fsa"] == "16"
    _, out, _ = run(capsys, "count", "m6v", "--k", "1,2,3", "--weighted", "--method", "dp")
    assert json.loads(out)["sum_2_ic"] == "60"
    _, out, _ = run(capsys, "count", "m6v", "--k", "1,2,3")
    assert json.loads(out)["count"] == "26"


def test_enumerate_streams_json_lines(capsys):
    code, out, _ = run(capsys, "enumerate", "m6v", "--k", "1,2")
    lines = [json.loads(s) for s in out.splitlines()]
    assert code == 0 and len(lines) == 3
    assert sorted(d["ic"] for d in lines) == [0, 0, 1]


def test_enumerate_limit_hits_cap(capsys):
    code, _, err = run(capsys, "enumerate", "20v", "--k", "1,2,3", "--limit", "5")
    assert code == 2 and "cap" in err


def test_state_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ICEGT_MAX_STATES", "3")
    code, _, _ = run(capsys, "count", "20v", "--k", "1,2,3,4")
    assert code == 2


def test_verify_quick_suite(capsys):
    code, out, _ = run(capsys, "verify", "thm42", "--quick")
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["checked"] > 0


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "ybe", "--format", "text")
    assert code == 0 and out.strip() == "ybe: 64/64 pass"


def test_verify_replay(capsys, tmp_path):
    cfg = tmp_path / "x.json"
    cfg.write_text(json.dumps({"k": [1, 2], "model": "m6v", "paths": [[], ["R", "D", "D"]]}))
    code, out, _ = run(capsys, "verify", "--replay", str(cfg))
    assert code == 0 and json.loads(out)["ok"]


def test_verify_replay_reports_bad_config(capsys, tmp_path):
    cfg = tmp_path / "x.json"
    cfg.write_text(json.dumps({"k": [1, 2], "model": "m6v", "paths": [[], ["D", "R", "D", "D"]]}))
    code, _, _ = run(capsys, "verify", "--replay", str(cfg))
    assert code in (1, 3)


def test_formula(capsys):
    _, out, _ = run(capsys, "formula", "df", "--n", "4")
    assert out.strip() == "3328"
    _, out, _ = run(capsys, "formula", "free", "--n", "5", "--m", "4", "--format", "json")
    assert json.loads(out)["value"] == "678912"


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "out.txt"
    assert main(["--output", str(dest), "formula", "df", "--n", "3"]) == 0
    assert dest.read_text() == "60\n"


@pytest.mark.parametrize("argv", [
    ["count", "20v", "--k", "3,2"],
    ["count", "20v"],
    ["count", "20v", "--k", "1,2", "--method", "magic"],
    ["frobnicate"],
    ["formula", "free", "--n", "4", "--m", "0"],
    ["formula", "free", "--n", "3"],
    ["sample"],
    ["sample", "--pattern", "2/2,2/2,2,2"],
    ["sample", "--pattern", "3/1,2"],
])
def test_usage_errors(capsys, argv):
    # argparse-level errors exit through SystemExit, the rest return the code
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    assert code == 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "icegt", "formula", "df", "--n", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "4"


def test_argparse_errors_exit_3():
    r = subprocess.run([sys.executable, "-m", "icegt", "count", "20v", "--k", "3,2"],
                       capture_output=True, text=True)
    assert r.returncode == 3


def test_csv_formats(capsys):
    _, out, _ = run(capsys, "count", "20v", "--k", "1,2", "--format", "csv")
    assert out == 'k,count,method\n"[1,2]",4,dp\n'
    code, out, _ = run(capsys, "verify", "ybe", "--format", "csv")
    assert code == 0 and out == "suite,checked,failed,ok\nybe,64,0,True\n"


def test_singleton_fiber_samples_repeat(capsys):
    _, out, _ = run(capsys, "sample", "--pattern", "2/1,2", "--count", "3")
    lines = out.splitlines()
    assert len(set(lines)) == 1 and json.loads(lines[0])["prob"] == "1"


def test_thread_count_does_not_change_output(capsys):
    _, one, _ = run(capsys, "verify", "thm11", "--nmax", "2", "--kmax", "4")
    _, two, _ = run(capsys, "verify", "thm11", "--nmax", "2", "--kmax", "4", "--threads", "2")
    assert one == two
