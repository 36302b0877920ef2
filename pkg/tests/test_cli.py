import json
import subprocess
import sys

from sltwist.cli import main


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "sltwist.cli", *args],
                          capture_output=True, text=True)
    return proc


def test_periods_json_output():
    proc = run_cli("periods", "--p", "1", "--q", "2", "--tau", "0.1", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert abs(float(data["p_tau"]) - 1.8677652614711293) < 1e-10
    assert "pthat_quadrature" in data and "p_plus_quadrature" in data


def test_identical_invocations_bit_identical():
    a = run_cli("periods", "--p", "2", "--q", "3", "--tau", "0.05", "--json")
    b = run_cli("periods", "--p", "2", "--q", "3", "--tau", "0.05", "--json")
    assert a.stdout == b.stdout


def test_necklace_output():
    proc = run_cli("necklace", "--p", "1", "--q", "2", "--m", "2", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["k0"] == 7
    assert 0.15 < float(data["tau"]) < 0.17


def test_closure_subcommand():
    proc = run_cli("closure", "--p", "1", "--q", "2", "--target", "4/7", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["report"]["k0"] == 7
    assert float(data["pthat_error"]) <= 1e-10
    assert float(data["closure_residual"]) <= 1e-7


def test_verify_passes_for_symmetric_pair():
    assert main(["verify", "--p", "2", "--q", "2", "--tau", "0.06"]) == 0


def test_argument_errors_exit_two():
    proc = run_cli("closure", "--p", "1", "--q", "2")
    assert proc.returncode == 2
    proc = run_cli("closure", "--p", "1", "--q", "2", "--target", "4:7")
    assert proc.returncode == 2
    proc = run_cli("periods", "--p", "2", "--q", "1", "--tau", "0.1")
    assert proc.returncode == 2
    proc = run_cli("periods", "--p", "1", "--q", "2", "--tau", "0.9")
    assert proc.returncode == 2


def test_unattainable_target_exits_three():
    proc = run_cli("closure", "--p", "1", "--q", "2", "--target", "1/2")
    assert proc.returncode == 3


def test_solve_csv(tmp_path):
    out = tmp_path / "w.csv"
    code = main(["solve", "--p", "1", "--q", "2", "--tau", "0.1",
                 "--out", str(out), "--samples", "11", "--window", "1.0"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,re_w1,im_w1,re_w2,im_w2"
    assert len(lines) == 12


def test_torque_subcommand():
    proc = run_cli("torque", "--p", "1", "--q", "2", "--tau", "0.1", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert float(data["meridian_gap"]) < 1e-8


def test_asymptotics_subcommand():
    proc = run_cli("asymptotics", "--p", "2", "--q", "2",
                   "--tau-list", "1e-2,1e-3", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert len(data["reports"]) > 0


def test_neck_subcommand():
    proc = run_cli("neck", "--p", "1", "--q", "2", "--tau", "1e-3",
                   "--window", "1.5", "--json")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert float(data["max_error"]) < 0.1


def test_export_obj(tmp_path):
    out = tmp_path / "x.obj"
    code = main(["export", "--p", "1", "--q", "2", "--tau", "0.1",
                 "--format", "obj", "--out", str(out), "--samples", "12"])
    assert code == 0
    from sltwist.geometry import validate_obj

    verts, faces = validate_obj(out)
    assert verts == 144


def test_strict_preset_never_looser():
    from sltwist.cli import TOL_PRESETS

    std, strict = TOL_PRESETS["standard"], TOL_PRESETS["strict"]
    assert strict.abs_tol <= std.abs_tol
    assert strict.rel_tol <= std.rel_tol
    assert strict.event_tol <= std.event_tol
    assert strict.max_step <= std.max_step
