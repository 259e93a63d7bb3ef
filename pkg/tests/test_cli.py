import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gkpkit.cli import (EXIT_INPUT, EXIT_IO, EXIT_OK, EXIT_SELFTEST, RunConfig, SweepSpec, Table,
                        format_float, main, render_csv, render_json, thread_count)
from gkpkit.params import theorem1_parameters


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def convert_values(text):
    _, rows = parse_csv(text)
    return {(g, n): float(v) for g, n, v in rows}


# -- convert ----------------------------------------------------------------

def test_convert_approx3_lists_theorem1_parameters(capsys):
    code, out, _ = run(capsys, "convert", "--approx3", "--beta", "0.2", "--d", "2")
    assert code == EXIT_OK
    values = convert_values(out)
    assert values["standard", "sigma_q2"] == pytest.approx(math.tanh(0.2) / 2, rel=1e-15)
    assert values["standard", "sigma_p2"] == pytest.approx(math.tanh(0.2) / 2, rel=1e-15)
    for name, expected in zip(("kappa", "Delta", "gamma", "delta"), theorem1_parameters(0.2)):
        assert values["theorem1", name] == expected
    assert values["theorem1", "squeeze"] == pytest.approx(math.cosh(0.2), rel=1e-15)
    assert values["approx3", "beta"] == pytest.approx(0.2, rel=1e-13)


def test_convert_symmetric_db(capsys):
    code, out, _ = run(capsys, "convert", "--db", "10", "--d", "2", "--symmetric")
    assert code == EXIT_OK
    values = convert_values(out)
    assert values["standard", "sigma_q2"] == pytest.approx(0.05, rel=1e-15)
    assert values["standard", "level_db"] == pytest.approx(10.0, rel=1e-14)
    assert values["squeeze", "zeta"] == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("argv", [
    ["convert", "--approx2", "--gamma", "1.5", "--delta", "1.5"],
    ["convert", "--approx2", "--gamma", "0.5"],
    ["convert", "--symmetric"],
    ["convert", "--sigma2", "0.1", "--db", "10"],
    ["convert", "--sigma2", "0.6"],
    ["convert", "--db", "10", "--d", "2", "--j", "2"],
    ["convert", "--db", "10", "--tol", "0"],
    ["wavefunction", "--db", "10", "--points", "1"],
    ["wavefunction", "--db", "10", "--x-min", "1", "--x-max", "0"],
    ["wigner", "--db", "10", "--j-prime", "5"],
    ["sweep", "--quantity", "overlap", "--db-min", "5", "--db-max", "4"],
    ["sweep", "--quantity", "photon", "--db-steps", "1"],
    ["wavefunction", "--db", "3", "--max-terms", "1"],
    ["selftest", "--only", "nonsense"],
])
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err.startswith("gkpkit: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["convert", "--symmetric", "--standard"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep"])
    assert exc.value.code == 2


# -- data files ---------------------------------------------------------------

def test_wavefunction_file(tmp_path):
    out = tmp_path / "psi.csv"
    assert main(["wavefunction", "--d", "2", "--sigma2", "0.05", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 602
    assert lines[0] == "x,re,im"
    xs = np.array([float(line.split(",")[0]) for line in lines[1:]])
    assert np.all(np.diff(xs) > 0)
    gamma = 2 * math.sqrt(math.pi) * math.sqrt(1 - 4 * 0.05 ** 2)
    assert xs[0] == pytest.approx(-3 * gamma, rel=1e-14)
    assert xs[-1] == pytest.approx(3 * gamma, rel=1e-14)
    digits = lines[1].split(",")[0].lstrip("-").replace(".", "").split("e")[0].lstrip("0")
    assert len(digits) <= 17


def test_wigner_file(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["wigner", "--d", "2", "--sigma2", "0.05", "--out", str(out)]) == EXIT_OK
    header, rows = parse_csv(out.read_text())
    assert header == ["q", "p", "re", "im"]
    assert len(rows) + 1 == 40402
    q = np.array([float(r[0]) for r in rows]).reshape(201, 201)
    p = np.array([float(r[1]) for r in rows]).reshape(201, 201)
    # q is the outer loop, p the inner one, both ascending.
    assert np.all(q[:, 0][1:] > q[:, 0][:-1]) and np.all(q == q[:, :1])
    assert np.all(p[0][1:] > p[0][:-1]) and np.all(p == p[:1])


def test_output_is_byte_identical_across_runs(tmp_path):
    argv = ["wigner", "--d", "3", "--j", "1", "--j-prime", "2", "--db", "9", "--nq", "31", "--np", "29"]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(first)]) == EXIT_OK
    assert main(argv + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_minimal_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--quantity", "normalization", "--db-steps", "2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "db,sigma2,value"
    assert len(out.splitlines()) == 3


@pytest.mark.parametrize("d", [2, 3, 6])
def test_overlap_sweep_is_monotone(capsys, d):
    code, out, _ = run(capsys, "sweep", "--quantity", "overlap", "--d", str(d))
    assert code == EXIT_OK
    header, rows = parse_csv(out)
    assert header == ["db", "sigma2", "value"]
    values = np.array([float(r[2]) for r in rows])
    assert len(values) == 35
    assert np.all(np.diff(values) > 0)


def test_photon_sweep_converges_to_estimate(capsys):
    code, out, _ = run(capsys, "sweep", "--quantity", "photon", "--db-min", "2", "--db-max", "18",
                       "--db-steps", "17")
    assert code == EXIT_OK
    header, rows = parse_csv(out)
    assert header == ["db", "sigma2", "value", "estimate"]
    value = np.array([float(r[2]) for r in rows])
    estimate = np.array([float(r[3]) for r in rows])
    rel = np.abs(value - estimate) / value
    assert rel[-1] < 1e-10
    assert np.all(rel[np.array([float(r[0]) for r in rows]) >= 10] < 0.01)


def test_sweep_ordering_does_not_depend_on_threads(capsys, monkeypatch):
    argv = ["sweep", "--quantity", "photon", "--db-steps", "9"]
    monkeypatch.setenv("GKPKIT_THREADS", "1")
    _, serial, _ = run(capsys, *argv)
    monkeypatch.setenv("GKPKIT_THREADS", "4")
    _, parallel, _ = run(capsys, *argv)
    assert serial == parallel


@pytest.mark.parametrize("raw", ["0", "-2", "many"])
def test_bad_thread_count(capsys, monkeypatch, raw):
    monkeypatch.setenv("GKPKIT_THREADS", raw)
    code, _, _ = run(capsys, "sweep", "--quantity", "normalization", "--db-steps", "2")
    assert code == EXIT_INPUT


def test_thread_count_default(monkeypatch):
    monkeypatch.delenv("GKPKIT_THREADS", raising=False)
    assert thread_count() >= 1


def test_unwritable_output_exits_3(tmp_path, capsys):
    target = tmp_path / "missing" / "dir" / "out.csv"
    code, _, err = run(capsys, "convert", "--db", "10", "--out", str(target))
    assert code == EXIT_IO
    assert "cannot write output" in err


def test_json_round_trip(capsys, tmp_path):
    argv = ["wavefunction", "--representation", "momentum", "--d", "3", "--j", "2", "--db", "7",
            "--points", "41"]
    _, csv_text, _ = run(capsys, *argv)
    code, json_text, _ = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(json_text)
    header, rows = parse_csv(csv_text)
    assert doc["columns"] == header == ["x", "re", "im"]
    assert doc["rows"] == [[float(v) for v in r] for r in rows]
    assert doc["meta"]["representation"] == "momentum"
    assert doc["meta"]["d"] == 3
    # Rendering the parsed document again is stable.
    assert render_json(Table(doc["columns"], doc["rows"], doc["meta"])) == json_text


def test_global_options_accepted_before_and_after_command(capsys):
    _, before, _ = run(capsys, "--format", "json", "convert", "--db", "10")
    _, after, _ = run(capsys, "convert", "--db", "10", "--format", "json")
    assert before == after
    assert json.loads(before)["meta"]["command"] == "convert"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_seventeen_digits_round_trip(x):
    assert float(format_float(x)) == x


def test_render_csv_and_json_handle_special_values():
    table = Table(["a", "b"], [[1.5, "x"], [math.inf, np.int64(3)]], {"v": np.float64(0.1)})
    assert render_csv(table) == "a,b\n1.5,x\ninf,3\n"
    doc = json.loads(render_json(table))
    assert doc["rows"] == [[1.5, "x"], ["inf", 3]]


def test_config_validation():
    from gkpkit.cli import InputError

    with pytest.raises(InputError):
        RunConfig(tol=-1.0)
    with pytest.raises(InputError):
        RunConfig(max_terms=0)
    with pytest.raises(InputError):
        RunConfig(format="xml")
    with pytest.raises(InputError):
        SweepSpec("entropy", 2, 0, 1, 1.0, 2.0, 3)
    assert list(SweepSpec("photon", 2, 0, 1, 2.0, 4.0, 3).levels) == [2.0, 3.0, 4.0]


# -- selftest ------------------------------------------------------------------

def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "theta")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["columns"] == ["check_name", "residual", "tolerance", "pass"]
    names = [r[0] for r in doc["rows"]]
    assert names and all(n.startswith("theta.") for n in names)
    assert all(r[3] == "true" for r in doc["rows"])
    assert doc["meta"]["all_pass"] is True


def test_selftest_unattainable_tolerance_exits_1(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "theta.jacobi_identity,params.narrowing_8db",
                       "--check-tol", "1e-20")
    assert code == EXIT_SELFTEST
    doc = json.loads(out)
    assert [r[3] for r in doc["rows"]] == ["false", "false"]
    assert doc["meta"]["all_pass"] is False


def test_selftest_csv_when_requested(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "params.narrowing_8db", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "check_name,residual,tolerance,pass"


def test_console_script_runs():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-c", "import sys; from gkpkit.cli import main; sys.exit(main())",
                           "convert", "--db", "10"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert "standard,sigma_q2,0.050000000000000003" in proc.stdout
