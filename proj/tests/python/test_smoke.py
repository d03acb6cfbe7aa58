"""Smoke tests of the python bindings and the command-line tool."""

import json
import math
import os
import subprocess

import pytest

import _hncloak as hn


def test_zeta_values():
    assert hn.perfect_zeta("disks", r_i=1, r_e=2, n=1) == pytest.approx(8 / 15, rel=1e-14)
    assert hn.perfect_zeta("disks", r_i=1, r_e=2, n=2) == pytest.approx(32 / 255, rel=1e-14)
    assert hn.perfect_zeta("ellipses", l=1, xi_i=0.5, xi_e=1, n=1, bg="cos") == pytest.approx(
        0.5378828427399903, rel=1e-12
    )


def test_shape_parsing_and_eval():
    f = hn.parse_shape("-cos4")
    assert f.cos_coeff(4) == -1.0
    assert f(0.0) == pytest.approx(-1.0)
    assert f.max_mode == 4
    c = hn.parse_shape("c0:-1")
    assert c(1.23) == pytest.approx(-0.5)
    with pytest.raises(hn.ParamError):
        hn.parse_shape("bogus7")


def test_design_matches_tabulated_coefficients():
    res = hn.design("disks", hn.parse_shape("-cos4"), r_i=1, r_e=2, n=1)
    d = res["g"]["cos"]
    assert d[0] == pytest.approx(0.2197, abs=5e-4)
    assert d[2] == pytest.approx(0.4669, abs=5e-4)
    assert d[4] == pytest.approx(-0.125, abs=5e-4)

    res = hn.design("ellipses", hn.parse_shape("-cos4"), l=1, xi_i=0.5, xi_e=1, n=1)
    d = res["g"]["cos"]
    assert d[0] == pytest.approx(0.5141, abs=5e-4)
    assert d[2] == pytest.approx(0.7933, abs=5e-4)
    assert d[4] == pytest.approx(-0.3458, abs=5e-4)


def test_gamma_coefficients():
    c = hn.gamma_inverse_fourier(1.0, 0.5, 2)
    assert c[0] == pytest.approx(1.257556, abs=1e-5)
    assert c[1] == pytest.approx(0.471036, abs=1e-5)


def test_designed_shape_cancels_scattering():
    f = hn.parse_shape("-cos4")
    g_cos = hn.design("disks", f, n=1)["g"]["cos"]
    g = hn.FourierShape(g_cos, [])
    rep = hn.scattering_coefficients("disks", f, g, n=1)
    assert rep["max_abs_M"] < 1e-12
    baseline = hn.scattering_coefficients("disks", f, hn.FourierShape(), n=1)
    assert baseline["max_abs_M"] > 1.0


def test_verify_design():
    f = hn.parse_shape("-cos4")
    g = hn.FourierShape(hn.design("disks", f, n=1)["g"]["cos"], [])
    rep = hn.verify("disks", f, g, n=1, nodes=128)
    assert rep["pass"]


def test_solve_q_ordering():
    f = hn.parse_shape("-cos4")
    g = hn.FourierShape(hn.design("disks", f, n=1)["g"]["cos"], [])
    q1 = hn.solve_q("disks", f, hn.FourierShape(), 0.1, n=1, nodes=96)["Q"]
    q2 = hn.solve_q("disks", f, g, 0.1, n=1, nodes=96)["Q"]
    assert 0 < q2 < q1


def test_trace():
    tr = hn.scattered_trace("disks", hn.FourierShape(), hn.FourierShape(), 0.0, nodes=96)
    assert max(abs(v) for _, v in tr) < 1e-7
    assert tr[0][0] == 0.0
    assert tr[1][0] == pytest.approx(3.0 * 2 * math.pi / 256)


# ---------------------------------------------------------------- CLI

CLI = os.environ.get("HNCLOAK_CLI")
needs_cli = pytest.mark.skipif(CLI is None, reason="HNCLOAK_CLI not set")


def run_cli(*args, cwd):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


@needs_cli
def test_cli_zeta(tmp_path):
    out = run_cli("zeta", "--family", "disks", "--ri", "1", "--re", "2", "--n", "1", cwd=tmp_path)
    assert out.returncode == 0
    assert out.stdout.strip() == "0.533333"

    bad = run_cli("zeta", "--family", "disks", "--ri", "2", "--re", "2", "--n", "1", cwd=tmp_path)
    assert bad.returncode == 2
    assert bad.stderr.startswith("error:")
    assert "\n" not in bad.stderr.strip()


@needs_cli
def test_cli_design_deterministic(tmp_path):
    args = ("design", "--family", "disks", "--ri", "1", "--re", "2", "--n", "1",
            "--f", "-cos4", "--json")
    first = run_cli(*args, cwd=tmp_path)
    second = run_cli(*args, cwd=tmp_path)
    assert first.returncode == 0
    assert first.stdout == second.stdout  # byte-identical output
    payload = json.loads(first.stdout)
    assert payload["schema"] == 1
    assert payload["verify"]["pass"]
    assert (tmp_path / "design.json").exists()


@needs_cli
def test_cli_design_warns_on_unreachable_shape(tmp_path):
    # sin content on the 2n lattice cannot be fully cancelled; exit code 1
    out = run_cli("design", "--family", "disks", "--ri", "1", "--re", "2", "--n", "1",
                  "--f", "sin2:0.5", cwd=tmp_path)
    assert out.returncode == 1


@needs_cli
def test_cli_trace_and_q(tmp_path):
    out = run_cli("trace", "--family", "disks", "--n", "1", "--f", "-cos4", "--design-g",
                  "--epsilon", "0.1", "--nodes", "96", "--json", cwd=tmp_path)
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["max_abs"] > 0
    assert (tmp_path / "trace.csv").read_text().startswith("arc,value")

    q = run_cli("q", "--family", "disks", "--n", "1", "--f", "-cos4", "--epsilon", "0",
                "--nodes", "96", "--json", cwd=tmp_path)
    assert q.returncode == 0
    assert json.loads(q.stdout)["Q"] < 1e-6


@needs_cli
def test_cli_report_zero_epsilon(tmp_path):
    out = run_cli("report", "--family", "disks", "--n", "1", "--f", "-cos4",
                  "--epsilon", "0", "--nodes", "96", "--json", cwd=tmp_path)
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert all(c["Q"] < 1e-6 for c in payload["cases"])


@needs_cli
def test_cli_report_and_validate(tmp_path):
    out = run_cli("report", "--family", "disks", "--n", "2", "--f", "-cos4",
                  "--epsilon", "0.1", "--nodes", "96", "--json", cwd=tmp_path)
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["ordering_ok"]
    cases = {c["case"]: c["Q"] for c in payload["cases"]}
    assert cases["perfect"] < 1e-5 < cases["2-order"] < cases["1-order"]
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "trace_2-order.csv").exists()

    good = run_cli("validate", "--family", "disks", "--n", "1", "--f", "-cos4",
                   "--nodes", "96", cwd=tmp_path)
    assert good.returncode == 0
    bad = run_cli("validate", "--family", "disks", "--n", "1", "--f", "-cos4",
                  "--g", "cos2:0.3", "--nodes", "96", cwd=tmp_path)
    assert bad.returncode == 1


@needs_cli
def test_cli_solve_exports_fields(tmp_path):
    out = run_cli("solve", "--family", "disks", "--n", "1", "--f", "-cos4", "--epsilon", "0.1",
                  "--nodes", "96", "--grid-cells", "40", cwd=tmp_path)
    assert out.returncode == 0
    head = (tmp_path / "field.csv").read_text().splitlines()
    assert head[0] == "x,y,phi,p,p_scatter,u1,u2"
    assert len(head) > 100
