import math

import pytest

import simplexwalk as sw


def test_forward_and_inverse_T():
    assert sw.forward_T([0.5, 0.5]) == pytest.approx([0.25, 0.5], abs=1e-15)
    assert sw.inverse_T([1 / 3, 1 / 3]) == pytest.approx([0.5, 1 / 3], abs=1e-15)


def test_G_round_trip():
    z, u = [0.2, 0.3], [0.1, 0.2]
    g = sw.apply_G(z, u)
    assert g == pytest.approx([0.24, 0.41], abs=1e-15)
    assert sw.invert_G(z, g) == pytest.approx(u, abs=1e-15)
    assert sw.jacobian_det_Ginv(z) == pytest.approx(2.0)


def test_domain_errors_surface():
    with pytest.raises(Exception):
        sw.forward_T([1.2, 0.5])


def test_sample_dirichlet():
    pts = sw.sample_dirichlet([2.0, 2.0, 2.0], 20000, seed=7)
    assert len(pts) == 20000
    assert all(len(p) == 2 and p[0] >= 0 and p[1] >= 0 and p[0] + p[1] <= 1 + 1e-12 for p in pts)
    mean = sum(p[0] for p in pts) / len(pts)
    # Beta(2, 4) marginal: sd = sqrt(8 / 252)
    assert abs(mean - 1 / 3) < 4 * math.sqrt(8 / 252 / len(pts))
    assert sw.sample_dirichlet([0.5, 0.7], 5, seed=3) == sw.sample_dirichlet([0.5, 0.7], 5, seed=3)


def test_ensemble_thread_invariance():
    cf = sw.ChoiceFunction.linear([0.3, 0.3, 0.3])
    jump = sw.JumpLaw.beta(1.0, 2.0)
    a = sw.run_ensemble(cf, jump, 50, 64, seed=5, threads=1)
    b = sw.run_ensemble(cf, jump, 50, 64, seed=5, threads=3)
    assert a == b


def test_residuals():
    cf = sw.ChoiceFunction.linear([0.3, 0.3, 0.3])
    assert sw.dirichlet_residual([0.6, 0.6, 0.6], cf, sw.JumpLaw.beta(1.0, 2.0), [0.2, 0.3]) < 1e-6
    lhs, rhs = sw.beta_integral_identity(0.7, 0.4, 0.3)
    assert abs(lhs - rhs) < 1e-8 * abs(rhs)


def test_drift():
    for zeta in (0.1, 0.5, 0.9):
        for z in (0.0, 0.3, 1.0):
            ref = sw.drift_oracle(zeta, z, 0.01)
            assert sw.drift_closed_form(zeta, z, 0.01) == pytest.approx(ref, rel=1e-8, abs=1e-14)
    assert len(sw.drift_polynomials(0.5, 0.3)) == 6


def test_run_urn():
    rows = sw.run_urn(200, seed=1, record_every=50)
    assert [r["n"] for r in rows][-1] == 200
    assert all(0.0 <= r["z"] <= 1.0 for r in rows)


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"command": "simulate", "nonsense": 1}')
    out = tmp_path / "out"
    assert sw.cli(["simulate", "--config", str(bad), "--out", str(out)]) == 1
    assert not out.exists() or not any(out.iterdir())
    assert sw.cli(["--help"]) == 0
