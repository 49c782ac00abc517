import math

import numpy as np
import pytest

import spillover


def _signs_ok(chol, t):
    c, s = math.cos(t), math.sin(t)
    a11 = chol[0, 0] * c
    a12 = -chol[0, 0] * s
    a21 = chol[1, 0] * c + chol[1, 1] * s
    a22 = -chol[1, 0] * s + chol[1, 1] * c
    return a11 > 0 and a21 < 0 and a12 > 0 and a22 > 0


def test_version():
    assert spillover.__version__ == "0.1.0"


def test_identity_median_rotation():
    angles = spillover.admissible_angles(np.eye(2))
    step = 2 * math.pi / 999
    grid = [-math.pi + i * step for i in range(999)]
    expected = [t for t in grid if _signs_ok(np.eye(2), t)]
    assert len(angles) == len(expected)
    assert np.allclose(angles, expected, atol=1e-14)


def test_identify_and_decompose_round_trip():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((300, 2)) @ np.array([[1.0, 0.3], [0.0, 0.8]])
    res = spillover.identify(m[:, 0], m[:, 1])
    cov = np.cov(m, rowvar=False)
    assert np.allclose(res["covariance"], cov, atol=1e-12)
    assert np.allclose(res["chol"], np.linalg.cholesky(cov), atol=1e-12)
    assert _signs_ok(res["chol"], res["theta_star"])

    shocks = spillover.decompose(m[:, 0], m[:, 1])
    assert shocks["method"] == "median_rotation"
    u = np.column_stack([shocks["mp"], shocks["info"]])
    t = res["theta_star"]
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    rebuilt = u @ (res["chol"] @ rot).T + res["mean"]
    assert np.max(np.abs(rebuilt - m)) < 1e-10
    assert np.allclose(np.cov(u, rowvar=False), np.eye(2), atol=1e-10)


def test_poor_mans_split_matches_sign_rule():
    ir = np.array([5.0, 5.0, 0.0, -2.0, -2.0, 1.0])
    eq = np.array([-0.3, 0.3, 0.2, -1.0, 1.0, 0.0])
    out = spillover.poor_mans_split(ir, eq)
    prod = ir * eq
    assert np.array_equal(out["mp"], np.where(prod < 0, ir, 0.0))
    assert np.array_equal(out["info"], np.where(prod > 0, ir, 0.0))
    assert math.isnan(out["theta"])


def test_library_errors_carry_a_code():
    with pytest.raises(spillover.SpilloverError) as err:
        spillover.identify(np.array([1.0]), np.array([0.5]))
    assert err.value.code == "too_few_events"
    with pytest.raises(spillover.SpilloverError):
        spillover.decompose(np.ones(3), np.ones(2))


def test_engines_on_simulated_data():
    sim = spillover.simulate(T=300, seed=3, horizon=12)
    assert sim["values"].shape == (300, 3)
    assert sim["truth_mp"].shape == (3, 13)

    bvar = spillover.bvar_irf(sim["values"], sim["mp_monthly"], names=sim["names"], start=sim["start"],
                              horizon=12, draws=400, seed=1)
    assert bvar["median"].shape == (3, 13)
    assert np.all(bvar["lo"] <= bvar["median"]) and np.all(bvar["median"] <= bvar["hi"])
    again = spillover.bvar_irf(sim["values"], sim["mp_monthly"], names=sim["names"], start=sim["start"],
                               horizon=12, draws=400, seed=1, threads=3)
    assert np.array_equal(bvar["median"], again["median"])

    lp = spillover.lp_irf(sim["values"], sim["mp_monthly"], names=sim["names"], start=sim["start"], horizon=12)
    assert lp["engine"] == "local_projection"
    assert np.allclose(lp["hi"] - lp["median"], lp["median"] - lp["lo"])
    truth = sim["truth_mp"][0, 0] * lp["shock_scale"]
    se = (lp["hi"][0, 0] - lp["median"][0, 0]) / 1.645
    assert abs(lp["median"][0, 0] - truth) < 4 * se


def test_run_from_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("synthetic.enabled = true\nrun.seed = 11\nbvar.draws = 200\nbvar.horizon = 6\n")
    files = spillover.run(cfg, "estimate", out=tmp_path / "out")
    names = {p.name for p in files}
    assert "irf_bvar_pure_mp.csv" in names
    assert (tmp_path / "out" / "run_meta.json").exists()
    with pytest.raises(spillover.SpilloverError):
        spillover.run(cfg, "bogus")
