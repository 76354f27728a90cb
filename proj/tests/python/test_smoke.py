import math

import pytest

canard = pytest.importorskip("canard")


def test_fit_cubic():
    fit = canard.fit_cubic(-2.0, 4.0, 3.0)
    assert math.isclose(fit.c1, 280.0 / 729.0, rel_tol=0, abs_tol=1e-12)
    assert math.isclose(fit.c2, -26.0 / 27.0, rel_tol=0, abs_tol=1e-12)
    with pytest.raises(ValueError):
        canard.fit_cubic(-2.0, 4.0, 0.5)


def test_circuit_and_rhs():
    sys = canard.make_circuit("chua3d_cubic")
    assert sys.k == 2
    assert sys.epsilon == pytest.approx(0.1)
    rhs = canard.eval_rhs(sys, [0.0, 0.0, 0.0])
    assert rhs == [0.0, 0.0, 0.0]
    assert canard.critical_residual(sys, [1.0, 0.0, 0.0]) == pytest.approx(-1.0)


def test_pseudo_singularities_and_classification():
    sys = canard.make_circuit("chua3d_cubic")
    points = canard.find_pseudo_singular_points(sys)
    assert len(points) == 2
    for psp in points:
        report = canard.classify_folded_singularity(sys, psp)
        assert report.kind == canard.FoldedKind.SADDLE
        assert report.sigma2 < 0.0
        nf = canard.normal_form_coefficients(sys, psp)
        assert report.sigma2 == pytest.approx(2.0 * nf.a_coeff, abs=1e-9)


def test_manifold_psp_4d():
    sys = canard.make_circuit("chua4d_cubic")
    psp = canard.pseudo_singular_manifold(sys, 1, 0.0, canard.Branch.PLUS)
    assert psp.state[1] == 0.0
    assert psp.free_index == 1
    # x3 = x1 + y1 on the pseudo-singular manifold
    assert psp.state[2] == pytest.approx(psp.state[0] + psp.state[3], abs=1e-9)


def test_canard_window_and_region():
    w = canard.canard_window(canard.make_circuit("chua3d_cubic"), "gamma")
    assert w.contains(0.3275)
    assert not w.contains(-0.5)

    region = canard.saddle_region(0.393781, -0.72357)
    assert region.contains(0.0, 0.9)
    assert not region.contains(10.0, 0.9)


def test_integrate_and_detect():
    sys = canard.make_circuit("chua3d_cubic", {"gamma": 0.3275})
    psp = canard.find_pseudo_singular_points(sys)[0]
    start = canard.canard_initial_state(sys, psp)
    traj = canard.integrate(sys, start, 30.0)
    assert not traj.truncated
    assert traj.times[-1] == pytest.approx(30.0)
    segments = canard.detect_canard(traj, sys)
    assert segments.repelling_time >= 0.0


def test_analysis_report():
    report = canard.analyze(canard.make_circuit("chua3d_cubic"))
    assert report["schema"] == 1
    assert report["verdict"]["canard_exists"] is True
    assert report["failures"] == []

    off = canard.make_circuit("chua3d_cubic", {"gamma": -0.5})
    assert canard.analyze(off)["verdict"]["canard_exists"] is False
