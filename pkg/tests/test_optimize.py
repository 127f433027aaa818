import math

import numpy as np
import pytest

from welchbanach.asf import DualPair, LpSpace, lp_norm, normalization_report, trace_S2
from welchbanach.bounds import welch_rhs
from welchbanach.fixtures import hesse_sic, sic_qubit
from welchbanach.metrics import frame_correlation, pseudo_frame_potential
from welchbanach.optimize import (
    SearchConfig,
    _SmoothProblem,
    equiangular_residual,
    etf_search,
    grassmannian_search,
    norming_functionals,
    potential_minimize,
    project_row,
    search,
)

FAST = SearchConfig(seed=7, restarts=4, max_iters=2000)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(step_decay=1.0)
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(objective="entropy")
    with pytest.raises(ValueError):
        SearchConfig(tol=0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("field", ["real", "complex"])
def test_norming_functionals_are_feasible(rng, p, field):
    space = LpSpace(3, p, field)
    x = rng.standard_normal((5, 3)) + (1j * rng.standard_normal((5, 3)) if field == "complex" else 0)
    tau, f = norming_functionals(x, p)
    rep = normalization_report(DualPair(space, tau, f))
    assert rep.worst < 1e-13


@pytest.mark.parametrize("objective", ["correlation", "potential", "equiangular"])
@pytest.mark.parametrize("p,field", [(2.0, "complex"), (2.0, "real"), (3.0, "complex"), (4.0, "real")])
def test_gradient_matches_finite_differences(rng, objective, p, field):
    prob = _SmoothProblem(LpSpace(3, p, field), 5, objective, None, False)
    prob.temp = 0.05
    z = rng.standard_normal(30 if field == "complex" else 15)
    _, grad = prob(z)
    h = 1e-6
    fd = np.array([(prob(z + h * e)[0] - prob(z - h * e)[0]) / (2 * h) for e in np.eye(z.size)])
    assert np.max(np.abs(fd - grad)) <= 1e-6 * max(1.0, np.max(np.abs(grad)))


@pytest.mark.parametrize("p", [1.0, math.inf])
@pytest.mark.parametrize("field", ["real", "complex"])
def test_projection_onto_norming_set(rng, p, field):
    space = LpSpace(4, p, field)
    for _ in range(20):
        t = rng.standard_normal(4) + (1j * rng.standard_normal(4) if field == "complex" else 0)
        f = rng.standard_normal(4) + (1j * rng.standard_normal(4) if field == "complex" else 0)
        t, f = project_row(t, f, space, rng)
        assert lp_norm(t, p) == pytest.approx(1, abs=1e-12)
        assert lp_norm(f, space.q) == pytest.approx(1, abs=1e-12)
        assert np.dot(f, t) == pytest.approx(1, abs=1e-12)


def test_grassmannian_known_optima():
    space = LpSpace(2, 2.0, "complex")
    r = grassmannian_search(space, 3, FAST)
    assert r.objective_value == pytest.approx(0.5, abs=1e-3)
    r = grassmannian_search(space, 4, FAST)
    assert r.objective_value <= 1 / math.sqrt(3) + 1e-3
    assert r.welch_gap == pytest.approx(r.objective_value - math.sqrt(welch_rhs(4, 2, 1)))


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0, math.inf])
def test_grassmannian_square_case_reaches_zero(p):
    r = grassmannian_search(LpSpace(2, p, "real"), 2, FAST)
    assert r.objective_value <= 1e-6
    assert r.feasibility.worst <= 1e-6


def test_etf_search_qubit():
    r = etf_search(2, FAST)
    assert r.objective_value < 1e-6
    assert r.extras["max_dev"] < 1e-3
    assert r.extras["target_gamma"] == pytest.approx(1 / 3)
    assert r.converged


def test_exact_sic_fixtures_have_zero_residual():
    assert equiangular_residual(sic_qubit(), 1 / 3) < 1e-12
    assert equiangular_residual(hesse_sic(), 1 / 4) < 1e-12


def test_potential_minimize():
    r = potential_minimize(LpSpace(2, 2.0, "real"), 3, FAST)
    assert r.objective_value == pytest.approx(4.5, abs=1e-6) and r.extras["tight"]
    r = potential_minimize(LpSpace(3, 2.0, "complex"), 3, FAST)
    assert r.objective_value == pytest.approx(3, abs=1e-8)
    r = potential_minimize(LpSpace(2, 2.0, "complex"), 4, FAST)
    assert r.objective_value == pytest.approx(8, abs=1e-6) and r.extras["floor_attained"]
    assert pseudo_frame_potential(r.pair) == pytest.approx(trace_S2(r.pair).real)
    with pytest.raises(ValueError):
        potential_minimize(LpSpace(3, 2.0, "real"), 2, FAST)


def test_same_seed_same_result():
    space = LpSpace(2, 3.0, "complex")
    a = grassmannian_search(space, 4, FAST)
    b = grassmannian_search(space, 4, FAST)
    assert a.objective_value == b.objective_value
    np.testing.assert_array_equal(a.pair.vectors, b.pair.vectors)


def test_worker_count_does_not_change_result():
    space = LpSpace(2, 2.0, "complex")
    cfg = SearchConfig(seed=3, restarts=4, max_iters=500, objective="correlation")
    best1, runs1 = search(space, 4, cfg)
    best2, runs2 = search(space, 4, SearchConfig(**{**cfg.__dict__, "workers": 3}))
    assert [r.objective_value for r in runs1] == [r.objective_value for r in runs2]
    assert best1.restart == best2.restart


def test_nonsmooth_search_reports_feasible_results():
    cfg = SearchConfig(seed=1, restarts=2, max_iters=1000)
    for p in (1.0, math.inf):
        r = grassmannian_search(LpSpace(2, p, "complex"), 3, cfg)
        assert r.feasibility.worst <= 1e-6 or not r.converged
        assert math.isfinite(r.objective_value)


def test_trace_respects_welch_floor():
    cfg = SearchConfig(seed=5, restarts=2, max_iters=1000, record_trace=True)
    for n, d in ((3, 2), (4, 2), (5, 3)):
        r = grassmannian_search(LpSpace(d, 2.0, "complex"), n, cfg)
        floor = math.sqrt(welch_rhs(n, d, 1))
        assert r.trace is not None and len(r.trace) > 0
        held = r.trace[r.trace[:, 1] > 0.5, 0]
        assert np.all(held >= floor - 1e-9)


def test_search_result_metadata():
    r = grassmannian_search(LpSpace(2, 2.0, "real"), 3, SearchConfig(seed=0, restarts=1, max_iters=300))
    meta = r.metadata()
    assert {"objective", "value", "gap", "residuals", "seed", "iters", "converged"} <= set(meta)
    assert frame_correlation(r.pair) == pytest.approx(r.objective_value)
