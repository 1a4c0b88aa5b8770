import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from greedyboost import (
    TRACE_HEADER,
    BoostConfig,
    Dataset,
    DegenerateDirection,
    Ensemble,
    LossSpec,
    NumericFailure,
    PreconditionError,
    SignedStump,
    StepSchedule,
    TargetModel,
    Unbounded,
    auxiliary_psi,
    candidate_thresholds,
    curvature_bound,
    energy_ledger,
    ensemble_predict,
    exact_line_search,
    greedy_step,
    loss_value,
    run_boost,
    sample,
)

from conftest import ALL_LOSSES

LS = LossSpec("least_squares")
TWO_POINTS = Dataset([0.2, 0.8], [1, -1])


def random_data(seed, max_m=50):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, max_m + 1))
    # coarse grid so that ties in x occur
    x = rng.integers(0, 21, size=m) / 20.0 if rng.random() < 0.3 else rng.uniform(size=m)
    return Dataset(x, rng.choice([-1.0, 1.0], size=m))


def brute_force_step(ens, data, loss, cap, grid_step=1e-4):
    """Minimum of Q-hat(f + a g) over candidate stumps, both signs and an alpha grid."""
    f = ens.predict(data.x)
    alphas = np.linspace(-cap, cap, int(math.ceil(2 * cap / grid_step)) + 1)
    best = (np.inf, None, None)
    for t in candidate_thresholds(data.x):
        for sign in (1, -1):
            g = SignedStump(t, sign)(data.x)
            vals = np.mean(loss_value(loss, (f[None, :] + alphas[:, None] * g[None, :]) * data.y), axis=1)
            i = int(np.argmin(vals))
            if vals[i] < best[0] - 1e-15:
                best = (float(vals[i]), SignedStump(t, sign), float(alphas[i]))
    return best


class TestEnsemble:
    def test_predict(self):
        assert ensemble_predict(Ensemble(), 0.5) == 0.0
        assert ensemble_predict(Ensemble([(1.5, SignedStump(0.6))]), 0.5) == 1.5
        ens = Ensemble([(1.0, SignedStump(0.6)), (-0.5, SignedStump(0.3))])
        assert ensemble_predict(ens, 0.2) == pytest.approx(0.5)

    def test_l1_and_head(self):
        ens = Ensemble([(1.0, SignedStump(0.6)), (-0.5, SignedStump(0.3))])
        assert ens.coef_l1 == 1.5
        assert len(ens.head(1)) == 1


class TestSchedule:
    def test_power(self):
        s = StepSchedule.power(1.0, 0.6667)
        np.testing.assert_allclose(s.caps(3), [1.0, 2 ** -0.6667, 3 ** -0.6667])
        assert s.consistent

    def test_constant_not_consistent(self):
        s = StepSchedule.constant(0.1)
        assert not s.consistent
        with pytest.raises(PreconditionError):
            s.require_consistent()

    def test_unrestricted(self):
        assert math.isinf(StepSchedule.unrestricted().cap(5))

    def test_bad(self):
        with pytest.raises(PreconditionError):
            StepSchedule.constant(0.0)


class TestGreedyStep:
    def test_two_point_full_cap(self):
        g, a, q = greedy_step(Ensemble(), TWO_POINTS, LS, 1.0)
        assert g == SignedStump(0.5, 1)
        assert a == pytest.approx(1.0)
        assert q == pytest.approx(0.25)

    def test_two_point_clamped(self):
        g, a, q = greedy_step(Ensemble(), TWO_POINTS, LS, 0.5)
        assert g == SignedStump(0.5, 1)
        assert a == pytest.approx(0.5)
        assert q == pytest.approx(0.3125)

    def test_single_point(self):
        g, a, q = greedy_step(Ensemble(), Dataset([0.5], [1]), LS, 1.0)
        assert g == SignedStump(1.0, 1)
        assert (a, q) == pytest.approx((1.0, 0.0))

    def test_oracle_on_the_examples(self):
        for cap in (1.0, 0.5):
            q_bf, g_bf, a_bf = brute_force_step(Ensemble(), TWO_POINTS, LS, cap)
            g, a, q = greedy_step(Ensemble(), TWO_POINTS, LS, cap)
            assert q == pytest.approx(q_bf, abs=1e-10)
            assert g_bf(TWO_POINTS.x) @ np.ones(2) * a_bf == pytest.approx(g(TWO_POINTS.x) @ np.ones(2) * a)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_brute_force(self, loss, seed):
        rng = np.random.default_rng(seed)
        data = random_data(seed, max_m=12)
        ens = Ensemble((rng.uniform(-0.5, 0.5), SignedStump(rng.uniform())) for _ in range(2))
        cap = float(rng.uniform(0.1, 1.0))
        g, a, q = greedy_step(ens, data, loss, cap, tol=1e-12)
        q_bf, _, _ = brute_force_step(ens, data, loss, cap)
        assert abs(a) <= cap
        # no better than the continuum minimum, never worse than the grid
        assert q <= q_bf + 1e-10
        assert q >= q_bf - 1e-6
        assert q == pytest.approx(np.mean(loss_value(loss, (ens.predict(data.x) + a * g(data.x)) * data.y)))

    def test_tie_break_prefers_smallest_threshold(self):
        # every stump touching the lone point gives the same objective
        data = Dataset([0.0, 0.0], [1, 1])
        g, _, _ = greedy_step(Ensemble(), data, LS, 1.0)
        assert g == SignedStump(0.0, 1)

    def test_bad_cap(self):
        with pytest.raises(PreconditionError):
            greedy_step(Ensemble(), TWO_POINTS, LS, 0.0)


class TestLineSearch:
    def test_least_squares_closed_form(self):
        assert exact_line_search(Ensemble(), SignedStump(0.5), LS, TWO_POINTS) == pytest.approx(1.0)

    def test_numeric_cross_check(self):
        from scipy.optimize import minimize_scalar

        data = sample(2, 40, 3)
        ens = Ensemble([(0.3, SignedStump(0.4))])
        for spec in ALL_LOSSES:
            g = SignedStump(0.7)
            a = exact_line_search(ens, g, spec, data)
            obj = lambda t: np.mean(loss_value(spec, (ens.predict(data.x) + t * g(data.x)) * data.y))
            ref = minimize_scalar(obj, bracket=(-1, 1), tol=1e-12).x
            assert obj(a) <= obj(ref) + 1e-12

    def test_symmetric_data(self):
        data = Dataset([0.2, 0.2], [1, -1])
        assert exact_line_search(Ensemble(), SignedStump(0.5), LS, data) == pytest.approx(0.0, abs=1e-15)

    def test_unbounded(self):
        data = Dataset([0.3, 0.6], [1, 1])
        with pytest.raises(Unbounded):
            exact_line_search(Ensemble(), SignedStump(1.0), LossSpec("logistic"), data)

    def test_degenerate(self):
        with pytest.raises(DegenerateDirection):
            exact_line_search(Ensemble(), SignedStump(0.1), LS, TWO_POINTS)


class TestRunBoost:
    def test_zero_iterations(self):
        trace = run_boost(BoostConfig(LS, max_iters=0), TWO_POINTS)
        assert len(trace) == 0
        assert trace.initial_objective == 0.5
        assert trace.to_csv() == TRACE_HEADER + "\n"

    def test_one_step_two_points(self):
        # f = I(x <= 0.5): the point at 0.8 sits at f = 0, which predicts +1
        trace = run_boost(BoostConfig(LS, StepSchedule.constant(1.0), max_iters=1), TWO_POINTS)
        assert trace.threshold[0] == 0.5
        assert trace.train_err[0] == 0.5
        trace = run_boost(BoostConfig(LS, StepSchedule.constant(1.0), max_iters=2), TWO_POINTS)
        assert trace.train_err[1] == 0.0

    def test_logistic_all_positive(self):
        data = Dataset(np.linspace(0.05, 0.95, 7), np.ones(7))
        cfg = BoostConfig(LossSpec("logistic"), StepSchedule.constant(0.1), max_iters=10)
        trace = run_boost(cfg, data)
        np.testing.assert_allclose(trace.threshold, 1.0)
        np.testing.assert_allclose(trace.alpha, 0.1)
        assert trace.train_obj[-1] == pytest.approx(math.log1p(math.exp(-1)), abs=1e-12)

    def test_unrestricted_unbounded_reports_iteration(self):
        data = Dataset([0.3, 0.6], [1, 1])
        cfg = BoostConfig(LossSpec("exponential"), StepSchedule.unrestricted(), max_iters=3)
        with pytest.raises(NumericFailure) as info:
            run_boost(cfg, data)
        assert info.value.iteration == 0

    def test_csv_deterministic(self):
        data = sample(2, 60, 4)
        cfg = BoostConfig(LossSpec("logistic"), max_iters=40, record_true_risk=True)
        a = run_boost(cfg, data, target=TargetModel(2)).to_csv()
        b = run_boost(cfg, data, target=TargetModel(2)).to_csv()
        assert a == b
        assert a.splitlines()[0] == TRACE_HEADER

    def test_true_metrics_match_integrators(self):
        from greedyboost import true_class_error, true_excess_convex

        data = sample(3, 80, 8)
        trace = run_boost(BoostConfig(LS, max_iters=30, record_true_risk=True), data, target=TargetModel(3))
        for k in (1, 10, 30):
            ens = trace.ensemble_at(k)
            assert trace.true_err[k - 1] == pytest.approx(true_class_error(ens, 3), abs=1e-12)
            assert trace.true_excess[k - 1] == pytest.approx(true_excess_convex(ens, 3), abs=1e-12)

    def test_budget_stops_before_crossing(self):
        data = sample(2, 100, 2)
        trace = run_boost(BoostConfig(LS, max_iters=500), data, budget=2.5)
        assert trace.total_alpha[-1] <= 2.5
        assert trace.budget_stop

    @given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["constant", "power"]))
    def test_monotone_and_within_caps(self, seed, kind):
        data = random_data(seed)
        sched = StepSchedule.constant(0.3) if kind == "constant" else StepSchedule.power(1.0, 0.6667)
        for spec in ALL_LOSSES:
            cfg = BoostConfig(spec, sched, max_iters=25)
            trace = run_boost(cfg, data)
            q = trace.objectives()
            assert np.all(np.diff(q) <= cfg.inner_tol)
            assert np.all(np.abs(trace.alpha) <= trace.caps)
            assert np.all(trace.total_alpha <= trace.s_k + 1e-12)
            assert np.all(np.diff(trace.total_alpha) >= 0)
            assert trace.ensemble.coef_l1 == pytest.approx(trace.total_alpha[-1])

    @given(seed=st.integers(0, 2**32 - 1))
    def test_one_step_inequality(self, seed):
        # Delta A(f_{k+1}) <= (1 - h_k / (s_k + |fbar|)) Delta A(f_k) + h_k^2 M / 2 + tol
        data = random_data(seed)
        rng = np.random.default_rng(seed)
        for spec in ALL_LOSSES:
            cfg = BoostConfig(spec, StepSchedule.power(0.8, 0.6667), max_iters=30)
            trace = run_boost(cfg, data)
            A = auxiliary_psi(spec, trace.objectives())
            M = curvature_bound(spec)
            s = np.concatenate(([0.0], trace.s_k))
            refs = [trace.ensemble, Ensemble((rng.uniform(-1, 1), SignedStump(rng.uniform())) for _ in range(3))]
            for ref in refs:
                a_bar = auxiliary_psi(spec, float(np.mean(loss_value(spec, ref.predict(data.x) * data.y))))
                gap = np.maximum(0.0, A - a_bar)
                h = trace.caps
                rhs = (1 - h / (s[:-1] + ref.coef_l1)) * gap[:-1] + h**2 * M / 2 + cfg.inner_tol
                assert np.all(gap[1:] <= rhs + 1e-9)


class TestEnergy:
    MP = BoostConfig(LS, StepSchedule.unrestricted(), max_iters=1, normalize_basis=True)

    def test_single_point(self):
        trace = run_boost(self.MP, Dataset([0.5], [1]))
        assert energy_ledger(trace) == pytest.approx((1.0, 1.0))

    def test_zero_steps(self):
        trace = run_boost(BoostConfig(LS, StepSchedule.unrestricted(), 0, normalize_basis=True), TWO_POINTS)
        assert energy_ledger(trace) == (0.0, 0.0)

    def test_random_run(self):
        data = sample(2, 120, 17)
        cfg = BoostConfig(LS, StepSchedule.unrestricted(), max_iters=50, normalize_basis=True)
        trace = run_boost(cfg, data)
        lhs, rhs = energy_ledger(trace)
        # independent summation from the trace rows
        assert math.fsum(a * a for a in trace.alpha) == pytest.approx(lhs, rel=1e-12)
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, rhs)

    def test_mode_mismatch(self):
        trace = run_boost(BoostConfig(LS, max_iters=3), TWO_POINTS)
        with pytest.raises(PreconditionError):
            energy_ledger(trace)
        lhs, rhs = energy_ledger(trace, strict=False)
        assert lhs >= 0 and rhs >= 0
