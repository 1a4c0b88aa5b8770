import math

import numpy as np
import pytest

from greedyboost import (
    BoostConfig,
    LossSpec,
    PreconditionError,
    StepSchedule,
    StoppingRule,
    TargetModel,
    cv_stop,
    cv_stop_trace,
    lipschitz_bound,
    oracle_stop,
    rho_budget,
    run_boost,
    sample,
    select_budget,
    theory_budget,
)
from greedyboost.stopping import cv_split, steps_within_budget

LS = LossSpec("least_squares")


class TestBudgets:
    def test_rho(self):
        assert rho_budget(100, 0.25) == pytest.approx(3.162278, abs=1e-6)
        assert rho_budget(1, 0.7) == 1.0
        assert rho_budget(10_000, 0.25) == pytest.approx(10.0)

    def test_rho_bad(self):
        with pytest.raises(PreconditionError):
            rho_budget(10, 1.0)

    def test_theory(self):
        assert theory_budget(LS, 10_000, 0.2) == pytest.approx(6.309573, abs=1e-6)
        assert theory_budget(LossSpec("exponential"), round(math.exp(10)), 0.0) == pytest.approx(10.0, abs=1e-4)
        assert theory_budget(LossSpec("logistic"), 4, 1.0) == 1.0
        assert theory_budget(LossSpec("p_norm", p=4), 2**16, 0.0) == pytest.approx(4.0)

    def test_theory_hypotheses_on_grid(self):
        # k-hat grows while gamma(beta) beta / sqrt(m) shrinks
        sched = StepSchedule.power(1.0, 0.6667)
        # exp(beta) beta / sqrt(m) with beta = (ln m)^0.8 only turns down once ln m > 32,
        # so the exponential loss is checked with a larger slack
        cases = [(LS, 0.2), (LossSpec("logistic"), 0.2), (LossSpec("p_norm", p=3), 0.2),
                 (LossSpec("exponential"), 0.5)]
        for loss, slack in cases:
            ks, ratios = [], []
            for m in (100, 1000, 10_000):
                beta = theory_budget(loss, m, slack)
                ks.append(steps_within_budget(sched, beta))
                ratios.append(lipschitz_bound(loss, beta) * beta / math.sqrt(m))
            assert ks[0] < ks[1] < ks[2]
            assert ratios[0] > ratios[1] > ratios[2]

    def test_steps_within_budget(self):
        assert steps_within_budget(StepSchedule.constant(0.5), 1.2) == 2
        assert steps_within_budget(StepSchedule.constant(0.5), 1.0) == 2


class TestSelection:
    def test_tie_goes_to_smaller_budget(self):
        assert select_budget([0.5, 1.0, 1.5, 2.0], [0.4, 0.2, 0.2, 0.3]) == 1.0

    def test_decreasing_error_picks_last(self):
        assert select_budget([1, 2, 3], [0.3, 0.2, 0.1]) == 3.0

    def test_mismatched(self):
        with pytest.raises(PreconditionError):
            select_budget([1, 2], [0.1])


class TestRuleParsing:
    @pytest.mark.parametrize("text,kind", [("rho:0.25", "rho"), ("theory:0.2", "theory"), ("cv", "cv"),
                                           ("oracle:error", "oracle"), ("oracle:convex", "oracle"), ("none", "none")])
    def test_parse(self, text, kind):
        assert StoppingRule.parse(text).kind == kind

    def test_oracle_criterion(self):
        assert StoppingRule.parse("oracle:convex").criterion == "convex_risk"

    @pytest.mark.parametrize("text", ["rho:1.5", "oracle:foo", "cv:0", "bogus", "rho:x"])
    def test_bad(self, text):
        with pytest.raises(PreconditionError):
            StoppingRule.parse(text)


class TestCV:
    CFG = BoostConfig(LS, StepSchedule.power(1.0, 0.6667), max_iters=200, seed=7)

    def test_budget_matches_full_trace_scan(self):
        data = sample(2, 99, 7)
        out = cv_stop_trace(data, self.CFG)
        # independent scan: refit on the same split, score every prefix model on the held-out part
        train, val = cv_split(data, 1 / 3, self.CFG.seed)
        assert len(val) == 33
        trace = run_boost(self.CFG, train)
        budgets = [0.0] + list(trace.total_alpha)
        errs = [np.mean(np.where(trace.ensemble_at(k).predict(val.x) >= 0, 1, -1) != val.y)
                for k in range(len(trace) + 1)]
        best = min(errs)
        assert out.budget == min(b for b, e in zip(budgets, errs) if e == best)
        assert out.trace.total_alpha[-1] <= out.budget if len(out.trace) else out.budget >= 0

    def test_deterministic(self):
        data = sample(2, 90, 3)
        b1, e1 = cv_stop(data, self.CFG)
        b2, e2 = cv_stop(data, self.CFG)
        assert b1 == b2
        assert e1.terms == e2.terms

    def test_budget_compliance(self):
        data = sample(3, 150, 5)
        budget, ens = cv_stop(data, self.CFG)
        assert ens.coef_l1 <= budget + 1e-12

    def test_records_true_risk_on_refit(self):
        data = sample(2, 60, 1)
        cfg = BoostConfig(LS, max_iters=50, record_true_risk=True, seed=1)
        out = cv_stop_trace(data, cfg, target=TargetModel(2))
        assert out.trace.true_err is not None

    def test_too_small(self):
        with pytest.raises(PreconditionError):
            cv_stop(sample(1, 2, 0), self.CFG)


class TestOracle:
    def test_sequences(self):
        assert oracle_stop([0.4, 0.3, 0.35]) == 1
        assert oracle_stop([0.2, 0.2, 0.2]) == 0
        assert oracle_stop([0.2, 0.1, 0.15], "convex_risk") == 1

    def test_trace(self):
        data = sample(2, 80, 2)
        trace = run_boost(BoostConfig(LS, max_iters=60, record_true_risk=True), data, target=TargetModel(2))
        k = oracle_stop(trace)
        assert trace.true_err[k] == np.min(trace.true_err)
        kc = oracle_stop(trace, "convex_risk")
        assert trace.true_excess[kc] == np.min(trace.true_excess)

    def test_missing_metrics(self):
        trace = run_boost(BoostConfig(LS, max_iters=5), sample(2, 20, 0))
        with pytest.raises(PreconditionError):
            oracle_stop(trace)
