"""Single runs and seeded sweeps on the synthetic model, summarised per run."""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .boosting import run_boost
from .stopping import StoppingRule, cv_stop_trace, oracle_stop, rho_budget, theory_budget
from .synth import BAYES_ERROR, TargetModel, sample, true_class_error, true_excess_convex

SUMMARY_HEADER = "m,d,seed,stop_budget,stopped_iter,final_total_alpha,true_err,excess_err,true_excess_convex"

_MASK64 = (1 << 64) - 1


def splitmix64(i):
    z = (i + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master, index):
    """Seed of run ``index`` in a sweep: ``master XOR splitmix64(index)``."""
    return (int(master) ^ splitmix64(int(index))) & _MASK64


@dataclass
class SummaryRow:
    m: int
    d: int
    seed: int
    stop_budget: float
    stopped_iter: int
    final_total_alpha: float
    true_err: float
    excess_err: float
    true_excess_convex: float

    def to_csv(self):
        def num(v):
            return "" if v is None or (isinstance(v, float) and np.isnan(v)) else repr(float(v))

        return ",".join([str(self.m), str(self.d), str(self.seed), num(self.stop_budget),
                         str(self.stopped_iter), num(self.final_total_alpha), num(self.true_err),
                         num(self.excess_err), num(self.true_excess_convex)])


def stopped_run(data, config, rule, target):
    """Apply ``rule`` and return ``(trace, stopped_iter, budget)``.

    ``trace`` always carries true metrics; rows after ``stopped_iter`` exist
    only for the oracle rule, which picks its stop from a full run.
    """
    config = dataclasses.replace(config, record_true_risk=True)
    m = len(data)
    if rule.kind == "cv":
        out = cv_stop_trace(data, config, rule, target=target)
        return out.trace, len(out.trace), out.budget
    if rule.kind in ("rho", "theory"):
        if rule.kind == "rho":
            budget = rho_budget(m, rule.rho)
        else:
            budget = theory_budget(config.loss, m, rule.slack)
        trace = run_boost(config, data, target=target, budget=budget)
        return trace, len(trace), budget
    trace = run_boost(config, data, target=target)
    if rule.kind == "oracle" and len(trace):
        return trace, oracle_stop(trace, rule.criterion) + 1, None
    return trace, len(trace), None


def summarize(trace, k, budget, m, d, seed):
    """SummaryRow for the model after ``k`` steps of ``trace``."""
    if k == 0:
        ens = trace.ensemble_at(0)
        err, excess = true_class_error(ens, d), true_excess_convex(ens, d)
        total = 0.0
    else:
        err = float(trace.true_err[k - 1])
        excess = float(trace.true_excess[k - 1])
        total = float(trace.total_alpha[k - 1])
    if budget is None:
        budget = total
    if trace.loss.kind != "least_squares":
        excess = float("nan")
    return SummaryRow(m, d, seed, budget, k, total, err, err - BAYES_ERROR, excess)


def run_single(d, m, seed, config, rule=None):
    """Sample ``m`` points under ``seed``, boost, stop by ``rule`` and summarise."""
    rule = rule or StoppingRule()
    target = TargetModel(d)
    data = sample(d, m, seed)
    config = dataclasses.replace(config, seed=seed)
    trace, k, budget = stopped_run(data, config, rule, target)
    return summarize(trace, k, budget, m, d, seed), trace


def sweep(d, m_list, n_seeds, master_seed, config, rule=None, on_run=None):
    """One run per ``(m, seed index)``; run ``i`` uses ``derive_seed(master_seed, i)``.

    ``on_run(index, row, trace)`` is called after each run if given.
    """
    rows = []
    index = 0
    for m in m_list:
        for _ in range(n_seeds):
            row, trace = run_single(d, m, derive_seed(master_seed, index), config, rule)
            if on_run is not None:
                on_run(index, row, trace)
            rows.append(row)
            index += 1
    return rows


def mean_over_seeds(rows, field, m=None, d=None):
    sel = [getattr(r, field) for r in rows if (m is None or r.m == m) and (d is None or r.d == d)]
    return float(np.mean(sel))
