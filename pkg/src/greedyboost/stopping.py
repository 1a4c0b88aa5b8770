"""Early-stopping rules measured on the total step size ``sum |alpha_i|``."""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .boosting import run_boost
from .errors import PreconditionError


@dataclass(frozen=True)
class StoppingRule:
    """``rho``: budget m^rho; ``theory``: loss-specific rate shrunk by ``slack``;
    ``cv``: hold-out selection; ``oracle``: best row by a true-risk criterion;
    ``none``: run all iterations."""

    kind: str = "none"
    rho: float = 0.25
    slack: float = 0.2
    validation_fraction: float = 1.0 / 3.0
    criterion: str = "class_error"

    def __post_init__(self):
        if self.kind not in ("none", "rho", "theory", "cv", "oracle"):
            raise PreconditionError(f"unknown stopping rule {self.kind!r}")
        if self.kind == "rho" and not 0 < self.rho < 1:
            raise PreconditionError("rho must lie in (0, 1)")
        if self.kind == "theory" and not 0 < self.slack < 1:
            raise PreconditionError("slack must lie in (0, 1)")
        if not 0 < self.validation_fraction < 1:
            raise PreconditionError("validation_fraction must lie in (0, 1)")
        if self.criterion not in ("class_error", "convex_risk"):
            raise PreconditionError(f"unknown oracle criterion {self.criterion!r}")

    @classmethod
    def parse(cls, text):
        """Parse ``rho:0.25``, ``theory:0.2``, ``cv``, ``oracle:error``, ``oracle:convex`` or ``none``."""
        kind, _, arg = text.strip().partition(":")
        try:
            if kind == "rho":
                return cls("rho", rho=float(arg))
            if kind == "theory":
                return cls("theory", slack=float(arg))
            if kind == "cv":
                return cls("cv", validation_fraction=float(arg)) if arg else cls("cv")
            if kind == "oracle":
                crit = {"error": "class_error", "convex": "convex_risk"}.get(arg)
                if crit is None:
                    raise PreconditionError(f"oracle criterion must be error or convex, got {arg!r}")
                return cls("oracle", criterion=crit)
            if kind == "none" and not arg:
                return cls("none")
        except ValueError as exc:
            raise PreconditionError(f"bad stopping rule {text!r}: {exc}") from None
        raise PreconditionError(f"bad stopping rule {text!r}")


def rho_budget(m, rho):
    if m < 1 or not 0 < rho < 1:
        raise PreconditionError("need m >= 1 and rho in (0, 1)")
    return float(m) ** rho


def theory_budget(loss, m, slack):
    """A total step-size budget growing strictly slower than the consistency rate for ``loss``."""
    if m < 2:
        raise PreconditionError("need m >= 2")
    if not 0 <= slack <= 1:
        raise PreconditionError("slack must lie in [0, 1]")
    shrink = 1.0 - slack
    kind = loss.kind
    if kind == "logistic":
        return float(m) ** (0.5 * shrink)
    if kind == "exponential":
        return math.log(m) ** shrink
    if kind in ("least_squares", "modified_least_squares"):
        return float(m) ** (0.25 * shrink)
    return float(m) ** (shrink / (2.0 * loss.p))


def steps_within_budget(schedule, beta, limit=10**7):
    """Largest ``k`` with ``s_k = sum_{i<k} h_i <= beta``."""
    total, k = 0.0, 0
    while k < limit:
        nxt = total + schedule.cap(k)
        if nxt > beta:
            return k
        total, k = nxt, k + 1
    return k


def select_budget(budgets, errors):
    """Budget with the lowest error; ties go to the smallest budget."""
    budgets = np.asarray(budgets, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if budgets.size == 0 or budgets.shape != errors.shape:
        raise PreconditionError("need matching, nonempty budget and error sequences")
    best = np.min(errors)
    return float(np.min(budgets[errors == best]))


@dataclass
class CVOutcome:
    budget: float
    trace: object
    val_budgets: np.ndarray
    val_errors: np.ndarray

    @property
    def ensemble(self):
        return self.trace.ensemble


def cv_split(data, fraction, seed):
    """Seeded shuffle into (train, validation) with ``round(m * fraction)`` held out."""
    m = len(data)
    n_val = int(round(m * fraction))
    if n_val < 1 or n_val >= m:
        raise PreconditionError(f"cannot hold out {n_val} of {m} samples")
    # separate stream from the one that sampled the data under the same seed
    perm = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,))).permutation(m)
    return data.subset(perm[n_val:]), data.subset(perm[:n_val])


def cv_stop_trace(data, config, rule=None, target=None):
    """Hold-out early stopping returning the refit trace and validation curve."""
    rule = rule or StoppingRule("cv")
    if len(data) < 3:
        raise PreconditionError("cross-validation stopping needs at least 3 samples")
    train, val = cv_split(data, rule.validation_fraction, config.seed)
    probe = run_boost(dataclasses.replace(config, record_true_risk=False), train, validation=val)
    budgets = np.concatenate(([0.0], probe.total_alpha))
    # f = 0 predicts +1 everywhere
    errors = np.concatenate(([float(np.mean(val.y != 1.0))], probe.val_err))
    budget = select_budget(budgets, errors)
    final = run_boost(config, data, target=target, budget=budget)
    return CVOutcome(budget, final, budgets, errors)


def cv_stop(data, config, rule=None):
    """Return ``(budget, ensemble)`` chosen by hold-out validation error."""
    out = cv_stop_trace(data, config, rule)
    return out.budget, out.ensemble


def oracle_stop(trace, criterion="class_error"):
    """Row index minimising the true classification error or excess convex risk.

    ``trace`` may also be a plain sequence of criterion values.
    """
    if criterion not in ("class_error", "convex_risk"):
        raise PreconditionError(f"unknown oracle criterion {criterion!r}")
    if hasattr(trace, "true_err"):
        values = trace.true_err if criterion == "class_error" else trace.true_excess
    else:
        values = None if trace is None else np.asarray(trace, dtype=float)
    if values is None or len(values) == 0 or np.all(np.isnan(values)):
        raise PreconditionError("trace has no recorded true metrics")
    return int(np.nanargmin(values))
