"""Greedy stagewise boosting over signed stumps.

Each iteration scans every distinct stump on the training sample, solves the
one-dimensional problem ``min_{|alpha| <= h_k} Q(f + alpha g)`` for each of
them and keeps the best pair.  With ``normalize_basis`` every stump is
rescaled to unit empirical second moment first, which together with an
unrestricted schedule and least squares gives classical matching pursuit.
"""

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .basis import SignedStump, candidate_thresholds, stump_eval
from .errors import DegenerateDirection, EmptyDataset, NumericFailure, PreconditionError, Unbounded
from .losses import LossSpec, loss_derivative, loss_value
from .synth import IntervalGrid

TRACE_HEADER = "iter,threshold,sign,alpha,total_alpha,s_k,train_obj,train_err,true_err,true_excess"

_MAX_SWEEPS = 2000


@dataclass(frozen=True)
class StepSchedule:
    """Caps ``h_i`` on the step size of iteration ``i``.

    ``constant``: ``h_i = h0``; ``power``: ``h_i = c * (i + 1) ** -gamma``;
    ``unrestricted``: no cap, each step is an exact line search.
    """

    kind: str = "power"
    h0: float = 1.0
    c: float = 1.0
    gamma: float = 2.0 / 3.0

    def __post_init__(self):
        if self.kind not in ("constant", "power", "unrestricted"):
            raise PreconditionError(f"unknown schedule {self.kind!r}")
        if self.kind == "constant" and not self.h0 > 0:
            raise PreconditionError("constant schedule needs h0 > 0")
        if self.kind == "power" and not (self.c > 0 and self.gamma >= 0):
            raise PreconditionError("power schedule needs c > 0 and gamma >= 0")

    @classmethod
    def constant(cls, h0):
        return cls("constant", h0=h0)

    @classmethod
    def power(cls, c=1.0, gamma=2.0 / 3.0):
        return cls("power", c=c, gamma=gamma)

    @classmethod
    def unrestricted(cls):
        return cls("unrestricted")

    @property
    def restricted(self):
        return self.kind != "unrestricted"

    def cap(self, i):
        if self.kind == "constant":
            return self.h0
        if self.kind == "power":
            return self.c * (i + 1.0) ** (-self.gamma)
        return math.inf

    def caps(self, n):
        return np.array([self.cap(i) for i in range(n)], dtype=float)

    @property
    def consistent(self):
        """True when sum h = inf and sum h^2 < inf."""
        return self.kind == "power" and 0.5 < self.gamma <= 1.0

    def require_consistent(self):
        if not self.consistent:
            raise PreconditionError(f"{self} does not satisfy sum h = inf, sum h^2 < inf")


@dataclass(frozen=True)
class BoostConfig:
    loss: LossSpec = field(default_factory=LossSpec)
    schedule: StepSchedule = field(default_factory=StepSchedule)
    max_iters: int = 100
    inner_tol: float = 1e-10
    seed: int = 0
    record_true_risk: bool = False
    normalize_basis: bool = False

    def __post_init__(self):
        if self.max_iters < 0:
            raise PreconditionError("max_iters must be >= 0")
        if not self.inner_tol >= 0:
            raise PreconditionError("inner_tol must be >= 0")


class Ensemble:
    """Additive model ``f = sum coef * stump`` starting from ``f = 0``."""

    def __init__(self, terms=()):
        self.terms = [(float(c), s) for c, s in terms]

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Ensemble({self.terms!r})"

    def add(self, coef, stump):
        self.terms.append((float(coef), stump))

    def copy(self):
        return Ensemble(self.terms)

    def head(self, k):
        return Ensemble(self.terms[:k])

    @property
    def coef_l1(self):
        """Sum of |coef|, an upper bound on the 1-norm of the represented function."""
        return float(sum(abs(c) for c, _ in self.terms))

    def thresholds(self):
        return np.array([s.threshold for _, s in self.terms], dtype=float)

    def predict(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.zeros(arr.shape)
        for c, s in self.terms:
            out += c * stump_eval(s, arr)
        return float(out) if np.ndim(x) == 0 else out


def ensemble_predict(ens, x):
    return ens.predict(x)


@dataclass
class RunTrace:
    """Per-iteration record of a boosting run; row ``k - 1`` is the state after step ``k``.

    ``alpha`` is the step along the (possibly normalised) chosen direction and
    ``coef`` the resulting coefficient on the raw stump; they coincide unless
    ``normalize_basis`` was set.
    """

    loss: LossSpec
    normalize_basis: bool
    restricted: bool
    initial_objective: float
    initial_train_err: float
    iters: np.ndarray
    threshold: np.ndarray
    sign: np.ndarray
    alpha: np.ndarray
    coef: np.ndarray
    caps: np.ndarray
    total_alpha: np.ndarray
    s_k: np.ndarray
    train_obj: np.ndarray
    train_err: np.ndarray
    true_err: np.ndarray = None
    true_excess: np.ndarray = None
    val_err: np.ndarray = None
    budget_stop: bool = False

    def __len__(self):
        return len(self.iters)

    @property
    def ensemble(self):
        return self.ensemble_at(len(self))

    def ensemble_at(self, k):
        """The model after ``k`` steps (``k = 0`` is the zero function)."""
        return Ensemble((self.coef[i], SignedStump(self.threshold[i], int(self.sign[i]))) for i in range(k))

    def objectives(self):
        """Training objective Q-hat(f_k) for k = 0..K."""
        return np.concatenate(([self.initial_objective], self.train_obj))

    def to_csv(self):
        buf = io.StringIO()
        buf.write(TRACE_HEADER + "\n")
        for i in range(len(self)):
            true_err = "" if self.true_err is None else repr(float(self.true_err[i]))
            excess = ""
            if self.true_excess is not None and not np.isnan(self.true_excess[i]):
                excess = repr(float(self.true_excess[i]))
            row = [
                str(int(self.iters[i])),
                repr(float(self.threshold[i])),
                str(int(self.sign[i])),
                repr(float(self.alpha[i])),
                repr(float(self.total_alpha[i])),
                repr(float(self.s_k[i])),
                repr(float(self.train_obj[i])),
                repr(float(self.train_err[i])),
                true_err,
                excess,
            ]
            buf.write(",".join(row) + "\n")
        return buf.getvalue()


class _Scanner:
    """Sorted view of a dataset exposing every distinct stump as a prefix."""

    def __init__(self, data, normalize=False):
        m = len(data)
        if m == 0:
            raise EmptyDataset("boosting needs at least one sample")
        self.m = m
        self.order = np.argsort(data.x, kind="stable")
        self.x = data.x[self.order]
        self.y = data.y[self.order]
        self.thresholds = candidate_thresholds(self.x)
        # prefix length n_j: samples with x <= t_j
        self.counts = np.searchsorted(self.x, self.thresholds, side="right")
        self.valid = self.counts > 0
        self.scale = np.ones(len(self.thresholds))
        if normalize:
            with np.errstate(divide="ignore"):
                self.scale = np.where(self.valid, 1.0 / np.sqrt(self.counts / m), np.inf)
        self._mask = None

    @property
    def _prefix(self):
        if self._mask is None:
            self._mask = np.arange(self.m)[None, :] < self.counts[:, None]
        return self._mask

    def step(self, f, loss, cap, tol):
        """Best (candidate index, raw coefficient, objective change) for sorted predictions ``f``."""
        if loss.kind == "least_squares":
            return self._step_least_squares(f, cap)
        if math.isinf(cap):
            return self._step_exact(f, loss)
        return self._step_bracketed(f, loss, cap, tol)

    def _step_least_squares(self, f, cap):
        m = self.m
        cs = np.concatenate(([0.0], np.cumsum(self.y - f)))
        s = cs[self.counts]
        n = self.counts.astype(float)
        with np.errstate(divide="ignore", invalid="ignore"):
            beta = np.where(self.valid, s / n, 0.0)
        if not math.isinf(cap):
            lim = cap * self.scale
            beta = np.clip(beta, -lim, lim)
        change = -beta * s / m + 0.5 * beta * beta * n / m
        change = np.where(self.valid, change, np.inf)
        j = int(np.argmin(change))
        return j, float(beta[j]), float(change[j])

    def _derivs(self, u, beta, loss):
        vals = loss_derivative(loss, u[None, :] + beta[:, None] * self.y[None, :])
        return np.sum(np.where(self._prefix, vals * self.y[None, :], 0.0), axis=1) / self.m

    def _changes(self, u, beta, loss):
        new = loss_value(loss, u[None, :] + beta[:, None] * self.y[None, :])
        old = loss_value(loss, u)[None, :]
        return np.sum(np.where(self._prefix, new - old, 0.0), axis=1) / self.m

    def _step_bracketed(self, f, loss, cap, tol):
        u = f * self.y
        lim = np.where(self.valid, cap * self.scale, 0.0)
        lo, hi = -lim, lim.copy()
        d_lo, d_hi = self._derivs(u, lo, loss), self._derivs(u, hi, loss)
        beta = np.zeros_like(lo)
        at_lo = d_lo >= 0
        at_hi = ~at_lo & (d_hi <= 0)
        beta[at_lo], beta[at_hi] = lo[at_lo], hi[at_hi]
        active = self.valid & ~at_lo & ~at_hi
        # Illinois false position on the derivative; w_lo / w_hi are the
        # (possibly halved) weights used for the secant, d_lo / d_hi stay exact
        w_lo, w_hi = d_lo.copy(), d_hi.copy()
        side = np.zeros(len(lo), dtype=int)
        for it in range(_MAX_SWEEPS):
            if not active.any():
                break
            # convexity: value at an endpoint exceeds the minimum by at most |D| * width
            width = hi - lo
            slack = np.minimum(-d_lo, d_hi) * width
            done = active & ((slack <= tol) | (width <= 4 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))))
            pick_lo = -d_lo <= d_hi
            beta[done] = np.where(pick_lo, lo, hi)[done]
            active &= ~done
            if not active.any():
                break
            with np.errstate(divide="ignore", invalid="ignore"):
                sec = lo - w_lo * width / (w_hi - w_lo)
            mid = 0.5 * (lo + hi)
            # every eighth sweep is a plain bisection so the bracket always shrinks
            use_sec = np.isfinite(sec) & (sec > lo) & (sec < hi) & (it % 8 != 7)
            trial = np.where(active, np.where(use_sec, sec, mid), 0.0)
            d_t = self._derivs(u, trial, loss)
            if not np.all(np.isfinite(d_t[active])):
                raise NumericFailure("non-finite derivative in inner search")
            go_hi = active & (d_t < 0)
            go_lo = active & (d_t >= 0)
            w_hi = np.where(go_hi & (side == 1), 0.5 * w_hi, w_hi)
            w_lo = np.where(go_lo & (side == -1), 0.5 * w_lo, w_lo)
            lo = np.where(go_hi, trial, lo)
            d_lo = np.where(go_hi, d_t, d_lo)
            w_lo = np.where(go_hi, d_t, w_lo)
            hi = np.where(go_lo, trial, hi)
            d_hi = np.where(go_lo, d_t, d_hi)
            w_hi = np.where(go_lo, d_t, w_hi)
            side = np.where(go_hi, 1, np.where(go_lo, -1, side))
        else:
            raise NumericFailure("inner line search did not converge")
        change = np.where(self.valid, self._changes(u, beta, loss), np.inf)
        j = int(np.argmin(change))
        return j, float(beta[j]), float(change[j])

    def _step_exact(self, f, loss):
        u = f * self.y
        best = (None, 0.0, np.inf)
        for j in np.flatnonzero(self.valid):
            z = np.where(np.arange(self.m) < self.counts[j], self.y, 0.0)
            beta = _line_search(u, z, loss)
            change = float(np.mean(loss_value(loss, u + beta * z) - loss_value(loss, u)))
            if change < best[2]:
                best = (int(j), beta, change)
        return best


def _line_search(u, z, loss):
    """argmin over all real a of mean(phi(u + a z)) for a convex margin loss."""
    if loss.kind == "least_squares":
        return float(np.sum(z * (1.0 - u)) / np.sum(z * z))
    if loss.kind in ("logistic", "exponential"):
        nz = z[z != 0]
        if nz.size and (np.all(nz > 0) or np.all(nz < 0)):
            raise Unbounded("objective decreases without bound along this direction")

    def deriv(a):
        return float(np.mean(z * loss_derivative(loss, u + a * z)))

    lo, hi = -1.0, 1.0
    d_lo, d_hi = deriv(lo), deriv(hi)
    while d_hi < 0:
        lo, d_lo = hi, d_hi
        hi *= 2.0
        if hi > 1e300:
            raise Unbounded("no finite minimiser found while bracketing")
        d_hi = deriv(hi)
    while d_lo > 0:
        hi, d_hi = lo, d_lo
        lo *= 2.0
        if lo < -1e300:
            raise Unbounded("no finite minimiser found while bracketing")
        d_lo = deriv(lo)
    if d_lo == 0:
        return lo
    if d_hi == 0:
        return hi
    return float(brentq(deriv, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500))


def _objective(loss, f, y):
    q = np.mean(loss_value(loss, f * y)) if len(y) else 0.0
    if not np.isfinite(q):
        raise NumericFailure("empirical objective is not finite")
    return float(q)


def _train_err(f, y):
    return float(np.mean(np.where(f >= 0, 1.0, -1.0) != y))


def greedy_step(ens, data, loss, cap, tol=1e-10, normalize=False):
    """One boosting iteration from ``ens``; returns ``(stump, alpha, new_objective)``.

    ``cap=None`` or ``inf`` means an unrestricted exact line search.  Ties
    are resolved towards the smallest threshold and then sign +1.
    """
    cap = math.inf if cap is None else float(cap)
    if not cap > 0:
        raise PreconditionError("step cap must be positive")
    scan = _Scanner(data, normalize)
    f = ens.predict(scan.x)
    j, beta, _ = scan.step(f, loss, cap, tol)
    f[: scan.counts[j]] += beta
    alpha = float(beta / scan.scale[j])
    return SignedStump(float(scan.thresholds[j]), 1), alpha, _objective(loss, f, scan.y)


def exact_line_search(ens, g, loss, data):
    """Unrestricted minimiser of ``alpha -> Q-hat(ens + alpha * g)``."""
    if len(data) == 0:
        raise EmptyDataset("exact_line_search needs data")
    gv = stump_eval(g, data.x)
    if not np.any(gv != 0):
        raise DegenerateDirection("basis function vanishes on the sample")
    u = ens.predict(data.x) * data.y
    return _line_search(u, gv * data.y, loss)


def run_boost(config, data, target=None, budget=None, validation=None):
    """Run ``config.max_iters`` greedy steps from ``f = 0``.

    ``budget`` stops the run before the first step that would push the total
    step size ``sum |alpha|`` above it.  ``target`` (a ``TargetModel``) is
    required when ``config.record_true_risk`` is set.  ``validation`` adds a
    held-out misclassification column ``val_err`` (not part of the CSV).
    """
    loss = config.loss
    sched = config.schedule
    scan = _Scanner(data, config.normalize_basis)
    m = scan.m
    f = np.zeros(m)
    record = config.record_true_risk
    if record:
        if target is None:
            raise PreconditionError("record_true_risk needs the generating TargetModel")
        grid = IntervalGrid(target.d, scan.thresholds)
        grid_counts = np.searchsorted(grid.right, scan.thresholds, side="right")
        fgrid = np.zeros(len(grid.length))
    if validation is not None:
        vorder = np.argsort(validation.x, kind="stable")
        vx, vy = validation.x[vorder], validation.y[vorder]
        vcounts = np.searchsorted(vx, scan.thresholds, side="right")
        fval = np.zeros(len(vx))

    rows = {k: [] for k in ("threshold", "alpha", "coef", "cap", "train_obj", "train_err",
                            "true_err", "true_excess", "val_err")}
    q0 = _objective(loss, f, scan.y)
    total = 0.0
    stopped = False
    for k in range(config.max_iters):
        cap = sched.cap(k)
        try:
            j, beta, _ = scan.step(f, loss, cap, config.inner_tol)
        except NumericFailure as exc:
            exc.iteration = k
            raise
        alpha = float(beta / scan.scale[j])
        if budget is not None and total + abs(alpha) > budget:
            stopped = True
            break
        total += abs(alpha)
        f[: scan.counts[j]] += beta
        try:
            q = _objective(loss, f, scan.y)
        except NumericFailure as exc:
            exc.iteration = k
            raise
        rows["threshold"].append(scan.thresholds[j])
        rows["alpha"].append(alpha)
        rows["coef"].append(beta)
        rows["cap"].append(cap if sched.restricted else abs(alpha))
        rows["train_obj"].append(q)
        rows["train_err"].append(_train_err(f, scan.y))
        if record:
            fgrid[: grid_counts[j]] += beta
            rows["true_err"].append(grid.class_error(fgrid))
            rows["true_excess"].append(
                grid.excess_squared(fgrid) if loss.kind == "least_squares" else np.nan)
        if validation is not None:
            fval[: vcounts[j]] += beta
            rows["val_err"].append(_train_err(fval, vy))

    n = len(rows["alpha"])
    alpha = np.array(rows["alpha"], dtype=float)
    caps = np.array(rows["cap"], dtype=float)
    return RunTrace(
        loss=loss,
        normalize_basis=config.normalize_basis,
        restricted=sched.restricted,
        initial_objective=q0,
        initial_train_err=_train_err(np.zeros(m), scan.y),
        iters=np.arange(1, n + 1),
        threshold=np.array(rows["threshold"], dtype=float),
        sign=np.ones(n, dtype=int),
        alpha=alpha,
        coef=np.array(rows["coef"], dtype=float),
        caps=caps,
        total_alpha=np.cumsum(np.abs(alpha)),
        s_k=np.cumsum(caps),
        train_obj=np.array(rows["train_obj"], dtype=float),
        train_err=np.array(rows["train_err"], dtype=float),
        true_err=np.array(rows["true_err"], dtype=float) if record else None,
        true_excess=np.array(rows["true_excess"], dtype=float) if record else None,
        val_err=np.array(rows["val_err"], dtype=float) if validation is not None else None,
        budget_stop=stopped,
    )


def energy_ledger(trace, strict=True):
    """Return ``(sum alpha_j^2, 2 * (Q-hat(f_0) - Q-hat(f_K)))``.

    For least squares with normalised stumps and exact line search the two
    numbers agree.  ``strict`` rejects traces from any other mode.
    """
    if strict and (trace.loss.kind != "least_squares" or not trace.normalize_basis or trace.restricted):
        raise PreconditionError("energy equality needs least squares, normalized basis, exact search")
    if len(trace) == 0:
        return 0.0, 0.0
    return float(np.sum(trace.alpha**2)), 2.0 * (trace.initial_objective - float(trace.train_obj[-1]))
