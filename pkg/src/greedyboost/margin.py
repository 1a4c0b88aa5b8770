"""Small-step AdaBoost on finite dictionaries and L1-margin maximisation."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import NumericFailure, PreconditionError


@dataclass
class MarginInstance:
    """Basis values ``G[i, j] = g_j(x_i)`` with labels ``y``; signed weights give negation closure."""

    G: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.G = np.atleast_2d(np.asarray(self.G, dtype=float))
        self.y = np.asarray(self.y, dtype=float).ravel()
        n, p = self.G.shape
        if n < 1 or p < 1:
            raise PreconditionError("need at least one point and one basis function")
        if self.y.size != n:
            raise PreconditionError("label count does not match the number of rows")
        if np.any(np.abs(self.G) > 1):
            raise PreconditionError("basis values must lie in [-1, 1]")
        if np.any(np.abs(self.y) != 1):
            raise PreconditionError("labels must be +1 or -1")

    @property
    def margins_matrix(self):
        """``Z[i, j] = y_i g_j(x_i)``."""
        return self.y[:, None] * self.G


def max_l1_margin(inst, return_weights=False):
    """``max_{||w||_1 <= 1} min_i y_i (G w)_i`` solved as a linear program.

    A nonpositive value means the instance is not separable by the dictionary.
    """
    Z = inst.margins_matrix
    n, p = Z.shape
    # variables: w_plus (p), w_minus (p), t; minimise -t
    c = np.zeros(2 * p + 1)
    c[-1] = -1.0
    A_margin = np.hstack((-Z, Z, np.ones((n, 1))))
    A_norm = np.concatenate((np.ones(2 * p), [0.0]))[None, :]
    res = linprog(
        c,
        A_ub=np.vstack((A_margin, A_norm)),
        b_ub=np.concatenate((np.zeros(n), [1.0])),
        bounds=[(0, None)] * (2 * p) + [(None, None)],
        method="highs",
    )
    if res.status != 0:
        raise NumericFailure(f"margin LP failed: {res.message}")
    w = res.x[:p] - res.x[p:2 * p]
    gamma = float(-res.fun)
    return (gamma, w) if return_weights else gamma


def margin_error(f_values, y, gamma):
    """Fraction of points with ``y_i f_i <= gamma``."""
    f = np.asarray(f_values, dtype=float)
    y = np.asarray(y, dtype=float)
    if f.shape != y.shape:
        raise PreconditionError("f_values and y must have equal length")
    return float(np.mean(y * f <= gamma))


@dataclass
class MarginTrace:
    """Rows ``k = 0..K`` of a constant-step exponential-loss run."""

    k: np.ndarray
    exp_loss: np.ndarray
    norm_margin: np.ndarray
    total_alpha: np.ndarray
    weights: np.ndarray
    h: float

    def decay_bound(self, gamma):
        """``exp(-k h (gamma - h))`` for each row."""
        return np.exp(-self.k * self.h * (gamma - self.h))


def _best_column(Z, u, h):
    """Exactly minimise ``mean exp(-(u + a Z[:, j]))`` over ``|a| <= h`` and ``j``."""
    w = np.exp(-u)

    def deriv(a):
        return -np.mean(Z * w[:, None] * np.exp(-a[None, :] * Z), axis=0)

    p = Z.shape[1]
    lo, hi = np.full(p, -h), np.full(p, h)
    d_lo, d_hi = deriv(lo), deriv(hi)
    a = np.zeros(p)
    a[d_lo >= 0] = lo[d_lo >= 0]
    fix_hi = (d_lo < 0) & (d_hi <= 0)
    a[fix_hi] = hi[fix_hi]
    active = (d_lo < 0) & (d_hi > 0)
    for _ in range(200):
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        dm = deriv(mid)
        lo = np.where(active & (dm < 0), mid, lo)
        hi = np.where(active & (dm >= 0), mid, hi)
        done = active & (hi - lo <= 4 * np.spacing(h))
        a[done] = 0.5 * (lo + hi)[done]
        active &= ~done
    a[active] = 0.5 * (lo + hi)[active]
    vals = np.mean(w[:, None] * np.exp(-a[None, :] * Z), axis=0)
    j = int(np.argmin(vals))
    return j, float(a[j])


def margin_run(inst, h, K):
    """Boost the exponential loss with constant cap ``h`` for ``K`` steps from ``f = 0``."""
    if not h > 0:
        raise PreconditionError("step cap h must be positive")
    if K < 0:
        raise PreconditionError("K must be >= 0")
    Z = inst.margins_matrix
    n, p = Z.shape
    u = np.zeros(n)
    weights = np.zeros(p)
    losses, margins, totals = [1.0], [np.nan], [0.0]
    total = 0.0
    for _ in range(K):
        j, a = _best_column(Z, u, h)
        u = u + a * Z[:, j]
        weights[j] += a
        total += abs(a)
        loss = float(np.mean(np.exp(-u)))
        if not np.isfinite(loss):
            raise NumericFailure("exponential loss overflowed")
        losses.append(loss)
        margins.append(float(np.min(u) / total) if total > 0 else np.nan)
        totals.append(total)
    return MarginTrace(
        k=np.arange(K + 1),
        exp_loss=np.array(losses),
        norm_margin=np.array(margins),
        total_alpha=np.array(totals),
        weights=weights,
        h=float(h),
    )
