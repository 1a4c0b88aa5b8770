"""Synthetic one-dimensional classification model with exact risk integrals.

``X ~ U[0, 1]`` and ``P(Y = 1 | X = x)`` is a triangle wave with ``d``
teeth.  The conditional probability is piecewise linear with breakpoints at
multiples of ``1 / (2d)`` while stump ensembles are piecewise constant, so
classification error, excess squared loss and the risk of any margin loss
can be integrated in closed form interval by interval.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .losses import loss_value

BAYES_ERROR = 0.25


@dataclass(frozen=True)
class TargetModel:
    d: int = 2

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise PreconditionError(f"complexity d must be a positive integer, got {self.d}")

    def eta(self, x):
        return target_probability(self.d, x)

    def f_star(self, x):
        return 2.0 * target_probability(self.d, x) - 1.0

    def breakpoints(self):
        return np.arange(2 * self.d + 1) / (2.0 * self.d)


@dataclass
class Dataset:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).ravel()
        self.y = np.asarray(self.y, dtype=float).ravel()
        if self.x.shape != self.y.shape:
            raise PreconditionError("x and y lengths differ")
        if np.any(~((self.x >= 0) & (self.x <= 1))):
            raise PreconditionError("x values must lie in [0, 1]")
        if np.any(np.abs(self.y) != 1):
            raise PreconditionError("labels must be +1 or -1")

    def __len__(self):
        return self.x.size

    def subset(self, idx):
        return Dataset(self.x[idx], self.y[idx])


def target_probability(d, x):
    """Triangle-wave conditional probability P(Y = 1 | X = x)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0) & (arr <= 1))):
        raise PreconditionError("x must lie in [0, 1]")
    frac = np.mod(d * arr, 1.0)
    out = np.where(frac <= 0.5, 2.0 * frac, 2.0 * (1.0 - frac))
    return float(out) if np.ndim(x) == 0 else out


def sample(d, m, seed):
    """Draw ``m`` iid pairs from the model; identical seeds give identical data."""
    if m < 0:
        raise PreconditionError("sample size must be >= 0")
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=m)
    u = rng.uniform(0.0, 1.0, size=m)
    y = np.where(u < target_probability(d, x), 1.0, -1.0)
    return Dataset(x, y)


def _eta_on_segment(d, x, seg):
    # eta is linear on [seg/(2d), (seg+1)/(2d)]: rising on even segments
    return np.where(seg % 2 == 0, 2.0 * d * x - seg, seg + 1.0 - 2.0 * d * x)


class IntervalGrid:
    """Partition of [0, 1] on which eta is linear and ensembles are constant.

    ``extra`` holds every stump threshold that may appear in the ensembles
    evaluated on this grid.  The per-interval integrals of eta and f* are
    precomputed so that risks reduce to dot products.
    """

    def __init__(self, d, extra=()):
        self.d = int(d)
        model = TargetModel(self.d)
        pts = np.concatenate((model.breakpoints(), np.asarray(extra, dtype=float).ravel()))
        pts = np.unique(np.clip(pts, 0.0, 1.0))
        self.left = pts[:-1]
        self.right = pts[1:]
        self.length = self.right - self.left
        self.mid = 0.5 * (self.left + self.right)
        seg = np.minimum(np.floor(self.mid * 2 * self.d), 2 * self.d - 1)
        el = _eta_on_segment(self.d, self.left, seg)
        er = _eta_on_segment(self.d, self.right, seg)
        self.int_eta = self.length * 0.5 * (el + er)
        a, b = 2.0 * el - 1.0, 2.0 * er - 1.0
        self.int_fstar = self.length * 0.5 * (a + b)
        self.int_fstar2 = self.length * (a * a + a * b + b * b) / 3.0

    def values(self, ens):
        """Constant value of ``ens`` on each interval."""
        return ens.predict(self.mid)

    def class_error(self, fvals):
        # f >= 0 predicts +1, so the error mass there is the mass of Y = -1
        plus = fvals >= 0
        return float(np.sum(np.where(plus, self.length - self.int_eta, self.int_eta)))

    def excess_squared(self, fvals):
        return float(0.5 * np.sum(self.length * fvals**2 - 2.0 * fvals * self.int_fstar + self.int_fstar2))

    def risk(self, fvals, loss):
        return float(np.sum(self.int_eta * loss_value(loss, fvals)
                            + (self.length - self.int_eta) * loss_value(loss, -fvals)))


def bayes_error(d):
    """Bayes error of the model, cross-checked against exact integration."""
    TargetModel(d)
    closed = BAYES_ERROR
    integral = bayes_error_integral(d)
    if abs(closed - integral) > 1e-12:
        raise ArithmeticError(f"Bayes error integral {integral!r} disagrees with 0.25")
    return closed


def bayes_error_integral(d):
    """Integral of min(eta, 1 - eta), exact on quarter-segment pieces."""
    pts = np.arange(4 * d + 1) / (4.0 * d)
    grid = IntervalGrid(d, pts)
    ml = np.minimum(grid.int_eta, grid.length - grid.int_eta)
    return float(np.sum(ml))


def true_class_error(ens, d):
    """Exact misclassification rate of ``sign(f)`` with ``f = 0`` mapped to +1."""
    grid = IntervalGrid(d, ens.thresholds())
    return grid.class_error(grid.values(ens))


def true_excess_convex(ens, d):
    """Exact excess squared-loss risk ``0.5 * int (f - f*)^2 dx``."""
    grid = IntervalGrid(d, ens.thresholds())
    return grid.excess_squared(grid.values(ens))


def true_risk(ens, d, loss):
    """Exact population risk ``E phi(Y f(X))`` for any margin loss."""
    grid = IntervalGrid(d, ens.thresholds())
    return grid.risk(grid.values(ens), loss)
