"""Convex margin losses phi(y f) used by the boosting procedure.

Every loss is written in margin form, i.e. as a function of ``u = y * f(x)``
with ``y`` in {-1, +1}.  Besides values and derivatives each loss carries
three constants used by the convergence and generalisation bounds: a
Lipschitz constant on ``[-beta, beta]``, a uniform curvature bound ``M`` and
the monotone auxiliary transform ``psi`` under which ``M`` is valid.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError

LOSS_KINDS = (
    "logistic",
    "exponential",
    "least_squares",
    "modified_least_squares",
    "p_norm",
)


@dataclass(frozen=True)
class LossSpec:
    """A loss from the catalogue; ``p`` is only read for ``p_norm``."""

    kind: str = "least_squares"
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in LOSS_KINDS:
            raise PreconditionError(f"unknown loss {self.kind!r}")
        if self.kind == "p_norm" and not self.p >= 2:
            raise PreconditionError(f"p_norm needs p >= 2, got {self.p}")

    @property
    def name(self):
        if self.kind == "p_norm":
            return f"p_norm(p={self.p:g})"
        return self.kind


def _as_finite(u):
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("loss evaluated at a non-finite margin")
    return arr


def _unwrap(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def loss_value(spec, u):
    """Return phi(u) for a scalar or array of margins."""
    a = _as_finite(u)
    kind = spec.kind
    if kind == "logistic":
        out = np.logaddexp(0.0, -a)
    elif kind == "exponential":
        out = np.exp(-a)
    elif kind == "least_squares":
        # (f - y)^2 == (1 - f y)^2 when y = +-1
        out = 0.5 * (1.0 - a) ** 2
    elif kind == "modified_least_squares":
        out = 0.5 * np.maximum(1.0 - a, 0.0) ** 2
    else:
        out = np.abs(1.0 - a) ** spec.p
    return _unwrap(out, u)


def loss_derivative(spec, u):
    """Return d phi / du.

    At the kink u = 1 of the modified least squares and p-norm losses the
    right-continuous branch is used, which is 0 in both cases.
    """
    a = _as_finite(u)
    kind = spec.kind
    if kind == "logistic":
        out = -np.exp(-np.logaddexp(0.0, a))
    elif kind == "exponential":
        out = -np.exp(-a)
    elif kind == "least_squares":
        out = a - 1.0
    elif kind == "modified_least_squares":
        out = np.minimum(a - 1.0, 0.0)
    else:
        d = a - 1.0
        out = spec.p * np.sign(d) * np.abs(d) ** (spec.p - 1.0)
    return _unwrap(out, u)


def lipschitz_bound(spec, beta):
    """Lipschitz constant of phi on [-beta, beta]."""
    if not beta >= 0:
        raise PreconditionError(f"beta must be >= 0, got {beta}")
    kind = spec.kind
    if kind == "logistic":
        return 1.0
    if kind == "exponential":
        return float(np.exp(beta))
    if kind in ("least_squares", "modified_least_squares"):
        return 2.0 * (beta + 1.0)
    return spec.p * (beta + 1.0) ** (spec.p - 1.0)


def curvature_bound(spec):
    """Uniform bound M on the second derivative of h -> psi(Q(f + h g)) at 0."""
    return 0.25 if spec.kind == "logistic" else 1.0


def auxiliary_psi(spec, u):
    """Monotone transform applied to the empirical risk inside bound bookkeeping."""
    a = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError("psi evaluated at a non-finite value")
    kind = spec.kind
    if kind == "exponential":
        if np.any(a <= 0):
            raise DomainError("psi(u) = ln u needs u > 0")
        out = np.log(a)
    elif kind == "p_norm":
        if np.any(a < 0):
            raise DomainError("psi(u) = u^(2/p) / (2(p-1)) needs u >= 0")
        out = a ** (2.0 / spec.p) / (2.0 * (spec.p - 1.0))
    else:
        out = a
    return _unwrap(out, u)


def parse_loss(text, p=None):
    """Build a LossSpec from its config name, e.g. ``"p_norm"`` with ``p=3``."""
    text = text.strip()
    if text == "p_norm":
        return LossSpec("p_norm", 2.0 if p is None else float(p))
    if p is not None:
        raise PreconditionError("p is only meaningful for the p_norm loss")
    return LossSpec(text)
