"""Signed one-dimensional stumps ``sign * I(x <= a)`` on [0, 1]."""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDataset, PreconditionError


@dataclass(frozen=True, order=True)
class SignedStump:
    threshold: float
    sign: int = 1

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise PreconditionError(f"threshold {self.threshold} outside [0, 1]")
        if self.sign not in (-1, 1):
            raise PreconditionError(f"sign must be +1 or -1, got {self.sign}")

    def __neg__(self):
        return SignedStump(self.threshold, -self.sign)

    def __call__(self, x):
        return stump_eval(self, x)


def _check_unit(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise PreconditionError("stump inputs must lie in [0, 1]")
    return arr


def stump_eval(s, x):
    """Evaluate a stump at a scalar or an array of points in [0, 1]."""
    arr = _check_unit(x)
    out = np.where(arr <= s.threshold, float(s.sign), 0.0)
    return float(out) if np.ndim(x) == 0 else out


def candidate_thresholds(xs):
    """One threshold per distinct indicator pattern ``I(x <= a)`` on ``xs``.

    Returns 0, the midpoints between consecutive distinct sorted values and 1.
    If some sample sits exactly at 0 the first midpoint would repeat the
    pattern of threshold 0 and is dropped.
    """
    arr = _check_unit(xs).ravel()
    if arr.size == 0:
        raise EmptyDataset("candidate_thresholds needs at least one sample")
    u = np.unique(arr)
    if u.size == 1 and u[0] == 0.0:
        return np.array([0.0])
    mids = 0.5 * (u[:-1] + u[1:])
    if u[0] == 0.0:
        mids = mids[1:]
    return np.concatenate(([0.0], mids, [1.0]))
