"""Numerical-convergence and generalisation bounds, plus Rademacher estimates.

All bound evaluators take the step caps ``h_0, h_1, ...`` and use the
cumulative sums ``s_j = ||f_0||_1 + sum_{i<j} h_i``.  Inner minimisations
over the split index are done by exhaustive scan.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDataset, PreconditionError
from .losses import lipschitz_bound, loss_value

_CHUNK = 4096


@dataclass
class BoundInputs:
    """Quantities entering the multi-step convergence bound.

    ``eps_bar_seq[j]`` is ``h_j^2 M / 2 + eps_j``; ``delta_A0`` is the
    initial gap ``max(0, A(f_0) - A(f_bar))``.
    """

    h_seq: np.ndarray
    eps_bar_seq: np.ndarray
    f_bar_norm: float
    delta_A0: float
    M: float = 1.0
    f0_norm: float = 0.0

    def __post_init__(self):
        self.h_seq = np.asarray(self.h_seq, dtype=float)
        self.eps_bar_seq = np.asarray(self.eps_bar_seq, dtype=float)
        if np.any(self.h_seq <= 0):
            raise PreconditionError("step caps must be positive")
        if np.any(self.eps_bar_seq < 0):
            raise PreconditionError("eps_bar must be nonnegative")
        if self.f_bar_norm < 0 or self.f0_norm < 0 or self.delta_A0 < 0:
            raise PreconditionError("norms and delta_A0 must be nonnegative")


def default_eps_bar(h_seq, M, inner_tol=0.0):
    h = np.asarray(h_seq, dtype=float)
    return 0.5 * h * h * M + inner_tol


def cumulative_steps(h_seq, f0_norm=0.0):
    """``s_0, s_1, ..., s_n`` for ``n = len(h_seq)``."""
    return f0_norm + np.concatenate(([0.0], np.cumsum(np.asarray(h_seq, dtype=float))))


def _ratio(num, den):
    if den == 0:
        return 1.0 if num == 0 else np.inf
    return num / den


def lemma42_bound(inputs, k):
    """Bound on ``Delta A(f_k)`` obtained by chaining the one-step inequality."""
    if k < 0 or k > len(inputs.h_seq) or k > len(inputs.eps_bar_seq):
        raise PreconditionError(f"k={k} exceeds the supplied sequences")
    fb = inputs.f_bar_norm
    s = cumulative_steps(inputs.h_seq[:k], inputs.f0_norm)
    den = s[k] + fb
    total = _ratio(inputs.f0_norm + fb, den) * inputs.delta_A0
    for j in range(1, k + 1):
        total += (s[j] + fb) / den * inputs.eps_bar_seq[j - 1]
    return float(total)


def lemma42_curve(inputs, K=None):
    """``lemma42_bound(inputs, k)`` for every ``k = 0..K`` at once."""
    K = min(len(inputs.h_seq), len(inputs.eps_bar_seq)) if K is None else K
    fb = inputs.f_bar_norm
    s = cumulative_steps(inputs.h_seq[:K], inputs.f0_norm)
    den = s + fb
    weighted = np.concatenate(([0.0], np.cumsum((s[1:] + fb) * inputs.eps_bar_seq[:K])))
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(den > 0, (inputs.f0_norm + fb) / den, 1.0) * inputs.delta_A0
        rest = np.where(den > 0, weighted / den, 0.0)
    return first + rest


def _min_split(h, k, fb, den, h0):
    # min over l in [1, k] of l (s_l + fb) / den * h0^2 + (k - l) h_l^2, scanned exhaustively
    s = cumulative_steps(h[:k])
    ell = np.arange(1, k + 1)
    h_ell = np.append(h[1:k], 0.0)
    terms = ell * (s[1:] + fb) / den * h0**2 + (k - ell) * h_ell**2
    return float(np.min(terms))


def cor43_bound(h_seq, f_bar_norm, delta_A0, M, k):
    """Simplified convergence bound for nonincreasing caps and ``f_0 = 0``."""
    h = np.asarray(h_seq, dtype=float)
    if h.size == 0:
        raise PreconditionError("empty step schedule")
    if np.any(np.diff(h) > 0):
        raise PreconditionError("step caps must be nonincreasing")
    if k < 0 or k > h.size:
        raise PreconditionError(f"k={k} exceeds the schedule length")
    s_k = float(np.sum(h[:k]))
    den = s_k + f_bar_norm
    first = _ratio(f_bar_norm, den) * delta_A0
    if k == 0 or M == 0:
        return float(first)
    return float(first + _min_split(h, k, f_bar_norm, den, h[0]) * M)


def thm32_bound(C_S, m, beta_m, f_bar_norm, Q_f_bar):
    """Expected-risk bound for constant-step logistic boosting."""
    if m < 1 or beta_m < 0 or f_bar_norm < 0:
        raise PreconditionError("need m >= 1, beta_m >= 0, f_bar_norm >= 0")
    root = np.sqrt(m)
    last = 0.0 if f_bar_norm == 0 else f_bar_norm / (f_bar_norm + beta_m)
    return float(Q_f_bar + (2 * C_S + 1) * beta_m / root + (f_bar_norm + 1) / root + last)


def thm33_delta(h_seq, k_m, f_bar_norm, M):
    """Optimisation term of the general rate bound.

    ``M`` is either the uniform curvature constant or a nondecreasing
    callable evaluated at ``beta_m + h_{k_m}``.
    """
    h = np.asarray(h_seq, dtype=float)
    if h.size == 0:
        raise PreconditionError("empty step schedule")
    if np.any(np.diff(h) > 0):
        raise PreconditionError("step caps must be nonincreasing")
    if k_m < 1 or h.size < k_m + 1:
        raise PreconditionError("need k_m >= 1 and at least k_m + 1 caps")
    beta = float(np.sum(h[:k_m]))
    m_val = M(beta + h[k_m]) if callable(M) else M
    if m_val == 0:
        return 0.0
    return float(_min_split(h, k_m, f_bar_norm, beta + f_bar_norm, h[0]) * m_val)


def thm33_bound(loss, Q_f_bar, f_bar_norm, R, m, h_seq, k_m, M):
    """Full right-hand side of the rate bound with ``beta_m = s_{k_m}``."""
    beta = float(np.sum(np.asarray(h_seq, dtype=float)[:k_m]))
    dev = uniform_dev_bound(lipschitz_bound(loss, beta), beta, R)
    fluct = loss_value(loss, -f_bar_norm) / np.sqrt(m)
    approx = 0.0 if f_bar_norm == 0 else f_bar_norm * loss_value(loss, 0.0) / (f_bar_norm + beta)
    return float(Q_f_bar + dev + fluct + approx + thm33_delta(h_seq, k_m, f_bar_norm, M))


def uniform_dev_bound(gamma, beta, R):
    """Upper bound on ``E sup_{||f||_1 <= beta} (Q(f) - Q-hat(f))``."""
    if gamma < 0 or beta < 0 or R < 0:
        raise PreconditionError("arguments must be nonnegative")
    return 2.0 * gamma * beta * R


def _group_ends(xs):
    """Sort order and the end index of each block of tied abscissae."""
    arr = np.asarray(xs, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyDataset("Rademacher complexity needs at least one sample")
    order = np.argsort(arr, kind="stable")
    srt = arr[order]
    ends = np.flatnonzero(np.diff(srt) != 0)
    return order, np.append(ends, srt.size - 1)


def stump_sup(sigma_sorted, ends):
    """Exact ``sup_g (1/m) sum sigma_i g(x_i)`` over signed stumps, per row.

    Stump patterns on the sample are the prefixes of the sorted abscissae
    that do not split ties, plus the empty prefix.
    """
    m = sigma_sorted.shape[-1]
    partial = np.cumsum(sigma_sorted, axis=-1)[..., ends]
    return np.maximum(np.max(np.abs(partial), axis=-1), 0.0) / m


def rademacher_mc(xs, n_draws, seed, return_stderr=False):
    """Monte Carlo estimate of the sample Rademacher complexity of signed stumps.

    Draws are generated in fixed-size chunks, each from its own seed stream
    keyed by ``(seed, chunk index)``, so results do not depend on how the
    work is split.  With ``return_stderr`` a ``(estimate, stderr)`` pair is
    returned.
    """
    if n_draws < 1:
        raise PreconditionError("n_draws must be >= 1")
    order, ends = _group_ends(xs)
    m = order.size
    sups = []
    for chunk, start in enumerate(range(0, n_draws, _CHUNK)):
        n = min(_CHUNK, n_draws - start)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
        sigma = rng.choice(np.array([-1.0, 1.0]), size=(n, m))
        # sigma is iid so drawing it in sorted order loses nothing
        sups.append(stump_sup(sigma, ends))
    sups = np.concatenate(sups)
    est = float(np.mean(sups))
    if not return_stderr:
        return est
    stderr = float(np.std(sups, ddof=1) / np.sqrt(n_draws)) if n_draws > 1 else float("nan")
    return est, stderr


def rademacher_exact(xs, max_m=20):
    """Exact sample Rademacher complexity by enumerating all 2^m sign vectors."""
    order, ends = _group_ends(xs)
    m = order.size
    if m > max_m:
        raise PreconditionError(f"exact enumeration limited to m <= {max_m}")
    codes = np.arange(2**m)[:, None]
    sigma = np.where((codes >> np.arange(m)[None, :]) & 1, 1.0, -1.0)
    return float(np.mean(stump_sup(sigma, ends)))


def fit_rademacher_constant(ms, estimates):
    """Smallest ``C_S`` with ``R_m <= C_S / sqrt(m)`` on the supplied points."""
    ms = np.asarray(ms, dtype=float)
    return float(np.max(np.sqrt(ms) * np.asarray(estimates, dtype=float)))
