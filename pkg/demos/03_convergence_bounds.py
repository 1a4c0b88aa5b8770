"""Numerical convergence bounds evaluated along an observed run."""

# %%
import numpy as np

from greedyboost import (BoostConfig, BoundInputs, LossSpec, StepSchedule, auxiliary_psi, cor43_bound,
                         curvature_bound, default_eps_bar, lemma42_curve, run_boost, sample)

loss = LossSpec("logistic")
data = sample(2, 80, 3)
config = BoostConfig(loss, StepSchedule.power(1.0, 0.6667), max_iters=200)
trace = run_boost(config, data)

# %% Gap to the run's own final model, in psi space, against both bounds.
M = curvature_bound(loss)
A = auxiliary_psi(loss, trace.objectives())
gap = np.maximum(0.0, A - A[-1])
h = trace.caps
f_bar = trace.ensemble.coef_l1
lemma = lemma42_curve(BoundInputs(h, default_eps_bar(h, M, config.inner_tol), f_bar, gap[0], M))
for k in (0, 1, 10, 50, 100, 199):
    cor = cor43_bound(h, f_bar, gap[0], M, k)
    print(f"k={k:4d}  observed={gap[k]:.5f}  multi-step={lemma[k]:.5f}  simplified={cor:.5f}")
