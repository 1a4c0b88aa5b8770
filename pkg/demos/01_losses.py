"""Margin losses side by side: values, slopes, and the constants the bounds need."""

# %%
import numpy as np

from greedyboost import LossSpec, auxiliary_psi, curvature_bound, lipschitz_bound, loss_derivative, loss_value

losses = [LossSpec("logistic"), LossSpec("exponential"), LossSpec("least_squares"),
          LossSpec("modified_least_squares"), LossSpec("p_norm", p=3.0)]
u = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])

# %% Every loss punishes a wrong-side margin more than the mirrored right-side one.
print("margin u:".ljust(26), "  ".join(f"{v:8.3f}" for v in u))
for spec in losses:
    print(f"{spec.name:<26}", "  ".join(f"{v:8.3f}" for v in loss_value(spec, u)))

# %% Slopes; the least-squares family flattens (or turns) past u = 1.
for spec in losses:
    print(f"d/du {spec.name:<21}", "  ".join(f"{v:8.3f}" for v in loss_derivative(spec, u)))

# %% Lipschitz constant on |u| <= 2, curvature bound M, and psi at Q = 0.5.
for spec in losses:
    print(f"{spec.name:<26} gamma(2)={lipschitz_bound(spec, 2.0):8.3f}  M={curvature_bound(spec):5.2f}"
          f"  psi(0.5)={auxiliary_psi(spec, 0.5):8.4f}")
