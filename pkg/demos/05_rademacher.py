"""Rademacher complexity of signed stumps shrinks like 1/sqrt(m)."""

# %%
import numpy as np

from greedyboost import fit_rademacher_constant, rademacher_exact, rademacher_mc

rng = np.random.default_rng(0)

# %% Monte Carlo estimates with the exact per-draw supremum.
ms = [25, 100, 400, 1600]
est = []
for m in ms:
    value, se = rademacher_mc(rng.uniform(size=m), 10_000, seed=m, return_stderr=True)
    est.append(value)
    print(f"m={m:5d}  R={value:.4f} +- {se:.4f}  sqrt(m) R={np.sqrt(m) * value:.3f}")
print(f"fitted C_S = {fit_rademacher_constant(ms, est):.3f}")

# %% Small samples can be enumerated exactly; ties shrink the complexity.
print("distinct xs, m=10:", rademacher_exact(rng.uniform(size=10)))
print("five tied pairs, m=10:", rademacher_exact(np.repeat(rng.uniform(size=5), 2)))
