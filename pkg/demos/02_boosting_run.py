"""One boosting run on the triangle-wave model, watching train and true error part ways."""

# %%
import numpy as np

from greedyboost import BoostConfig, LossSpec, StepSchedule, TargetModel, run_boost, sample

d, m, seed = 2, 100, 1
data = sample(d, m, seed)
config = BoostConfig(LossSpec("least_squares"), StepSchedule.power(1.0, 0.6667),
                     max_iters=1024, record_true_risk=True, seed=seed)
trace = run_boost(config, data, target=TargetModel(d))

# %% Training error keeps falling; the exact true error bottoms out and climbs back.
for k in (1, 4, 16, 64, 256, 1024):
    i = k - 1
    print(f"k={k:5d}  total step={trace.total_alpha[i]:7.3f}  train_err={trace.train_err[i]:.3f}"
          f"  true_err={trace.true_err[i]:.4f}  excess_sq={trace.true_excess[i]:.4f}")
best = int(np.argmin(trace.true_err))
print(f"best true error {trace.true_err[best]:.4f} at k={best + 1}; Bayes error is 0.25")

# %% The first rows of the trace CSV.
print("\n".join(trace.to_csv().splitlines()[:4]))
