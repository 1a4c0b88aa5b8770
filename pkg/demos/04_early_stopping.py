"""Three ways to stop early, compared on the same samples."""

# %%
from greedyboost import BoostConfig, LossSpec, StepSchedule, StoppingRule
from greedyboost.experiments import mean_over_seeds, sweep

config = BoostConfig(LossSpec("least_squares"), StepSchedule.power(1.0, 0.6667), max_iters=1024)
sizes = (50, 200, 800)

# %% Mean excess classification error over 10 seeds per sample size.
for text in ("rho:0.25", "cv", "oracle:error", "none"):
    rows = sweep(2, sizes, 10, 5, config, StoppingRule.parse(text))
    cells = "  ".join(f"m={m}: {mean_over_seeds(rows, 'excess_err', m=m):.4f}" for m in sizes)
    print(f"{text:<14} {cells}")
