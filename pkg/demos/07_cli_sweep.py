"""Driving the command-line harness from Python: a small sweep written to CSV."""

# %%
import pathlib
import tempfile

from greedyboost.cli import main

work = pathlib.Path(tempfile.mkdtemp())
(work / "sweep.cfg").write_text(
    "experiment=sweep\n"
    "d=2\n"
    "m_list=50,200\n"
    "n_seeds=3\n"
    "seed=42\n"
    "stop=cv\n"
    "max_iters=512\n"
)

# %% Equivalent to: greedyboost sweep sweep.cfg --out <dir>
status = main(["sweep", str(work / "sweep.cfg"), "--out", str(work / "out")])
print("exit status", status)
print((work / "out" / "summary.csv").read_text())
print((work / "out" / "meta.json").read_text())
