"""Command-line entry point: ``greedyboost <experiment> CONFIG [--out DIR]``.

Exit status is 0 on success, 2 for configuration errors and 3 for numeric
failures.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from .boosting import run_boost
from .bounds import cor43_bound, default_eps_bar, lemma42_curve, BoundInputs, rademacher_mc
from .config import EXPERIMENTS, parse_config
from .errors import ConfigError, NumericFailure
from .experiments import SUMMARY_HEADER, derive_seed, run_single, sweep
from .losses import auxiliary_psi, curvature_bound
from .margin import MarginInstance, margin_run, max_l1_margin
from .synth import sample

BOUNDS_HEADER = "k,lemma42,cor43,observed_gap"
RADEMACHER_HEADER = "m,estimate,stderr,n_draws,seed"
MARGIN_HEADER = "k,exp_loss,norm_margin,bound"


def _num(v):
    return "" if v is None or np.isnan(v) else repr(float(v))


def _write(path, text):
    """Write via a temporary file and an atomic rename."""
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return path


def gen_csv(cfg):
    data = sample(cfg.d, cfg.m, cfg.seed)
    lines = ["x,y"] + [f"{x!r},{int(y)}" for x, y in zip(data.x.tolist(), data.y.tolist())]
    return "\n".join(lines) + "\n"


def bounds_csv(cfg):
    if not cfg.schedule.restricted:
        raise ConfigError("bounds needs a restricted step-size schedule")
    data = sample(cfg.d, cfg.m, cfg.seed)
    trace = run_boost(cfg.boost_config(), data)
    loss = cfg.loss
    M = curvature_bound(loss)
    # the run's own final model serves as the reference function
    A = auxiliary_psi(loss, trace.objectives())
    gap = np.maximum(0.0, A - A[-1])
    f_bar = trace.ensemble.coef_l1
    h = trace.caps
    inputs = BoundInputs(h, default_eps_bar(h, M, cfg.inner_tol), f_bar, float(gap[0]), M)
    lemma = lemma42_curve(inputs)
    monotone = len(h) == 0 or bool(np.all(np.diff(h) <= 0))
    lines = [BOUNDS_HEADER]
    for k in range(len(trace) + 1):
        cor = cor43_bound(h, f_bar, gap[0], M, k) if monotone and len(h) else None
        lines.append(f"{k},{_num(lemma[k])},{_num(cor)},{_num(gap[k])}")
    return "\n".join(lines) + "\n"


def rademacher_csv(cfg):
    ms = cfg.m_list or [cfg.m]
    lines = [RADEMACHER_HEADER]
    for i, m in enumerate(ms):
        seed = derive_seed(cfg.seed, i)
        xs = np.random.default_rng(seed).uniform(size=m)
        est, se = rademacher_mc(xs, cfg.n_draws, seed, return_stderr=True)
        lines.append(f"{m},{_num(est)},{_num(se)},{cfg.n_draws},{seed}")
    return "\n".join(lines) + "\n"


def read_instance(path):
    """Instance CSV: one row per point, ``y,g1,g2,...``; a header row is skipped."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                if lineno == 1 and not rows:
                    continue
                raise ConfigError(f"{path}: non-numeric row {lineno}") from None
    if not rows or len({len(r) for r in rows}) != 1 or len(rows[0]) < 2:
        raise ConfigError(f"{path}: need equal-length rows y,g1,...")
    arr = np.array(rows)
    return MarginInstance(arr[:, 1:], arr[:, 0])


def margin_csv(cfg, base_dir="."):
    path = cfg.instance if os.path.isabs(cfg.instance) else os.path.join(base_dir, cfg.instance)
    inst = read_instance(path)
    gamma = max_l1_margin(inst)
    run = margin_run(inst, cfg.h, cfg.K)
    bound = run.decay_bound(gamma) if cfg.h < gamma else np.full(len(run.k), np.nan)
    lines = [MARGIN_HEADER]
    for k, loss, marg, b in zip(run.k, run.exp_loss, run.norm_margin, bound):
        lines.append(f"{k},{_num(loss)},{_num(marg)},{_num(b)}")
    return "\n".join(lines) + "\n"


def run_experiment(cfg, out_dir, base_dir=".", echo=None):
    """Run the configured experiment, write its CSVs into ``out_dir`` and return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    exp = cfg.experiment
    written = []
    if exp == "gen":
        written.append(_write(os.path.join(out_dir, "data.csv"), gen_csv(cfg)))
    elif exp == "train":
        row, trace = run_single(cfg.d, cfg.m, cfg.seed, cfg.boost_config(), cfg.stop)
        written.append(_write(os.path.join(out_dir, "trace.csv"), trace.to_csv()))
        written.append(_write(os.path.join(out_dir, "summary.csv"), SUMMARY_HEADER + "\n" + row.to_csv() + "\n"))
    elif exp == "sweep":
        run_dir = os.path.join(out_dir, "runs")
        os.makedirs(run_dir, exist_ok=True)

        def keep(index, row, trace):
            written.append(_write(os.path.join(run_dir, f"run{index:04d}_m{row.m}.csv"), trace.to_csv()))

        rows = sweep(cfg.d, cfg.m_list, cfg.n_seeds, cfg.seed, cfg.boost_config(), cfg.stop, on_run=keep)
        meta = {"master_seed": cfg.seed, "n_seeds": cfg.n_seeds, "d": cfg.d, "m_list": cfg.m_list,
                "loss": cfg.loss.name, "stop": cfg.stop.kind, "max_iters": cfg.max_iters}
        written.append(_write(os.path.join(out_dir, "meta.json"), json.dumps(meta, sort_keys=True, indent=1) + "\n"))
        body = "\n".join([SUMMARY_HEADER] + [r.to_csv() for r in rows]) + "\n"
        written.append(_write(os.path.join(out_dir, "summary.csv"), body))
    else:
        name, text = {
            "bounds": ("bounds.csv", lambda: bounds_csv(cfg)),
            "rademacher": ("rademacher.csv", lambda: rademacher_csv(cfg)),
            "margin": ("margin.csv", lambda: margin_csv(cfg, base_dir)),
        }[exp]
        body = text()
        written.append(_write(os.path.join(out_dir, name), body))
        if echo is not None:
            echo.write(body)
    return written


def main(argv=None):
    parser = argparse.ArgumentParser(prog="greedyboost", description=__doc__.splitlines()[0])
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("config", help="key=value configuration file")
    parser.add_argument("--out", default=None, help="output directory (default: config 'output' or .)")
    args = parser.parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read(), experiment=args.experiment)
        out = args.out or cfg.output or "."
        run_experiment(cfg, out, base_dir=os.path.dirname(os.path.abspath(args.config)), echo=sys.stdout)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericFailure as exc:
        where = "" if exc.iteration is None else f" at iteration {exc.iteration}"
        print(f"numeric failure{where}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    return 0
