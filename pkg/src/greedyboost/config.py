"""``key=value`` experiment configuration files."""

from dataclasses import dataclass, field

from .boosting import BoostConfig, StepSchedule
from .errors import ConfigError, PreconditionError
from .losses import parse_loss
from .stopping import StoppingRule

EXPERIMENTS = ("gen", "train", "sweep", "bounds", "rademacher", "margin")

# experiments that need each key
_REQUIRED = {
    "gen": ("m", "seed"),
    "train": ("m", "seed"),
    "sweep": ("m_list", "seed"),
    "bounds": ("m", "seed"),
    "rademacher": ("seed",),
    "margin": ("instance", "h", "K"),
}


def _uint64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise ValueError("must be >= 0")
    return v


def _int_list(text):
    vals = [_positive_int(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def _bool(text):
    low = text.lower()
    if low in ("1", "true", "yes"):
        return True
    if low in ("0", "false", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_schedule(text):
    """``constant:h0``, ``power:c:gamma`` or ``unrestricted``."""
    parts = text.strip().split(":")
    kind = parts[0]
    if kind == "constant" and len(parts) == 2:
        return StepSchedule.constant(float(parts[1]))
    if kind == "power" and len(parts) == 3:
        return StepSchedule.power(float(parts[1]), float(parts[2]))
    if kind == "unrestricted" and len(parts) == 1:
        return StepSchedule.unrestricted()
    raise ValueError(f"bad schedule {text!r}")


def _experiment(text):
    if text not in EXPERIMENTS:
        raise ValueError(f"experiment must be one of {', '.join(EXPERIMENTS)}")
    return text


_PARSERS = {
    "experiment": _experiment,
    "d": _positive_int,
    "m": _positive_int,
    "m_list": _int_list,
    "seed": _uint64,
    "loss": str,
    "p": float,
    "schedule": parse_schedule,
    "max_iters": _nonneg_int,
    "stop": StoppingRule.parse,
    "inner_tol": float,
    "n_seeds": _positive_int,
    "n_draws": _positive_int,
    "normalize_basis": _bool,
    "output": str,
    "instance": str,
    "h": float,
    "K": _nonneg_int,
}


@dataclass
class RunConfig:
    experiment: str
    d: int = 2
    m: int = None
    m_list: list = None
    seed: int = None
    loss: object = None
    schedule: StepSchedule = field(default_factory=lambda: StepSchedule.power(1.0, 0.6667))
    max_iters: int = 1024
    stop: StoppingRule = field(default_factory=StoppingRule)
    inner_tol: float = 1e-10
    n_seeds: int = 20
    n_draws: int = 10000
    normalize_basis: bool = False
    output: str = None
    instance: str = None
    h: float = None
    K: int = None

    def boost_config(self):
        return BoostConfig(
            loss=self.loss,
            schedule=self.schedule,
            max_iters=self.max_iters,
            inner_tol=self.inner_tol,
            seed=self.seed or 0,
            normalize_basis=self.normalize_basis,
        )


def parse_config(text, experiment=None):
    """Parse ``key=value`` lines; ``#`` starts a comment.

    ``experiment`` supplies the experiment when the text omits it and must
    agree with it otherwise.
    """
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or not key:
            raise ConfigError(f"expected key=value, got {raw.strip()!r}", lineno)
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = _PARSERS[key](val)
        except (ValueError, PreconditionError) as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
        lines[key] = lineno

    if experiment is not None:
        if "experiment" in values and values["experiment"] != experiment:
            raise ConfigError(f"config is for {values['experiment']!r}, not {experiment!r}",
                              lines["experiment"])
        values["experiment"] = experiment
    if "experiment" not in values:
        raise ConfigError("missing required key 'experiment'")
    exp = values["experiment"]
    for key in _REQUIRED[exp]:
        if key not in values:
            raise ConfigError(f"missing required key {key!r} for experiment {exp!r}")
    if exp == "rademacher" and "m" not in values and "m_list" not in values:
        raise ConfigError("rademacher needs m or m_list")

    try:
        values["loss"] = parse_loss(values.get("loss", "least_squares"), values.pop("p", None))
    except PreconditionError as exc:
        raise ConfigError(str(exc), lines.get("loss", lines.get("p"))) from None
    if values.get("inner_tol", 0.0) < 0:
        raise ConfigError("inner_tol must be >= 0", lines["inner_tol"])
    return RunConfig(**values)
