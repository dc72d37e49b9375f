"""INI experiment configs.

Grammar (all sections optional except ``[experiment]``)::

    [experiment]
    objective = hartmann6        ; benchmark name (required)
    total_budget = 1000          ; total evaluations incl. initial batch (required)
    batch_size = 50              ; evaluations per batch (required)
    kernel_family = matern52
    feature_count = 100
    hyper_budget = 60
    seeds = 0, 1, 2
    out = runs                   ; output directory, relative to this file

    [placement]
    strategy = cir               ; cir | cvr | kmeans | uniform | exact
    m = 128
    alpha = 0.5
    gumbel_samples = 10
    prior_mean_mode = previous-posterior

    [sweep]
    strategies = cir, cvr        ; cross product of these lists
    m_values = 250, 500
    alphas = 0.5
    seeds = 0, 1, 2              ; overrides experiment.seeds

Unknown sections or keys are rejected with the offending name. A sweep
expands into the cross product of its lists over the base config; every
(family, seed) pair becomes one run.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .loop import ExperimentConfig

_EXPERIMENT_KEYS = {
    "objective", "total_budget", "batch_size", "kernel_family",
    "feature_count", "hyper_budget", "seeds", "out",
}
_PLACEMENT_KEYS = {"strategy", "m", "alpha", "gumbel_samples", "prior_mean_mode"}
_SWEEP_KEYS = {"strategies", "m_values", "alphas", "seeds"}
_SECTIONS = {"experiment": _EXPERIMENT_KEYS, "placement": _PLACEMENT_KEYS,
             "sweep": _SWEEP_KEYS}


@dataclass
class LoadedConfig:
    """A parsed config file: base experiment, optional sweep, output dir."""

    base: ExperimentConfig
    sweep: dict[str, list]
    out_dir: Path

    def runs(self) -> list[tuple[ExperimentConfig, int]]:
        """Expand into concrete (family config, seed) pairs."""
        strategies = self.sweep.get("strategies") or [self.base.strategy]
        m_values = self.sweep.get("m_values") or [self.base.m]
        alphas = self.sweep.get("alphas") or [self.base.alpha]
        seeds = self.sweep.get("seeds") or list(self.base.seeds)
        out = []
        for strategy in strategies:
            for m in m_values:
                for alpha in alphas:
                    family = replace(self.base, strategy=strategy, m=m,
                                     alpha=alpha, seeds=tuple(seeds))
                    for seed in seeds:
                        out.append((family, int(seed)))
        return out


def _int_list(raw: str, context: str) -> list[int]:
    try:
        return [int(tok.strip()) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"{context}: expected a comma-separated integer list, "
                          f"got {raw!r}") from None


def _float_list(raw: str, context: str) -> list[float]:
    try:
        return [float(tok.strip()) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"{context}: expected a comma-separated number list, "
                          f"got {raw!r}") from None


def load(path) -> LoadedConfig:
    """Parse and validate a config file. Raises ConfigError on any problem."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from None

    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}] in {path}")
        for key in parser[section]:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}] of {path}")
    if "experiment" not in parser:
        raise ConfigError(f"missing [experiment] section in {path}")

    exp = parser["experiment"]
    for required in ("objective", "total_budget", "batch_size"):
        if required not in exp:
            raise ConfigError(f"missing key {required!r} in [experiment] of {path}")

    placement = parser["placement"] if "placement" in parser else {}
    kwargs = dict(
        objective=exp.get("objective"),
        total_budget=exp.get("total_budget"),
        batch_size=exp.get("batch_size"),
    )
    if "kernel_family" in exp:
        kwargs["kernel_family"] = exp.get("kernel_family")
    if "feature_count" in exp:
        kwargs["feature_count"] = exp.get("feature_count")
    if "hyper_budget" in exp:
        kwargs["hyper_budget"] = exp.get("hyper_budget")
    if "seeds" in exp:
        kwargs["seeds"] = tuple(_int_list(exp.get("seeds"), "experiment.seeds"))
    for key in _PLACEMENT_KEYS:
        if key in placement:
            kwargs[key] = placement.get(key)
    try:
        base = ExperimentConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from None

    sweep: dict[str, list] = {}
    if "sweep" in parser:
        sw = parser["sweep"]
        if "strategies" in sw:
            sweep["strategies"] = [tok.strip().lower()
                                   for tok in sw.get("strategies").split(",")
                                   if tok.strip()]
        if "m_values" in sw:
            sweep["m_values"] = _int_list(sw.get("m_values"), "sweep.m_values")
        if "alphas" in sw:
            sweep["alphas"] = _float_list(sw.get("alphas"), "sweep.alphas")
        if "seeds" in sw:
            sweep["seeds"] = _int_list(sw.get("seeds"), "sweep.seeds")
        for key, values in sweep.items():
            if not values:
                raise ConfigError(f"sweep.{key} is empty")
        # sweep values must validate too
        loaded = LoadedConfig(base=base, sweep=sweep, out_dir=Path("."))
        try:
            loaded.runs()
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid sweep in {path}: {exc}") from None

    out_raw = exp.get("out", "runs")
    out_dir = Path(out_raw)
    if not out_dir.is_absolute():
        out_dir = path.parent / out_dir
    return LoadedConfig(base=base, sweep=sweep, out_dir=out_dir)


def dump(config: ExperimentConfig, out: str = "runs") -> str:
    """Render a config back to INI text (round-trips through load)."""
    lines = ["[experiment]"]
    lines.append(f"objective = {config.objective}")
    lines.append(f"total_budget = {config.total_budget}")
    lines.append(f"batch_size = {config.batch_size}")
    lines.append(f"kernel_family = {config.kernel_family}")
    lines.append(f"feature_count = {config.feature_count}")
    lines.append(f"hyper_budget = {config.hyper_budget}")
    lines.append(f"seeds = {', '.join(str(s) for s in config.seeds)}")
    lines.append(f"out = {out}")
    lines.append("")
    lines.append("[placement]")
    lines.append(f"strategy = {config.strategy}")
    lines.append(f"m = {config.m}")
    lines.append(f"alpha = {config.alpha}")
    lines.append(f"gumbel_samples = {config.gumbel_samples}")
    lines.append(f"prior_mean_mode = {config.prior_mean_mode}")
    return "\n".join(lines) + "\n"
