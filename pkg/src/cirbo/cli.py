"""Command line interface: run experiments, inspect placement, benchmark.

Exit codes: 0 on success, 1 for configuration problems (bad flags,
unparseable or invalid config files, empty grids), 2 for runtime
failures (a run that errored, unexpected exceptions).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import multiprocessing
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import accel, benchmarks, configfile
from .errors import ConfigError
from .gp import Dataset, exact_posterior, fit_hyperparameters
from .kernels import isotropic
from .loop import (ExperimentConfig, _ShiftedModel, aggregate_curves,
                   config_digest, initial_kernel, run, write_run_csv,
                   write_sidecar)
from .placement import PlacementConfig, select_inducing

log = logging.getLogger("cirbo")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
ENV_SEED = "CIR_BO_SEED"

PLACE_DESIGN_SIZE = 250
PLACE_OBJECTIVE = "loggp2"

PLACE_COLUMNS = ("role", "x1", "x2", "y", "f_true", "pred_mean", "pred_sd",
                 "selected")
AGG_COLUMNS = ("objective", "strategy", "m", "alpha", "step", "n",
               "mean_simple_regret", "ci95_half_width", "n_runs")
BENCH_COLUMNS = ("record", "backend", "n", "m", "median_ms", "slope")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as config errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _run_name(config: ExperimentConfig, seed: int) -> str:
    digest = config_digest(config)[:6]
    return (f"{config.objective}_{config.strategy}_M{config.m}"
            f"_seed{seed}_{digest}")


def _execute_run(plan: tuple[ExperimentConfig, int, str]) -> tuple[str, str | None]:
    config, seed, out_dir = plan
    record = run(config, seed)
    stem = Path(out_dir) / _run_name(config, seed)
    write_run_csv(record, stem.with_suffix(".csv"))
    write_sidecar(record, stem.with_suffix(".json"))
    return stem.name, record.error


def cmd_run(args) -> int:
    loaded = configfile.load(args.config)
    plans = loaded.runs()

    seed_override = args.seed
    if seed_override is None and os.environ.get(ENV_SEED):
        try:
            seed_override = int(os.environ[ENV_SEED])
        except ValueError:
            raise ConfigError(f"{ENV_SEED} must be an integer, "
                              f"got {os.environ[ENV_SEED]!r}") from None
    if seed_override is not None:
        seen: dict[str, ExperimentConfig] = {}
        for config, _seed in plans:
            seen.setdefault(config_digest(config), config)
        plans = [(cfg.__class__(**{**cfg.family_dict(), "seeds": (seed_override,)}),
                  seed_override) for cfg in seen.values()]

    out_dir = Path(args.out) if args.out else loaded.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    work = [(config, seed, str(out_dir)) for config, seed in plans]
    log.info("running %d run(s) into %s", len(work), out_dir)

    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            results = pool.map(_execute_run, work)
    else:
        results = [_execute_run(plan) for plan in work]

    failures = 0
    for name, error in results:
        if error:
            failures += 1
            log.error("run %s failed: %s", name, error)
        else:
            log.info("run %s done", name)
    if failures:
        log.error("%d of %d runs failed", failures, len(results))
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_place(args) -> int:
    objective = benchmarks.get(PLACE_OBJECTIVE)
    box = objective.box
    ss = np.random.SeedSequence(args.seed)
    s_design, s_noise, s_place = ss.spawn(3)
    X = box.sample(np.random.default_rng(s_design), PLACE_DESIGN_SIZE)
    y = objective.noisy(X, np.random.default_rng(s_noise))

    kernel = initial_kernel(args.kernel_family, box, y)
    shift = float(np.mean(y))
    data = Dataset(X, y - shift, box)
    kernel = fit_hyperparameters(data, None, kernel, args.hyper_budget)
    model = exact_posterior(data, kernel)
    view = _ShiftedModel(model, shift)

    placement = PlacementConfig(strategy=args.strategy, m=args.m,
                                alpha=args.alpha,
                                prior_mean_mode="previous-posterior")
    result = select_inducing(placement, X, y, box, kernel,
                             previous_model=view, seed=s_place)
    for message in result.warnings:
        log.warning("%s", message)

    selected = np.zeros(len(X), dtype=bool)
    if result.indices is not None:
        selected[result.indices] = True

    mean_c, var_c = view.predict(X)
    sd_c = np.sqrt(np.maximum(var_c, 0.0))
    f_true = objective.evaluate(X)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PLACE_COLUMNS)
        for i in range(len(X)):
            writer.writerow([
                "candidate", repr(float(X[i, 0])), repr(float(X[i, 1])),
                repr(float(y[i])), repr(float(f_true[i])),
                repr(float(mean_c[i])), repr(float(sd_c[i])), int(selected[i]),
            ])
        if result.indices is None:
            mean_z, var_z = view.predict(result.points)
            sd_z = np.sqrt(np.maximum(var_z, 0.0))
            fz = objective.evaluate(result.points)
            for i in range(len(result.points)):
                writer.writerow([
                    "inducing", repr(float(result.points[i, 0])),
                    repr(float(result.points[i, 1])), "",
                    repr(float(fz[i])), repr(float(mean_z[i])),
                    repr(float(sd_z[i])), 1,
                ])
    log.info("wrote %s (%d candidates, %d inducing)", out, len(X),
             len(result.points))
    return EXIT_OK


def _parse_grid(raw: str, name: str) -> list[int]:
    values = [tok.strip() for tok in raw.split(",") if tok.strip()]
    if not values:
        raise ConfigError(f"{name} must name at least one size")
    try:
        grid = [int(v) for v in values]
    except ValueError:
        raise ConfigError(f"{name} must be a comma-separated integer list") from None
    if any(v < 1 for v in grid):
        raise ConfigError(f"{name} sizes must be positive")
    return grid


def _time_greedy(X: np.ndarray, m: int, kernel, backend: str,
                 repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        accel.greedy_select(X, np.zeros(X.shape[0]), m, kernel, backend=backend)
        times.append(time.perf_counter() - t0)
    return float(np.median(times)) * 1e3


def cmd_bench(args) -> int:
    n_grid = _parse_grid(args.n_grid, "--n-grid")
    m_grid = _parse_grid(args.m_grid, "--m-grid")
    if len(n_grid) < 2 or len(m_grid) < 2:
        raise ConfigError("need at least two sizes per grid to fit a slope")
    if args.backend == "both":
        backends = [b for b in ("numba", "numpy")
                    if b != "numba" or accel.NUMBA_AVAILABLE]
    else:
        backends = [args.backend]
    if max(m_grid) > args.n or args.m > min(n_grid):
        raise ConfigError("every m must be <= every n being timed")

    rng = np.random.default_rng(args.seed)
    n_max = max(max(n_grid), args.n)
    X_all = rng.uniform(0.0, 1.0, size=(n_max, args.dim))
    kernel = isotropic("matern52", args.dim, 0.4)

    rows = []
    for backend in backends:
        # warm-up: trigger compilation outside the timed region
        accel.greedy_select(X_all[:64], np.zeros(64), 8, kernel, backend=backend)
        n_times = []
        for n in n_grid:
            ms = _time_greedy(X_all[:n], args.m, kernel, backend, args.repeats)
            rows.append(("timing", backend, n, args.m, ms, ""))
            n_times.append(ms)
        slope_n = float(np.polyfit(np.log(n_grid), np.log(n_times), 1)[0])
        rows.append(("slope_n", backend, "", args.m, "", repr(slope_n)))
        m_times = []
        for m in m_grid:
            ms = _time_greedy(X_all[:args.n], m, kernel, backend, args.repeats)
            rows.append(("timing", backend, args.n, m, ms, ""))
            m_times.append(ms)
        slope_m = float(np.polyfit(np.log(m_grid), np.log(m_times), 1)[0])
        rows.append(("slope_m", backend, args.n, "", "", repr(slope_m)))
        log.info("backend %s: slope_n=%.3f slope_m=%.3f", backend, slope_n,
                 slope_m)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        for record, backend, n, m, ms, slope in rows:
            writer.writerow([record, backend, n, m,
                             f"{ms:.3f}" if ms != "" else "", slope])
    log.info("wrote %s", out)
    return EXIT_OK


def cmd_aggregate(args) -> int:
    in_dir = Path(args.dir)
    if not in_dir.is_dir():
        raise ConfigError(f"not a directory: {in_dir}")
    out_dir = Path(args.out) if args.out else in_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    groups: dict[str, list[tuple[dict, Path]]] = {}
    for sidecar in sorted(in_dir.glob("*.json")):
        with open(sidecar) as fh:
            meta = json.load(fh)
        if "config_digest" not in meta:
            continue
        if meta.get("error"):
            log.warning("skipping errored run %s", sidecar.stem)
            continue
        csv_path = sidecar.with_suffix(".csv")
        if not csv_path.is_file():
            log.warning("no CSV next to %s", sidecar.name)
            continue
        groups.setdefault(meta["config_digest"], []).append((meta, csv_path))

    wrote = 0
    for digest, members in sorted(groups.items()):
        if len(members) < 2:
            log.warning("group %s has a single run; skipping", digest[:6])
            continue
        curves = []
        steps = None
        ns = None
        for _meta, csv_path in members:
            with open(csv_path, newline="") as fh:
                rows = list(csv.DictReader(fh))
            curves.append(np.array([float(r["simple_regret"]) for r in rows]))
            steps = [int(r["step"]) for r in rows]
            ns = [int(r["n"]) for r in rows]
        mean, halfwidth = aggregate_curves(curves)
        config = members[0][0]["config"]
        name = (f"agg_{config['objective']}_{config['strategy']}"
                f"_M{config['m']}_{digest[:6]}.csv")
        with open(out_dir / name, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(AGG_COLUMNS)
            for i in range(len(mean)):
                writer.writerow([
                    config["objective"], config["strategy"], config["m"],
                    config["alpha"], steps[i], ns[i],
                    repr(float(mean[i])), repr(float(halfwidth[i])),
                    len(members),
                ])
        wrote += 1
        log.info("wrote %s (%d runs)", name, len(members))
    if not wrote:
        log.warning("nothing aggregated from %s", in_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cirbo",
                     description="sparse-surrogate batch Bayesian optimisation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the runs a config file describes")
    p_run.add_argument("config", help="path to an INI config file")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override all config seeds with one seed")
    p_run.add_argument("--out", default=None, help="output directory override")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="run this many processes in parallel")
    p_run.set_defaults(func=cmd_run)

    p_place = sub.add_parser(
        "place", help="fit the 2-d benchmark once and export a placement CSV")
    p_place.add_argument("--strategy", default="cir",
                         choices=("cir", "cvr", "kmeans", "uniform"))
    p_place.add_argument("--m", type=int, default=50)
    p_place.add_argument("--alpha", type=float, default=0.5)
    p_place.add_argument("--seed", type=int, default=0)
    p_place.add_argument("--kernel-family", default="matern52")
    p_place.add_argument("--hyper-budget", type=int, default=60)
    p_place.add_argument("--out", default="placement.csv")
    p_place.set_defaults(func=cmd_place)

    p_bench = sub.add_parser(
        "bench", help="time the selection kernel and fit log-log slopes")
    p_bench.add_argument("--n-grid", default="1000,2000,4000",
                         help="candidate counts timed at fixed --m")
    p_bench.add_argument("--m", type=int, default=128)
    p_bench.add_argument("--m-grid", default="64,128,256",
                         help="selection sizes timed at fixed --n")
    p_bench.add_argument("--n", type=int, default=2000)
    p_bench.add_argument("--dim", type=int, default=6)
    p_bench.add_argument("--repeats", type=int, default=5)
    p_bench.add_argument("--backend", default="both",
                         choices=("both", "numba", "numpy"))
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", default="bench.csv")
    p_bench.set_defaults(func=cmd_bench)

    p_agg = sub.add_parser(
        "aggregate", help="aggregate run CSVs grouped by config digest")
    p_agg.add_argument("dir", help="directory containing run CSV/JSON pairs")
    p_agg.add_argument("--out", default=None,
                       help="directory for aggregated CSVs (default: same)")
    p_agg.set_defaults(func=cmd_aggregate)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
