"""Experiment harness: parameter sweeps over seeded synthetic (or CSV) data
with resumable CSV persistence and solver trace emission."""

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import IdrError, InvalidConfig
from .io import load_labels, load_matrix
from .lsr import lsr_solve
from .metrics import segmentation_accuracy
from .solver import SolverConfig, solve_idr
from .spectral import build_affinity, cluster_from_solver, spectral_partition
from .synth import SynthSpec, generate

# Search grid shared by gamma and lam.
DEFAULT_GRID = (0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 5, 10, 50, 100, 200)

RESULT_FIELDS = (
    "trial", "seed", "p", "gamma", "lambda", "method",
    "sa_Z", "sa_S", "sa_best", "iterations", "converged",
    "wall_time_seconds", "status",
)

SUMMARY_FIELDS = ("p", "method", "trials", "mean_best_sa", "std_best_sa")

TRACE_FIELDS = ("iter", "res_SC", "res_SD", "res_1C", "res_XZE", "idres_Z", "dZ", "dS", "dE")


@dataclass
class ExperimentConfig:
    """Everything one sweep needs: data source, method, grids and seeds.

    The data source is either the synthetic template (corruption and seed
    are overridden per cell) or a pair of CSV paths.  Flags given on the
    command line override values loaded from a JSON config file.
    """

    method: str = "idr"
    k: int = 5
    gamma_grid: list = field(default_factory=lambda: list(DEFAULT_GRID))
    lambda_grid: list = field(default_factory=lambda: list(DEFAULT_GRID))
    trials: int = 5
    seeds: Optional[list] = None  # defaults to range(trials)
    corruption_levels: list = field(default_factory=lambda: [0.0, 0.3, 0.7])
    synth: SynthSpec = field(default_factory=SynthSpec)
    data_csv: Optional[str] = None
    labels_csv: Optional[str] = None
    output_dir: str = "results"
    kmeans_seed: int = 0
    solver: dict = field(default_factory=dict)  # SolverConfig overrides (mu0, maxiter, ...)
    lsr_zero_diag: bool = True
    resume: bool = True

    @classmethod
    def from_dict(cls, raw):
        raw = dict(raw)
        if "synth" in raw and isinstance(raw["synth"], dict):
            try:
                raw["synth"] = SynthSpec(**raw["synth"])
            except TypeError as exc:
                raise InvalidConfig(f"bad synth section: {exc}") from None
        unknown = set(raw) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def validate(self):
        if self.method not in ("idr", "lsr"):
            raise InvalidConfig(f"method must be 'idr' or 'lsr', got {self.method!r}")
        if not self.gamma_grid or not self.lambda_grid:
            raise InvalidConfig("parameter grids must be non-empty")
        allowed = set(SolverConfig.__dataclass_fields__) - {"gamma", "lam", "k"}
        bad = set(self.solver) - allowed
        if bad:
            raise InvalidConfig(
                f"solver overrides {sorted(bad)} not recognized (allowed: {sorted(allowed)})"
            )
        if self.trials < 1:
            raise InvalidConfig(f"trials must be at least 1, got {self.trials}")
        if self.seeds is not None:
            if len(self.seeds) == 0:
                raise InvalidConfig("seeds list is empty")
            if len(self.seeds) != self.trials:
                raise InvalidConfig(
                    f"seeds list has {len(self.seeds)} entries but trials={self.trials}"
                )
        if self.data_csv is None:
            if not self.corruption_levels:
                raise InvalidConfig("corruption_levels must be non-empty")
            for p in self.corruption_levels:
                if not 0.0 <= p <= 1.0:
                    raise InvalidConfig(f"corruption level {p} outside [0, 1]")
            self.synth.validate()
        elif self.labels_csv is None:
            raise InvalidConfig("data_csv requires labels_csv for scoring")
        if self.k < 1:
            raise InvalidConfig(f"k must be at least 1, got {self.k}")

    def resolved_seeds(self):
        return list(self.seeds) if self.seeds is not None else list(range(self.trials))


@dataclass
class ResultRecord:
    """One sweep cell: parameters in, accuracies and run stats out."""

    trial: int
    seed: int
    p: float
    gamma: Optional[float]
    lam: float
    method: str
    sa_Z: float
    sa_S: float
    sa_best: float
    iterations: int
    converged: bool
    wall_time_seconds: float
    status: str = "ok"


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _record_to_row(r):
    return {
        "trial": _fmt(r.trial),
        "seed": _fmt(r.seed),
        "p": _fmt(float(r.p)),
        "gamma": _fmt(None if r.gamma is None else float(r.gamma)),
        "lambda": _fmt(float(r.lam)),
        "method": r.method,
        "sa_Z": _fmt(float(r.sa_Z)),
        "sa_S": _fmt(float(r.sa_S)),
        "sa_best": _fmt(float(r.sa_best)),
        "iterations": _fmt(r.iterations),
        "converged": _fmt(bool(r.converged)),
        "wall_time_seconds": _fmt(float(r.wall_time_seconds)),
        "status": r.status,
    }


def _row_to_record(row):
    gamma = row["gamma"]
    return ResultRecord(
        trial=int(row["trial"]),
        seed=int(row["seed"]),
        p=float(row["p"]),
        gamma=None if gamma == "" else float(gamma),
        lam=float(row["lambda"]),
        method=row["method"],
        sa_Z=float(row["sa_Z"]),
        sa_S=float(row["sa_S"]),
        sa_best=float(row["sa_best"]),
        iterations=int(row["iterations"]),
        converged=row["converged"] == "true",
        wall_time_seconds=float(row["wall_time_seconds"]),
        status=row["status"],
    )


def _row_key(row):
    return (row["method"], row["p"], row["trial"], row["gamma"], row["lambda"])


def _worker_count(n_cells):
    env = os.environ.get("IDR_THREADS")
    if env is not None:
        cap = max(1, int(env))
    else:
        cap = min(4, os.cpu_count() or 1)
    return max(1, min(cap, n_cells))


@dataclass
class _Cell:
    p: float
    trial: int
    seed: int
    gamma: Optional[float]
    lam: float

    def key(self, method):
        return (method, _fmt(float(self.p)), str(self.trial),
                _fmt(None if self.gamma is None else float(self.gamma)), _fmt(float(self.lam)))


def _enumerate_cells(config):
    seeds = config.resolved_seeds()
    levels = [float("nan")] if config.data_csv is not None else config.corruption_levels
    cells = []
    for p in levels:
        for trial in range(config.trials):
            if config.method == "idr":
                for gamma in config.gamma_grid:
                    for lam in config.lambda_grid:
                        cells.append(_Cell(p, trial, seeds[trial], gamma, lam))
            else:
                for lam in config.lambda_grid:
                    cells.append(_Cell(p, trial, seeds[trial], None, lam))
    return cells


def _load_datasets(config, cells):
    """One dataset per (p, trial), built up front so worker threads never
    touch the RNG."""
    if config.data_csv is not None:
        X = load_matrix(config.data_csv)
        truth = load_labels(config.labels_csv)
        return {(cell.p, cell.trial): (X, truth) for cell in cells}
    datasets = {}
    for cell in cells:
        key = (cell.p, cell.trial)
        if key not in datasets:
            spec = replace(config.synth, corruption_fraction=cell.p, seed=cell.seed)
            datasets[key] = generate(spec)
    return datasets


def _run_cell(config, cell, data):
    X, truth = data
    t0 = time.perf_counter()
    try:
        if config.method == "idr":
            solver_cfg = SolverConfig(gamma=cell.gamma, lam=cell.lam, k=config.k, **config.solver)
            out = solve_idr(X, solver_cfg)
            sel = cluster_from_solver(out, config.k, seed=config.kmeans_seed, ground_truth=truth)
            sa_Z, sa_S = sel.sa_Z, sel.sa_S
            iterations, converged = out.iterations, out.converged
        else:
            Z = lsr_solve(X, cell.lam, zero_diag=config.lsr_zero_diag)
            labels = spectral_partition(build_affinity(Z), config.k, seed=config.kmeans_seed)
            sa_Z = sa_S = segmentation_accuracy(truth, labels)
            iterations, converged = 1, True
        status = "ok"
    except (IdrError, ValueError) as exc:
        sa_Z = sa_S = float("nan")
        iterations, converged = 0, False
        status = f"error: {type(exc).__name__}: {exc}"
    wall = time.perf_counter() - t0
    sa_best = max(sa_Z, sa_S) if status == "ok" else float("nan")
    return ResultRecord(
        trial=cell.trial, seed=cell.seed, p=cell.p, gamma=cell.gamma, lam=cell.lam,
        method=config.method, sa_Z=sa_Z, sa_S=sa_S, sa_best=sa_best,
        iterations=iterations, converged=converged, wall_time_seconds=wall, status=status,
    )


def _read_results(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != RESULT_FIELDS:
            raise InvalidConfig(f"{path} has unexpected columns; refusing to resume")
        return [dict(row) for row in reader]


def _write_csv(path, fieldnames, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def _summarize(rows):
    """Per (p, method): mean and std over trials of the per-trial best
    accuracy.  Error rows are excluded; std uses ddof=1 when possible."""
    groups = {}
    for row in rows:
        if row["status"] != "ok":
            continue
        key = (row["p"], row["method"])
        groups.setdefault(key, {}).setdefault(row["trial"], []).append(float(row["sa_best"]))
    summary = []
    for (p, method), trials in sorted(groups.items(), key=lambda kv: (_safe_float(kv[0][0]), kv[0][1])):
        bests = [max(v) for _, v in sorted(trials.items(), key=lambda kv: int(kv[0]))]
        mean = float(np.mean(bests))
        std = float(np.std(bests, ddof=1)) if len(bests) > 1 else 0.0
        summary.append({
            "p": p, "method": method, "trials": _fmt(len(bests)),
            "mean_best_sa": _fmt(mean), "std_best_sa": _fmt(std),
        })
    return summary


def _safe_float(s):
    try:
        v = float(s)
    except ValueError:
        return math.inf
    return math.inf if math.isnan(v) else v


def run_sweep(config):
    """Run every (corruption, trial, gamma, lam) cell, score both graphs
    against ground truth, and persist results.csv plus summary.csv.

    Resumable: cells already present in results.csv are reused, missing ones
    computed, and the files rewritten in canonical cell order.  Cell results
    are deterministic given the seeds; wall times are measurements and vary
    run to run.  Solver failures are recorded per row in the status column
    instead of aborting.  IDR_THREADS caps the worker pool.
    """
    config.validate()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.csv"

    cells = _enumerate_cells(config)
    existing = {}
    if config.resume and results_path.exists():
        for row in _read_results(results_path):
            existing[_row_key(row)] = row

    todo = [cell for cell in cells if cell.key(config.method) not in existing]
    datasets = _load_datasets(config, todo)

    computed = {}
    if todo:
        workers = _worker_count(len(todo))
        def work(cell):
            return _run_cell(config, cell, datasets[(cell.p, cell.trial)])
        # One BLAS thread per worker: cells are the unit of parallelism and
        # a stable thread count keeps cell results bit-reproducible.
        with threadpool_limits(limits=1, user_api="blas"):
            if workers == 1:
                fresh = [work(cell) for cell in todo]
            else:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    fresh = list(pool.map(work, todo))
        for cell, record in zip(todo, fresh):
            computed[cell.key(config.method)] = _record_to_row(record)

    rows = []
    for cell in cells:
        key = cell.key(config.method)
        rows.append(existing.get(key) or computed[key])

    _write_csv(results_path, RESULT_FIELDS, rows)
    _write_csv(out_dir / "summary.csv", SUMMARY_FIELDS, _summarize(rows))
    return [_row_to_record(row) for row in rows]


def emit_traces(output, path):
    """Write the per-iteration residual record of a solver run as CSV,
    one row per iteration, directly plottable."""
    hist = output.history
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_FIELDS)
        for i in range(len(hist)):
            writer.writerow([i + 1] + [_fmt(float(getattr(hist, name)[i])) for name in TRACE_FIELDS[1:]])
