"""Monte Carlo benchmark harness.

Sequential (batch size 1) constrained optimization runs over the gridded
benchmark problems, repeated with random initializations. Supports the
noiseless protocol (stop when the known grid optimum is evaluated) and the
noisy protocol (stop on a measured-feasible candidate within the tolerance
radius), a threshold sweep, and a per-iteration wall-clock probe.

Pairing guarantees: runs that share a repetition index draw identical
initialization samples and identical noise realizations regardless of the
acquisition mode, so comparisons are paired by construction.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import time
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from .acquisition import (
    CandidateSet,
    find_incumbent,
    satisfies_all,
    score_candidates,
    select_candidate,
)
from .batch import fit_constraint_models
from .dataset import Dataset
from .gp import FitConfig, GpError
from .problems import (
    BenchmarkProblem,
    NoiseConfig,
    NoiseStream,
    OptimizerOracle,
    evaluate,
    find_grid_optimum,
    get_problem,
    make_grid,
    noisy_evaluate,
)

INIT_STREAM_TAG = 1
FIT_SEED_TAG = 3

ACQUISITIONS = ("alg1", "eic")


@dataclass(frozen=True)
class RunConfig:
    """One benchmark study: problem, acquisition mode, repetition layout."""

    problem: str = "P3"
    acquisition: str = "alg1"
    pi: float = 0.6
    tau: float = 0.0
    max_iterations: int = 100
    init_count: int = 2
    repetitions: int = 100
    noise_realizations: int = 5
    seed: int = 0
    candidate_count: int = 20_000
    gp_restarts: int = 8
    gp_refit_restarts: int = 2
    gp_maxiter: int = 100
    gp_lengthscale_cap: float = 100.0

    def __post_init__(self):
        if self.acquisition not in ACQUISITIONS:
            raise ValueError(f"acquisition must be one of {ACQUISITIONS}")
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError("pi must lie in [0, 1]")
        if not self.gp_lengthscale_cap > 0.0:
            raise ValueError("gp_lengthscale_cap must be positive")
        if self.tau < 0.0:
            raise ValueError("tau must be non-negative")
        if int(self.repetitions) < 1:
            raise ValueError("repetitions must be at least 1")
        if int(self.init_count) < 1:
            raise ValueError("init_count must be at least 1")
        if int(self.max_iterations) < 0:
            raise ValueError("max_iterations must be non-negative")
        if int(self.noise_realizations) < 1:
            raise ValueError("noise_realizations must be at least 1")
        get_problem(self.problem)

    @property
    def noisy(self) -> bool:
        return self.tau > 0.0

    def init_key(self, repetition: int) -> int:
        """Noisy runs reuse each initialization across noise realizations."""
        if self.noisy:
            return repetition // self.noise_realizations
        return repetition

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class TraceEntry:
    iteration: int
    candidate_id: int
    input: np.ndarray
    objective: float
    measured: np.ndarray
    feasible: bool
    branch: str
    alpha_fip: float = float("nan")
    alpha_hfi: float = float("nan")
    alpha_eic: float = float("nan")

    def to_record(self) -> dict:
        return {
            "iteration": self.iteration,
            "candidate_id": self.candidate_id,
            "input": [float(v) for v in self.input],
            "S": self.objective,
            "measured": [float(v) for v in self.measured],
            "feasible": bool(self.feasible),
            "branch": self.branch,
            "alpha_fip": self.alpha_fip,
            "alpha_hfi": self.alpha_hfi,
            "alpha_eic": self.alpha_eic,
        }


@dataclass
class RunTrace:
    """One repetition: every evaluation, the stop reason, the iteration count."""

    problem: str
    acquisition: str
    repetition: int
    entries: List[TraceEntry] = field(default_factory=list)
    stop_reason: str = "max-iterations"
    required_iterations: int = 0
    convergence: np.ndarray = field(default_factory=lambda: np.empty(0))
    gp_failure: str = ""

    def optimization_entries(self) -> List[TraceEntry]:
        return [e for e in self.entries if e.iteration > 0]

    def feasible_counts(self, include_init: bool = False) -> Tuple[int, int]:
        entries = self.entries if include_init else self.optimization_entries()
        return sum(1 for e in entries if e.feasible), len(entries)

    def feasible_fraction(self, include_init: bool = False) -> float:
        hits, total = self.feasible_counts(include_init)
        return hits / total if total else float("nan")

    def selected_ids(self) -> List[int]:
        return [e.candidate_id for e in self.optimization_entries()]


def _fit_seed(config: RunConfig, problem: BenchmarkProblem, repetition: int) -> int:
    seq = np.random.SeedSequence((config.seed, FIT_SEED_TAG, problem.problem_id,
                                  repetition))
    return int(seq.generate_state(1)[0])


@lru_cache(maxsize=8)
def _cached_grid(problem_name: str, count: int) -> Tuple[CandidateSet, OptimizerOracle]:
    problem = get_problem(problem_name)
    grid = make_grid(problem, count)
    optimum = find_grid_optimum(problem, grid)
    return grid, optimum


def _is_stop(problem: BenchmarkProblem, optimum: OptimizerOracle, noisy: bool,
             candidate_id: int, x: np.ndarray, feasible: bool,
             objective_value: float) -> bool:
    if noisy:
        return feasible and optimum.within_radius(x)
    if candidate_id == optimum.index:
        return True
    # grids can tie the optimal objective exactly (a linear objective takes
    # the same value along a lattice antidiagonal); any feasible tie is the
    # optimum found, up to ulp-level rounding of the tied sums
    tol = 16.0 * np.finfo(float).eps * max(1.0, abs(optimum.objective_value))
    return feasible and objective_value <= optimum.objective_value + tol


def run_single(config: RunConfig, repetition: int) -> RunTrace:
    """One sequential optimization run."""
    problem = get_problem(config.problem)
    grid, optimum = _cached_grid(problem.name, config.candidate_count)
    specs = problem.specs
    noisy = config.noisy
    noise_cfg = NoiseConfig(tau=config.tau, seed=config.seed)
    stream = NoiseStream(problem.problem_id, repetition)

    init_rng = np.random.default_rng((config.seed, INIT_STREAM_TAG,
                                      problem.problem_id, config.init_key(repetition)))
    init_pos = np.sort(init_rng.choice(len(grid), size=config.init_count, replace=False))

    trace = RunTrace(problem=problem.name, acquisition=config.acquisition,
                     repetition=repetition)
    inputs: List[np.ndarray] = []
    observations: List[np.ndarray] = []
    stopped = False

    for pos in init_pos:
        x = np.array(grid.inputs[pos])
        if noisy:
            f, meas = noisy_evaluate(problem, x, noise_cfg, stream)
        else:
            f, cons = evaluate(problem, x)
            meas = np.asarray(cons, dtype=float)
        feasible = bool(satisfies_all(specs, meas[None, :])[0])
        trace.entries.append(TraceEntry(
            iteration=0, candidate_id=int(grid.ids[pos]), input=x, objective=f,
            measured=meas, feasible=feasible, branch="init"))
        inputs.append(x)
        observations.append(meas)
        if not stopped and _is_stop(problem, optimum, noisy, int(grid.ids[pos]),
                                    x, feasible, f):
            stopped = True

    dataset = Dataset(np.array(inputs), np.array(observations))
    keep = np.setdiff1d(np.arange(len(grid)), init_pos)
    candidates = grid.subset(keep)
    costs = problem.objective(candidates.inputs)
    pi_select = config.pi if config.acquisition == "alg1" else 0.0

    if stopped:
        trace.stop_reason = "optimum-found"
        trace.required_iterations = 0
    else:
        trace.required_iterations = config.max_iterations

    if not stopped and config.max_iterations > 0:
        fit_cfg = FitConfig(
            input_bounds=np.array(problem.bounds),
            noise_variance=config.tau ** 2,
            lengthscale_bounds=(1e-2, config.gp_lengthscale_cap),
            restarts=config.gp_restarts,
            seed=_fit_seed(config, problem, repetition),
            maxiter=config.gp_maxiter,
        )
        try:
            models = fit_constraint_models(dataset, fit_cfg)
        except GpError as err:
            trace.gp_failure = str(err)
            trace.stop_reason = "gp-error"
            trace.convergence = _convergence_series(trace, config.max_iterations)
            return trace

        for t in range(1, config.max_iterations + 1):
            feasible_mask = satisfies_all(specs, dataset.observations)
            incumbent = find_incumbent(dataset.inputs, feasible_mask,
                                       problem.objective, costs)
            scores = score_candidates(candidates, models, specs, incumbent,
                                      costs, pi_select)
            idx, branch = select_candidate(scores, feasible_mask)

            x = np.array(candidates.inputs[idx])
            cid = int(candidates.ids[idx])
            if noisy:
                f, meas = noisy_evaluate(problem, x, noise_cfg, stream)
            else:
                f, cons = evaluate(problem, x)
                meas = np.asarray(cons, dtype=float)
            feasible = bool(satisfies_all(specs, meas[None, :])[0])
            trace.entries.append(TraceEntry(
                iteration=t, candidate_id=cid, input=x, objective=f,
                measured=meas, feasible=feasible, branch=branch,
                alpha_fip=float(scores.alpha_fip[idx]),
                alpha_hfi=float(scores.alpha_hfi[idx]),
                alpha_eic=float(scores.alpha_eic[idx])))
            dataset = dataset.extend(x[None, :], meas[None, :])

            if _is_stop(problem, optimum, noisy, cid, x, feasible, f):
                trace.stop_reason = "optimum-found"
                trace.required_iterations = t
                break

            keep = np.ones(len(candidates), dtype=bool)
            keep[idx] = False
            keep_idx = np.flatnonzero(keep)
            candidates = candidates.subset(keep_idx)
            costs = costs[keep_idx]
            if len(candidates) == 0:
                trace.stop_reason = "candidates-exhausted"
                trace.required_iterations = t
                break
            try:
                models = fit_constraint_models(dataset, fit_cfg, previous_models=models,
                                               restarts=config.gp_refit_restarts)
            except GpError as err:
                trace.gp_failure = str(err)
                trace.stop_reason = "gp-error"
                trace.required_iterations = t
                break

    trace.convergence = _convergence_series(trace, config.max_iterations)
    return trace


def _convergence_series(trace: RunTrace, max_iterations: int) -> np.ndarray:
    """Best feasible objective after each optimization iteration; NaN until
    the first feasible sample; the final value carries after early stops."""
    best = float("nan")
    for entry in trace.entries:
        if entry.iteration == 0 and entry.feasible:
            best = entry.objective if math.isnan(best) else min(best, entry.objective)
    series = np.full(max_iterations, np.nan)
    by_iter = {e.iteration: e for e in trace.optimization_entries()}
    for t in range(1, max_iterations + 1):
        entry = by_iter.get(t)
        if entry is not None and entry.feasible:
            best = entry.objective if math.isnan(best) else min(best, entry.objective)
        series[t - 1] = best
    return series


@dataclass
class AggregateMetrics:
    """Pooled statistics over repetitions of one configuration."""

    problem: str
    acquisition: str
    pi: float
    tau: float
    repetitions: int
    mean_required_iterations: float
    feasible_fraction: float
    feasible_fraction_with_init: float
    required_iterations: List[int]
    stop_counts: Dict[str, int]
    convergence_mean: np.ndarray
    convergence: np.ndarray
    runtime_seconds: float = 0.0

    def to_dict(self, include_series: bool = True) -> dict:
        out = {
            "problem": self.problem,
            "acquisition": self.acquisition,
            "pi": self.pi,
            "tau": self.tau,
            "repetitions": self.repetitions,
            "mean_required_iterations": self.mean_required_iterations,
            "feasible_fraction": self.feasible_fraction,
            "feasible_fraction_with_init": self.feasible_fraction_with_init,
            "stop_counts": dict(self.stop_counts),
            "runtime_seconds": self.runtime_seconds,
        }
        if include_series:
            out["required_iterations"] = list(map(int, self.required_iterations))
            out["convergence_mean"] = [
                None if math.isnan(v) else float(v) for v in self.convergence_mean]
        return out


def aggregate_traces(config: RunConfig, traces: Sequence[RunTrace],
                     runtime_seconds: float = 0.0) -> AggregateMetrics:
    required = [t.required_iterations for t in traces]
    hits = total = hits_i = total_i = 0
    for t in traces:
        h, n = t.feasible_counts(include_init=False)
        hits += h
        total += n
        h, n = t.feasible_counts(include_init=True)
        hits_i += h
        total_i += n
    stop_counts: Dict[str, int] = {}
    for t in traces:
        stop_counts[t.stop_reason] = stop_counts.get(t.stop_reason, 0) + 1
    matrix = np.vstack([t.convergence for t in traces]) if traces else np.empty((0, 0))
    # all-NaN columns (no feasible point seen yet) legitimately average to NaN
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mean_curve = np.nanmean(matrix, axis=0) if matrix.size else np.empty(0)
    return AggregateMetrics(
        problem=config.problem,
        acquisition=config.acquisition,
        pi=config.pi,
        tau=config.tau,
        repetitions=len(traces),
        mean_required_iterations=float(np.mean(required)) if required else float("nan"),
        feasible_fraction=hits / total if total else float("nan"),
        feasible_fraction_with_init=hits_i / total_i if total_i else float("nan"),
        required_iterations=required,
        stop_counts=stop_counts,
        convergence_mean=mean_curve,
        convergence=matrix,
        runtime_seconds=runtime_seconds,
    )


def run_monte_carlo(config: RunConfig, n_jobs: int = 1
                    ) -> Tuple[AggregateMetrics, List[RunTrace]]:
    """All repetitions of one configuration, plus pooled metrics."""
    start = time.perf_counter()
    if n_jobs == 1:
        traces = [run_single(config, rep) for rep in range(config.repetitions)]
    else:
        traces = Parallel(n_jobs=n_jobs)(
            delayed(run_single)(config, rep) for rep in range(config.repetitions))
    elapsed = time.perf_counter() - start
    return aggregate_traces(config, traces, runtime_seconds=elapsed), traces


DEFAULT_PI_GRID = tuple(round(0.1 * i, 1) for i in range(11))


def pi_sweep(problem: str, pis: Sequence[float] = DEFAULT_PI_GRID,
             repetitions: int = 100, seed: int = 0, include_eic: bool = True,
             n_jobs: int = 1, **config_overrides) -> Dict[str, AggregateMetrics]:
    """Noiseless sweep over confidence thresholds with shared initializations.

    Returns metrics keyed by the threshold value's string form, plus an
    'eic' reference column."""
    results: Dict[str, AggregateMetrics] = {}
    for pi in pis:
        if not 0.0 <= pi <= 1.0:
            raise ValueError("pi values must lie in [0, 1]")
        config = RunConfig(problem=problem, acquisition="alg1", pi=float(pi),
                           tau=0.0, repetitions=repetitions, seed=seed,
                           **config_overrides)
        results[f"{pi:g}"], _ = run_monte_carlo(config, n_jobs=n_jobs)
    if include_eic:
        config = RunConfig(problem=problem, acquisition="eic", pi=0.0, tau=0.0,
                           repetitions=repetitions, seed=seed, **config_overrides)
        results["eic"], _ = run_monte_carlo(config, n_jobs=n_jobs)
    return results


def timing_probe(problem: str, candidate_count: int = 20_000,
                 sizes: Sequence[int] = (10, 50, 100), repeats: int = 5,
                 seed: int = 0) -> List[dict]:
    """Median wall-clock of one full iteration (condition + score + select)
    at several dataset sizes."""
    prob = get_problem(problem)
    grid, _ = _cached_grid(prob.name, candidate_count)
    if len(grid) == 0:
        raise ValueError("empty candidate set")
    rng = np.random.default_rng((seed, 9))
    costs = prob.objective(grid.inputs)
    results = []
    for size in sizes:
        pos = rng.choice(len(grid), size=int(size), replace=False)
        x = np.array(grid.inputs[pos])
        y = prob.constraints(x)
        dataset = Dataset(x, y)
        fit_cfg = FitConfig(input_bounds=np.array(prob.bounds), seed=seed)
        models = fit_constraint_models(dataset, fit_cfg)
        feasible_mask = satisfies_all(prob.specs, dataset.observations)
        incumbent = find_incumbent(dataset.inputs, feasible_mask, prob.objective, costs)
        times = []
        for _ in range(int(repeats)):
            tic = time.perf_counter()
            conditioned = [m.condition(dataset.inputs, dataset.observations[:, k])
                           for k, m in enumerate(models)]
            scores = score_candidates(grid, conditioned, prob.specs, incumbent,
                                      costs, 0.5)
            select_candidate(scores, feasible_mask)
            times.append((time.perf_counter() - tic) * 1e3)
        results.append({"size": int(size), "median_ms": float(np.median(times)),
                        "times_ms": [float(v) for v in times]})
    return results


# -- file writers ----------------------------------------------------------

def write_metrics_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_table_csv(path, metrics_by_acq: Dict[str, AggregateMetrics]) -> None:
    """Two-row comparison table: required iterations and feasible fraction."""
    columns = [acq for acq in ACQUISITIONS if acq in metrics_by_acq]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric"] + columns)
        writer.writerow(["required_iterations"]
                        + [repr(metrics_by_acq[a].mean_required_iterations)
                           for a in columns])
        writer.writerow(["feasible_fraction"]
                        + [repr(metrics_by_acq[a].feasible_fraction) for a in columns])


def write_traces(directory, traces: Sequence[RunTrace]) -> None:
    import os
    os.makedirs(directory, exist_ok=True)
    for trace in traces:
        path = os.path.join(directory, f"rep_{trace.repetition:04d}.jsonl")
        with open(path, "w", encoding="utf-8") as fh:
            for entry in trace.entries:
                fh.write(json.dumps(entry.to_record()) + "\n")


def write_convergence_csv(path, metrics_by_acq: Dict[str, AggregateMetrics]) -> None:
    """Per-iteration mean plus per-repetition best-feasible series."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        first = next(iter(metrics_by_acq.values()))
        n_reps = first.convergence.shape[0]
        writer.writerow(["acquisition", "iteration", "mean"]
                        + [f"rep_{i:04d}" for i in range(n_reps)])
        for acq, metrics in metrics_by_acq.items():
            n_iter = metrics.convergence.shape[1]
            for t in range(n_iter):
                row = [acq, t + 1, _csv_float(metrics.convergence_mean[t])]
                row += [_csv_float(v) for v in metrics.convergence[:, t]]
                writer.writerow(row)


def _csv_float(v: float) -> str:
    return "" if math.isnan(v) else repr(float(v))


def write_sweep_csv(path, sweep: Dict[str, AggregateMetrics]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pi", "mean_required_iterations", "feasible_fraction",
                         "feasible_fraction_with_init"])
        for key, metrics in sweep.items():
            writer.writerow([key, repr(metrics.mean_required_iterations),
                             repr(metrics.feasible_fraction),
                             repr(metrics.feasible_fraction_with_init)])
