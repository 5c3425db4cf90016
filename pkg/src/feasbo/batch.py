"""Fixed-size batch proposal via posterior-mean fantasies.

One outer iteration proposes a batch by repeatedly conditioning the
constraint models on a virtual dataset, scoring the remaining candidates,
selecting one, and appending its posterior means as a fantasy observation.
Real measurements then replace the fantasies. Hyperparameters are refit
only when real data arrives; inside the fantasy loop they stay frozen
unless explicitly configured otherwise.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import gp as gp_module
from .acquisition import (
    BRANCH_HFI,
    CandidateSet,
    ConstraintSpec,
    find_incumbent,
    improvement,
    satisfies_all,
    score_candidates,
    select_candidate,
)
from .dataset import Dataset
from .gp import ConstraintGP, FitConfig
from .validation import check_matrix


@dataclass(frozen=True)
class BatchConfig:
    """Outer-loop settings: batch size, confidence threshold, termination."""

    batch_size: int = 5
    pi: float = 0.4
    termination_threshold: float = 0.05
    max_batches: int = 50
    refit_in_fantasy_loop: bool = False

    def __post_init__(self):
        if int(self.batch_size) < 1:
            raise ValueError("batch_size must be at least 1")
        object.__setattr__(self, "batch_size", int(self.batch_size))
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError("pi must lie in [0, 1]")
        if not 0.0 <= self.termination_threshold <= 1.0:
            raise ValueError("termination_threshold must lie in [0, 1]")
        if int(self.max_batches) < 1:
            raise ValueError("max_batches must be at least 1")
        object.__setattr__(self, "max_batches", int(self.max_batches))


@dataclass
class SelectionRecord:
    """Diagnostics for one inner-loop selection."""

    batch_index: int
    inner_index: int
    candidate_id: int
    candidate: np.ndarray
    objective: float
    improvement: float
    feasibility_probability: float
    alpha: float
    branch: str
    fantasy_means: np.ndarray
    measured_values: Optional[np.ndarray] = None

    def to_record(self) -> dict:
        out = {
            "batch_index": self.batch_index,
            "inner_index": self.inner_index,
            "candidate_id": self.candidate_id,
            "candidate": [float(v) for v in self.candidate],
            "S": self.objective,
            "I": self.improvement,
            "FP": self.feasibility_probability,
            "alpha": self.alpha,
            "branch": self.branch,
            "fantasy_means": [float(v) for v in self.fantasy_means],
        }
        if self.measured_values is not None:
            out["measured_values"] = [float(v) for v in self.measured_values]
        return out


@dataclass
class ProposedBatch:
    """Ordered batch of inputs plus per-selection diagnostics."""

    candidates: np.ndarray
    candidate_ids: np.ndarray
    selection_fips: np.ndarray
    selection_branches: List[str]
    fantasy_means: np.ndarray
    records: List[SelectionRecord] = field(default_factory=list)
    exhausted: bool = False

    def __post_init__(self):
        if len(self.candidates):
            uniq = np.unique(self.candidates, axis=0)
            if uniq.shape[0] != self.candidates.shape[0]:
                raise ValueError("batch contains duplicate candidates")

    def __len__(self) -> int:
        return self.candidates.shape[0]


class VirtualDataset:
    """Real dataset extended with fantasy observations.

    Dropping the last fantasy_count rows recovers the real dataset exactly.
    """

    def __init__(self, real: Dataset):
        self.real = real
        self._fantasy_inputs: List[np.ndarray] = []
        self._fantasy_observations: List[np.ndarray] = []

    @property
    def fantasy_count(self) -> int:
        return len(self._fantasy_inputs)

    def add_fantasy(self, x: np.ndarray, observations: np.ndarray) -> None:
        x = np.asarray(x, dtype=float).reshape(-1)
        obs = np.asarray(observations, dtype=float).reshape(-1)
        if x.shape[0] != self.real.n_dims:
            raise ValueError(f"dimension mismatch: fantasy input has {x.shape[0]} entries, "
                             f"expected {self.real.n_dims}")
        if obs.shape[0] != self.real.n_constraints:
            raise ValueError(f"dimension mismatch: fantasy observation has {obs.shape[0]} "
                             f"entries, expected {self.real.n_constraints}")
        self._fantasy_inputs.append(x)
        self._fantasy_observations.append(obs)

    @property
    def inputs(self) -> np.ndarray:
        if not self._fantasy_inputs:
            return self.real.inputs
        return np.vstack([self.real.inputs, np.vstack(self._fantasy_inputs)])

    @property
    def observations(self) -> np.ndarray:
        if not self._fantasy_observations:
            return self.real.observations
        return np.vstack([self.real.observations, np.vstack(self._fantasy_observations)])

    def dataset(self) -> Dataset:
        if not self._fantasy_inputs:
            return self.real
        return self.real.extend(np.vstack(self._fantasy_inputs),
                                np.vstack(self._fantasy_observations))


def fit_constraint_models(dataset: Dataset, fit_config: Optional[FitConfig] = None,
                          previous_models: Optional[Sequence[ConstraintGP]] = None,
                          restarts: Optional[int] = None) -> List[ConstraintGP]:
    """Fit one GP per constraint column, optionally warm-started from the
    previous models with a reduced restart count."""
    config = fit_config if fit_config is not None else FitConfig()
    if restarts is not None:
        config = dataclasses.replace(config, restarts=int(restarts))
    models = []
    for k in range(dataset.n_constraints):
        warm = previous_models[k].params_ if previous_models is not None else None
        models.append(gp_module.fit(dataset, k, config, warm_start_params=warm))
    return models


def _conditioned(models: Sequence[ConstraintGP], virtual: VirtualDataset) -> List[ConstraintGP]:
    xv = virtual.inputs
    yv = virtual.observations
    return [m.condition(xv, yv[:, k]) for k, m in enumerate(models)]


def propose_batch(dataset: Dataset, candidates: CandidateSet,
                  specs: Sequence[ConstraintSpec], objective: Callable,
                  config: BatchConfig, models: Optional[Sequence[ConstraintGP]] = None,
                  fit_config: Optional[FitConfig] = None,
                  batch_index: int = 0) -> ProposedBatch:
    """Propose up to config.batch_size candidates without touching the real
    dataset. objective maps an (m, d) array of inputs to m cost values."""
    if len(candidates) == 0:
        raise ValueError("empty candidate set")
    if not callable(objective):
        raise TypeError("objective must be a callable mapping input rows to costs")
    if dataset.n_constraints != len(specs):
        raise ValueError(f"dimension mismatch: dataset has {dataset.n_constraints} "
                         f"constraint columns, {len(specs)} specs")
    if models is None:
        models = fit_constraint_models(dataset, fit_config)

    feasible_mask = satisfies_all(specs, dataset.observations)
    cand_costs = np.asarray(objective(candidates.inputs), dtype=float)
    incumbent = find_incumbent(dataset.inputs, feasible_mask, objective, cand_costs)
    impr_all = improvement(cand_costs, incumbent)

    working = candidates
    working_costs = cand_costs
    working_impr = np.asarray(impr_all, dtype=float)
    virtual = VirtualDataset(dataset)

    picked_rows: List[np.ndarray] = []
    picked_ids: List[int] = []
    fips: List[float] = []
    branches: List[str] = []
    fantasies: List[np.ndarray] = []
    records: List[SelectionRecord] = []
    exhausted = False

    for inner in range(config.batch_size):
        if len(working) == 0:
            exhausted = True
            break
        if config.refit_in_fantasy_loop and virtual.fantasy_count > 0:
            step_models = fit_constraint_models(virtual.dataset(), fit_config,
                                                previous_models=models)
        else:
            step_models = _conditioned(models, virtual)
        scores, means, _ = score_candidates(
            working, step_models, specs, incumbent, working_costs, config.pi,
            improvement_values=working_impr, return_posteriors=True)
        idx, branch = select_candidate(scores, feasible_mask)

        x_sel = np.array(working.inputs[idx])
        fantasy = np.array(means[:, idx])
        alpha_val = scores.alpha_hfi[idx] if branch == BRANCH_HFI else scores.alpha_fip[idx]
        records.append(SelectionRecord(
            batch_index=batch_index,
            inner_index=inner,
            candidate_id=int(working.ids[idx]),
            candidate=x_sel,
            objective=float(working_costs[idx]),
            improvement=float(working_impr[idx]),
            feasibility_probability=float(scores.feasibility_probability[idx]),
            alpha=float(alpha_val),
            branch=branch,
            fantasy_means=fantasy,
        ))
        picked_rows.append(x_sel)
        picked_ids.append(int(working.ids[idx]))
        fips.append(float(scores.alpha_fip[idx]))
        branches.append(branch)
        fantasies.append(fantasy)

        virtual.add_fantasy(x_sel, fantasy)
        keep = np.ones(len(working), dtype=bool)
        keep[idx] = False
        keep_idx = np.flatnonzero(keep)
        working = working.subset(keep_idx)
        working_costs = working_costs[keep_idx]
        working_impr = working_impr[keep_idx]

    n_dims = dataset.n_dims
    n_cons = dataset.n_constraints
    return ProposedBatch(
        candidates=np.array(picked_rows) if picked_rows else np.empty((0, n_dims)),
        candidate_ids=np.array(picked_ids, dtype=int),
        selection_fips=np.array(fips, dtype=float),
        selection_branches=branches,
        fantasy_means=np.array(fantasies) if fantasies else np.empty((0, n_cons)),
        records=records,
        exhausted=exhausted,
    )


def check_termination(batch: ProposedBatch, epsilon: float) -> bool:
    """True when at least half the batch was selected with alpha_fip below
    epsilon (strict inequality)."""
    if len(batch) == 0:
        raise ValueError("empty batch")
    below = int(np.count_nonzero(batch.selection_fips < float(epsilon)))
    return below >= math.ceil(len(batch) / 2)


def incorporate_results(dataset: Dataset, batch: ProposedBatch, measurements) -> Dataset:
    """Extend the real dataset with measured batch results; fantasies are
    never stored."""
    if len(batch) == 0:
        meas = np.asarray(measurements, dtype=float)
        if meas.size != 0:
            raise ValueError("dimension mismatch: measurements given for an empty batch")
        return dataset
    meas = check_matrix(measurements, "measurements", n_cols=dataset.n_constraints)
    if meas.shape[0] != len(batch):
        raise ValueError(f"dimension mismatch: {meas.shape[0]} measurement rows for a "
                         f"batch of {len(batch)}")
    return dataset.extend(batch.candidates, meas)


@dataclass
class BatchRunResult:
    """Outcome of a run to termination."""

    dataset: Dataset
    batches: List[ProposedBatch]
    terminated: bool
    status: str
    best_input: Optional[np.ndarray]
    best_cost: float
    evaluated_batches: int
    incumbent_history: List[float]
    trace: List[dict]

    @property
    def found_feasible(self) -> bool:
        return self.best_input is not None


def _best_feasible(dataset: Dataset, specs: Sequence[ConstraintSpec],
                   objective: Callable) -> Tuple[Optional[np.ndarray], float]:
    feasible = satisfies_all(specs, dataset.observations)
    if not feasible.any():
        return None, float("nan")
    costs = np.asarray(objective(dataset.inputs), dtype=float)
    feas_idx = np.flatnonzero(feasible)
    best = feas_idx[int(np.argmin(costs[feas_idx]))]
    return np.array(dataset.inputs[best]), float(costs[best])


def run_to_termination(dataset: Dataset, candidates: CandidateSet,
                       specs: Sequence[ConstraintSpec], objective: Callable,
                       config: BatchConfig, oracle: Callable,
                       models: Optional[Sequence[ConstraintGP]] = None,
                       fit_config: Optional[FitConfig] = None,
                       refit_restarts: Optional[int] = None,
                       trace_path=None) -> BatchRunResult:
    """Propose, evaluate, and incorporate batches until the termination rule
    fires or max_batches is hit. The terminating batch is not evaluated.

    oracle maps a (b, d) array of inputs to a (b, K) measurement array."""
    if models is None:
        models = fit_constraint_models(dataset, fit_config)

    batches: List[ProposedBatch] = []
    trace: List[dict] = []
    incumbent_history: List[float] = []
    terminated = False
    evaluated = 0

    for batch_index in range(config.max_batches):
        batch = propose_batch(dataset, candidates, specs, objective, config,
                              models=models, fit_config=fit_config,
                              batch_index=batch_index)
        batches.append(batch)
        if len(batch) == 0:
            break
        if check_termination(batch, config.termination_threshold):
            terminated = True
            trace.extend(r.to_record() for r in batch.records)
            break

        measurements = np.asarray(oracle(batch.candidates), dtype=float)
        dataset = incorporate_results(dataset, batch, measurements)
        evaluated += 1
        for i, rec in enumerate(batch.records):
            rec.measured_values = np.array(measurements[i])
        trace.extend(r.to_record() for r in batch.records)

        keep = ~np.isin(candidates.ids, batch.candidate_ids)
        candidates = candidates.subset(np.flatnonzero(keep))

        _, best_cost = _best_feasible(dataset, specs, objective)
        incumbent_history.append(best_cost)

        if batch.exhausted or len(candidates) == 0:
            break
        models = fit_constraint_models(dataset, fit_config, previous_models=models,
                                       restarts=refit_restarts)

    best_input, best_cost = _best_feasible(dataset, specs, objective)
    status = "feasible minimizer" if best_input is not None else "no feasible minimizer"
    if trace_path is not None:
        write_trace_jsonl(trace, trace_path)
    return BatchRunResult(
        dataset=dataset,
        batches=batches,
        terminated=terminated,
        status=status,
        best_input=best_input,
        best_cost=best_cost,
        evaluated_batches=evaluated,
        incumbent_history=incumbent_history,
        trace=trace,
    )


def write_trace_jsonl(records: Sequence[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
