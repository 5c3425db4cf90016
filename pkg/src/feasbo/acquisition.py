"""Acquisition scoring and the switching candidate-selection rule.

Improvement is measured against the best feasible evaluated point (or a
fallback cost of one above the worst candidate when nothing feasible is
known yet). Feasibility probability multiplies per-constraint Gaussian
tail masses computed from the latent posterior. Selection switches between
a probability-driven rule and a thresholded improvement rule depending on
whether any feasible point is known and how confident the best candidate
is.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import ndtr

from .validation import as_float_array, check_finite, check_matrix, check_vector, readonly

BRANCH_NO_FEASIBLE = "fip_no_feasible"
BRANCH_HFI = "hfi"
BRANCH_LOW_CONFIDENCE = "fip_low_confidence"

SCORES_CSV_HEADER = ["candidate_id", "S", "I", "FP",
                     "alpha_fip", "alpha_hfi", "alpha_eic", "branch"]


@dataclass(frozen=True)
class ConstraintSpec:
    """Acceptance window for one measured constraint.

    One-sided by default (value <= upper); set ``lower`` for an interval
    constraint lower <= value <= upper.
    """

    upper: float
    lower: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "upper", float(self.upper))
        if not np.isfinite(self.upper):
            raise ValueError("upper bound must be finite")
        if self.lower is not None:
            object.__setattr__(self, "lower", float(self.lower))
            if not np.isfinite(self.lower):
                raise ValueError("lower bound must be finite")
            if not self.lower < self.upper:
                raise ValueError("interval constraint requires lower < upper")

    @property
    def kind(self) -> str:
        return "interval" if self.lower is not None else "one-sided-upper"

    def satisfies(self, values):
        """Boolean feasibility of measured values (inclusive bounds)."""
        v = np.asarray(values, dtype=float)
        ok = v <= self.upper
        if self.lower is not None:
            ok = ok & (v >= self.lower)
        return bool(ok) if np.isscalar(values) else ok

    def to_dict(self) -> dict:
        out = {"upper": self.upper, "name": self.name}
        if self.lower is not None:
            out["lower"] = self.lower
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "ConstraintSpec":
        return cls(upper=float(payload["upper"]),
                   lower=payload.get("lower"),
                   name=payload.get("name", ""))


def satisfies_all(specs: Sequence[ConstraintSpec], observations: np.ndarray) -> np.ndarray:
    """Row-wise feasibility of an (n, K) measurement matrix."""
    obs = np.atleast_2d(np.asarray(observations, dtype=float))
    if obs.shape[1] != len(specs):
        raise ValueError(
            f"dimension mismatch: {obs.shape[1]} measurement columns, {len(specs)} specs")
    ok = np.ones(obs.shape[0], dtype=bool)
    for k, spec in enumerate(specs):
        ok &= spec.satisfies(obs[:, k])
    return ok


@dataclass(frozen=True)
class ObjectiveTable:
    """Deterministic objective values for a candidate set."""

    values: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        vals = as_float_array(self.values, "values", ndim=1)
        check_finite(vals, "values")
        object.__setattr__(self, "values", readonly(vals))

    def __len__(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_function(cls, fn: Callable, inputs: np.ndarray,
                      provenance: str = "") -> "ObjectiveTable":
        values = np.asarray(fn(np.asarray(inputs, dtype=float)), dtype=float)
        if provenance == "":
            provenance = getattr(fn, "provenance", "")
        return cls(values=values, provenance=provenance)


@dataclass(frozen=True)
class CandidateSet:
    """Finite pool of unevaluated inputs with stable integer ids."""

    inputs: np.ndarray
    ids: Optional[np.ndarray] = None

    def __post_init__(self):
        x = check_matrix(self.inputs, "inputs")
        object.__setattr__(self, "inputs", readonly(x))
        if self.ids is None:
            ids = np.arange(x.shape[0], dtype=int)
        else:
            ids = np.asarray(self.ids, dtype=int)
            if ids.shape != (x.shape[0],):
                raise ValueError(
                    f"dimension mismatch: ids shape {ids.shape}, expected ({x.shape[0]},)")
        object.__setattr__(self, "ids", readonly(ids))

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_dims(self) -> int:
        return self.inputs.shape[1]

    def subset(self, indices) -> "CandidateSet":
        idx = np.asarray(indices)
        return CandidateSet(inputs=np.array(self.inputs[idx]), ids=np.array(self.ids[idx]))

    def drop(self, index: int) -> "CandidateSet":
        """Remove one candidate by position."""
        keep = np.ones(len(self), dtype=bool)
        keep[index] = False
        return self.subset(np.flatnonzero(keep))


@dataclass(frozen=True)
class Incumbent:
    """Best known feasible cost, or the fallback cost when none is known."""

    best_feasible_cost: float
    fallback_cost: float
    best_feasible_input: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.best_feasible_input is not None:
            x = as_float_array(self.best_feasible_input, "best_feasible_input", ndim=1)
            object.__setattr__(self, "best_feasible_input", readonly(x))
        elif self.best_feasible_cost != self.fallback_cost:
            raise ValueError(
                "without a feasible input, best_feasible_cost must equal fallback_cost")

    @property
    def has_feasible(self) -> bool:
        return self.best_feasible_input is not None


def find_incumbent(evaluated_inputs, evaluated_feasible, objective_fn: Callable,
                   candidate_costs) -> Incumbent:
    """Incumbent over the evaluated points, with the fallback cost taken as
    one above the worst objective over candidates plus evaluated points."""
    x = np.asarray(evaluated_inputs, dtype=float)
    feasible = np.asarray(evaluated_feasible, dtype=bool)
    cand_costs = np.asarray(candidate_costs, dtype=float)
    if x.size == 0:
        eval_costs = np.empty(0)
    else:
        eval_costs = np.asarray(objective_fn(np.atleast_2d(x)), dtype=float)
    pool = np.concatenate([cand_costs, eval_costs])
    if pool.size == 0:
        raise ValueError("empty candidate set")
    fallback = float(pool.max()) + 1.0
    if feasible.size and feasible.any():
        feas_costs = eval_costs[feasible]
        best_pos = int(np.argmin(feas_costs))
        best_cost = float(feas_costs[best_pos])
        best_input = np.atleast_2d(x)[feasible][best_pos]
        return Incumbent(best_feasible_cost=best_cost, fallback_cost=fallback,
                         best_feasible_input=best_input)
    return Incumbent(best_feasible_cost=fallback, fallback_cost=fallback)


# -- scalar acquisition functions (vectorize transparently) ---------------

def improvement(candidate_cost, incumbent: Incumbent):
    """Cost reduction relative to the incumbent, clamped at zero."""
    gain = incumbent.best_feasible_cost - np.asarray(candidate_cost, dtype=float)
    out = np.maximum(0.0, gain)
    return float(out) if out.ndim == 0 else out


def alpha_fip(fp, impr):
    """Feasibility probability gated by whether any improvement exists."""
    fp = np.asarray(fp, dtype=float)
    impr = np.asarray(impr, dtype=float)
    out = fp * (impr > 0.0)
    return float(out) if out.ndim == 0 else out


def alpha_hfi(fp, impr, pi: float):
    """Improvement weighted by confidence margin above the threshold."""
    out = (np.asarray(fp, dtype=float) - pi) * np.asarray(impr, dtype=float)
    return float(out) if out.ndim == 0 else out


def alpha_eic(fp, impr):
    """Probability-weighted improvement (the deterministic-objective baseline)."""
    out = np.asarray(fp, dtype=float) * np.asarray(impr, dtype=float)
    return float(out) if out.ndim == 0 else out


def _tail_mass(spec: ConstraintSpec, mean, sigma):
    hi = ndtr((spec.upper - mean) / sigma)
    if spec.lower is None:
        return hi
    return hi - ndtr((spec.lower - mean) / sigma)


def feasibility_probability(predictions: Sequence, specs: Sequence[ConstraintSpec]) -> float:
    """Probability that all constraints hold, from per-constraint posteriors."""
    if len(predictions) != len(specs):
        raise ValueError(
            f"dimension mismatch: {len(predictions)} predictions, {len(specs)} specs")
    prob = 1.0
    for pred, spec in zip(predictions, specs):
        sigma = float(np.sqrt(pred.variance))
        prob *= float(_tail_mass(spec, float(pred.mean), sigma))
    return prob


def feasibility_probability_rows(means: np.ndarray, variances: np.ndarray,
                                 specs: Sequence[ConstraintSpec]) -> np.ndarray:
    """Vectorized product of constraint tail masses.

    means/variances have shape (K, m): one row per constraint."""
    means = np.atleast_2d(np.asarray(means, dtype=float))
    variances = np.atleast_2d(np.asarray(variances, dtype=float))
    if means.shape[0] != len(specs):
        raise ValueError(
            f"dimension mismatch: {means.shape[0]} prediction rows, {len(specs)} specs")
    sigmas = np.sqrt(variances)
    fp = np.ones(means.shape[1])
    for k, spec in enumerate(specs):
        fp *= _tail_mass(spec, means[k], sigmas[k])
    return fp


@dataclass(frozen=True)
class AcquisitionScores:
    """Per-candidate acquisition values at a fixed threshold pi."""

    candidate_ids: np.ndarray
    objective: np.ndarray
    improvement: np.ndarray
    feasibility_probability: np.ndarray
    alpha_fip: np.ndarray
    alpha_hfi: np.ndarray
    alpha_eic: np.ndarray
    pi: float

    def __post_init__(self):
        n = self.candidate_ids.shape[0]
        for name in ("objective", "improvement", "feasibility_probability",
                     "alpha_fip", "alpha_hfi", "alpha_eic"):
            arr = as_float_array(getattr(self, name), name, ndim=1)
            if arr.shape[0] != n:
                raise ValueError(f"dimension mismatch: {name} has {arr.shape[0]} entries, "
                                 f"expected {n}")
            object.__setattr__(self, name, readonly(arr))
        object.__setattr__(self, "candidate_ids",
                           readonly(np.asarray(self.candidate_ids, dtype=int)))

    def __len__(self) -> int:
        return self.candidate_ids.shape[0]


def score_candidates(candidates: CandidateSet, models: Sequence, specs: Sequence[ConstraintSpec],
                     incumbent: Incumbent, objective_values, pi: float,
                     improvement_values=None, return_posteriors: bool = False):
    """Score every candidate under all three acquisition functions.

    objective_values: per-candidate deterministic costs aligned with the set.
    improvement_values: optional precomputed improvements (skips recompute
    when the incumbent is frozen across repeated scoring calls).
    return_posteriors: also return the (K, m) posterior mean/variance arrays."""
    if len(candidates) == 0:
        raise ValueError("empty candidate set")
    if len(models) != len(specs):
        raise ValueError(
            f"dimension mismatch: {len(models)} models, {len(specs)} specs")
    costs = check_vector(objective_values, "objective_values")
    if costs.shape[0] != len(candidates):
        raise ValueError(
            f"dimension mismatch: {costs.shape[0]} objective values, "
            f"{len(candidates)} candidates")

    means = np.empty((len(specs), len(candidates)))
    variances = np.empty_like(means)
    for k, model in enumerate(models):
        mean_k, var_k = model.predict(candidates.inputs, return_var=True)
        means[k] = mean_k
        variances[k] = var_k
    fp = feasibility_probability_rows(means, variances, specs)

    if improvement_values is None:
        impr = improvement(costs, incumbent)
    else:
        impr = check_vector(improvement_values, "improvement_values")
    scores = AcquisitionScores(
        candidate_ids=np.array(candidates.ids),
        objective=costs,
        improvement=impr,
        feasibility_probability=fp,
        alpha_fip=alpha_fip(fp, impr),
        alpha_hfi=alpha_hfi(fp, impr, pi),
        alpha_eic=alpha_eic(fp, impr),
        pi=float(pi),
    )
    if return_posteriors:
        return scores, means, variances
    return scores


def select_candidate(scores: AcquisitionScores, dataset_feasible,
                     pi: Optional[float] = None) -> Tuple[int, str]:
    """Pick one candidate; returns (position, branch label).

    Branches: no feasible evaluated point -> argmax alpha_fip; some candidate
    confident above pi -> argmax alpha_hfi; otherwise argmax alpha_fip. Ties
    resolve to the lowest position.
    """
    if len(scores) == 0:
        raise ValueError("empty candidate set")
    if pi is None:
        pi = scores.pi
        hfi = scores.alpha_hfi
    else:
        pi = float(pi)
        hfi = alpha_hfi(scores.feasibility_probability, scores.improvement, pi)
    feasible = np.asarray(dataset_feasible, dtype=bool)
    if feasible.size == 0 or not feasible.any():
        return int(np.argmax(scores.alpha_fip)), BRANCH_NO_FEASIBLE
    if float(scores.alpha_fip.max()) > pi:
        return int(np.argmax(hfi)), BRANCH_HFI
    return int(np.argmax(scores.alpha_fip)), BRANCH_LOW_CONFIDENCE


def export_scores_csv(scores: AcquisitionScores, path_or_buffer,
                      selected_index: Optional[int] = None, branch: str = "") -> None:
    """Write scores as CSV; the branch label is recorded on the selected row."""
    def _write(fh):
        writer = csv.writer(fh)
        writer.writerow(SCORES_CSV_HEADER)
        for i in range(len(scores)):
            writer.writerow([
                int(scores.candidate_ids[i]),
                repr(float(scores.objective[i])),
                repr(float(scores.improvement[i])),
                repr(float(scores.feasibility_probability[i])),
                repr(float(scores.alpha_fip[i])),
                repr(float(scores.alpha_hfi[i])),
                repr(float(scores.alpha_eic[i])),
                branch if (selected_index is not None and i == selected_index) else "",
            ])

    if isinstance(path_or_buffer, (str, bytes)) or hasattr(path_or_buffer, "__fspath__"):
        with open(path_or_buffer, "w", newline="", encoding="utf-8") as fh:
            _write(fh)
    else:
        _write(path_or_buffer)
