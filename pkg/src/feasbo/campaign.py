"""Persistent human-in-the-loop optimization campaigns.

A campaign lives in a single JSON session file holding the configuration,
the measured dataset, the current session offset, the pending batch, and an
append-only event history. Commands load the file, apply one transition,
and write the file back atomically (temp file + rename) under a lock file;
reads are lock-free. Replaying the history against the initial config
reconstructs the dataset bit-exactly.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple

import numpy as np
from filelock import FileLock

from .acquisition import BRANCH_NO_FEASIBLE, ConstraintSpec, satisfies_all
from .batch import BatchConfig, ProposedBatch, check_termination, propose_batch
from .calibration import (
    GridSpec,
    SessionOffset,
    compute_offset,
    fit_status_model,
    generate_candidates,
)
from .dataset import Dataset
from .gp import FitConfig
from .validation import as_float_array, check_finite

SESSION_VERSION = 1
LOCK_TIMEOUT_S = 30.0


class CampaignError(Exception):
    """Campaign workflow violation (bad config, wrong state, bad input)."""


@dataclass(frozen=True)
class PolynomialObjective:
    """Closed-form cost over a prefix of the controllable inputs.

    S(x) = constant + sum_i linear[i] * x_i + sum_i quadratic[i] * x_i**2,
    evaluated on the first len(linear) input columns. Stands in for
    explicitly computable process costs (stress index, print time)."""

    constant: float
    linear: Tuple[float, ...] = ()
    quadratic: Tuple[float, ...] = ()
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "linear", tuple(float(v) for v in self.linear))
        object.__setattr__(self, "quadratic", tuple(float(v) for v in self.quadratic))
        if len(self.quadratic) != len(self.linear):
            raise ValueError("linear and quadratic must have the same length")
        values = (self.constant,) + self.linear + self.quadratic
        if not all(math.isfinite(v) for v in values):
            raise ValueError("objective coefficients must be finite")

    @property
    def n_inputs(self) -> int:
        return len(self.linear)

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        rows = np.atleast_2d(arr)
        n = self.n_inputs
        if rows.shape[1] < n:
            raise ValueError(f"objective needs {n} input columns, got {rows.shape[1]}")
        lead = rows[:, :n]
        values = np.full(rows.shape[0], self.constant)
        if n:
            values = values + lead @ np.array(self.linear)
            values = values + (lead ** 2) @ np.array(self.quadratic)
        return float(values[0]) if single else values

    def to_dict(self) -> dict:
        return {"constant": self.constant, "linear": list(self.linear),
                "quadratic": list(self.quadratic), "description": self.description}

    @classmethod
    def from_dict(cls, payload: dict) -> "PolynomialObjective":
        return cls(constant=payload["constant"],
                   linear=tuple(payload.get("linear", ())),
                   quadratic=tuple(payload.get("quadratic", ())),
                   description=str(payload.get("description", "")))


@dataclass(frozen=True)
class CampaignConfig:
    """Immutable campaign definition written at init time."""

    name: str
    n_controllable: int
    grid: GridSpec
    specs: Tuple[ConstraintSpec, ...]
    objective: PolynomialObjective
    batch: BatchConfig
    status_enabled: bool = False
    append_baseline: bool = True
    init_count: int = 0
    gp_restarts: int = 8
    gp_seed: int = 0
    gp_noise_variance: float = 0.0
    gp_optimize_noise: bool = True

    def __post_init__(self):
        if int(self.n_controllable) < 1:
            raise ValueError("n_controllable must be at least 1")
        object.__setattr__(self, "n_controllable", int(self.n_controllable))
        object.__setattr__(self, "init_count", int(self.init_count))
        object.__setattr__(self, "specs", tuple(self.specs))
        if not self.specs:
            raise ValueError("at least one constraint spec is required")
        if self.grid.n_dims != self.n_controllable:
            raise ValueError(f"grid covers {self.grid.n_dims} dimensions, "
                             f"config declares {self.n_controllable} controllable inputs")
        if self.objective.n_inputs > self.n_controllable:
            raise ValueError("objective uses more inputs than are controllable")
        if self.init_count < 0:
            raise ValueError("init_count must be non-negative")

    @property
    def input_dims(self) -> int:
        # status-enabled campaigns append the measured status as an input column
        return self.n_controllable + (1 if self.status_enabled else 0)

    @property
    def n_constraints(self) -> int:
        return len(self.specs)

    def fit_config(self) -> FitConfig:
        return FitConfig(restarts=self.gp_restarts, seed=self.gp_seed,
                         noise_variance=self.gp_noise_variance,
                         optimize_noise=self.gp_optimize_noise)

    def to_dict(self) -> dict:
        return {
            "session_version": SESSION_VERSION,
            "name": self.name,
            "n_controllable": self.n_controllable,
            "status_enabled": self.status_enabled,
            "append_baseline": self.append_baseline,
            "init_count": self.init_count,
            "grid": self.grid.to_dict(),
            "constraints": [spec.to_dict() for spec in self.specs],
            "objective": self.objective.to_dict(),
            "batch": dataclasses.asdict(self.batch),
            "gp": {
                "restarts": self.gp_restarts,
                "seed": self.gp_seed,
                "noise_variance": self.gp_noise_variance,
                "optimize_noise": self.gp_optimize_noise,
            },
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "CampaignConfig":
        try:
            version = int(payload.get("session_version", SESSION_VERSION))
            if version != SESSION_VERSION:
                raise ValueError(f"unsupported session version {version}")
            gp = payload.get("gp", {})
            return cls(
                name=str(payload.get("name", "campaign")),
                n_controllable=int(payload["n_controllable"]),
                grid=GridSpec.from_dict(payload["grid"]),
                specs=tuple(ConstraintSpec.from_dict(s)
                            for s in payload["constraints"]),
                objective=PolynomialObjective.from_dict(payload["objective"]),
                batch=BatchConfig(**payload.get("batch", {})),
                status_enabled=bool(payload.get("status_enabled", False)),
                append_baseline=bool(payload.get("append_baseline", True)),
                init_count=int(payload.get("init_count", 0)),
                gp_restarts=int(gp.get("restarts", 8)),
                gp_seed=int(gp.get("seed", 0)),
                gp_noise_variance=float(gp.get("noise_variance", 0.0)),
                gp_optimize_noise=bool(gp.get("optimize_noise", True)),
            )
        except (KeyError, TypeError, ValueError) as err:
            raise CampaignError(f"malformed config: {err}") from err


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def _dataset_to_payload(dataset: Dataset) -> dict:
    return dataset.to_dict()


def _dataset_from_payload(payload: dict, config: CampaignConfig) -> Dataset:
    inputs = payload.get("inputs", [])
    if not len(inputs):
        return _empty_dataset(config)
    return Dataset.from_dict(payload)


def _empty_dataset(config: CampaignConfig) -> Dataset:
    status = np.empty(0) if config.status_enabled else None
    return Dataset(np.empty((0, config.input_dims)),
                   np.empty((0, config.n_constraints)), status=status)


def _pending_to_dict(batch: ProposedBatch) -> dict:
    return {
        "candidates": [[float(v) for v in row] for row in batch.candidates],
        "candidate_ids": [int(v) for v in batch.candidate_ids],
        "selection_fips": [float(v) for v in batch.selection_fips],
        "selection_branches": list(batch.selection_branches),
        "fantasy_means": [[None if math.isnan(v) else float(v) for v in row]
                          for row in batch.fantasy_means],
        "exhausted": bool(batch.exhausted),
    }


def _pending_from_dict(payload: dict, config: CampaignConfig) -> ProposedBatch:
    fantasy = np.array([[np.nan if v is None else float(v) for v in row]
                        for row in payload["fantasy_means"]], dtype=float)
    if fantasy.size == 0:
        fantasy = np.empty((0, config.n_constraints))
    return ProposedBatch(
        candidates=np.array(payload["candidates"], dtype=float).reshape(
            -1, config.input_dims),
        candidate_ids=np.array(payload["candidate_ids"], dtype=int),
        selection_fips=np.array(payload["selection_fips"], dtype=float),
        selection_branches=list(payload["selection_branches"]),
        fantasy_means=fantasy,
        exhausted=bool(payload.get("exhausted", False)),
    )


@dataclass
class SessionState:
    """In-memory mirror of one session file."""

    config: CampaignConfig
    dataset: Dataset
    offset: Optional[SessionOffset] = None
    pending: Optional[ProposedBatch] = None
    history: List[dict] = field(default_factory=list)

    @property
    def current_pi(self) -> float:
        """Threshold the next suggestion will use: the last suggest event's
        value if any (overrides are sticky), otherwise the configured one."""
        for event in reversed(self.history):
            if event["event"] == "suggest":
                return float(event["pi"])
        return self.config.batch.pi

    @property
    def recorded_batches(self) -> int:
        return sum(1 for e in self.history if e["event"] == "record")

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "dataset": _dataset_to_payload(self.dataset),
            "offset": self.offset.to_dict() if self.offset is not None else None,
            "pending": (_pending_to_dict(self.pending)
                        if self.pending is not None else None),
            "history": self.history,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SessionState":
        config = CampaignConfig.from_dict(payload["config"])
        dataset = _dataset_from_payload(payload["dataset"], config)
        offset = (SessionOffset.from_dict(payload["offset"])
                  if payload.get("offset") is not None else None)
        pending = (_pending_from_dict(payload["pending"], config)
                   if payload.get("pending") is not None else None)
        return cls(config=config, dataset=dataset, offset=offset,
                   pending=pending, history=list(payload.get("history", [])))


# -- persistence -------------------------------------------------------------

def save_session(state: SessionState, path) -> None:
    """Atomic snapshot: serialize to a temp file, then rename over the target."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".session-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(state.to_dict(), fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_session(path) -> SessionState:
    path = os.fspath(path)
    if not os.path.exists(path):
        raise CampaignError(f"no session file at {path}")
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return SessionState.from_dict(payload)


def _session_lock(path) -> FileLock:
    return FileLock(os.fspath(path) + ".lock", timeout=LOCK_TIMEOUT_S)


# -- commands ----------------------------------------------------------------

def campaign_init(config_payload, session_path, force: bool = False) -> SessionState:
    """Create a session file from a config dict or config-file path."""
    if isinstance(config_payload, (str, os.PathLike)):
        with open(config_payload, "r", encoding="utf-8") as fh:
            try:
                config_payload = json.load(fh)
            except json.JSONDecodeError as err:
                raise CampaignError(f"malformed config: {err}") from err
    if not isinstance(config_payload, dict):
        raise CampaignError("malformed config: expected a JSON object")

    init_payload = config_payload.get("init_data")
    init_csv = config_payload.get("init_csv")
    core = {k: v for k, v in config_payload.items()
            if k not in ("init_data", "init_csv")}
    config = CampaignConfig.from_dict(core)

    if init_payload is not None and init_csv is not None:
        raise CampaignError("malformed config: give init_data or init_csv, not both")
    try:
        if init_csv is not None:
            dataset = Dataset.from_csv(init_csv)
        elif init_payload is not None and len(init_payload.get("inputs", [])):
            dataset = Dataset.from_dict(init_payload)
        else:
            dataset = _empty_dataset(config)
    except (ValueError, OSError) as err:
        raise CampaignError(f"malformed config: bad initialization data ({err})") from err

    if dataset.n_points:
        if dataset.n_dims != config.input_dims:
            raise CampaignError(
                f"malformed config: initialization inputs have {dataset.n_dims} "
                f"columns, campaign expects {config.input_dims}")
        if dataset.n_constraints != config.n_constraints:
            raise CampaignError(
                f"malformed config: initialization observations have "
                f"{dataset.n_constraints} columns, campaign has "
                f"{config.n_constraints} constraints")
        if config.status_enabled and dataset.status is None:
            raise CampaignError("malformed config: status modeling is enabled but "
                                "the initialization data has no status column")
        if not config.status_enabled and dataset.status is not None:
            raise CampaignError("malformed config: status measurements supplied "
                                "but status modeling is disabled")

    config = dataclasses.replace(config, init_count=dataset.n_points)

    session_path = os.fspath(session_path)
    if os.path.exists(session_path) and not force:
        raise CampaignError(f"session file {session_path} exists; pass force to "
                            "overwrite")

    state = SessionState(config=config, dataset=dataset)
    state.history.append({
        "event": "init",
        "at": _now(),
        "dataset": _dataset_to_payload(dataset),
    })
    with _session_lock(session_path):
        save_session(state, session_path)
    return state


def _init_slice_status_dataset(state: SessionState) -> Dataset:
    """Initialization rows restricted to controllable columns, for the status GP."""
    n = state.config.init_count
    nc = state.config.n_controllable
    init = state.dataset
    return Dataset(init.inputs[:n, :nc], init.observations[:n],
                   status=None if init.status is None else init.status[:n],
                   allow_duplicates=True)


def _fit_session_status_model(state: SessionState):
    status_fit = FitConfig(optimize_noise=True, restarts=state.config.gp_restarts,
                           seed=state.config.gp_seed)
    return fit_status_model(_init_slice_status_dataset(state), status_fit)


def campaign_calibrate(session_path, baseline_input, measured_status: float,
                       constraint_measurements=None,
                       force: bool = False) -> Tuple[SessionState, SessionOffset]:
    """Compute and store the session offset from a re-measured baseline point.

    When constraint measurements for the baseline run are supplied and the
    config allows it, the run is appended to the dataset as a fresh row."""
    with _session_lock(session_path):
        state = load_session(session_path)
        config = state.config
        if not config.status_enabled:
            raise CampaignError("status modeling is not enabled for this campaign")
        baseline = as_float_array(baseline_input, "baseline_input", ndim=1)
        if baseline.shape[0] != config.n_controllable:
            raise CampaignError(f"baseline input must have {config.n_controllable} "
                                f"entries, got {baseline.shape[0]}")
        model = _fit_session_status_model(state)
        init_controllables = state.dataset.inputs[:config.init_count,
                                                  :config.n_controllable]
        offset = compute_offset(model, baseline, float(measured_status),
                                init_inputs=init_controllables, force=force)

        appended = None
        if constraint_measurements is not None and config.append_baseline:
            meas = as_float_array(constraint_measurements,
                                  "constraint_measurements", ndim=1)
            if meas.shape[0] != config.n_constraints:
                raise CampaignError(f"expected {config.n_constraints} baseline "
                                    f"measurements, got {meas.shape[0]}")
            check_finite(meas, "constraint_measurements")
            row = np.concatenate([baseline, [float(measured_status)]])
            already = bool(len(state.dataset)
                           and np.any(np.all(state.dataset.inputs == row[None, :],
                                             axis=1)))
            if not already:
                state.dataset = state.dataset.extend(
                    row[None, :], meas[None, :], status=[float(measured_status)])
                appended = {"input": [float(v) for v in row],
                            "observations": [float(v) for v in meas],
                            "status": float(measured_status)}

        state.offset = offset
        state.history.append({
            "event": "calibrate",
            "at": _now(),
            "baseline_input": [float(v) for v in baseline],
            "measured_status": float(measured_status),
            "offset": offset.to_dict(),
            "appended_row": appended,
        })
        save_session(state, session_path)
    return state, offset


def build_candidates(state: SessionState):
    """Current candidate set: the grid minus evaluated controllable points,
    with the calibrated status column appended when status modeling is on."""
    config = state.config
    evaluated = None
    if len(state.dataset):
        evaluated = state.dataset.inputs[:, :config.n_controllable]
    if config.status_enabled:
        model = _fit_session_status_model(state)
        return generate_candidates(config.grid, model, state.offset,
                                   evaluated_controllables=evaluated)
    return generate_candidates(config.grid, evaluated_controllables=evaluated)


def _bootstrap_batch(state: SessionState, candidates, n: int) -> ProposedBatch:
    """With fewer than two recorded experiments there is no posterior yet;
    hand out the lowest-indexed unevaluated grid points as seed runs."""
    m = min(n, len(candidates))
    sel = candidates.subset(np.arange(m))
    return ProposedBatch(
        candidates=np.array(sel.inputs),
        candidate_ids=np.array(sel.ids, dtype=int),
        selection_fips=np.ones(m),
        selection_branches=[BRANCH_NO_FEASIBLE] * m,
        fantasy_means=np.full((m, state.config.n_constraints), np.nan),
        exhausted=n > len(candidates),
    )


def campaign_suggest(session_path, n: Optional[int] = None,
                     pi: Optional[float] = None
                     ) -> Tuple[SessionState, ProposedBatch]:
    """Propose the next batch and persist it as pending.

    A pi override takes effect for this and all later suggestions until
    overridden again; n applies to this batch only."""
    with _session_lock(session_path):
        state = load_session(session_path)
        config = state.config
        if state.pending is not None:
            raise CampaignError("a pending batch is already awaiting results; "
                                "record or abandon it before suggesting again")
        if config.status_enabled and state.offset is None:
            raise CampaignError("no session offset: calibrate before suggesting "
                                "in a status-enabled campaign")
        if pi is not None and not 0.0 <= float(pi) <= 1.0:
            raise CampaignError("pi must lie in [0, 1]")
        effective_pi = float(pi) if pi is not None else state.current_pi
        batch_n = int(n) if n is not None else config.batch.batch_size
        if batch_n < 1:
            raise CampaignError("batch size must be at least 1")

        candidates = build_candidates(state)
        if len(candidates) == 0:
            raise CampaignError("candidate grid exhausted: every grid point has "
                                "been evaluated")

        if len(state.dataset) < 2:
            proposed = _bootstrap_batch(state, candidates, batch_n)
        else:
            batch_cfg = dataclasses.replace(config.batch, batch_size=batch_n,
                                            pi=effective_pi)
            proposed = propose_batch(state.dataset, candidates, config.specs,
                                     config.objective, batch_cfg,
                                     fit_config=config.fit_config())

        state.pending = proposed
        state.history.append({
            "event": "suggest",
            "at": _now(),
            "pi": effective_pi,
            "n": batch_n,
            "candidate_ids": [int(v) for v in proposed.candidate_ids],
            "inputs": [[float(v) for v in row] for row in proposed.candidates],
            "fips": [float(v) for v in proposed.selection_fips],
            "branches": list(proposed.selection_branches),
            "exhausted": bool(proposed.exhausted),
        })
        save_session(state, session_path)
    return state, proposed


def campaign_record(session_path, measurements,
                    status_values=None) -> Tuple[SessionState, dict]:
    """Record measured results for the pending batch.

    Returns the updated state and a report with the batch's selection-time
    feasibility probabilities and the termination recommendation."""
    with _session_lock(session_path):
        state = load_session(session_path)
        config = state.config
        if state.pending is None:
            raise CampaignError("no pending batch to record")
        pending = state.pending
        meas = np.asarray(measurements, dtype=float)
        if meas.ndim == 1:
            meas = meas.reshape(-1, config.n_constraints) \
                if config.n_constraints == 1 else meas[None, :]
        if meas.ndim != 2 or meas.shape != (len(pending), config.n_constraints):
            raise CampaignError(
                f"count mismatch: expected {len(pending)} rows of "
                f"{config.n_constraints} measurements, got array of shape "
                f"{np.asarray(measurements).shape}")
        if not np.all(np.isfinite(meas)):
            raise CampaignError("non-finite measurements")

        rows = np.array(pending.candidates)
        status_list = None
        if status_values is not None:
            if not config.status_enabled:
                raise CampaignError("status measurements supplied but status "
                                    "modeling is disabled")
            status_arr = as_float_array(status_values, "status_values", ndim=1)
            if status_arr.shape[0] != len(pending):
                raise CampaignError(f"count mismatch: expected {len(pending)} "
                                    f"status values, got {status_arr.shape[0]}")
            check_finite(status_arr, "status_values")
            # the measured status replaces the predicted one in the input row
            rows[:, -1] = status_arr
            status_list = [float(v) for v in status_arr]

        state.dataset = state.dataset.extend(
            rows, meas,
            status=None if status_list is None else np.array(status_list))
        terminated = check_termination(pending,
                                       config.batch.termination_threshold)
        feasible_rows = satisfies_all(config.specs, meas)
        state.pending = None
        state.history.append({
            "event": "record",
            "at": _now(),
            "inputs": [[float(v) for v in row] for row in rows],
            "observations": [[float(v) for v in row] for row in meas],
            "status": status_list,
            "fips": [float(v) for v in pending.selection_fips],
            "terminate_recommended": bool(terminated),
        })
        save_session(state, session_path)

    report = {
        "recorded": len(pending),
        "feasible_in_batch": int(np.count_nonzero(feasible_rows)),
        "selection_fips": [float(v) for v in pending.selection_fips],
        "terminate_recommended": bool(terminated),
        "incumbent": dataset_incumbent(state.config, state.dataset),
    }
    return state, report


def campaign_abandon(session_path, reason: str = "") -> SessionState:
    """Discard the pending batch (logged, nothing deleted from history)."""
    with _session_lock(session_path):
        state = load_session(session_path)
        if state.pending is None:
            raise CampaignError("no pending batch to abandon")
        state.history.append({
            "event": "abandon",
            "at": _now(),
            "candidate_ids": [int(v) for v in state.pending.candidate_ids],
            "reason": str(reason),
        })
        state.pending = None
        save_session(state, session_path)
    return state


def dataset_incumbent(config: CampaignConfig, dataset: Dataset) -> Optional[dict]:
    """Best feasible evaluated point, or None."""
    if len(dataset) == 0:
        return None
    feasible = satisfies_all(config.specs, dataset.observations)
    if not np.any(feasible):
        return None
    costs = np.asarray(config.objective(dataset.inputs), dtype=float)
    rows = np.flatnonzero(feasible)
    best = rows[int(np.argmin(costs[rows]))]
    return {"cost": float(costs[best]),
            "input": [float(v) for v in dataset.inputs[best]],
            "row": int(best)}


def campaign_status(session_path) -> dict:
    """Read-only session summary; never mutates the file."""
    state = load_session(session_path)
    config = state.config
    dataset = state.dataset
    feasible = (satisfies_all(config.specs, dataset.observations)
                if len(dataset) else np.zeros(0, dtype=bool))
    n_measured = len(dataset) - config.init_count
    last_fips = None
    terminate = None
    for event in reversed(state.history):
        if event["event"] == "record":
            last_fips = list(event["fips"])
            terminate = bool(event["terminate_recommended"])
            break
    pending = None
    if state.pending is not None:
        pending = {"count": len(state.pending),
                   "candidate_ids": [int(v) for v in state.pending.candidate_ids]}
    return {
        "name": config.name,
        "n_experiments": len(dataset),
        "init_count": config.init_count,
        "recorded_points": int(max(n_measured, 0)),
        "recorded_batches": state.recorded_batches,
        "feasible_count": int(np.count_nonzero(feasible)),
        "feasible_fraction": (float(np.count_nonzero(feasible) / len(dataset))
                              if len(dataset) else None),
        "incumbent": dataset_incumbent(config, dataset),
        "current_pi": state.current_pi,
        "offset_delta": None if state.offset is None else float(state.offset.delta),
        "pending": pending,
        "last_batch_fips": last_fips,
        "terminate_recommended": terminate,
        "recommendation": ("stop: at least half of the last batch was selected "
                           "with feasibility probability below "
                           f"{config.batch.termination_threshold:g}"
                           if terminate else "continue"),
    }


def replay_dataset(config: CampaignConfig, history: Sequence[dict]) -> Dataset:
    """Reconstruct the dataset from the event log alone."""
    dataset = _empty_dataset(config)
    for event in history:
        kind = event["event"]
        if kind == "init":
            dataset = _dataset_from_payload(event["dataset"], config)
        elif kind == "calibrate":
            appended = event.get("appended_row")
            if appended is not None:
                dataset = dataset.extend(
                    np.array([appended["input"]], dtype=float),
                    np.array([appended["observations"]], dtype=float),
                    status=[float(appended["status"])])
        elif kind == "record":
            status = event.get("status")
            dataset = dataset.extend(
                np.array(event["inputs"], dtype=float).reshape(-1, config.input_dims),
                np.array(event["observations"], dtype=float).reshape(
                    -1, config.n_constraints),
                status=None if status is None else np.array(status, dtype=float))
    return dataset


def verify_replay(state: SessionState) -> bool:
    """True when replaying the history reproduces the stored dataset bit-exactly."""
    replayed = replay_dataset(state.config, state.history)
    same_inputs = (replayed.inputs.shape == state.dataset.inputs.shape
                   and np.array_equal(replayed.inputs, state.dataset.inputs))
    same_obs = np.array_equal(replayed.observations, state.dataset.observations)
    if state.dataset.status is None:
        same_status = replayed.status is None
    else:
        same_status = (replayed.status is not None
                       and np.array_equal(replayed.status, state.dataset.status,
                                          equal_nan=True))
    return bool(same_inputs and same_obs and same_status)


# -- demo configurations -----------------------------------------------------

def demo_config(kind: str, init_points: int = 0, seed: int = 0) -> dict:
    """Ready-to-init config dict for the bundled synthetic process studies.

    kind 'aps': 6 controllable inputs, two constraint windows, status
    modeling with per-session drift. kind 'fdm': 2 controllable inputs, one
    upper-bounded constraint, no status. With init_points > 0, matching
    synthetic measurements are embedded as initialization data."""
    from .oracle import make_aps_like_oracle, make_fdm_like_oracle, make_initial_dataset

    kind = kind.lower()
    if kind == "aps":
        oracle = make_aps_like_oracle(seed=seed)
        payload = {
            "name": "synthetic-coating-study",
            "n_controllable": 6,
            "status_enabled": True,
            "append_baseline": True,
            "grid": {"axes": [[0.0, 1.0, 4]] * 6, "cap": 100_000},
            "constraints": [spec.to_dict() for spec in oracle.specs],
            "objective": {
                "constant": 150.0,
                "linear": [40.0, -15.0],
                "quadratic": [0.0, 25.0],
                "description": "synthetic stress-index stand-in: "
                               "150 + 40*x1 - 15*x2 + 25*x2^2",
            },
            "batch": {"batch_size": 5, "pi": 0.4,
                      "termination_threshold": 0.05, "max_batches": 50},
            "gp": {"restarts": 8, "seed": seed, "noise_variance": 0.0,
                   "optimize_noise": True},
        }
    elif kind == "fdm":
        oracle = make_fdm_like_oracle(seed=seed)
        payload = {
            "name": "synthetic-print-study",
            "n_controllable": 2,
            "status_enabled": False,
            "append_baseline": False,
            "grid": {"axes": [[0.0, 1.0, 25]] * 2, "cap": 100_000},
            "constraints": [spec.to_dict() for spec in oracle.specs],
            "objective": {
                "constant": 20.0,
                "linear": [15.0, 8.0],
                "quadratic": [0.0, 0.0],
                "description": "synthetic print-time stand-in: 20 + 15*x1 + 8*x2",
            },
            "batch": {"batch_size": 1, "pi": 0.4,
                      "termination_threshold": 0.05, "max_batches": 50},
            "gp": {"restarts": 8, "seed": seed, "noise_variance": 0.0,
                   "optimize_noise": True},
        }
    else:
        raise ValueError(f"unknown demo kind {kind!r}; use 'aps' or 'fdm'")

    if init_points:
        dataset = make_initial_dataset(oracle, init_points, seed=seed,
                                       require_infeasible=False)
        payload["init_data"] = dataset.to_dict()
    return payload
