"""Status-aware candidate generation.

A status-dependent measurement drifts between experimental sessions. A GP
trained on the initialization set predicts it from the controllable inputs;
one baseline experiment per session yields an additive offset, and candidate
vectors are completed with the offset-corrected prediction as their final
input coordinate.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .acquisition import CandidateSet
from .dataset import Dataset
from .gp import ConstraintGP, FitConfig
from .validation import as_float_array, check_matrix, readonly


@dataclass(frozen=True)
class GridSpec:
    """Per-dimension (lower, upper, count) axes with a total-candidate cap."""

    axes: Tuple[Tuple[float, float, int], ...]
    cap: int = 100_000

    def __post_init__(self):
        axes = tuple((float(lo), float(hi), int(count)) for lo, hi, count in self.axes)
        if not axes:
            raise ValueError("grid needs at least one dimension")
        for lo, hi, count in axes:
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError("grid bounds must be finite")
            if not lo < hi:
                raise ValueError("grid bounds require lower < upper")
            if count < 2:
                raise ValueError("grid needs at least 2 points per dimension")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "cap", int(self.cap))

    @property
    def n_dims(self) -> int:
        return len(self.axes)

    @property
    def total_points(self) -> int:
        total = 1
        for _, _, count in self.axes:
            total *= count
        return total

    def points(self) -> np.ndarray:
        """Full Cartesian product, row-major over the axes."""
        total = self.total_points
        if total > self.cap:
            raise ValueError(
                f"grid of {total} points exceeds the candidate cap of {self.cap}; "
                f"raise the cap to at least {total} or coarsen the axes")
        arrays = [np.linspace(lo, hi, count) for lo, hi, count in self.axes]
        mesh = np.meshgrid(*arrays, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    def bounds(self) -> np.ndarray:
        return np.array([[lo, hi] for lo, hi, _ in self.axes])

    def to_dict(self) -> dict:
        return {"axes": [list(a) for a in self.axes], "cap": self.cap}

    @classmethod
    def from_dict(cls, payload: dict) -> "GridSpec":
        return cls(axes=tuple(tuple(a) for a in payload["axes"]),
                   cap=int(payload.get("cap", 100_000)))


@dataclass(frozen=True)
class StatusModel:
    """GP mapping controllable inputs to the status-dependent measurement."""

    model: ConstraintGP

    def predict(self, x, return_var: bool = False):
        return self.model.predict(x, return_var=return_var)

    @property
    def n_dims(self) -> int:
        return self.model.n_dims_


def fit_status_model(dataset: Dataset, fit_config: Optional[FitConfig] = None) -> StatusModel:
    """Train the status GP on (controllable inputs, V) pairs.

    Every row of the dataset must carry a status measurement; pass only the
    initialization slice."""
    if dataset.status is None:
        raise ValueError("status column absent: dataset has no V measurements")
    if np.any(np.isnan(dataset.status)):
        raise ValueError("status column absent for some rows; the status model "
                         "trains only on fully measured initialization entries")
    config = fit_config if fit_config is not None else FitConfig(optimize_noise=True)
    model = ConstraintGP.from_config(config)
    model.fit(dataset.inputs, dataset.status)
    return StatusModel(model=model)


@dataclass(frozen=True)
class SessionOffset:
    """Additive correction for the current session's status measurement."""

    delta: float
    baseline_input: np.ndarray
    baseline_measured: float
    predicted: float

    def __post_init__(self):
        object.__setattr__(self, "baseline_input",
                           readonly(as_float_array(self.baseline_input,
                                                   "baseline_input", ndim=1)))

    def to_dict(self) -> dict:
        return {
            "baseline_input": [float(v) for v in self.baseline_input],
            "baseline_measured": self.baseline_measured,
            "predicted": self.predicted,
            "delta": self.delta,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SessionOffset":
        return cls(delta=float(payload["delta"]),
                   baseline_input=np.asarray(payload["baseline_input"], dtype=float),
                   baseline_measured=float(payload["baseline_measured"]),
                   predicted=float(payload["predicted"]))


def compute_offset(model: StatusModel, baseline_input, baseline_measured: float,
                   init_inputs=None, force: bool = False) -> SessionOffset:
    """Offset of the fresh baseline measurement against the model prediction.

    When the initialization inputs are supplied, the baseline must be one of
    them; force downgrades that check to a warning."""
    x = as_float_array(baseline_input, "baseline_input", ndim=1)
    if init_inputs is not None:
        known = np.atleast_2d(np.asarray(init_inputs, dtype=float))
        member = bool(np.any(np.all(known == x[None, :], axis=1)))
        if not member:
            message = ("baseline input is not one of the initialization points; "
                       "the offset model has never seen it")
            if force:
                warnings.warn(message)
            else:
                raise ValueError(message)
    predicted = float(model.predict(x))
    measured = float(baseline_measured)
    return SessionOffset(delta=measured - predicted, baseline_input=x,
                         baseline_measured=measured, predicted=predicted)


def generate_candidates(grid: GridSpec, model: Optional[StatusModel] = None,
                        offset: Optional[SessionOffset] = None,
                        evaluated_controllables=None) -> CandidateSet:
    """Expand the controllable grid into full candidate vectors.

    With a status model, each vector is (x_c, x_m) where x_m is the model
    prediction plus the session offset; without one, candidates are the bare
    grid. Grid points whose controllable part was already evaluated are
    excluded."""
    points = grid.points()
    if evaluated_controllables is not None and len(evaluated_controllables):
        seen = check_matrix(evaluated_controllables, "evaluated_controllables",
                            n_cols=grid.n_dims)
        keep = np.ones(points.shape[0], dtype=bool)
        for row in seen:
            keep &= ~np.all(points == row[None, :], axis=1)
        points = points[keep]
        ids = np.flatnonzero(keep)
    else:
        ids = np.arange(points.shape[0])
    if model is None:
        return CandidateSet(inputs=points, ids=ids)
    delta = 0.0 if offset is None else offset.delta
    predicted = np.asarray(model.predict(points), dtype=float)
    x_m = predicted + delta
    return CandidateSet(inputs=np.column_stack([points, x_m]), ids=ids)
