"""Synthetic process oracles for desk-scale campaign studies.

Stand-ins for real instruments: smooth radial-basis response surfaces over
controllable inputs produce constrained quality outputs plus one
status-dependent measurement that drifts additively between sessions.
Measurement noise is keyed by the input bytes, so re-measuring the same
point in the same session reproduces the same value.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .acquisition import ConstraintSpec
from .dataset import Dataset

STATUS_NOISE_TAG = 11
CONSTRAINT_NOISE_TAG = 12


def _rbf_mixture(rng: np.random.Generator, n_dims: int, n_centers: int = 10,
                 radius: float = 0.7) -> Callable:
    """Smooth function on [0,1]^d, normalized to roughly [-1, 1]."""
    centers = rng.random((n_centers, n_dims))
    weights = rng.normal(0.0, 1.0, size=n_centers)

    def raw(x: np.ndarray) -> np.ndarray:
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        return np.exp(-0.5 * d2 / radius ** 2) @ weights

    probe = rng.random((4096, n_dims))
    scale = float(np.max(np.abs(raw(probe))))
    if scale == 0.0:
        scale = 1.0

    def fn(x: np.ndarray) -> np.ndarray:
        return raw(np.atleast_2d(np.asarray(x, dtype=float))) / scale

    return fn


def _input_keyed_normal(x_row: np.ndarray, sigma: float, seed: int, tag: int) -> float:
    """One Gaussian draw fully determined by (seed, tag, input bytes)."""
    if sigma == 0.0:
        return 0.0
    words = np.frombuffer(np.ascontiguousarray(x_row, dtype=np.float64).tobytes(),
                          dtype=np.uint32)
    rng = np.random.default_rng((seed, tag, *[int(w) for w in words]))
    return float(rng.normal(0.0, sigma))


@dataclass
class SyntheticProcessOracle:
    """Deterministic multi-output response with per-session status drift.

    evaluate() maps controllable inputs to constraint measurements; when a
    status output is configured, measure_status() returns the drifted, noisy
    status value for a point. Everything is a pure function of
    (inputs, drift, seed)."""

    n_controllable: int
    constraint_fns: Tuple[Callable, ...]
    specs: Tuple[ConstraintSpec, ...]
    status_fn: Optional[Callable] = None
    status_coupling: float = 0.0
    status_center: float = 0.0
    drift: float = 0.0
    seed: int = 0
    status_noise: float = 0.0
    constraint_noise: float = 0.0
    name: str = "synthetic"

    @property
    def has_status(self) -> bool:
        return self.status_fn is not None

    def true_status(self, x) -> np.ndarray:
        if self.status_fn is None:
            raise ValueError("oracle has no status output")
        return self.status_fn(np.atleast_2d(np.asarray(x, dtype=float)))

    def measure_status(self, x) -> np.ndarray:
        """Drifted, noise-corrupted status measurement per input row."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        base = self.true_status(pts) + self.drift
        noise = np.array([_input_keyed_normal(row, self.status_noise, self.seed,
                                              STATUS_NOISE_TAG) for row in pts])
        return base + noise

    def evaluate(self, x) -> np.ndarray:
        """(m, K) constraint measurements at controllable inputs.

        Constraint responses see the session's actual (drifted) status when a
        coupling is configured."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        if pts.shape[1] != self.n_controllable:
            raise ValueError(f"dimension mismatch: oracle expects "
                             f"{self.n_controllable} controllable inputs, got {pts.shape[1]}")
        columns = []
        for k, fn in enumerate(self.constraint_fns):
            vals = np.asarray(fn(pts), dtype=float)
            if k == 0 and self.status_coupling != 0.0 and self.status_fn is not None:
                actual = self.true_status(pts) + self.drift
                vals = vals + self.status_coupling * (actual - self.status_center)
            if self.constraint_noise > 0.0:
                vals = vals + np.array([
                    _input_keyed_normal(row, self.constraint_noise, self.seed,
                                        CONSTRAINT_NOISE_TAG + k) for row in pts])
            columns.append(vals)
        return np.column_stack(columns)

    def with_drift(self, drift: float) -> "SyntheticProcessOracle":
        """Same process, new session drift."""
        return dataclasses.replace(self, drift=float(drift))

    def batch_callback(self, controllable_slice: Optional[slice] = None) -> Callable:
        """Adapter for run_to_termination: strips any appended x_m column."""
        sl = controllable_slice if controllable_slice is not None else slice(
            0, self.n_controllable)

        def oracle(batch_inputs: np.ndarray) -> np.ndarray:
            return self.evaluate(np.atleast_2d(batch_inputs)[:, sl])

        return oracle


def make_aps_like_oracle(seed: int = 0, drift: float = 0.0,
                         status_noise: float = 0.15,
                         constraint_noise: float = 0.0) -> SyntheticProcessOracle:
    """Six controllable inputs, two window constraints, one drifting status.

    The status output sits near 60 with a few units of swing; the first
    constrained output is coupled to the actual session status, the second is
    independent. Windows are tuned so a moderate fraction of the unit box is
    feasible."""
    rng = np.random.default_rng((seed, 101))
    g1 = _rbf_mixture(rng, 6)
    g2 = _rbf_mixture(rng, 6)
    g3 = _rbf_mixture(rng, 6)

    def hardness(x):
        return 655.0 + 35.0 * g1(x)

    def porosity(x):
        return 7.1 + 1.8 * g2(x)

    def status(x):
        return 60.0 + 5.0 * g3(x)

    oracle = SyntheticProcessOracle(
        n_controllable=6,
        constraint_fns=(hardness, porosity),
        specs=(ConstraintSpec(upper=675.0, lower=635.0, name="hardness"),
               ConstraintSpec(upper=8.2, lower=6.0, name="porosity")),
        status_fn=status,
        status_coupling=0.8,
        status_center=60.0,
        drift=drift,
        seed=seed,
        status_noise=status_noise,
        constraint_noise=constraint_noise,
        name="aps_like",
    )
    return oracle


def make_fdm_like_oracle(seed: int = 0) -> SyntheticProcessOracle:
    """Two controllable inputs, one-sided roughness cap, no status output."""
    rng = np.random.default_rng((seed, 102))
    g = _rbf_mixture(rng, 2)

    def roughness(x):
        return 9.0 + 4.0 * g(x)

    return SyntheticProcessOracle(
        n_controllable=2,
        constraint_fns=(roughness,),
        specs=(ConstraintSpec(upper=10.0, name="roughness"),),
        name="fdm_like",
        seed=seed,
    )


def make_initial_dataset(oracle: SyntheticProcessOracle, n_points: int, seed: int = 0,
                         require_infeasible: bool = True,
                         max_draws: int = 100_000) -> Dataset:
    """Random initialization experiments, by default rejection-sampled so
    none of them satisfies all constraints (mirrors starting a campaign from
    a dataset of failed settings)."""
    rng = np.random.default_rng((seed, 103))
    rows = []
    obs_rows = []
    status_rows = []
    draws = 0
    while len(rows) < n_points:
        draws += 1
        if draws > max_draws:
            raise RuntimeError("could not sample enough initialization points")
        x = rng.random(oracle.n_controllable)
        meas = oracle.evaluate(x)[0]
        if require_infeasible:
            feasible = all(spec.satisfies(meas[k]) for k, spec in enumerate(oracle.specs))
            if feasible:
                continue
        rows.append(x)
        obs_rows.append(meas)
        if oracle.has_status:
            status_rows.append(float(oracle.measure_status(x)[0]))
    inputs = np.array(rows)
    if oracle.has_status:
        # full input vectors carry the measured status as their last column
        inputs = np.column_stack([inputs, np.array(status_rows)])
        return Dataset(inputs, np.array(obs_rows), status=np.array(status_rows))
    return Dataset(inputs, np.array(obs_rows))
