"""Closed-form benchmark problems with gridded candidate sets and a seeded
constraint-noise model.

Three two-dimensional problems with known objectives and black-box
constraints. P1 and P2 each have two disjoint feasible regions; P3 has two
constraints. Grids are uniform per dimension including the endpoints,
over-generated on the smallest near-square lattice and truncated row-major
to the requested count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import ndimage

from .acquisition import CandidateSet, ConstraintSpec
from .validation import as_float_array

NOISE_STREAM_TAG = 2


def _p1_objective(x: np.ndarray) -> np.ndarray:
    return np.cos(2.0 * x[:, 0]) * np.cos(x[:, 1]) + np.sin(x[:, 0])


def _p1_constraint(x: np.ndarray) -> np.ndarray:
    return np.cos(x[:, 0]) * np.cos(x[:, 1]) - np.sin(x[:, 0]) * np.sin(x[:, 1])


def _p2_objective(x: np.ndarray) -> np.ndarray:
    return np.sin(x[:, 0]) + x[:, 1]


def _p2_constraint(x: np.ndarray) -> np.ndarray:
    return np.sin(x[:, 0]) * np.sin(x[:, 1])


def _p3_objective(x: np.ndarray) -> np.ndarray:
    return x[:, 0] + x[:, 1]


def _p3_constraint_1(x: np.ndarray) -> np.ndarray:
    return (1.5 - x[:, 0] - 2.0 * x[:, 1]
            - 0.5 * np.sin(2.0 * np.pi * (x[:, 0] ** 2 - 2.0 * x[:, 1])))


def _p3_constraint_2(x: np.ndarray) -> np.ndarray:
    return x[:, 0] ** 2 + x[:, 1] ** 2 - 1.5


@dataclass(frozen=True)
class BenchmarkProblem:
    """One benchmark: closed-form objective, black-box constraints, domain."""

    name: str
    problem_id: int
    bounds: np.ndarray
    objective_fn: Callable
    constraint_fns: Tuple[Callable, ...]
    specs: Tuple[ConstraintSpec, ...]
    objective_desc: str
    constraint_descs: Tuple[str, ...]
    tolerance_radius: float

    @property
    def n_dims(self) -> int:
        return self.bounds.shape[0]

    @property
    def n_constraints(self) -> int:
        return len(self.constraint_fns)

    def objective(self, x) -> np.ndarray:
        return self.objective_fn(np.atleast_2d(np.asarray(x, dtype=float)))

    def constraints(self, x) -> np.ndarray:
        """(m, K) true constraint values."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        return np.column_stack([fn(pts) for fn in self.constraint_fns])

    def contains(self, x) -> bool:
        v = as_float_array(x, "x", ndim=1)
        return bool(np.all(v >= self.bounds[:, 0]) and np.all(v <= self.bounds[:, 1]))

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "bounds": [[float(lo), float(hi)] for lo, hi in self.bounds],
            "objective": self.objective_desc,
            "constraints": [
                {"formula": desc, **spec.to_dict()}
                for desc, spec in zip(self.constraint_descs, self.specs)
            ],
            "tolerance_radius": self.tolerance_radius,
        }


P1 = BenchmarkProblem(
    name="P1",
    problem_id=1,
    bounds=np.array([[0.0, 6.0], [0.0, 6.0]]),
    objective_fn=_p1_objective,
    constraint_fns=(_p1_constraint,),
    specs=(ConstraintSpec(upper=-0.5, name="c1"),),
    objective_desc="cos(2*x1)*cos(x2) + sin(x1)",
    constraint_descs=("cos(x1)*cos(x2) - sin(x1)*sin(x2) <= -0.5",),
    tolerance_radius=0.15,
)

P2 = BenchmarkProblem(
    name="P2",
    problem_id=2,
    bounds=np.array([[0.0, 6.0], [0.0, 6.0]]),
    objective_fn=_p2_objective,
    constraint_fns=(_p2_constraint,),
    specs=(ConstraintSpec(upper=-0.95, name="c1"),),
    objective_desc="sin(x1) + x2",
    constraint_descs=("sin(x1)*sin(x2) <= -0.95",),
    tolerance_radius=0.15,
)

P3 = BenchmarkProblem(
    name="P3",
    problem_id=3,
    bounds=np.array([[0.0, 1.0], [0.0, 1.0]]),
    objective_fn=_p3_objective,
    constraint_fns=(_p3_constraint_1, _p3_constraint_2),
    specs=(ConstraintSpec(upper=0.0, name="c1"), ConstraintSpec(upper=0.0, name="c2")),
    objective_desc="x1 + x2",
    constraint_descs=(
        "1.5 - x1 - 2*x2 - 0.5*sin(2*pi*(x1^2 - 2*x2)) <= 0",
        "x1^2 + x2^2 - 1.5 <= 0",
    ),
    tolerance_radius=0.0125,
)

PROBLEMS = {"P1": P1, "P2": P2, "P3": P3}


def get_problem(name: str) -> BenchmarkProblem:
    key = str(name).upper()
    if key not in PROBLEMS:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}")
    return PROBLEMS[key]


def evaluate(problem: BenchmarkProblem, x) -> Tuple[float, list]:
    """Exact objective and constraint values at one in-domain point."""
    v = as_float_array(x, "x", ndim=1)
    if v.shape[0] != problem.n_dims:
        raise ValueError(f"dimension mismatch: point has {v.shape[0]} entries, "
                         f"problem is {problem.n_dims}-dimensional")
    if not problem.contains(v):
        raise ValueError(f"point {v.tolist()} is out of domain for {problem.name}")
    row = v[None, :]
    f = float(problem.objective_fn(row)[0])
    cons = [float(fn(row)[0]) for fn in problem.constraint_fns]
    return f, cons


def _axis_count(count: int, n_dims: int) -> int:
    # smallest per-dimension count whose lattice covers the request
    n = int(math.ceil(count ** (1.0 / n_dims)))
    while n > 2 and (n - 1) ** n_dims >= count:
        n -= 1
    while n ** n_dims < count:
        n += 1
    return n


def make_grid(problem: BenchmarkProblem, count: int = 20_000) -> CandidateSet:
    """Uniform grid truncated row-major to exactly `count` points."""
    count = int(count)
    if count < 4:
        raise ValueError("count must be at least 4")
    n = _axis_count(count, problem.n_dims)
    axes = [np.linspace(lo, hi, n) for lo, hi in problem.bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)[:count]
    return CandidateSet(inputs=points, ids=np.arange(count))


@dataclass(frozen=True)
class NoiseConfig:
    tau: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.tau < 0.0:
            raise ValueError("tau must be non-negative")


@dataclass
class NoiseStream:
    """Counter-based noise stream state.

    Draws are keyed by (seed, stream tag, problem, repetition, counter), so a
    given evaluation index sees the same perturbation regardless of which
    candidate is being measured. Two runs configured with the same keys face
    identical noise realizations.
    """

    problem_id: int
    repetition: int = 0
    counter: int = 0

    def draw(self, noise: NoiseConfig, k: int) -> np.ndarray:
        rng = np.random.default_rng((noise.seed, NOISE_STREAM_TAG,
                                     self.problem_id, self.repetition, self.counter))
        self.counter += 1
        return rng.normal(0.0, noise.tau, size=k)


def noisy_evaluate(problem: BenchmarkProblem, x, noise: NoiseConfig,
                   stream: NoiseStream) -> Tuple[float, np.ndarray]:
    """Objective (uncorrupted) plus constraints with i.i.d. noise added."""
    f, cons = evaluate(problem, x)
    draws = stream.draw(noise, problem.n_constraints)
    return f, np.asarray(cons, dtype=float) + draws


@dataclass(frozen=True)
class OptimizerOracle:
    """Best feasible grid candidate under the true constraints."""

    index: int
    input: np.ndarray
    objective_value: float
    tolerance_radius: float

    def within_radius(self, x) -> bool:
        v = np.asarray(x, dtype=float).reshape(-1)
        return bool(np.linalg.norm(v - self.input) <= self.tolerance_radius)


def find_grid_optimum(problem: BenchmarkProblem, grid: CandidateSet) -> OptimizerOracle:
    """Brute-force scan for the feasible grid point of minimal objective."""
    if len(grid) == 0:
        raise ValueError("empty candidate set")
    cons = problem.constraints(grid.inputs)
    feasible = np.ones(len(grid), dtype=bool)
    for k, spec in enumerate(problem.specs):
        feasible &= spec.satisfies(cons[:, k])
    if not feasible.any():
        raise ValueError(f"no feasible grid point for {problem.name}")
    costs = problem.objective(grid.inputs)
    feas_idx = np.flatnonzero(feasible)
    best = feas_idx[int(np.argmin(costs[feas_idx]))]
    return OptimizerOracle(
        index=int(grid.ids[best]),
        input=np.array(grid.inputs[best]),
        objective_value=float(costs[best]),
        tolerance_radius=problem.tolerance_radius,
    )


def grid_feasibility(problem: BenchmarkProblem, count: int = 20_000):
    """Feasibility mask of the truncated grid plus the lattice shape.

    Returns (mask over lattice cells, present-cell mask, per-axis count).
    Cells dropped by the truncation are marked absent."""
    n = _axis_count(count, problem.n_dims)
    grid = make_grid(problem, count)
    cons = problem.constraints(grid.inputs)
    feasible = np.ones(len(grid), dtype=bool)
    for k, spec in enumerate(problem.specs):
        feasible &= spec.satisfies(cons[:, k])
    total = n ** problem.n_dims
    present = np.zeros(total, dtype=bool)
    present[:count] = True
    full = np.zeros(total, dtype=bool)
    full[:count] = feasible
    shape = (n,) * problem.n_dims
    return full.reshape(shape), present.reshape(shape), n


def feasible_component_count(problem: BenchmarkProblem, count: int = 20_000) -> int:
    """Connected feasible regions on the grid under 8-neighbor adjacency."""
    mask, _, _ = grid_feasibility(problem, count)
    structure = np.ones((3,) * mask.ndim, dtype=int)
    _, n_components = ndimage.label(mask, structure=structure)
    return int(n_components)


def feasible_fraction(problem: BenchmarkProblem, count: int = 20_000) -> float:
    mask, present, _ = grid_feasibility(problem, count)
    return float(mask.sum() / present.sum())


def problems_to_json(path: Optional[str] = None) -> str:
    payload = {name: prob.to_json_dict() for name, prob in PROBLEMS.items()}
    text = json.dumps(payload, indent=2)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
