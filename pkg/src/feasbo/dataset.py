"""Evaluated inputs paired with per-constraint measurements."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from feasbo.validation import as_float_array, check_finite, check_matrix, readonly


def _duplicate_rows(inputs: np.ndarray) -> bool:
    if inputs.shape[0] < 2:
        return False
    return np.unique(inputs, axis=0).shape[0] < inputs.shape[0]


@dataclass(frozen=True)
class Dataset:
    """Immutable set of evaluated points.

    Parameters
    ----------
    inputs : ndarray of shape (n, d)
        Evaluated input vectors.
    observations : ndarray of shape (n, K)
        Measured constraint values, one column per constraint.
    status : ndarray of shape (n,), optional
        Status measurement per point (NaN allowed for rows where it was
        not recorded; only finite rows qualify for status modeling).
    allow_duplicates : bool
        Permit bitwise-identical input vectors. Off by default.
    """

    inputs: np.ndarray
    observations: np.ndarray
    status: np.ndarray | None = None
    allow_duplicates: bool = field(default=False, compare=False)

    def __post_init__(self):
        inputs = check_matrix(self.inputs, "inputs")
        obs = check_matrix(self.observations, "observations")
        if inputs.shape[1] < 1:
            raise ValueError("inputs must have at least one dimension")
        if obs.shape[0] != inputs.shape[0]:
            raise ValueError(
                "observations and inputs must have the same number of rows"
            )
        if not self.allow_duplicates and _duplicate_rows(inputs):
            raise ValueError(
                "duplicate input vectors (enable allow_duplicates to permit)"
            )
        status = self.status
        if status is not None:
            status = as_float_array(status, "status", ndim=1)
            if status.shape[0] != inputs.shape[0]:
                raise ValueError("status must have one entry per input row")
        object.__setattr__(self, "inputs", readonly(inputs))
        object.__setattr__(self, "observations", readonly(obs))
        object.__setattr__(self, "status", readonly(status) if status is not None else None)

    @property
    def n_points(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_dims(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_constraints(self) -> int:
        return self.observations.shape[1]

    def __len__(self) -> int:
        return self.n_points

    def extend(self, inputs, observations, status=None) -> "Dataset":
        """Return a new Dataset with the given rows appended."""
        new_x = check_matrix(inputs, "inputs", n_cols=self.n_dims)
        new_y = check_matrix(observations, "observations", n_cols=self.n_constraints)
        if new_x.shape[0] != new_y.shape[0]:
            raise ValueError("row count mismatch between inputs and observations")
        check_finite(new_y, "observations")
        if self.status is not None:
            if status is None:
                status = np.full(new_x.shape[0], np.nan)
            appended_status = np.concatenate(
                [self.status, as_float_array(status, "status", ndim=1)]
            )
        elif status is not None:
            raise ValueError("dataset has no status column; cannot append status values")
        else:
            appended_status = None
        return Dataset(
            np.vstack([self.inputs, new_x]),
            np.vstack([self.observations, new_y]),
            status=appended_status,
            allow_duplicates=self.allow_duplicates,
        )

    def column(self, constraint_index: int) -> np.ndarray:
        if not 0 <= constraint_index < self.n_constraints:
            raise IndexError(f"constraint index {constraint_index} out of range")
        return self.observations[:, constraint_index]

    def contains_input(self, x) -> bool:
        x = as_float_array(x, "x", ndim=1)
        if x.shape[0] != self.n_dims:
            return False
        return bool(np.any(np.all(self.inputs == x, axis=1)))

    def to_csv(self, path_or_buffer) -> None:
        """Write `x1,...,xn,c1,...,cK[,v]` rows in full float precision."""
        header = [f"x{i + 1}" for i in range(self.n_dims)]
        header += [f"c{k + 1}" for k in range(self.n_constraints)]
        if self.status is not None:
            header.append("v")

        def _write(fh):
            writer = csv.writer(fh)
            writer.writerow(header)
            for i in range(self.n_points):
                row = [repr(float(v)) for v in self.inputs[i]]
                row += [repr(float(v)) for v in self.observations[i]]
                if self.status is not None:
                    row.append(repr(float(self.status[i])))
                writer.writerow(row)

        if isinstance(path_or_buffer, (str, bytes)) or hasattr(path_or_buffer, "__fspath__"):
            with open(path_or_buffer, "w", newline="", encoding="utf-8") as fh:
                _write(fh)
        else:
            _write(path_or_buffer)

    @classmethod
    def from_csv(cls, path_or_buffer, allow_duplicates: bool = False) -> "Dataset":
        if isinstance(path_or_buffer, (str, bytes)) or hasattr(path_or_buffer, "__fspath__"):
            with open(path_or_buffer, "r", newline="", encoding="utf-8") as fh:
                return cls._from_csv_file(fh, allow_duplicates)
        return cls._from_csv_file(path_or_buffer, allow_duplicates)

    @classmethod
    def _from_csv_file(cls, fh, allow_duplicates: bool) -> "Dataset":
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ValueError("empty CSV")
        names = [h.strip() for h in header]
        has_status = names[-1] == "v"
        if has_status:
            names = names[:-1]
        n_dims = sum(1 for h in names if h.startswith("x"))
        n_cons = sum(1 for h in names if h.startswith("c"))
        if n_dims < 1 or n_cons < 1 or n_dims + n_cons != len(names):
            raise ValueError(f"unrecognized CSV header: {header}")
        rows = [[float(cell) for cell in row] for row in reader if row]
        data = np.asarray(rows, dtype=np.float64)
        if data.ndim != 2 or data.shape[1] != n_dims + n_cons + int(has_status):
            raise ValueError("CSV rows do not match header layout")
        status = data[:, -1] if has_status else None
        return cls(
            data[:, :n_dims],
            data[:, n_dims:n_dims + n_cons],
            status=status,
            allow_duplicates=allow_duplicates,
        )

    def to_dict(self) -> dict:
        # missing status entries are encoded as null so the JSON stays strict
        status = None
        if self.status is not None:
            status = [None if np.isnan(v) else v for v in self.status.tolist()]
        return {
            "inputs": self.inputs.tolist(),
            "observations": self.observations.tolist(),
            "status": status,
        }

    @classmethod
    def from_dict(cls, payload: dict, allow_duplicates: bool = False) -> "Dataset":
        status = payload.get("status")
        if status is not None:
            status = np.asarray([np.nan if v is None else v for v in status],
                                dtype=np.float64)
        return cls(
            np.asarray(payload["inputs"], dtype=np.float64),
            np.asarray(payload["observations"], dtype=np.float64),
            status=status,
            allow_duplicates=allow_duplicates,
        )
