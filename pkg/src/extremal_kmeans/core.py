"""Domain types shared by the transform, clustering, simulation and metric modules.

All types are frozen dataclasses that validate on construction. Arrays are
copied and marked read-only so instances can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

UNIT_NORM_TOL = 1e-12
PROB_TOL = 1e-9
ATOM_MERGE_TOL = 1e-9


class ValidationError(ValueError):
    """Raised when data violates the invariants of a domain type."""


class NegativeEntry(ValidationError):
    def __init__(self, j: int, i: int, value: float):
        self.j, self.i, self.value = j, i, value
        super().__init__(f"negative factor loading {value!r} at margin j={j}, factor i={i}")


class MarginSumViolation(ValidationError):
    def __init__(self, j: int, total: float):
        self.j, self.sum = j, total
        super().__init__(f"loadings of margin j={j} sum to {total!r}, expected 1")


class ZeroFactor(ValidationError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"factor i={i} is identically zero")


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ObservationMatrix:
    """Raw n x d sample, one observation per row, with optional row labels."""

    data: np.ndarray
    labels: Optional[tuple] = None
    columns: Optional[tuple] = None

    def __post_init__(self):
        data = _frozen(self.data)
        if data.ndim != 2:
            raise ValidationError(f"observation matrix must be 2-d, got shape {data.shape}")
        n, d = data.shape
        if n < 1 or d < 1:
            raise ValidationError(f"observation matrix needs n >= 1 and d >= 1, got {data.shape}")
        if not np.all(np.isfinite(data)):
            r, c = np.argwhere(~np.isfinite(data))[0]
            raise ValidationError(f"non-finite entry at row {r}, column {c}")
        object.__setattr__(self, "data", data)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise ValidationError(f"{len(labels)} labels for {n} observations")
            object.__setattr__(self, "labels", labels)
        if self.columns is not None:
            columns = tuple(self.columns)
            if len(columns) != d:
                raise ValidationError(f"{len(columns)} column names for {d} columns")
            object.__setattr__(self, "columns", columns)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def _check_unit_rows(points: np.ndarray, what: str) -> None:
    if np.any(points < 0):
        raise ValidationError(f"{what} has negative coordinates")
    norms = np.linalg.norm(points, axis=-1)
    bad = np.abs(norms - 1.0) > UNIT_NORM_TOL
    if np.any(bad):
        raise ValidationError(f"{what} is not on the unit sphere (norm {norms[bad].flat[0]!r})")


@dataclass(frozen=True)
class UnitVector:
    """A point of the nonnegative part of the Euclidean unit sphere."""

    coords: np.ndarray

    def __post_init__(self):
        coords = _frozen(self.coords)
        if coords.ndim != 1 or coords.size < 1:
            raise ValidationError("unit vector must be a non-empty 1-d array")
        _check_unit_rows(coords, "unit vector")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_vector(cls, v) -> "UnitVector":
        v = np.asarray(v, dtype=float)
        if np.any(v < 0) or not np.any(v > 0):
            raise ValidationError("can only normalize a nonzero nonnegative vector")
        v = v / v.max()
        return cls(v / np.linalg.norm(v))

    def __len__(self):
        return self.coords.size


def as_points(vectors) -> np.ndarray:
    """Stack UnitVectors (or rows of an array) into an m x d float array."""
    if isinstance(vectors, np.ndarray):
        return np.atleast_2d(vectors.astype(float, copy=False))
    return np.array([v.coords if isinstance(v, UnitVector) else v for v in vectors], dtype=float)


@dataclass(frozen=True)
class AngularSample:
    """Projected extremes: m unit vectors with their origin in the raw sample.

    ``points`` is an m x d array whose rows are unit vectors; ``norms`` holds
    the pre-projection norms of the standardized rows and ``threshold`` the
    selection cutoff on those norms.
    """

    points: np.ndarray
    source_rows: np.ndarray
    norms: np.ndarray
    threshold: float

    def __post_init__(self):
        points = _frozen(self.points)
        if points.ndim != 2 or points.shape[0] < 1:
            raise ValidationError(f"angular sample needs an m x d array with m >= 1, got {points.shape}")
        _check_unit_rows(points, "angular point")
        rows = np.array(self.source_rows, dtype=np.int64)
        rows.setflags(write=False)
        norms = _frozen(self.norms)
        m = points.shape[0]
        if rows.shape != (m,) or norms.shape != (m,):
            raise ValidationError("source_rows and norms must have one entry per point")
        if np.any(rows < 0) or len(np.unique(rows)) != m:
            raise ValidationError("source_rows must be distinct nonnegative indices")
        if not self.threshold > 0:
            raise ValidationError(f"threshold must be positive, got {self.threshold!r}")
        if np.any(norms < self.threshold):
            raise ValidationError("every selected norm must be at least the threshold")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "source_rows", rows)
        object.__setattr__(self, "norms", norms)
        object.__setattr__(self, "threshold", float(self.threshold))

    @classmethod
    def from_points(cls, points) -> "AngularSample":
        """Wrap bare unit vectors, e.g. for clustering data that is already angular."""
        points = as_points(points)
        m = points.shape[0]
        return cls(points, np.arange(m), np.ones(m), 1.0)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class ClusterModel:
    """Result of spherical k-means on an angular sample."""

    centers: np.ndarray
    weights: np.ndarray
    labels: np.ndarray
    objective: float
    n_iter: int = field(default=0, compare=False)

    def __post_init__(self):
        centers = _frozen(self.centers)
        if centers.ndim != 2:
            raise ValidationError("centers must be a k x d array")
        _check_unit_rows(centers, "cluster center")
        k = centers.shape[0]
        labels = np.array(self.labels, dtype=np.int64)
        labels.setflags(write=False)
        if labels.ndim != 1 or labels.size < 1:
            raise ValidationError("labels must be a non-empty 1-d array")
        if np.any(labels < 0) or np.any(labels >= k):
            raise ValidationError(f"labels must lie in [0, {k})")
        weights = _frozen(self.weights)
        expected = np.bincount(labels, minlength=k) / labels.size
        if weights.shape != (k,) or np.any(np.abs(weights - expected) > PROB_TOL):
            raise ValidationError("weights must equal the cluster membership fractions")
        if not self.objective >= 0:
            raise ValidationError(f"objective must be nonnegative, got {self.objective!r}")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "objective", float(self.objective))

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    def check_against(self, sample: AngularSample) -> None:
        """Verify objective and labels against the points they were fitted on."""
        points = sample.points
        if points.shape[0] != self.labels.size:
            raise ValidationError("sample size does not match the number of labels")
        dissim = np.maximum(1.0 - points @ self.centers.T, 0.0)
        if np.any(np.argmin(dissim, axis=1) != self.labels):
            raise ValidationError("labels are not nearest-center assignments")
        recomputed = float(np.mean(dissim.min(axis=1)))
        if abs(recomputed - self.objective) > PROB_TOL:
            raise ValidationError(f"objective {self.objective!r} != recomputed {recomputed!r}")


def validate_model(factors) -> None:
    """Check a d x k max-linear factor matrix; raise on the first violation.

    Indices reported in the exceptions are 1-based (margin j, factor i), in
    line with the usual a_j^i notation for loadings.
    """
    a = np.asarray(factors, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValidationError(f"factor matrix must be a non-empty d x k array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("factor matrix has non-finite entries")
    neg = np.argwhere(a < 0)
    if neg.size:
        j, i = neg[0]
        raise NegativeEntry(int(j) + 1, int(i) + 1, float(a[j, i]))
    sums = a.sum(axis=1)
    for j, s in enumerate(sums):
        if abs(s - 1.0) > PROB_TOL:
            raise MarginSumViolation(j + 1, float(s))
    for i in range(a.shape[1]):
        if not np.any(a[:, i] > 0):
            raise ZeroFactor(i + 1)


@dataclass(frozen=True)
class MaxLinearModel:
    """d x k nonnegative factor matrix; column i holds the loadings of factor i."""

    factors: np.ndarray

    def __post_init__(self):
        validate_model(self.factors)
        object.__setattr__(self, "factors", _frozen(self.factors))

    @property
    def d(self) -> int:
        return self.factors.shape[0]

    @property
    def k(self) -> int:
        return self.factors.shape[1]

    def to_json(self) -> dict:
        return {"factors": self.factors.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "MaxLinearModel":
        return cls(np.asarray(obj["factors"], dtype=float))


def merge_atoms(atoms: np.ndarray, probs: np.ndarray, tol: float = ATOM_MERGE_TOL):
    """Merge atoms closer than ``tol``, summing their masses; drop zero masses."""
    atoms = np.atleast_2d(np.asarray(atoms, dtype=float))
    probs = np.asarray(probs, dtype=float)
    keep_atoms: list = []
    keep_probs: list = []
    for x, p in zip(atoms, probs):
        if p <= 0:
            continue
        for idx, y in enumerate(keep_atoms):
            if np.linalg.norm(x - y) <= tol:
                keep_probs[idx] += p
                break
        else:
            keep_atoms.append(x)
            keep_probs.append(p)
    return np.array(keep_atoms), np.array(keep_probs)


@dataclass(frozen=True)
class DiscreteSpectralMeasure:
    """Finitely many atoms on the unit sphere with positive masses summing to 1.

    Coinciding atoms are merged on construction.
    """

    atoms: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        probs = np.asarray(self.probs, dtype=float).ravel()
        if atoms.shape[0] != probs.size:
            raise ValidationError("need one probability per atom")
        if np.any(probs < 0):
            raise ValidationError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise ValidationError(f"probabilities sum to {probs.sum()!r}, expected 1")
        _check_unit_rows(atoms, "spectral atom")
        atoms, probs = merge_atoms(atoms, probs)
        object.__setattr__(self, "atoms", _frozen(atoms))
        object.__setattr__(self, "probs", _frozen(probs))

    @property
    def k(self) -> int:
        return self.atoms.shape[0]

    @classmethod
    def from_clusters(cls, model: ClusterModel) -> "DiscreteSpectralMeasure":
        """Mass equal to the membership fraction placed on each cluster center."""
        return cls(model.centers, model.weights)

    def to_json(self) -> dict:
        return {"atoms": self.atoms.tolist(), "probs": self.probs.tolist()}


def unit_rows(x: np.ndarray) -> np.ndarray:
    """Scale each nonzero row of ``x`` to Euclidean length one."""
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


__all__: Sequence[str] = [
    "ValidationError",
    "NegativeEntry",
    "MarginSumViolation",
    "ZeroFactor",
    "ObservationMatrix",
    "UnitVector",
    "AngularSample",
    "ClusterModel",
    "MaxLinearModel",
    "DiscreteSpectralMeasure",
    "validate_model",
    "merge_atoms",
    "as_points",
    "unit_rows",
]
