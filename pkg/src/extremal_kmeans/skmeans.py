"""Spherical k-means on angular samples.

Dissimilarity between unit vectors is ``1 - <x, y>``. Each restart is seeded
k-means++ style under that dissimilarity and then alternates nearest-center
assignment with normalized-mean center updates until the objective stops
improving.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .core import AngularSample, ClusterModel, UnitVector, ValidationError, as_points
from .rng import derive_rng


class KTooLarge(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    restarts: int = 100
    max_iters: int = 100
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        for name in ("k", "restarts", "max_iters"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol!r}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


def _coords(x) -> np.ndarray:
    return x.coords if isinstance(x, UnitVector) else np.asarray(x, dtype=float)


def cosine_dissimilarity(x, y) -> float:
    return float(max(0.0, 1.0 - np.dot(_coords(x), _coords(y))))


def dissimilarities(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """m x k matrix of ``1 - <x, c>``, clamped at zero against rounding."""
    return np.maximum(1.0 - points @ centers.T, 0.0)


def _points(sample) -> np.ndarray:
    return sample.points if isinstance(sample, AngularSample) else as_points(sample)


def objective(centers, sample) -> float:
    """Mean dissimilarity of each point to its closest center."""
    x = _points(sample)
    c = as_points(centers)
    if c.shape[0] == 0:
        raise ValueError("need at least one center")
    return float(np.mean(dissimilarities(x, c).min(axis=1)))


def assign(points: np.ndarray, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Nearest-center labels (lowest index on ties) and the attained dissimilarities."""
    dissim = dissimilarities(points, centers)
    labels = np.argmin(dissim, axis=1)
    return labels, dissim[np.arange(points.shape[0]), labels]


def update_centers(points: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Normalized mean of each cluster; empty clusters keep their previous center."""
    k = centers.shape[0]
    sums = np.zeros_like(centers)
    np.add.at(sums, labels, points)
    lengths = np.linalg.norm(sums, axis=1)
    new = centers.copy()
    filled = lengths > 0
    # nonnegative nonzero points cannot sum to zero
    assert np.array_equal(filled, np.bincount(labels, minlength=k) > 0)
    new[filled] = sums[filled] / lengths[filled, None]
    return new


def repair_empty(points, labels, dissim, centers):
    """Give each empty cluster the worst-served point of a non-singleton cluster."""
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k)
    if np.all(counts > 0):
        return labels, dissim, centers
    labels, dissim, centers = labels.copy(), dissim.copy(), centers.copy()
    for c in np.flatnonzero(counts == 0):
        movable = counts[labels] > 1
        if not np.any(movable):
            break
        cand = np.where(movable, dissim, -np.inf)
        j = int(np.argmax(cand))
        counts[labels[j]] -= 1
        counts[c] += 1
        labels[j] = c
        dissim[j] = 0.0
        centers[c] = points[j]
    return labels, dissim, centers


def plusplus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding with probabilities proportional to the current minimum dissimilarity."""
    m = points.shape[0]
    chosen = [int(rng.integers(m))]
    closest = dissimilarities(points, points[chosen[:1]])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        idx = int(rng.integers(m)) if total <= 0 else int(rng.choice(m, p=closest / total))
        chosen.append(idx)
        closest = np.minimum(closest, dissimilarities(points, points[idx:idx + 1])[:, 0])
    return points[chosen].copy()


def lloyd(points: np.ndarray, centers: np.ndarray, max_iters: int = 100, tol: float = 1e-10):
    """Run the assignment/update iteration from the given starting centers.

    Returns ``(centers, labels, history)`` where ``history`` lists the
    objective after the initial assignment and after every iteration.
    """
    centers = np.array(centers, dtype=float)
    labels, dissim = assign(points, centers)
    history = [float(dissim.mean())]
    for _ in range(max_iters):
        labels, dissim, centers = repair_empty(points, labels, dissim, centers)
        centers = update_centers(points, labels, centers)
        labels, dissim = assign(points, centers)
        history.append(float(dissim.mean()))
        if history[-2] - history[-1] < tol:
            break
    return centers, labels, history


def spherical_kmeans(sample, cfg: KMeansConfig) -> ClusterModel:
    """Best of ``cfg.restarts`` spherical k-means runs.

    Restart r draws its seeding from the stream ``(cfg.seed, "kmeans-restart", r)``;
    the restart with the smallest objective wins, earliest restart on ties.
    """
    points = _points(sample)
    m = points.shape[0]
    if cfg.k > m:
        raise KTooLarge(f"k={cfg.k} exceeds the number of angular points m={m}")
    best = None
    for r in range(cfg.restarts):
        rng = derive_rng(cfg.seed, "kmeans-restart", r)
        init = plusplus_init(points, cfg.k, rng)
        centers, labels, history = lloyd(points, init, cfg.max_iters, cfg.tol)
        if best is None or history[-1] < best[2][-1]:
            best = (centers, labels, history)
    centers, labels, history = best
    weights = np.bincount(labels, minlength=cfg.k) / m
    return ClusterModel(centers, weights, labels, history[-1], n_iter=len(history) - 1)


def elbow_scan(sample, k_min: int, k_max: int, cfg: KMeansConfig) -> List[Tuple[int, float]]:
    """Minimized objective for every k in ``[k_min, k_max]``, all other settings from ``cfg``."""
    m = _points(sample).shape[0]
    if not 1 <= k_min <= k_max <= m:
        raise ValidationError(f"need 1 <= k_min <= k_max <= m={m}, got {k_min}, {k_max}")
    out = []
    for k in range(k_min, k_max + 1):
        fit = spherical_kmeans(sample, KMeansConfig(k, cfg.restarts, cfg.max_iters, cfg.tol, cfg.seed))
        out.append((k, fit.objective))
    return out


def renormalize_center(c) -> np.ndarray:
    """Rescale so the largest component equals one, for side-by-side display."""
    c = _coords(c)
    top = c.max()
    if not top > 0:
        raise ZeroVector("cannot renormalize a vector without a positive entry")
    return c / top
