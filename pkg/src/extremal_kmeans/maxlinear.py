"""Max-linear models: Fréchet factors, simulation, and their discrete spectral measure.

A max-linear vector has components ``X_j = max_i a[j, i] * Z_i`` with i.i.d.
standard Fréchet factors ``Z_i``. When every row of the factor matrix sums to
one, each margin is standard Fréchet too.
"""

from __future__ import annotations

import numpy as np

from .core import DiscreteSpectralMeasure, MaxLinearModel, ObservationMatrix, ZeroFactor
from .transform import row_norms

CONSTELLATIONS = ("d4k2", "d4k6", "d6k6", "d10k6")


def frechet_from_uniform(u) -> np.ndarray:
    """Inverse of the standard Fréchet CDF ``exp(-1/z)``."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        return -1.0 / np.log(u)


def sample_frechet(count: int, rng: np.random.Generator) -> np.ndarray:
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    u = rng.random(count)
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return frechet_from_uniform(u)


def simulate(model: MaxLinearModel, n: int, rng: np.random.Generator) -> ObservationMatrix:
    """Draw ``n`` independent rows from the max-linear model."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    a = model.factors
    z = sample_frechet(n * model.k, rng).reshape(n, model.k)
    x = (z[:, None, :] * a[None, :, :]).max(axis=2)
    return ObservationMatrix(x, columns=tuple(f"X{j + 1}" for j in range(model.d)))


def spectral_measure(model: MaxLinearModel, norm: str = "l2") -> DiscreteSpectralMeasure:
    """Atoms at the normalized factor columns, weighted by the column norms.

    Atoms are always reported with unit Euclidean length; ``norm`` only sets
    how the masses are computed.
    """
    cols = model.factors.T
    lengths = row_norms(cols, norm)
    atoms = cols / np.linalg.norm(cols, axis=1, keepdims=True)
    return DiscreteSpectralMeasure(atoms, lengths / lengths.sum())


def _n_uniforms(constellation: str) -> int:
    return {"d4k2": 4, "d4k6": 12, "d6k6": 18, "d10k6": 20}[constellation]


def model_from_uniforms(constellation: str, u) -> MaxLinearModel:
    """Build a constellation's factor matrix from its uniform draws ``U_1, U_2, ...``.

    The first k-1 factors follow the fixed zero patterns of the constellation;
    the last factor is whatever brings every margin's loadings to one.
    """
    if constellation not in CONSTELLATIONS:
        raise ValueError(f"unknown constellation {constellation!r}; choose from {CONSTELLATIONS}")
    u = np.asarray(u, dtype=float)
    if u.shape != (_n_uniforms(constellation),):
        raise ValueError(f"{constellation} needs {_n_uniforms(constellation)} uniforms, got {u.shape}")
    U = np.concatenate([[np.nan], u])  # 1-based like U_1, U_2, ...
    o = 0.0
    if constellation == "d4k2":
        first = [np.array([U[1], U[2], U[3], U[4]]) / 2]
    elif constellation == "d4k6":
        first = [
            np.array([U[1], U[2], U[3], U[4]]) / 3,
            np.array([U[5], o, U[6], o]) / 3,
            np.array([o, U[7], o, U[8]]) / 3,
            np.array([U[9], U[10], o, o]) / 3,
            np.array([o, o, U[11], U[12]]) / 3,
        ]
    elif constellation == "d6k6":
        first = [
            U[1:7] / 3,
            np.array([o, U[7], o, U[8], o, U[9]]) / 3,
            np.array([U[10], o, U[11], o, U[12], o]) / 3,
            np.array([o, o, o, U[13], U[14], U[15]]) / 3,
            # divisor 3 keeps the complementary factor nonnegative
            np.array([U[16], U[17], U[18], o, o, o]) / 3,
        ]
    else:
        zeros = np.zeros(10)
        f2, f3, f4, f5 = zeros.copy(), zeros.copy(), zeros.copy(), zeros.copy()
        f2[[0, 1]] = U[11], U[12]
        f3[[2, 3]] = U[13], U[14]
        f4[[4, 5]] = U[15], U[16]
        f5[[6, 7, 8, 9]] = U[17], U[18], U[19], U[20]
        first = [U[1:11] / 2, f2 / 2, f3 / 2, f4 / 2, f5 / 2]
    a = np.column_stack(first)
    last = 1.0 - a.sum(axis=1)
    # exact zeros when rounding lands a hair below
    last[np.abs(last) < 1e-15] = 0.0
    return MaxLinearModel(np.column_stack([a, last]))


def random_model(constellation: str, rng: np.random.Generator) -> MaxLinearModel:
    """Random factor matrix for one of the simulation constellations."""
    if constellation not in CONSTELLATIONS:
        raise ValueError(f"unknown constellation {constellation!r}; choose from {CONSTELLATIONS}")
    while True:
        u = rng.random(_n_uniforms(constellation))
        try:
            return model_from_uniforms(constellation, u)
        except ZeroFactor:
            # probability-zero event
            continue
