"""Marginal standardization, extreme selection and projection to the sphere."""

from __future__ import annotations

import math
import warnings
from typing import Optional

import numpy as np

from .core import AngularSample, ObservationMatrix, ValidationError, unit_rows

NORMS = {
    "l2": 2,
    "euclidean": 2,
    "linf": np.inf,
    "sup": np.inf,
    "max": np.inf,
    "l1": 1,
}


class EmptySelection(ValidationError):
    """Fewer than one observation would be retained."""


class DegenerateColumnWarning(UserWarning):
    """A constant column: every standardized value equals 1."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} is constant; it carries no extremal information")


def row_norms(x: np.ndarray, norm: str = "l2") -> np.ndarray:
    try:
        order = NORMS[norm.lower()]
    except KeyError:
        raise ValueError(f"unknown norm {norm!r}; choose from {sorted(NORMS)}") from None
    return np.linalg.norm(x, ord=order, axis=1)


def rank_transform(obs) -> np.ndarray:
    """Map each column to the standard Pareto scale via its empirical CDF.

    Entry (j, i) becomes ``n / (n - c)`` where ``c`` counts the values of
    column i strictly smaller than ``X[j, i]`` (the left-continuous ECDF).
    Tied values receive equal outputs. Constant columns trigger a
    ``DegenerateColumnWarning``.
    """
    x = obs.data if isinstance(obs, ObservationMatrix) else np.asarray(obs, dtype=float)
    n, d = x.shape
    if n < 2:
        raise ValidationError(f"rank transform needs at least 2 observations, got {n}")
    out = np.empty((n, d))
    for i in range(d):
        col = x[:, i]
        smaller = np.searchsorted(np.sort(col), col, side="left")
        out[:, i] = n / (n - smaller)
        if col.min() == col.max():
            warnings.warn(DegenerateColumnWarning(i), stacklevel=2)
    return out


def n_selected(n: int, fraction: Optional[float] = None, count: Optional[int] = None) -> int:
    """Number of rows to keep, from either a fraction of ``n`` or an explicit count."""
    if (fraction is None) == (count is None):
        raise ValueError("give exactly one of fraction and count")
    if count is not None:
        if not 1 <= count <= n:
            raise EmptySelection(f"count must lie in [1, {n}], got {count}")
        return int(count)
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    if fraction * n < 1:
        raise EmptySelection(f"fraction {fraction} of {n} rows keeps no observation")
    # guard against 0.07 * 100 == 7.000000000000001
    return min(n, math.ceil(fraction * n - 1e-9))


def select_extremes(
    transformed: np.ndarray,
    fraction: Optional[float] = None,
    norm: str = "l2",
    count: Optional[int] = None,
) -> AngularSample:
    """Keep the rows with the largest norms and project them to the unit sphere.

    Exactly ``ceil(fraction * n)`` (or ``count``) rows are kept; among rows
    with equal norm at the cutoff the lower row indices win. Selection uses
    ``norm`` but the projected points are always scaled to Euclidean length one.
    The returned sample lists the kept rows in input order.
    """
    y = np.asarray(transformed, dtype=float)
    if fraction is None and count is None:
        fraction = 1.0
    m = n_selected(y.shape[0], fraction, count)
    norms = row_norms(y, norm)
    order = np.lexsort((np.arange(norms.size), -norms))
    kept = np.sort(order[:m])
    threshold = norms[order[m - 1]]
    return AngularSample(
        points=unit_rows(y[kept]),
        source_rows=kept,
        norms=norms[kept],
        threshold=threshold,
    )


def fit_pipeline(
    obs: ObservationMatrix,
    fraction: Optional[float] = None,
    norm: str = "l2",
    negate: bool = False,
    count: Optional[int] = None,
) -> AngularSample:
    """Standardize, select the extremes and project them.

    ``negate=True`` flips the sign of every observation first, which turns
    large losses into large values when the data are returns.
    """
    x = obs.data if isinstance(obs, ObservationMatrix) else np.asarray(obs, dtype=float)
    if negate:
        x = -x
    return select_extremes(rank_transform(x), fraction=fraction, norm=norm, count=count)
