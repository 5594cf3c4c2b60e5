"""Distances between estimated and true spectral measures."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from .core import DiscreteSpectralMeasure, ValidationError, as_points


class LengthMismatch(ValidationError):
    pass


class TransportError(RuntimeError):
    """The transport LP solver failed or returned an uncertified plan."""


def squared_distance_matrix(est: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """``cost[j, l] = ||truth[j] - est[l]||^2``."""
    return ((truth[:, None, :] - est[None, :, :]) ** 2).sum(axis=-1)


def ds_distance(est, truth) -> float:
    """Root-sum-of-squares distance between two point sets under the best matching.

    Minimizes ``sqrt(sum_j ||est[pi(j)] - truth[j]||^2)`` over permutations
    ``pi`` by solving the linear assignment problem on squared distances.
    """
    est, truth = as_points(est), as_points(truth)
    if est.shape != truth.shape:
        raise LengthMismatch(f"cannot match {est.shape[0]} estimated points to {truth.shape[0]} true ones")
    cost = squared_distance_matrix(est, truth)
    rows, cols = linear_sum_assignment(cost)
    return float(np.sqrt(np.sum(cost[rows, cols])))


def transport_plan(mu: DiscreteSpectralMeasure, nu: DiscreteSpectralMeasure):
    """Optimal coupling for Euclidean cost, with dual potentials.

    Returns ``(plan, cost, u, v)`` where ``plan[a, b]`` is the mass moved from
    atom a of ``mu`` to atom b of ``nu`` and ``u``, ``v`` are potentials with
    ``u[a] + v[b] <= cost[a, b]``, tight wherever mass is moved.
    """
    x, y = mu.atoms, nu.atoms
    p, q = mu.probs, nu.probs
    ka, kb = len(p), len(q)
    cost = np.sqrt(((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=-1))
    # row sums for every source; column sums for all sinks but the last, which
    # is implied and would make the system rank-deficient
    a_eq = np.zeros((ka + kb - 1, ka * kb))
    for a in range(ka):
        a_eq[a, a * kb:(a + 1) * kb] = 1.0
    for b in range(kb - 1):
        a_eq[ka + b, b::kb] = 1.0
    b_eq = np.concatenate([p, q[:-1]])
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise TransportError(f"transport LP failed: {res.message}")
    plan = np.clip(res.x.reshape(ka, kb), 0.0, None)
    duals = res.eqlin.marginals
    u = duals[:ka]
    v = np.concatenate([duals[ka:], [0.0]])
    _certify(plan, cost, u, v)
    return plan, cost, u, v


def _certify(plan, cost, u, v, tol: float = 1e-9) -> None:
    reduced = cost - u[:, None] - v[None, :]
    if reduced.min() < -tol:
        raise TransportError(f"dual infeasible: reduced cost {reduced.min():.3g}")
    slack = np.abs(reduced[plan > tol])
    if slack.size and slack.max() > tol:
        raise TransportError(f"complementary slackness violated by {slack.max():.3g}")


def wasserstein1(mu: DiscreteSpectralMeasure, nu: DiscreteSpectralMeasure) -> float:
    """Exact Wasserstein-1 distance with Euclidean ground cost."""
    plan, cost, _, _ = transport_plan(mu, nu)
    return float(np.sum(plan * cost))
