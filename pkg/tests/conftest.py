import itertools

import numpy as np
import pytest


def brute_force_ds(est, truth):
    """Minimum over all k! matchings, written independently of the assignment solver."""
    est, truth = np.asarray(est, float), np.asarray(truth, float)
    k = len(truth)
    cost = np.empty((k, k))
    for j in range(k):
        for l in range(k):
            cost[j, l] = ((truth[j] - est[l]) ** 2).sum()
    perms = np.array(list(itertools.permutations(range(k))))
    return float(np.sqrt(cost[np.arange(k), perms].sum(axis=1).min()))


def brute_force_partition_optimum(points, k):
    """Global minimum of the mean cosine dissimilarity over all partitions into <= k parts.

    For a fixed part P the best unit center is sum(P)/|sum(P)| and the part
    contributes |P| - |sum(P)|, so the objective is (m - sum_P |sum(P)|) / m.
    """
    points = np.asarray(points, float)
    m = len(points)
    # fix the first point in part 0 (label symmetry)
    labels = np.array([(0,) + rest for rest in itertools.product(range(k), repeat=m - 1)])
    total = np.zeros(len(labels))
    for c in range(k):
        part_sums = (labels == c).astype(float) @ points
        total += np.linalg.norm(part_sums, axis=1)
    return float(((m - total) / m).min())


def random_unit_rows(rng, m, d):
    x = rng.random((m, d)) + 1e-3
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
