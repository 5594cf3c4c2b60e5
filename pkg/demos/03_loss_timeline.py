"""
Classifying extreme losses over time
====================================

Daily returns of a few sectors. Multiplying by -1 turns large losses into
large values; the 5% most extreme days are then assigned to clusters, which
gives a timeline of which kind of crash happened when.
"""

import numpy as np

from extremal_kmeans.core import MaxLinearModel
from extremal_kmeans.maxlinear import simulate
from extremal_kmeans.skmeans import KMeansConfig, spherical_kmeans
from extremal_kmeans.transform import fit_pipeline

rng = np.random.default_rng(42)
n = 2500
# loss shocks: energy pair, tech pair, and a market-wide factor
a = np.array([
    [0.7, 0.0, 0.3],
    [0.7, 0.0, 0.3],
    [0.0, 0.7, 0.3],
    [0.0, 0.7, 0.3],
])
losses = simulate(MaxLinearModel(a), n, rng).data
returns = -np.log1p(losses) + rng.normal(scale=0.01, size=losses.shape)

sample = fit_pipeline(returns, fraction=0.05, negate=True)
fit = spherical_kmeans(sample, KMeansConfig(3, restarts=100))

print("day   cluster")
for day, cluster in zip(sample.source_rows[:15], fit.labels[:15]):
    print(f"{day:5d} {cluster:4d}")
print("...")
for c in range(fit.k):
    days = sample.source_rows[fit.labels == c]
    print(f"cluster {c}: {days.size} days, center {fit.centers[c].round(2)}")
