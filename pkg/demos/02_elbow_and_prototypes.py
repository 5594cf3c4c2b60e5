"""
Choosing k and reading the prototypes
=====================================

Five pollutant-like series with planted groups of joint extremes. The elbow
curve suggests a number of clusters; rescaling each center so its largest
component is one shows which variables are extreme together.
"""

import numpy as np

from extremal_kmeans.core import MaxLinearModel
from extremal_kmeans.maxlinear import simulate
from extremal_kmeans.skmeans import KMeansConfig, elbow_scan, renormalize_center, spherical_kmeans
from extremal_kmeans.transform import fit_pipeline

names = ["O3", "NO2", "NO", "SO2", "PM10"]

# Columns are factors: O3 alone, SO2 alone, and NO/NO2/PM10 jointly.
a = np.array([
    [1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, 1.0],
    [0.0, 1.0, 0.0],
    [0.3, 0.0, 0.7],
])
obs = simulate(MaxLinearModel(a), 578, np.random.default_rng(0))

# Keep the 10% of rank-transformed rows with the largest Euclidean norm.
sample = fit_pipeline(obs, fraction=0.1)
print(f"{sample.m} extremes above norm {sample.threshold:.2f}")

print("k  objective")
for k, w in elbow_scan(sample, 1, 6, KMeansConfig(1, restarts=50)):
    print(f"{k}  {w:.4f}")

fit = spherical_kmeans(sample, KMeansConfig(3, restarts=100))
print("\nrescaled centers:")
print("       " + "  ".join(f"{n:>5}" for n in names) + "  weight")
for i, (c, w) in enumerate(zip(fit.centers, fit.weights)):
    print(f"c{i + 1:<5} " + "  ".join(f"{v:5.2f}" for v in renormalize_center(c)) + f"  {w:.2f}")
