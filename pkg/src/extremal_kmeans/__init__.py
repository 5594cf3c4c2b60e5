"""Prototypes of extremal dependence via spherical k-means on extreme observations."""

from .core import (
    AngularSample,
    ClusterModel,
    DiscreteSpectralMeasure,
    MarginSumViolation,
    MaxLinearModel,
    NegativeEntry,
    ObservationMatrix,
    UnitVector,
    ValidationError,
    ZeroFactor,
    validate_model,
)
from .maxlinear import random_model, sample_frechet, simulate, spectral_measure
from .metrics import ds_distance, wasserstein1
from .rng import derive_rng, derive_seed
from .skmeans import (
    KMeansConfig,
    cosine_dissimilarity,
    elbow_scan,
    objective,
    renormalize_center,
    spherical_kmeans,
)
from .transform import fit_pipeline, rank_transform, select_extremes

__version__ = "0.1.0"
