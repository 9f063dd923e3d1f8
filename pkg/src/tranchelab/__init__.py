"""Sampled continua of tranched graphs.

Point-cloud models of compact subsets of the truncated Hilbert cube
with the weighted-sum metric: oscillatory curve closures, relation
products of the tent family, an iterated-lift tower of arbitrary
tranche depth, a counterexample gallery, monotone-decomposition
analysis, an exact symbolic quasi-graph calculus, and shift dynamics
with entropy bounds.
"""

from . import (
    curves,
    decomposition,
    dynamics,
    gallery,
    lifting,
    mahavier,
    symbolic,
    verify,
)
from .hilbert import (
    Cloud,
    ConstructionError,
    DomainError,
    ResolutionError,
    cloud_from_points,
    dist_to_cloud,
    hausdorff,
    prepend_cloud,
    shift_cloud,
    weights,
)

__all__ = [
    "Cloud",
    "ConstructionError",
    "DomainError",
    "ResolutionError",
    "cloud_from_points",
    "dist_to_cloud",
    "hausdorff",
    "prepend_cloud",
    "shift_cloud",
    "weights",
    "curves",
    "mahavier",
    "lifting",
    "gallery",
    "decomposition",
    "symbolic",
    "dynamics",
    "verify",
]

__version__ = "0.1.0"
