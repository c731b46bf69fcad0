"""Interleaving distances from monoid actions and weighted 2-categories.

Persistence modules under monoid actions, group-action and LPC distances,
Gromov-Hausdorff variants, and a sublevel-set stability pipeline, each with
brute-force oracles for the metric axioms.
"""
from ._kernels import BACKEND
from .errors import InterleavingsError
from .interleave import (DistanceResult, distance_bisect, exists_interleaving, interval_distance_closed_form,
                         omega_interleaving_distance, rectangle_distance)
from .match import bottleneck
from .metricgh import FiniteMetricSpace, altered_gh, gh, modified_gh
from .pmod import Barcode, FiniteModule, IntervalModule, RectangleModule
from .twocat import (Finite2Category, action_groupoid_interleaving, build_action_groupoid_2cat,
                     lpc_interleaving, lpc_to_2cat, two_cat_interleaving)
from .weights import AuditReport, Lawvere2Weight, audit_pseudometric

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "InterleavingsError", "DistanceResult", "distance_bisect", "exists_interleaving",
    "interval_distance_closed_form", "omega_interleaving_distance", "rectangle_distance", "bottleneck",
    "FiniteMetricSpace", "gh", "altered_gh", "modified_gh", "Barcode", "FiniteModule",
    "IntervalModule", "RectangleModule", "Finite2Category", "two_cat_interleaving",
    "action_groupoid_interleaving", "build_action_groupoid_2cat", "lpc_interleaving", "lpc_to_2cat",
    "AuditReport", "Lawvere2Weight", "audit_pseudometric", "__version__",
]
