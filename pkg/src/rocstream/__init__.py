"""Exact streaming AUC and H-measure under insertions and deletions."""

from .auc import AucMaintainer
from .core import (
    CountPair,
    DataPoint,
    DegenerateHull,
    DomainError,
    InsufficientWeight,
    Label,
    NoAccumulatorRegistered,
    NonConvexInput,
    NonFiniteScore,
    RocStreamError,
    ScoreNotFound,
    ZeroDifference,
)
from .evaluate import MetricReport, RunConfig, SortedBaseline, run
from .hmeasure import (
    BetaParams,
    HullPolyline,
    NodeH,
    Priors,
    approx_h,
    exact_h,
    h_from_polyline,
    incomplete_beta,
    l_max,
    node_h,
    subset,
)
from .hull import RocHullIndex
from .score_index import ScoreIndex

__all__ = [
    "AucMaintainer",
    "BetaParams",
    "CountPair",
    "DataPoint",
    "DegenerateHull",
    "DomainError",
    "HullPolyline",
    "InsufficientWeight",
    "Label",
    "MetricReport",
    "NoAccumulatorRegistered",
    "NodeH",
    "NonConvexInput",
    "NonFiniteScore",
    "Priors",
    "RocHullIndex",
    "RocStreamError",
    "RunConfig",
    "ScoreIndex",
    "ScoreNotFound",
    "SortedBaseline",
    "ZeroDifference",
    "approx_h",
    "exact_h",
    "h_from_polyline",
    "incomplete_beta",
    "l_max",
    "node_h",
    "run",
    "subset",
]
