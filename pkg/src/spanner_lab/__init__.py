"""Spanners for general metrics and 2D point sets, hierarchical nets, and
exact lower-bound certificates built on a 2-HST instance family."""

from .hst_instance import (
    HstMetric,
    HstTree,
    LineOfCopiesMetric,
    build_hst,
    build_line_of_copies,
    doubling_cover_witness,
    edge_weight_census,
    hamiltonian_path_weight,
    hst_distance,
    verify_cover,
)
from .metric_core import (
    MetricSpace,
    PointSet2D,
    SpannerGraph,
    TableMetric,
    UniformMetric,
    aspect_ratio,
    check_edge_weights,
    doubling_refute,
    mst,
    packing_check,
    verify_metric_axioms,
    verify_ultrametric,
)
from .net_hierarchy import NetHierarchy, build_nets, verify_net_property
from .randgen import XorShift64Star, random_points2d
from .spanners import (
    ConePartition2D,
    cone_selections,
    greedy_spanner,
    net_tree_spanner,
    theta_graph,
    yao_graph,
)
from .verifier import (
    CertReport,
    certify_spanner,
    forced_edge_count,
    forced_edge_weight,
    forced_edges,
    iter_forced_edges,
    lightness,
    min_detour_matrix,
    size_lower_bound,
    stretch,
    stretch_within,
    weight_lower_bound,
)

__all__ = [
    "CertReport",
    "ConePartition2D",
    "HstMetric",
    "HstTree",
    "LineOfCopiesMetric",
    "MetricSpace",
    "NetHierarchy",
    "PointSet2D",
    "SpannerGraph",
    "TableMetric",
    "UniformMetric",
    "XorShift64Star",
    "aspect_ratio",
    "build_hst",
    "build_line_of_copies",
    "build_nets",
    "certify_spanner",
    "check_edge_weights",
    "cone_selections",
    "doubling_cover_witness",
    "doubling_refute",
    "edge_weight_census",
    "forced_edge_count",
    "forced_edge_weight",
    "forced_edges",
    "greedy_spanner",
    "hamiltonian_path_weight",
    "hst_distance",
    "iter_forced_edges",
    "lightness",
    "min_detour_matrix",
    "mst",
    "net_tree_spanner",
    "packing_check",
    "random_points2d",
    "size_lower_bound",
    "stretch",
    "stretch_within",
    "theta_graph",
    "verify_cover",
    "verify_metric_axioms",
    "verify_net_property",
    "verify_ultrametric",
    "weight_lower_bound",
    "yao_graph",
]

__version__ = "0.1.0"
