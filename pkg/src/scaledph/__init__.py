"""Density-scaled Vietoris-Rips persistent homology for point clouds.

The central pipeline estimates a sampling density, rescales a
k-nearest-neighbour graph by it, and computes Vietoris-Rips persistence
of the resulting shortest-path metric; classical Rips, density-weighted
Rips, nearest-neighbour-rank and Euclidean Cech filtrations are
provided alongside for comparison, together with diagram distances and
seeded synthetic datasets.
"""

from .datasets import (
    PointCloud,
    Trajectory,
    delay_embedding,
    integrate_lorenz,
    lorenz_delay_cloud,
    make_rng,
    sample_cassini,
    sample_noisy_circle,
    sample_two_circles,
    sample_two_squares,
)
from .density import (
    KERNEL_FAMILIES,
    DensityEstimate,
    Kernel,
    estimate_density,
    estimate_density_all,
    kernel_eval,
    scotts_bandwidth,
    sphere_surface_area,
    unit_ball_volume,
)
from .diagram_metrics import bottleneck, wasserstein_inf_pointcloud
from .io import (
    read_diagram,
    read_point_cloud,
    write_diagram,
    write_point_cloud,
)
from .filtrations import (
    FilteredComplex,
    FiltrationSpec,
    build_filtration,
    cech_filtration_euclidean,
    dvr_filtration,
    knn_filtration,
    validate_filtration,
    vr_filtration,
    weighted_vr_filtration,
)
from .persistence import (
    BoundaryMatrix,
    PersistenceDiagram,
    Reduction,
    SimplexOrdering,
    betti_at,
    boundary_matrix,
    extract_diagram,
    order_simplices,
    persistence_diagram,
    reduce,
)
from .plotting import diagram_svg, write_diagram_svg
from .scaled_metric import (
    ALPHA_FLOOR,
    NoPlateauError,
    ScaledGraph,
    alpha,
    build_knn_graph,
    component_counts,
    estimated_distances,
    select_k,
    threshold_radius,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_FLOOR",
    "KERNEL_FAMILIES",
    "BoundaryMatrix",
    "DensityEstimate",
    "FilteredComplex",
    "FiltrationSpec",
    "Kernel",
    "NoPlateauError",
    "PersistenceDiagram",
    "PointCloud",
    "Reduction",
    "ScaledGraph",
    "SimplexOrdering",
    "Trajectory",
    "alpha",
    "betti_at",
    "bottleneck",
    "boundary_matrix",
    "build_filtration",
    "build_knn_graph",
    "cech_filtration_euclidean",
    "component_counts",
    "delay_embedding",
    "diagram_svg",
    "dvr_filtration",
    "estimate_density",
    "estimate_density_all",
    "estimated_distances",
    "extract_diagram",
    "integrate_lorenz",
    "kernel_eval",
    "knn_filtration",
    "lorenz_delay_cloud",
    "make_rng",
    "order_simplices",
    "persistence_diagram",
    "read_diagram",
    "read_point_cloud",
    "reduce",
    "sample_cassini",
    "sample_noisy_circle",
    "sample_two_circles",
    "sample_two_squares",
    "scotts_bandwidth",
    "select_k",
    "sphere_surface_area",
    "threshold_radius",
    "unit_ball_volume",
    "validate_filtration",
    "vr_filtration",
    "wasserstein_inf_pointcloud",
    "weighted_vr_filtration",
    "write_diagram",
    "write_diagram_svg",
    "write_point_cloud",
]
