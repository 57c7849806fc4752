"""Color-count graphs over all square sub-regions of a grayscale image:
0-th persistence, depth, information concentration, and salient-region
detection."""

from .image import (
    Image,
    ImageFormatError,
    Interval,
    RectRegion,
    RegionBoundsError,
    SquareRegion,
    load_image,
    region_color_set,
    rotate90,
    write_pgm,
)
from .counts import (
    ColorMaskEngine,
    Concentration,
    SquareCountTable,
    all_square_counts,
    distinct_colors_oracle,
    information_concentration,
    rect_count,
)
from .graph import (
    CsrGraph,
    VertexCoord,
    build_graph,
    edge_count,
    edge_index,
    pseudo_metric,
    read_csr_csv,
    threshold,
    vertex_count,
    vertex_index,
    vertex_unindex,
    write_csr_csv,
)
from .homology import (
    Barcode,
    ComponentLabeling,
    UnionFind,
    connected_components,
    h0_barcode,
    maximal_simplices_eps0,
    vr_edge_set,
    vr_simplex_membership,
    zero_component_members,
)
from .depth import (
    DepthReport,
    TooManyColorsError,
    depth_bruteforce,
    depth_fast,
    depth_report,
    depth_via_complex,
    phi,
)
from .detect import (
    DetectionResult,
    detect_component,
    detect_rects_threshold,
    detect_squares_threshold,
    gray_fraction,
    render_overlay,
    regions_report,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Image",
    "ImageFormatError",
    "Interval",
    "RectRegion",
    "RegionBoundsError",
    "SquareRegion",
    "load_image",
    "region_color_set",
    "rotate90",
    "write_pgm",
    "ColorMaskEngine",
    "Concentration",
    "SquareCountTable",
    "all_square_counts",
    "distinct_colors_oracle",
    "information_concentration",
    "rect_count",
    "CsrGraph",
    "VertexCoord",
    "build_graph",
    "edge_count",
    "edge_index",
    "pseudo_metric",
    "read_csr_csv",
    "threshold",
    "vertex_count",
    "vertex_index",
    "vertex_unindex",
    "write_csr_csv",
    "Barcode",
    "ComponentLabeling",
    "UnionFind",
    "connected_components",
    "h0_barcode",
    "maximal_simplices_eps0",
    "vr_edge_set",
    "vr_simplex_membership",
    "zero_component_members",
    "DepthReport",
    "TooManyColorsError",
    "depth_bruteforce",
    "depth_fast",
    "depth_report",
    "depth_via_complex",
    "phi",
    "DetectionResult",
    "detect_component",
    "detect_rects_threshold",
    "detect_squares_threshold",
    "gray_fraction",
    "render_overlay",
    "regions_report",
    "sweep",
]
