"""Straight-line embeddings of triangulated disks with fixed boundaries.

Averaging-based placement for convex boundary polygons, an interpolated
energy construction with eps-halving for strictly star-shaped boundaries,
embedding validity certification, spectral diagnostics of the interior
block, and projective transport of embeddings between non-convex
quadrilaterals sharing a hull triangle.
"""

from .embedding import Embedding
from .errors import *  # noqa: F401,F403
from .formats import (
    pair_with_boundary,
    parse_embedding,
    parse_problem,
    read_off,
    render_svg,
    write_embedding,
    write_problem,
)
from .homotopy import (
    HomotopyPath,
    ProjectiveTransform,
    QuadInstance,
    homotopy_path,
    make_quad_instance,
    projective_from_quads,
    section,
    transport_embedding,
)
from .mesh import (
    Triangulation,
    build_triangulation,
    find_dividing_edges,
    flip_faces,
    vertex_neighbors,
)
from .polygon import (
    BoundaryPolygon,
    EyeCoefficients,
    KernelPolygon,
    compute_kernel,
    eye_coefficients,
    is_convex,
    is_strictly_star_shaped,
    reflex_vertices,
    select_eye,
)
from .star import (
    BoundaryCouplingMatrix,
    EpsilonSystem,
    SpectralReport,
    assemble_epsilon_system,
    build_coupling,
    energy_value,
    limit_point,
    solve_at_epsilon,
    spectral_report,
    star_embed,
)
from .tutte import (
    LinearSystem,
    WeightScheme,
    assemble_tutte_system,
    normalize_weights,
    random_weights,
    residual_norm,
    solve,
    tutte_embed,
    uniform_weights,
)
from .validation import (
    ValidityReport,
    check_crossings,
    check_orientations,
    check_reflex_hull,
    validate,
)

__version__ = "0.1.0"
