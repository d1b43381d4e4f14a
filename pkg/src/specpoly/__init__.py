"""Mixed Dirichlet-Neumann Laplacian eigenvalues on triangles and trapezoids."""
from .closedform import M, counting_x, cylinder_mu2, polya_lower_bound, rectangle_spectrum, triangle_bounds
from .eigensolve import EigensolverError, Spectrum, smallest_eigs, solve_mixed, solve_neumann
from .fem import AssembledSystem, assemble, rayleigh_quotient
from .geometry import (
    BoundaryCondition,
    GeometryError,
    ShapeSpec,
    TrapezoidParams,
    TriangleParams,
    classify_sides,
    fold_along_longest,
    fold_right_trapezoid,
    reflect_right_triangle_to_rhombus,
    tile_trapezoid_to_rectangle,
    triangle_from_params,
)
from .mesh import Mesh, dirichlet_nodes, refine, triangulate

__version__ = "0.1.0"
