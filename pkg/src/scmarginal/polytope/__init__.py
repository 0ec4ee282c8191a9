"""Exact polyhedral computation over rational H-representations."""
from .hrep import ConstraintMatrix, HPolytope, ReducedSystem, identity, reduce_equalities
from .lp import LpResult, Sense, Status, solve_lp
from .planar import Polygon2, contains, convex_hull, directional_extremes, polygon_area, project_hull
from .vertices import Vertex, enumerate_vertices

__all__ = [
    "ConstraintMatrix",
    "HPolytope",
    "LpResult",
    "Polygon2",
    "ReducedSystem",
    "Sense",
    "Status",
    "Vertex",
    "contains",
    "convex_hull",
    "directional_extremes",
    "enumerate_vertices",
    "identity",
    "polygon_area",
    "project_hull",
    "reduce_equalities",
    "solve_lp",
]
