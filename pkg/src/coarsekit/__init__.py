"""Exact coarsenings of polyhedral complexes, gallery paths and oriented matroids."""
from .arrangement import Arrangement, adjacency_graph, perp_fan, polygon_at, polygons
from .coarsening import (EdgeSet, build_coarsening, enumerate_coarsenings, has_polygon_property,
                         has_weak_polygon_property, has_zonotopal_polygon_property, tietze_check)
from .complexes import (ArrangementComplex, GeneralComplex, is_convex_support, validate_complex,
                        validate_shortcut_convex)
from .exactgeom import Halfspace, Polyhedron, parse_rational
from .om import OMLattice, OMPolyhedron, om_from_arrangement
from .paths import GalleryPath, connect_reduced, rewrite_to_reduced

__all__ = [
    "Arrangement", "adjacency_graph", "perp_fan", "polygon_at", "polygons",
    "EdgeSet", "build_coarsening", "enumerate_coarsenings", "has_polygon_property",
    "has_weak_polygon_property", "has_zonotopal_polygon_property", "tietze_check",
    "ArrangementComplex", "GeneralComplex", "is_convex_support", "validate_complex",
    "validate_shortcut_convex", "Halfspace", "Polyhedron", "parse_rational",
    "OMLattice", "OMPolyhedron", "om_from_arrangement",
    "GalleryPath", "connect_reduced", "rewrite_to_reduced",
]
__version__ = "0.1.0"
