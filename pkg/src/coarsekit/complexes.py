"""Polyhedral complexes over arrangements and their validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .arrangement import (AdjacencyGraph, Arrangement, adjacency_graph, canonical_edge,
                          conforms, edge_key, sign_key)
from .exactgeom import DimensionMismatch, Polyhedron, intersect, is_face, polyhedron_dim

INTERSECTION_NOT_FACE_OF_FIRST = "intersection-not-face-of-first"
INTERSECTION_NOT_FACE_OF_SECOND = "intersection-not-face-of-second"
FACE_CLOSURE_BROKEN = "face-closure-broken"
CONNECTIVITY_FAILED = "connectivity-failed"


class NonConvexSupport(ValueError):
    pass


class NotACoarsening(ValueError):
    pass


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)  # (i, j, reason[, detail])

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = []
        for v in self.violations:
            item = {"cells": [v[0], v[1]], "reason": v[2]}
            if len(v) > 3:
                item["detail"] = v[3]
            out.append(item)
        return {"ok": self.ok, "violations": out}


# -- region sets ----------------------------------------------------------------

def hull_signs(regions: Iterable[str]) -> str:
    """Partial sign pattern fixing every hyperplane on which all regions agree.

    Its closed cell is the smallest intersection of arrangement halfspaces
    containing the regions.
    """
    regs = list(regions)
    return "".join(col[0] if len(set(col)) == 1 else "*" for col in zip(*regs))


def _matches(pattern: str, sv: str) -> bool:
    return all(p == "*" or p == c for p, c in zip(pattern, sv))


def hull_regions(A: Arrangement, regions: Iterable[str]) -> frozenset:
    pattern = hull_signs(regions)
    return frozenset(r for r in A.regions if _matches(pattern, r))


def is_convex_region_set(A: Arrangement, regions: Iterable[str]) -> bool:
    """Convexity of a union of regions: it must equal its arrangement hull."""
    regs = frozenset(regions)
    return bool(regs) and hull_regions(A, regs) == regs


def cell_polyhedron(A: Arrangement, regions: Iterable[str]) -> Polyhedron:
    """Halfspace description of a convex union of regions."""
    regs = frozenset(regions)
    if not is_convex_region_set(A, regs):
        raise NonConvexSupport(f"union of {sorted(regs, key=sign_key)} is not convex")
    return A.polyhedron(hull_signs(regs))


def _components(vertices, edges) -> list[frozenset]:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    groups = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(g) for g in groups.values()]


def components(vertices, edges) -> list[frozenset]:
    """Connected components, each ordered by its canonically smallest member."""
    comps = _components(vertices, edges)
    return sorted(comps, key=lambda c: min(sign_key(v) for v in c))


def boundary_facets(A: Arrangement, regions: Iterable[str]):
    """(facet sign vector, inside region) for facets of the union on its boundary."""
    regs = frozenset(regions)
    out = []
    for r in sorted(regs, key=sign_key):
        for i in range(A.size):
            other = r[:i] + ("-" if r[i] == "+" else "+") + r[i + 1:]
            facet = r[:i] + "0" + r[i + 1:]
            if facet in A.face_set and other not in regs:
                out.append((facet, r))
    return out


def is_convex_support(A: Arrangement, regions: Iterable[str]) -> bool:
    """Convexity of the union of the given regions, decided facet by facet.

    The union is convex iff it is connected through interior facets and, for
    each boundary facet, every region lies on the inner side of its hyperplane.
    """
    regs = frozenset(regions)
    if not regs:
        return False
    g = adjacency_graph(A, regs)
    if len(components(g.vertices, g.edges)) != 1:
        return False
    for facet, inside in boundary_facets(A, regs):
        j = facet.index("0")
        if any(r[j] != inside[j] for r in regs):
            return False
    return True


# -- complexes ------------------------------------------------------------------

@dataclass(frozen=True)
class ArrangementComplex:
    """A full-dimensional subcomplex of C(A): chosen regions and all their faces."""

    arrangement: Arrangement
    regions: tuple

    def __post_init__(self):
        regs = frozenset(self.regions)
        bad = regs - self.arrangement.region_set
        if bad:
            raise ValueError(f"not regions: {sorted(bad)}")
        if not regs:
            raise ValueError("a complex needs at least one region")
        object.__setattr__(self, "regions", tuple(sorted(regs, key=sign_key)))

    @classmethod
    def full(cls, A: Arrangement) -> "ArrangementComplex":
        return cls(A, A.regions)

    @cached_property
    def region_set(self) -> frozenset:
        return frozenset(self.regions)

    @cached_property
    def faces(self) -> tuple:
        return tuple(f for f in self.arrangement.faces
                     if any(conforms(f, r) for r in self.regions))

    @cached_property
    def graph(self) -> AdjacencyGraph:
        return adjacency_graph(self.arrangement, self.regions)

    @cached_property
    def is_convex(self) -> bool:
        return is_convex_support(self.arrangement, self.regions)


def check_face_closure(A: Arrangement, faces: Iterable[str]) -> ValidationReport:
    """Every face (in C(A)) of a listed face must be listed too."""
    fs = set(faces)
    report = ValidationReport()
    for idx, f in enumerate(sorted(fs, key=sign_key)):
        for g in A.faces:
            if conforms(g, f) and g not in fs:
                report.violations.append((idx, idx, FACE_CLOSURE_BROKEN))
                break
    return report


@dataclass(frozen=True)
class GeneralComplex:
    """Maximal cells given as unions of regions of an arrangement.

    Cells built from polyhedra use the arrangement of hyperplanes spanned by
    their facets, so each cell is exactly a union of its regions.
    """

    arrangement: Arrangement
    cells: tuple  # frozensets of region sign vectors

    def __post_init__(self):
        cells = tuple(frozenset(c) for c in self.cells)
        for c in cells:
            bad = c - self.arrangement.region_set
            if bad:
                raise ValueError(f"not regions: {sorted(bad)}")
            if not c:
                raise ValueError("empty cell")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_regions(cls, A: Arrangement, cells: Iterable[Iterable[str]]) -> "GeneralComplex":
        return cls(A, tuple(frozenset(c) for c in cells))

    @classmethod
    def from_polyhedra(cls, polys: Sequence[Polyhedron]) -> "GeneralComplex":
        A = induced_arrangement(polys)
        return cls(A, tuple(regions_in(A, P) for P in polys))

    @cached_property
    def support(self) -> frozenset:
        return frozenset().union(*self.cells)

    @cached_property
    def polyhedra(self) -> tuple:
        return tuple(cell_polyhedron(self.arrangement, c) for c in self.cells)

    def labels(self) -> list[str]:
        """A vertex name per cell: its region if a singleton, else ``c<index>``."""
        return [min(c) if len(c) == 1 else f"c{i}" for i, c in enumerate(self.cells)]


def facet_hyperplanes(P: Polyhedron):
    """Hyperplanes supporting codimension-1 faces of a polyhedron (full or not)."""
    n = P.ambient_dim
    d = polyhedron_dim(P)
    out = []
    for h in P.constraints:
        cut = Polyhedron(n, P.constraints + (h.negated(),))
        if polyhedron_dim(cut) == d - 1:
            out.append((h.normal, h.offset))
    return out


def induced_arrangement(polys: Sequence[Polyhedron]) -> Arrangement:
    """Arrangement of the hyperplanes containing codimension-1 faces of the cells."""
    n = polys[0].ambient_dim
    seen = {}
    for P in polys:
        if P.ambient_dim != n:
            raise DimensionMismatch("cells of different ambient dimension")
        if polyhedron_dim(P) != n:
            raise ValueError("cells must be full-dimensional")
        for a, b in facet_hyperplanes(P):
            lead = next(c for c in a if c != 0)
            key = (tuple(c / abs(lead) for c in a), b / abs(lead))
            neg = (tuple(-c for c in key[0]), -key[1])
            if key not in seen and neg not in seen:
                seen[key] = True
    hs = tuple(seen) if seen else ()
    if not hs:
        # a single cell equal to R^n: any hyperplane works as a frame
        hs = ((tuple(int(i == 0) for i in range(n)), 0),)
    return Arrangement(n, hs)


def regions_in(A: Arrangement, P: Polyhedron) -> frozenset:
    return frozenset(r for r in A.regions if P.contains_point(A.interior_point(r)))


def _region_point_cache(A: Arrangement):
    return {r: A.interior_point(r) for r in A.regions}


# -- validation -------------------------------------------------------------------

def _check_dims(cells):
    if not cells:
        raise ValueError("no cells")
    n = cells[0].ambient_dim
    if any(c.ambient_dim != n for c in cells):
        raise DimensionMismatch("cells of different ambient dimension")


def _pair_violations(M: Polyhedron, N: Polyhedron, i, j):
    inter = intersect(M, N)
    out = []
    if inter.is_empty():
        return out
    if not is_face(inter, M):
        out.append((i, j, INTERSECTION_NOT_FACE_OF_FIRST))
    if not is_face(inter, N):
        out.append((i, j, INTERSECTION_NOT_FACE_OF_SECOND))
    return out


def validate_complex(cells: Sequence[Polyhedron]) -> ValidationReport:
    """Pairwise test: every intersection of two cells is empty or a face of both."""
    cells = list(cells)
    _check_dims(cells)
    report = ValidationReport()
    for i, j in combinations(range(len(cells)), 2):
        report.violations += _pair_violations(cells[i], cells[j], i, j)
    return report


def support_is_convex(cells: Sequence[Polyhedron]) -> bool:
    """Convexity of the union of full-dimensional polyhedra."""
    A = induced_arrangement(cells)
    regs = frozenset().union(*(regions_in(A, P) for P in cells))
    return is_convex_support(A, regs)


def validate_shortcut_convex(cells: Sequence[Polyhedron]) -> ValidationReport:
    """Complex test that only inspects pairs meeting in dimension >= d-1.

    Sound for equal-dimensional cells with convex support; the support is
    checked first.
    """
    cells = list(cells)
    _check_dims(cells)
    dims = [polyhedron_dim(c) for c in cells]
    d = dims[0]
    if any(x != d for x in dims):
        raise ValueError(f"cells of unequal dimension: {dims}")
    if d != cells[0].ambient_dim:
        raise ValueError("support must be full-dimensional")
    if not support_is_convex(cells):
        raise NonConvexSupport("support of the cells is not convex")
    report = ValidationReport()
    for i, j in combinations(range(len(cells)), 2):
        inter = intersect(cells[i], cells[j])
        if polyhedron_dim(inter) >= d - 1:
            report.violations += _pair_violations(cells[i], cells[j], i, j)
    return report


# -- coarsening relations -------------------------------------------------------------

def common_refinement(C1: GeneralComplex, C0: GeneralComplex):
    """Both complexes re-expressed over the union of their arrangements."""
    if C1.arrangement == C0.arrangement:
        return C1.arrangement, C1.cells, C0.cells
    n = C1.arrangement.ambient_dim
    hs = {}
    for a, b in C1.arrangement.hyperplanes + C0.arrangement.hyperplanes:
        lead = next(c for c in a if c != 0)
        key = (tuple(c / lead for c in a), b / lead)
        hs.setdefault(key, (a, b))
    A = Arrangement(n, tuple(hs.values()))
    pts = _region_point_cache(A)

    def lift(C):
        lifted = []
        for cell in C.cells:
            P = [C.arrangement.polyhedron(r) for r in cell]
            lifted.append(frozenset(r for r, x in pts.items() if any(Q.contains_point(x) for Q in P)))
        return tuple(lifted)

    return A, lift(C1), lift(C0)


def coarsens(C1: GeneralComplex, C0: GeneralComplex) -> bool:
    """Equal supports, and every cell of C1 is a union of cells of C0."""
    _, cells1, cells0 = common_refinement(C1, C0)
    if frozenset().union(*cells1) != frozenset().union(*cells0):
        return False
    for big in cells1:
        covered = set()
        for small in cells0:
            if small <= big:
                covered |= small
            elif small & big:
                return False
        if covered != big:
            return False
    return True


def cell_graph(C: GeneralComplex) -> AdjacencyGraph:
    """Adjacency graph on the cells: pairs meeting in codimension 1."""
    labels = C.labels()
    A = C.arrangement
    edges = []
    for i, j in combinations(range(len(C.cells)), 2):
        hit = None
        for r in C.cells[i]:
            for s in C.cells[j]:
                diff = [t for t, (x, y) in enumerate(zip(r, s)) if x != y]
                if len(diff) == 1 and (r[:diff[0]] + "0" + r[diff[0] + 1:]) in A.face_set:
                    hit = diff[0]
                    break
            if hit is not None:
                break
        if hit is not None:
            edges.append(((i, j), hit))
    signed = all(set(x) <= set("+-0") for x in labels)
    if signed:
        pairs = [(canonical_edge(labels[i], labels[j]), h) for (i, j), h in edges]
        pairs.sort(key=lambda e: edge_key(e[0]))
    else:
        # synthetic labels: keep cell-index order
        pairs = [((labels[i], labels[j]), h) for (i, j), h in sorted(edges)]
    return AdjacencyGraph(tuple(labels), tuple(e for e, _ in pairs), tuple(l for _, l in pairs))


def edge_set_of(C1: GeneralComplex, C0: GeneralComplex) -> frozenset:
    """Edges of C0's adjacency graph whose two cells lie in one cell of C1."""
    if not coarsens(C1, C0):
        raise NotACoarsening("first complex does not coarsen the second")
    A, cells1, cells0 = common_refinement(C1, C0)
    labels = C0.labels()
    owner = {}
    for i, small in enumerate(cells0):
        owner[labels[i]] = next(k for k, big in enumerate(cells1) if small <= big)
    g = cell_graph(C0)
    return frozenset(e for e in g.edges if owner[e[0]] == owner[e[1]])
