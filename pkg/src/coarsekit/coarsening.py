"""Edge sets of coarsenings: polygon conditions, construction, enumeration, Tietze test."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

from .arrangement import (AdjacencyGraph, PlanarFan, Polygon, adjacency_graph,
                          canonical_edge, conforms, det, edge_key, polygons, sign_key)
from .complexes import (ArrangementComplex, GeneralComplex, NonConvexSupport, components,
                        induced_arrangement, regions_in)
from .exactgeom import Polyhedron, format_rational, polyhedron_dim, solve

OK = "ok"
CLOSURE_VIOLATED = "closure-violated"
NOT_CONVEX = "merged-cone-not-convex"


class CoarseningError(ValueError):
    def __init__(self, verdict: "PolygonVerdict"):
        super().__init__(f"polygon property fails at {verdict.polygon.center_face}: {verdict.reason}")
        self.verdict = verdict


@dataclass(frozen=True)
class EdgeSet:
    base: AdjacencyGraph
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(canonical_edge(*e) for e in self.edges)
        extra = edges - self.base.edge_set
        if extra:
            raise ValueError(f"not edges of the adjacency graph: {sorted(extra, key=edge_key)}")
        object.__setattr__(self, "edges", edges)

    def sorted_edges(self) -> list:
        return sorted(self.edges, key=edge_key)

    def to_json(self):
        return {"edges": [list(e) for e in self.sorted_edges()]}


@dataclass(frozen=True)
class PolygonVerdict:
    polygon: Polygon
    ok: bool
    reason: str

    def to_json(self):
        return {"polygon": self.polygon.center_face, "ok": self.ok, "reason": self.reason,
                "cycle": list(self.polygon.cycle)}


class PolygonCheck(NamedTuple):
    ok: bool
    verdicts: list


def fan_coarsening_reason(fan: PlanarFan, removed: Sequence[bool]) -> str:
    """Whether deleting the flagged rays of a complete planar fan leaves a fan.

    ``removed[j]`` refers to ``fan.rays[j]``.  Each merged cone must be pointed
    (its extreme rays strictly counterclockwise within a half-turn); the only
    non-pointed outcomes allowed are the whole plane and two opposite halfplanes.
    """
    rays = fan.rays
    kept = [j for j, gone in enumerate(removed) if not gone]
    if not kept:
        return OK
    if len(kept) == 1:
        return NOT_CONVEX
    if len(kept) == 2:
        u, v = rays[kept[0]], rays[kept[1]]
        if det(u, v) == 0 and (u[0] * v[0] + u[1] * v[1]) < 0:
            return OK
    worst = OK
    for a, b in zip(kept, kept[1:] + kept[:1]):
        u, v = rays[a], rays[b]
        d = det(u, v)
        if d > 0:
            continue
        if d == 0 and (u[0] * v[0] + u[1] * v[1]) < 0:
            worst = CLOSURE_VIOLATED if worst == OK else worst
        else:
            return NOT_CONVEX
    return worst


def _polygon_flags(poly: Polygon, edges: frozenset) -> list[bool]:
    """Membership of each cycle edge in the edge set, in cycle order."""
    return [e in edges for e in poly.cycle_edges]


def polygon_verdict(poly: Polygon, edges: frozenset) -> PolygonVerdict:
    flags = _polygon_flags(poly, edges)
    n = len(flags)
    # ray j separates cone j-1 from cone j, i.e. cycle edge j-1
    removed = [flags[(j - 1) % n] for j in range(n)]
    reason = fan_coarsening_reason(poly.fan, removed)
    return PolygonVerdict(poly, reason == OK, reason)


def _complex_polygons(C: ArrangementComplex, E: Optional[EdgeSet] = None):
    if not C.is_convex:
        raise NonConvexSupport("complex support is not convex")
    if E is not None and E.base.edge_set != C.graph.edge_set:
        extra = E.edges - C.graph.edge_set
        if extra:
            raise ValueError(f"edges outside the adjacency graph: {sorted(extra, key=edge_key)}")
    return polygons(C.arrangement, C.regions)


def has_polygon_property(E: EdgeSet, C: ArrangementComplex) -> PolygonCheck:
    verdicts = [polygon_verdict(p, E.edges) for p in _complex_polygons(C, E)]
    return PolygonCheck(all(v.ok for v in verdicts), verdicts)


def _windows(flags, size):
    n = len(flags)
    for j in range(n):
        yield j, all(flags[(j + t) % n] for t in range(size))


def has_weak_polygon_property(E: EdgeSet, C: ArrangementComplex) -> bool:
    """k consecutive edges of a 2k-gon in E force the whole polygon into E."""
    for poly in _complex_polygons(C, E):
        flags = _polygon_flags(poly, E.edges)
        if any(full for _, full in _windows(flags, poly.k)) and not all(flags):
            return False
    return True


def has_zonotopal_polygon_property(E: EdgeSet, C: ArrangementComplex) -> bool:
    """k-1 consecutive edges of a 2k-gon in E force the opposite k-1 edges."""
    for poly in _complex_polygons(C, E):
        if not _zonotopal_ok(poly, E.edges):
            return False
    return True


def _zonotopal_ok(poly: Polygon, edges) -> bool:
    flags = _polygon_flags(poly, edges)
    k, n = poly.k, len(flags)
    for j, full in _windows(flags, k - 1):
        if full and not all(flags[(j + k + t) % n] for t in range(k - 1)):
            return False
    return True


def build_coarsening(E: EdgeSet, C: ArrangementComplex) -> GeneralComplex:
    """The complex whose cells are the unions of regions over components of E."""
    check = has_polygon_property(E, C)
    if not check.ok:
        raise CoarseningError(next(v for v in check.verdicts if not v.ok))
    return component_complex(E, C)


def component_complex(E: EdgeSet, C: ArrangementComplex) -> GeneralComplex:
    """Cells from connected components of E, with no polygon check."""
    return GeneralComplex.from_regions(C.arrangement, components(C.regions, E.edges))


# -- enumeration ----------------------------------------------------------------

def polygon_clauses(graph: AdjacencyGraph, polys: Sequence[Polygon]):
    """Horn clauses equivalent to the polygon property.

    Each clause ``(premises, conclusion)`` over canonical edge indices says:
    if all premises are in E then the conclusion is in E.
    """
    index = {e: i for i, e in enumerate(graph.edges)}
    clauses = set()
    for poly in polys:
        ids = [index[e] for e in poly.cycle_edges]
        k, n = poly.k, len(ids)
        for j in range(n):
            prem = tuple(sorted({ids[(j + t) % n] for t in range(k - 1)}))
            for t in range(k - 1):
                concl = ids[(j + k + t) % n]
                if concl not in prem:
                    clauses.add((prem, concl))
    return sorted(clauses)


class _Propagator:
    def __init__(self, m, clauses):
        self.val = [None] * m
        self.trail = []
        self.clauses = clauses
        self.watch = [[] for _ in range(m)]
        for ci, (prem, concl) in enumerate(clauses):
            for e in prem + (concl,):
                self.watch[e].append(ci)

    def assign(self, e, b) -> bool:
        queue = [(e, b)]
        while queue:
            e, b = queue.pop()
            cur = self.val[e]
            if cur is not None:
                if cur != b:
                    return False
                continue
            self.val[e] = b
            self.trail.append(e)
            for ci in self.watch[e]:
                prem, concl = self.clauses[ci]
                vals = [self.val[p] for p in prem]
                if 0 in vals:
                    continue
                open_ = [p for p, v in zip(prem, vals) if v is None]
                cv = self.val[concl]
                if not open_:
                    if cv == 0:
                        return False
                    if cv is None:
                        queue.append((concl, 1))
                elif len(open_) == 1 and cv == 0:
                    queue.append((open_[0], 0))
        return True

    def undo(self, mark):
        while len(self.trail) > mark:
            self.val[self.trail.pop()] = None


def enumerate_coarsenings(C: ArrangementComplex) -> Iterator[EdgeSet]:
    """Every edge set with the polygon property, each once.

    Order: lexicographic on characteristic vectors over the canonical edge
    list, excluded before included.
    """
    return enumerate_edge_sets(C.graph, _complex_polygons(C))


def enumerate_edge_sets(graph: AdjacencyGraph, polys: Sequence[Polygon]) -> Iterator[EdgeSet]:
    """Backtracking over edges with unit propagation of the polygon clauses."""
    edges = graph.edges
    m = len(edges)
    prop = _Propagator(m, polygon_clauses(graph, polys))

    def search(i):
        while i < m and prop.val[i] is not None:
            i += 1
        if i == m:
            yield frozenset(edges[j] for j in range(m) if prop.val[j] == 1)
            return
        for b in (0, 1):
            mark = len(prop.trail)
            if prop.assign(i, b):
                yield from search(i + 1)
            prop.undo(mark)

    for chosen in search(0):
        yield EdgeSet(graph, chosen)


def count_coarsenings(C: ArrangementComplex) -> int:
    return sum(1 for _ in enumerate_coarsenings(C))


# -- Tietze ----------------------------------------------------------------------

class TietzeResult(NamedTuple):
    ok: bool
    witness: Optional[dict]


def _tangent_normals(P: Polyhedron, x):
    return [h.normal for h in P.constraints if h.value(x) == 0]


def supporting_halfspace_exists(normal_groups, n) -> bool:
    """Whether some nonzero c lies in every cone generated by a group of normals.

    Then ``{y : c.(y - x) >= 0}`` contains every tangent cone at x.
    """
    if any(not g for g in normal_groups):
        return False
    nvars = n + sum(len(g) for g in normal_groups)
    eqs = []
    offset = n
    for g in normal_groups:
        for coord in range(n):
            row = [0] * nvars
            row[coord] = 1
            for t, a in enumerate(g):
                row[offset + t] = -a[coord]
            eqs.append((row, 0))
        offset += len(g)
    nonneg = []
    for v in range(n, nvars):
        row = [0] * nvars
        row[v] = 1
        nonneg.append((row, 0, False))
    for coord in range(n):
        for s in (1, -1):
            row = [0] * nvars
            row[coord] = s
            if solve(nonneg + [(row, 1, False)], eqs, nvars) is not None:
                return True
    return False


def tietze_check(cells: Sequence[Polyhedron]) -> TietzeResult:
    """Local convexity test for a union of full-dimensional polyhedra.

    (i) the interior of the union is connected: the induced regions are
    connected through interior facets; (ii) every boundary face admits a
    hyperplane through it with all incident cells on one side.
    """
    cells = list(cells)
    n = cells[0].ambient_dim
    for P in cells:
        if polyhedron_dim(P) != n:
            raise ValueError("tietze_check needs full-dimensional cells")
    A = induced_arrangement(cells)
    cell_regions = [regions_in(A, P) for P in cells]
    support = frozenset().union(*cell_regions)
    g = adjacency_graph(A, support)
    comps = components(g.vertices, g.edges)
    if len(comps) > 1:
        return TietzeResult(False, {"hypothesis": "i",
                                    "components": [sorted(c, key=sign_key) for c in comps]})
    above = A.regions_above
    for f in A.faces:
        around = above[f]
        inside = [r for r in around if r in support]
        if not inside or len(inside) == len(around):
            continue
        x = A.interior_point(f)
        groups = [_tangent_normals(P, x) for P, regs in zip(cells, cell_regions)
                  if any(conforms(f, r) for r in regs)]
        if not supporting_halfspace_exists(groups, n):
            return TietzeResult(False, {"hypothesis": "ii", "face": f,
                                        "point": [format_rational(c) for c in x]})
    return TietzeResult(True, None)
