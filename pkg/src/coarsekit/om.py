"""Oriented matroids given by covector sets, and the coarsening theory inside them.

Covectors use the same ``"+-0"`` strings as faces of arrangements.  The
axioms checked are the usual ones: zero vector, symmetry, composition and
elimination, plus the absence of loops.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence

from .arrangement import (AdjacencyGraph, Arrangement, PlanarFan, Polygon, canonical_edge,
                          compose, conforms, edge_key, negate, sign_key)
from .coarsening import (CoarseningError, EdgeSet, PolygonCheck, TietzeResult, enumerate_edge_sets,
                         polygon_verdict)
from .complexes import (CONNECTIVITY_FAILED, INTERSECTION_NOT_FACE_OF_FIRST,
                        INTERSECTION_NOT_FACE_OF_SECOND, ValidationReport, components)


class CovectorCheck(NamedTuple):
    ok: bool
    witness: Optional[dict]


def validate_covector_set(cands: Iterable[str]) -> CovectorCheck:
    cov = set(cands)
    if not cov:
        return CovectorCheck(False, {"axiom": "zero", "covectors": []})
    lengths = {len(x) for x in cov}
    if len(lengths) != 1:
        raise ValueError("covectors of different lengths")
    (m,) = lengths
    if any(c not in "+-0" for x in cov for c in x):
        raise ValueError("covectors must be strings over '+-0'")
    ordered = sorted(cov, key=sign_key)
    zero = "0" * m
    if zero not in cov:
        return CovectorCheck(False, {"axiom": "zero", "covectors": [zero]})
    for e in range(m):
        if all(x[e] == "0" for x in cov):
            return CovectorCheck(False, {"axiom": "no-loops", "element": e})
    for x in ordered:
        if negate(x) not in cov:
            return CovectorCheck(False, {"axiom": "symmetry", "covectors": [x]})
    for x in ordered:
        for y in ordered:
            if compose(x, y) not in cov:
                return CovectorCheck(False, {"axiom": "composition", "covectors": [x, y]})
    # elimination: index by (position of the zero, pattern) lookups
    for x, y in combinations(ordered, 2):
        sep = [e for e in range(m) if x[e] != "0" and y[e] != "0" and x[e] != y[e]]
        if not sep:
            continue
        xy = compose(x, y)
        for e in sep:
            if not any(z[e] == "0" and all(z[f] == xy[f] for f in range(m) if f not in sep)
                       for z in ordered):
                return CovectorCheck(False, {"axiom": "elimination", "covectors": [x, y],
                                             "element": e})
    return CovectorCheck(True, None)


@dataclass(frozen=True)
class OMLattice:
    ground_size: int
    covectors: frozenset

    def __post_init__(self):
        cov = frozenset(self.covectors)
        object.__setattr__(self, "covectors", cov)
        if any(len(x) != self.ground_size for x in cov):
            raise ValueError("covector length differs from ground set size")
        check = validate_covector_set(cov)
        if not check.ok:
            raise ValueError(f"not the covectors of a loopless oriented matroid: {check.witness}")

    @classmethod
    def from_covectors(cls, covectors: Iterable[str]) -> "OMLattice":
        cov = frozenset(covectors)
        if not cov:
            raise ValueError("empty covector set")
        return cls(len(next(iter(cov))), cov)

    @cached_property
    def ordered(self) -> tuple:
        return tuple(sorted(self.covectors, key=sign_key))

    @cached_property
    def rank_of(self) -> dict:
        by_support = sorted(self.covectors, key=lambda x: len(x) - x.count("0"))
        rank = {}
        for x in by_support:
            below = [rank[y] for y in rank if y != x and conforms(y, x)]
            rank[x] = 1 + max(below) if below else 0
        return rank

    @property
    def rank(self) -> int:
        return max(self.rank_of.values())

    @cached_property
    def topes(self) -> tuple:
        return tuple(x for x in self.ordered if self.rank_of[x] == self.rank)

    @cached_property
    def covers(self) -> dict:
        """Hasse diagram as undirected adjacency."""
        up = defaultdict(list)
        r = self.rank_of
        for x in self.ordered:
            for y in self.ordered:
                if r[y] == r[x] + 1 and conforms(x, y):
                    up[x].append(y)
                    up[y].append(x)
        return dict(up)

    @cached_property
    def above(self) -> dict:
        return {x: frozenset(y for y in self.covectors if conforms(x, y)) for x in self.covectors}

    def ideal(self, generators: Iterable[str]) -> frozenset:
        gens = list(generators)
        return frozenset(x for x in self.covectors if any(conforms(x, g) for g in gens))


def om_from_arrangement(A: Arrangement) -> OMLattice:
    if not A.is_central:
        raise ValueError("the arrangement is not central")
    return OMLattice(A.size, frozenset(A.faces))


@dataclass(frozen=True)
class OMPolyhedron:
    """Intersection of closed halfspaces ``(e, side)`` of an oriented matroid."""

    lattice: OMLattice
    halfspaces: frozenset = frozenset()

    def __post_init__(self):
        hs = frozenset((int(e), s) for e, s in self.halfspaces)
        for e, s in hs:
            if not 0 <= e < self.lattice.ground_size or s not in "+-" or len(s) != 1:
                raise ValueError(f"bad halfspace ({e}, {s!r})")
        object.__setattr__(self, "halfspaces", hs)

    @cached_property
    def covectors(self) -> frozenset:
        return frozenset(x for x in self.lattice.covectors
                         if all(x[e] in (s, "0") for e, s in self.halfspaces))

    def __and__(self, other: "OMPolyhedron") -> "OMPolyhedron":
        return OMPolyhedron(self.lattice, self.halfspaces | other.halfspaces)

    def cut(self, e: int) -> "OMPolyhedron":
        return OMPolyhedron(self.lattice, self.halfspaces | {(e, "+"), (e, "-")})

    @property
    def rank(self) -> int:
        return om_rank(self)

    def to_json(self):
        return {"halfspaces": [{"e": e, "side": s} for e, s in sorted(self.halfspaces)]}


def om_halfspace(L: OMLattice, e: int, side: str) -> OMPolyhedron:
    if not 0 <= e < L.ground_size:
        raise IndexError(f"element {e} out of range")
    return OMPolyhedron(L, frozenset({(e, side)}))


def region_polyhedron(L: OMLattice, topes: Iterable[str]) -> OMPolyhedron:
    """Smallest polyhedron containing the given topes."""
    ts = list(topes)
    hs = {(e, col[0]) for e, col in enumerate(zip(*ts)) if len(set(col)) == 1 and col[0] != "0"}
    return OMPolyhedron(L, frozenset(hs))


def accessible_faces(P: OMPolyhedron) -> list[OMPolyhedron]:
    if not P.covectors:
        raise ValueError("empty polyhedron")
    out, seen = [], set()
    for e in range(P.lattice.ground_size):
        col = {x[e] for x in P.covectors}
        if col <= {"+", "0"} or col <= {"-", "0"}:
            F = P.cut(e)
            if F.covectors not in seen:
                seen.add(F.covectors)
                out.append(F)
    return out


def om_faces(P: OMPolyhedron) -> list[OMPolyhedron]:
    """All intersections of accessible faces, P itself first."""
    acc = accessible_faces(P)
    out = [P]
    seen = {P.covectors}
    frontier = [P]
    while frontier:
        nxt = []
        for F in frontier:
            for G in acc:
                H = F & G
                if H.covectors not in seen:
                    seen.add(H.covectors)
                    out.append(H)
                    nxt.append(H)
        frontier = nxt
    return out


def om_rank(P: OMPolyhedron) -> int:
    if not P.covectors:
        raise ValueError("empty polyhedron")
    r = P.lattice.rank_of
    return max(r[x] for x in P.covectors)


def _rank_of_set(L: OMLattice, cov) -> int:
    return max((L.rank_of[x] for x in cov), default=-1)


def is_face_set(F: frozenset, P: OMPolyhedron) -> bool:
    if not F:
        return True
    return any(G.covectors == F for G in om_faces(P))


def _bfs(adj, start, allowed):
    dist = {start: 0}
    q = deque([start])
    while q:
        u = q.popleft()
        for v in adj.get(u, ()):
            if v in allowed and v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def is_om_polytope(L: OMLattice, generators: Iterable[str]) -> bool:
    """Whether the order ideal of full-rank generators is a polyhedron (T-convexity)."""
    gens = sorted(set(generators), key=sign_key)
    n = L.rank
    for g in gens:
        if g not in L.covectors or L.rank_of[g] != n:
            raise ValueError(f"{g} is not a covector of full rank")
    ideal = L.ideal(gens)
    layer = frozenset(x for x in L.covectors if L.rank_of[x] >= n - 1)
    dists = {g: _bfs(L.covers, g, layer) for g in gens}
    for y, z in combinations(gens, 2):
        dy, dz = dists[y], dists[z]
        total = dy[z]
        for x in layer:
            if x not in ideal and x in dy and x in dz and dy[x] + dz[x] == total:
                return False
    return True


# -- coarsenings ------------------------------------------------------------------

def _support_topes(L: OMLattice, support) -> tuple:
    if isinstance(support, OMPolyhedron):
        topes = [t for t in L.topes if t in support.covectors]
    else:
        topes = sorted(set(support), key=sign_key)
        if not topes or not is_om_polytope(L, topes):
            raise ValueError("support is not a polyhedron")
    return tuple(sorted(topes, key=sign_key))


def tope_graph(L: OMLattice, topes: Sequence[str]) -> AdjacencyGraph:
    """Topes joined when they share a covector of corank 1."""
    n = L.rank
    edges = []
    for a, b in combinations(topes, 2):
        sep = [e for e in range(L.ground_size) if a[e] != b[e]]
        facet = "".join("0" if e in sep else a[e] for e in range(L.ground_size))
        if facet in L.covectors and L.rank_of[facet] == n - 1:
            edges.append((canonical_edge(a, b), sep[0]))
    edges.sort(key=lambda e: edge_key(e[0]))
    return AdjacencyGraph(tuple(topes), tuple(e for e, _ in edges), tuple(l for _, l in edges))


def _cycle_order(nodes, adj) -> tuple:
    start = min(nodes, key=sign_key)
    nbrs = sorted(adj[start], key=sign_key)
    cyc = [start, nbrs[0]]
    while True:
        nxt = [v for v in adj[cyc[-1]] if v != cyc[-2]]
        if len(nxt) != 1:
            raise AssertionError("tope graph around a corank-2 covector is not a cycle")
        if nxt[0] == start:
            break
        cyc.append(nxt[0])
    return tuple(cyc)


def synthetic_fan(k: int, labels) -> PlanarFan:
    """Rays of k lines through the origin, in counterclockwise order."""
    half = [(1, 0)] + [(k - 2 * j, 1) for j in range(1, k)]
    rays = half + [(-x, -y) for x, y in half]
    return PlanarFan(tuple(rays), tuple(labels))


def om_polygons(L: OMLattice, topes: Sequence[str]) -> list[Polygon]:
    """Polygons around interior corank-2 covectors of the complex on these topes."""
    tset = frozenset(topes)
    g = tope_graph(L, topes)
    adj = g.neighbors
    out = []
    for f in L.ordered:
        if L.rank_of[f] != L.rank - 2:
            continue
        around = [t for t in L.topes if conforms(f, t)]
        if not around or any(t not in tset for t in around):
            continue
        cyc = _cycle_order(around, {t: [u for u in adj[t] if u in around] for t in around})
        if len(cyc) != len(around) or len(cyc) % 2:
            raise AssertionError(f"bad polygon around {f}")
        out.append(Polygon(f, cyc, synthetic_fan(len(cyc) // 2, cyc)))
    return out


def om_coarsen_check(L: OMLattice, support, E: EdgeSet) -> PolygonCheck:
    topes = _support_topes(L, support)
    g = tope_graph(L, topes)
    extra = E.edges - g.edge_set
    if extra:
        raise ValueError(f"edges outside the tope graph: {sorted(extra, key=edge_key)}")
    verdicts = [polygon_verdict(p, E.edges) for p in om_polygons(L, topes)]
    return PolygonCheck(all(v.ok for v in verdicts), verdicts)


def om_enumerate_coarsenings(L: OMLattice, support):
    topes = _support_topes(L, support)
    return enumerate_edge_sets(tope_graph(L, topes), om_polygons(L, topes))


class OMCoarsening(NamedTuple):
    classes: list
    polyhedra: list


def om_build_coarsening(L: OMLattice, support, E: EdgeSet) -> OMCoarsening:
    check = om_coarsen_check(L, support, E)
    if not check.ok:
        raise CoarseningError(next(v for v in check.verdicts if not v.ok))
    topes = _support_topes(L, support)
    classes = components(topes, E.edges)
    polys = []
    for c in classes:
        P = region_polyhedron(L, c)
        if P.covectors != L.ideal(c):
            raise AssertionError(f"class {sorted(c)} is not a polyhedron")
        polys.append(P)
    d = L.rank
    for M, N in combinations(polys, 2):
        inter = M.covectors & N.covectors
        if _rank_of_set(L, inter) >= d - 1:
            if not (is_face_set(inter, M) and is_face_set(inter, N)):
                raise AssertionError("coarsening cells do not meet in faces")
    return OMCoarsening(classes, polys)


# -- Tietze and shortcut ------------------------------------------------------------------

def _connected(L: OMLattice, nodes: frozenset) -> bool:
    if not nodes:
        return True
    start = min(nodes, key=sign_key)
    return len(_bfs(L.covers, start, nodes)) == len(nodes)


def boundary(L: OMLattice, U: frozenset) -> frozenset:
    return frozenset(x for x in U if not L.above[x] <= U)


def om_tietze(L: OMLattice, members: Sequence[OMPolyhedron]) -> TietzeResult:
    n = L.rank
    for M in members:
        if om_rank(M) != n:
            raise ValueError("om_tietze needs polyhedra of full rank")
    U = frozenset().union(*(M.covectors for M in members))
    bd = boundary(L, U)
    interior = U - bd
    if not _connected(L, interior):
        start = min(interior, key=sign_key)
        reach = _bfs(L.covers, start, interior)
        return TietzeResult(False, {"hypothesis": "i",
                                    "unreached": sorted(interior - set(reach), key=sign_key)})
    for x in sorted(bd, key=sign_key):
        incident = [M for M in members if x in M.covectors]
        found = False
        for e in range(L.ground_size):
            if x[e] != "0":
                continue
            for s in "+-":
                if all(y[e] in (s, "0") for M in incident for y in M.covectors):
                    found = True
                    break
            if found:
                break
        if not found:
            return TietzeResult(False, {"hypothesis": "ii", "face": x})
    return TietzeResult(True, None)


def cap_k(L: OMLattice, members: Sequence[OMPolyhedron], k: int) -> frozenset:
    """Union of the pairwise intersections of rank at most k."""
    out = set()
    for M, N in combinations(members, 2):
        inter = M.covectors & N.covectors
        if _rank_of_set(L, inter) <= k:
            out |= inter
    return frozenset(out)


def om_shortcut_validate(L: OMLattice, members: Sequence[OMPolyhedron], k: int) -> ValidationReport:
    members = list(members)
    for M in members:
        if om_rank(M) <= k:
            raise ValueError(f"member of rank {om_rank(M)} not above k={k}")
    U = frozenset().union(*(M.covectors for M in members))
    low = cap_k(L, members, k)
    report = ValidationReport()
    for x in sorted(U, key=sign_key):
        star = frozenset(y for y in L.above[x] if y in U and y not in low)
        if not _connected(L, star):
            report.violations.append((-1, -1, CONNECTIVITY_FAILED, x))
    for i, j in combinations(range(len(members)), 2):
        M, N = members[i], members[j]
        inter = M.covectors & N.covectors
        if _rank_of_set(L, inter) > k:
            if not is_face_set(inter, M):
                report.violations.append((i, j, INTERSECTION_NOT_FACE_OF_FIRST))
            if not is_face_set(inter, N):
                report.violations.append((i, j, INTERSECTION_NOT_FACE_OF_SECOND))
    return report


def om_validate_complex(L: OMLattice, members: Sequence[OMPolyhedron]) -> ValidationReport:
    """Full pairwise test: every intersection is a face of both members."""
    report = ValidationReport()
    for i, j in combinations(range(len(members)), 2):
        M, N = members[i], members[j]
        inter = M.covectors & N.covectors
        if not is_face_set(inter, M):
            report.violations.append((i, j, INTERSECTION_NOT_FACE_OF_FIRST))
        if not is_face_set(inter, N):
            report.violations.append((i, j, INTERSECTION_NOT_FACE_OF_SECOND))
    return report
