"""Hyperplane arrangements and their face complexes, encoded by sign vectors.

A face of C(A) is a string over ``"+-0"`` with one character per hyperplane;
``"+"`` at position i means ``normal_i . x > offset_i`` on the relative
interior of the face.  Regions are the faces without a ``"0"``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key, lru_cache
from math import gcd
from typing import Iterable, Optional

from .exactgeom import Polyhedron, dot, matrix_rank, parse_rational, rref, solve, vec

SIGN_RANK = {"+": 0, "0": 1, "-": 2}
FLIP = {"+": "-", "-": "+", "0": "0"}


def sign_key(sv: str) -> tuple:
    """Canonical order: lexicographic with ``+ < 0 < -``."""
    return tuple(SIGN_RANK[c] for c in sv)


def edge_key(edge) -> tuple:
    return (sign_key(edge[0]), sign_key(edge[1]))


def canonical_edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if sign_key(a) <= sign_key(b) else (b, a)


def negate(sv: str) -> str:
    return "".join(FLIP[c] for c in sv)


def conforms(g: str, f: str) -> bool:
    """``g <= f`` in the face order: g agrees with f wherever g is nonzero."""
    return all(a == "0" or a == b for a, b in zip(g, f))


def zero_set(sv: str) -> tuple[int, ...]:
    return tuple(i for i, c in enumerate(sv) if c == "0")


def compose(x: str, y: str) -> str:
    return "".join(a if a != "0" else b for a, b in zip(x, y))


def _sign(v: Fraction) -> str:
    return "+" if v > 0 else "-" if v < 0 else "0"


def _normal_form(normal, offset):
    lead = next(c for c in normal if c != 0)
    return tuple(c / lead for c in normal), offset / lead


@dataclass(frozen=True)
class Arrangement:
    """Affine hyperplanes ``{x : normal . x = offset}`` in R^ambient_dim."""

    ambient_dim: int
    hyperplanes: tuple

    def __post_init__(self):
        hs = tuple((vec(a), parse_rational(b)) for a, b in self.hyperplanes)
        seen = {}
        for i, (a, b) in enumerate(hs):
            if len(a) != self.ambient_dim:
                raise ValueError(f"hyperplane {i}: normal has length {len(a)}, expected {self.ambient_dim}")
            if not any(a):
                raise ValueError(f"hyperplane {i}: zero normal")
            key = _normal_form(a, b)
            if key in seen:
                raise ValueError(f"hyperplanes {seen[key]} and {i} coincide")
            seen[key] = i
        object.__setattr__(self, "hyperplanes", hs)

    @property
    def size(self) -> int:
        return len(self.hyperplanes)

    @property
    def is_central(self) -> bool:
        return all(b == 0 for _, b in self.hyperplanes)

    def normal(self, i: int):
        return self.hyperplanes[i][0]

    def check_sign_vector(self, sv: str) -> None:
        if len(sv) != self.size or any(c not in SIGN_RANK for c in sv):
            raise ValueError(f"bad sign vector {sv!r} for {self.size} hyperplanes")

    def _rows(self, sv: str, strict: bool):
        ineqs, eqs = [], []
        for (a, b), c in zip(self.hyperplanes, sv):
            if c == "+":
                ineqs.append((a, b, strict))
            elif c == "-":
                ineqs.append((tuple(-x for x in a), -b, strict))
            elif c == "0":
                eqs.append((a, b))
        return ineqs, eqs

    def realizes(self, sv: str) -> bool:
        """Whether the relatively open cell with this sign pattern is nonempty.

        Characters ``"*"`` leave a hyperplane unconstrained.
        """
        ineqs, eqs = self._rows(sv, True)
        return solve(ineqs, eqs, self.ambient_dim) is not None

    def interior_point(self, sv: str):
        """A point of the relatively open face with sign vector sv."""
        ineqs, eqs = self._rows(sv, True)
        x = solve(ineqs, eqs, self.ambient_dim)
        if x is None:
            raise ValueError(f"{sv} is not a face")
        return x

    def polyhedron(self, sv: str) -> Polyhedron:
        """The closed face (or closed cell for a partial pattern)."""
        ineqs, eqs = self._rows(sv, False)
        return Polyhedron.from_rows(self.ambient_dim, [(a, b) for a, b, _ in ineqs], eqs)

    def sign_of(self, x) -> str:
        return "".join(_sign(dot(a, x) - b) for a, b in self.hyperplanes)

    def codim(self, sv: str) -> int:
        return matrix_rank([self.normal(i) for i in zero_set(sv)])

    def relabeled(self, perm) -> "Arrangement":
        """Arrangement whose hyperplane j is this arrangement's hyperplane perm[j]."""
        return Arrangement(self.ambient_dim, tuple(self.hyperplanes[p] for p in perm))

    @cached_property
    def faces(self) -> tuple[str, ...]:
        return enumerate_faces(self)

    @cached_property
    def face_set(self) -> frozenset:
        return frozenset(self.faces)

    @cached_property
    def regions(self) -> tuple[str, ...]:
        return tuple(f for f in self.faces if "0" not in f)

    @cached_property
    def region_set(self) -> frozenset:
        return frozenset(self.regions)

    @cached_property
    def regions_above(self) -> dict:
        """Map from each face to the canonically ordered regions containing it."""
        out = defaultdict(list)
        for r in self.regions:
            for f in self.faces:
                if conforms(f, r):
                    out[f].append(r)
        return dict(out)


def enumerate_faces(A: Arrangement) -> tuple[str, ...]:
    """All sign vectors with nonempty relatively open cell, canonically ordered.

    Depth-first over hyperplanes, pruning infeasible prefixes.
    """
    out = []

    def grow(prefix: str):
        if len(prefix) == A.size:
            out.append(prefix)
            return
        for c in "+0-":
            cand = prefix + c
            if A.realizes(cand + "*" * (A.size - len(cand))):
                grow(cand)

    grow("")
    return tuple(sorted(out, key=sign_key))


@dataclass(frozen=True)
class AdjacencyGraph:
    vertices: tuple
    edges: tuple  # canonical (a, b) pairs in canonical order
    labels: tuple  # crossed hyperplane index per edge

    @cached_property
    def label_of(self) -> dict:
        return dict(zip(self.edges, self.labels))

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def neighbors(self) -> dict:
        nb = {v: [] for v in self.vertices}
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb


def _differ(a: str, b: str) -> list[int]:
    return [i for i, (x, y) in enumerate(zip(a, b)) if x != y]


def adjacency_graph(A: Arrangement, region_subset: Optional[Iterable[str]] = None) -> AdjacencyGraph:
    if region_subset is None:
        verts = A.regions
    else:
        chosen = set(region_subset)
        unknown = chosen - A.region_set
        if unknown:
            raise ValueError(f"not regions of the arrangement: {sorted(unknown)}")
        verts = tuple(r for r in A.regions if r in chosen)
    edges = []
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            d = _differ(a, b)
            if len(d) == 1:
                facet = a[:d[0]] + "0" + a[d[0] + 1:]
                if facet in A.face_set:
                    edges.append((canonical_edge(a, b), d[0]))
    edges.sort(key=lambda e: edge_key(e[0]))
    return AdjacencyGraph(verts, tuple(e for e, _ in edges), tuple(l for _, l in edges))


def separation(A: Arrangement, Q: str, R: str) -> frozenset:
    for s in (Q, R):
        if s not in A.region_set:
            raise ValueError(f"{s!r} is not a region")
    return frozenset(i for i, (a, b) in enumerate(zip(Q, R)) if a != b)


# -- planar fans ---------------------------------------------------------------

def _primitive(x: Fraction, y: Fraction) -> tuple[int, int]:
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    a, b = int(x * den), int(y * den)
    g = gcd(a, b)
    return (a // g, b // g)


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _half(r):
    return 0 if r[1] > 0 or (r[1] == 0 and r[0] > 0) else 1


def _ccw(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    d = det(u, v)
    return -1 if d > 0 else 1 if d < 0 else 0


def sort_ccw(rays):
    """Rays sorted counterclockwise starting from the positive x-axis."""
    return sorted(rays, key=cmp_to_key(_ccw))


@dataclass(frozen=True)
class PlanarFan:
    """A complete fan in the plane.

    ``rays`` are primitive integer directions in strict counterclockwise order;
    cone j is spanned by rays j and j+1 (cyclically) and carries ``labels[j]``.
    """

    rays: tuple
    labels: tuple = ()

    def __post_init__(self):
        if len(self.rays) < 2:
            raise ValueError("a complete planar fan with pointed cones needs >= 2 rays")
        if self.labels and len(self.labels) != len(self.rays):
            raise ValueError("one label per cone")

    @property
    def cones(self):
        n = len(self.rays)
        return tuple((self.rays[j], self.rays[(j + 1) % n]) for j in range(n))

    def rotated(self, shift: int) -> "PlanarFan":
        r = self.rays[shift:] + self.rays[:shift]
        lab = self.labels[shift:] + self.labels[:shift] if self.labels else ()
        return PlanarFan(r, lab)


@dataclass(frozen=True)
class Polygon:
    """Regions around an interior codimension-2 face, in cyclic order.

    ``fan`` is the restriction fan C|_F with cone j labelled ``cycle[j]``;
    edge j joins ``cycle[j]`` and ``cycle[j+1]`` across ray j+1.
    """

    center_face: str
    cycle: tuple
    fan: PlanarFan

    @property
    def k(self) -> int:
        return len(self.cycle) // 2

    @property
    def cycle_edges(self) -> tuple:
        n = len(self.cycle)
        return tuple(canonical_edge(self.cycle[j], self.cycle[(j + 1) % n]) for j in range(n))


def perp_frame(A: Arrangement, F: str):
    """Two rational vectors spanning Perp(F), from the RREF of the normals at F."""
    red, _ = rref([A.normal(i) for i in zero_set(F)])
    if len(red) != 2:
        raise ValueError(f"{F} is not a codimension-2 face")
    return tuple(tuple(r) for r in red)


def perp_fan(A: Arrangement, F: str, support: Optional[Iterable[str]] = None) -> PlanarFan:
    """The planar fan C|_F in the frame from :func:`perp_frame`, cones labelled by regions."""
    A.check_sign_vector(F)
    if F not in A.face_set:
        raise ValueError(f"{F} is not a face")
    e1, e2 = perp_frame(A, F)
    around = A.regions_above[F]
    if support is not None:
        sup = set(support)
        if not set(around) <= sup:
            raise ValueError(f"{F} lies on the boundary of the support")
    zs = zero_set(F)
    w = {i: (dot(A.normal(i), e1), dot(A.normal(i), e2)) for i in zs}
    rays = []
    for i in zs:
        d = _primitive(-w[i][1], w[i][0])
        rays += [d, (-d[0], -d[1])]
    rays = sort_ccw(rays)
    labels = []
    n = len(rays)
    for j in range(n):
        u = (rays[j][0] + rays[(j + 1) % n][0], rays[j][1] + rays[(j + 1) % n][1])
        signs = list(F)
        for i in zs:
            signs[i] = _sign(w[i][0] * u[0] + w[i][1] * u[1])
        labels.append("".join(signs))
    if sorted(labels, key=sign_key) != list(around):
        raise AssertionError(f"restriction fan at {F} disagrees with face enumeration")
    return PlanarFan(tuple(rays), tuple(labels))


def polygon_at(A: Arrangement, F: str) -> Polygon:
    fan = perp_fan(A, F)
    start = min(range(len(fan.labels)), key=lambda j: sign_key(fan.labels[j]))
    fan = fan.rotated(start)
    return Polygon(F, fan.labels, fan)


def polygons(A: Arrangement, support: Optional[Iterable[str]] = None) -> list[Polygon]:
    """Polygons at codimension-2 faces not on the boundary of the support."""
    sup = A.region_set if support is None else frozenset(support)
    return list(_polygons_cached(A, sup))


@lru_cache(maxsize=4096)
def _polygons_cached(A: Arrangement, sup: frozenset) -> tuple:
    out = []
    for f in A.faces:
        if f.count("0") < 2 or A.codim(f) != 2:
            continue
        around = A.regions_above[f]
        if all(r in sup for r in around):
            out.append(_polygon_cached(A, f))
    return tuple(out)


@lru_cache(maxsize=None)
def _polygon_cached(A: Arrangement, F: str) -> Polygon:
    return polygon_at(A, F)
