"""Gallery paths: reduced paths, braid and nil moves, rewriting and connecting."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .arrangement import Arrangement, Polygon, dot, polygon_at, sign_key


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class GalleryPath:
    regions: tuple

    def __post_init__(self):
        regs = tuple(self.regions)
        if not regs:
            raise ValueError("a path needs at least one region")
        for a, b in zip(regs, regs[1:]):
            if len(a) != len(b) or sum(x != y for x, y in zip(a, b)) != 1:
                raise ValueError(f"{a} and {b} are not adjacent")
        object.__setattr__(self, "regions", regs)

    def __len__(self):
        return len(self.regions) - 1

    @property
    def length(self) -> int:
        return len(self.regions) - 1

    @property
    def source(self) -> str:
        return self.regions[0]

    @property
    def target(self) -> str:
        return self.regions[-1]

    def to_json(self):
        return {"regions": list(self.regions)}


@dataclass(frozen=True)
class Move:
    kind: str  # "braid" or "nil"
    position: int
    polygon: Optional[Polygon] = None

    def to_json(self):
        return {"kind": self.kind, "position": self.position,
                "polygon": self.polygon.center_face if self.polygon else None}


@dataclass
class MoveLog:
    moves: list = field(default_factory=list)

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def extend(self, other):
        self.moves.extend(other)

    def shifted(self, offset: int) -> list:
        return [Move(m.kind, m.position + offset, m.polygon) for m in self.moves]

    def replay(self, path: GalleryPath) -> GalleryPath:
        for m in self.moves:
            if m.kind == "braid":
                path = apply_braid(path, m.position, m.polygon)
            elif m.kind == "nil":
                path = apply_nil(path, m.position)
            else:
                raise MoveError(f"unknown move kind {m.kind!r}")
        return path

    def to_json(self):
        return [m.to_json() for m in self.moves]


def _sep_count(q: str, r: str) -> int:
    return sum(a != b for a, b in zip(q, r))


def is_reduced(p: GalleryPath) -> bool:
    return p.length == _sep_count(p.source, p.target)


def apply_braid(p: GalleryPath, start: int, polygon: Polygon) -> GalleryPath:
    """Replace the half-polygon arc beginning at ``start`` by the other half."""
    cyc = polygon.cycle
    k = polygon.k
    n = len(cyc)
    seg = p.regions[start:start + k + 1]
    if start < 0 or len(seg) != k + 1:
        raise MoveError(f"no arc of length {k} at position {start}")
    if seg[0] not in cyc:
        raise MoveError(f"{seg[0]} is not in the polygon at {polygon.center_face}")
    i = cyc.index(seg[0])
    fwd = tuple(cyc[(i + t) % n] for t in range(k + 1))
    bwd = tuple(cyc[(i - t) % n] for t in range(k + 1))
    if seg == fwd:
        repl = bwd
    elif seg == bwd:
        repl = fwd
    else:
        raise MoveError(f"subpath at {start} is not a half-arc of the polygon at {polygon.center_face}")
    regs = p.regions[:start] + repl + p.regions[start + k + 1:]
    return GalleryPath(regs)


def apply_nil(p: GalleryPath, position: int) -> GalleryPath:
    regs = p.regions
    if position < 0 or position + 2 >= len(regs) or regs[position] != regs[position + 2]:
        raise MoveError(f"no backtrack at position {position}")
    return GalleryPath(regs[:position + 1] + regs[position + 3:])


# -- geometry ---------------------------------------------------------------------

def _crossings(A: Arrangement, x, y, sep):
    """Parameter t in (0,1) at which the segment x->y meets each separating hyperplane."""
    d = [b - a for a, b in zip(x, y)]
    out = {}
    for i in sep:
        a, b = A.hyperplanes[i]
        out[i] = (b - dot(a, x)) / dot(a, d)
    return out


def _perturbations(n):
    """Deterministic offsets: moment-curve directions at shrinking scales."""
    s = 1
    while True:
        for scale in range(1, 8):
            eps = Fraction(1, 2 ** scale)
            yield tuple(eps * Fraction(s) ** j for j in range(n))
        s += 1


@lru_cache(maxsize=None)
def geometric_reduced_path(A: Arrangement, Q: str, R: str) -> GalleryPath:
    """Reduced path read off a generic segment between interior points of Q and R."""
    for s in (Q, R):
        if s not in A.region_set:
            raise ValueError(f"{s!r} is not a region")
    if Q == R:
        return GalleryPath((Q,))
    sep = [i for i in range(A.size) if Q[i] != R[i]]
    x = A.interior_point(Q)
    y0 = A.interior_point(R)
    y = y0
    gen = _perturbations(A.ambient_dim)
    while True:
        if A.sign_of(y) == R:
            ts = _crossings(A, x, y, sep)
            if len(set(ts.values())) == len(ts):
                break
        off = next(gen)
        y = tuple(a + b for a, b in zip(y0, off))
    order = sorted(sep, key=lambda i: ts[i])
    regs = [Q]
    cur = list(Q)
    for i in order:
        cur[i] = R[i]
        regs.append("".join(cur))
    return GalleryPath(tuple(regs))


@lru_cache(maxsize=None)
def _codim2_faces_of(A: Arrangement, Q: str):
    """Codimension-2 faces of region Q, keyed by their pair of facet hyperplanes."""
    out = {}
    for f in A.faces:
        if f.count("0") >= 2 and all(c == "0" or c == q for c, q in zip(f, Q)) and A.codim(f) == 2:
            zs = [i for i, c in enumerate(f) if c == "0"]
            facets = [i for i in zs if (Q[:i] + "0" + Q[i + 1:]) in A.face_set]
            for a in facets:
                for b in facets:
                    if a < b:
                        out[(a, b)] = f
    return out


def _facet_route(A: Arrangement, Q: str, start: int, end: int, allowed) -> list[int]:
    """Shortest sequence of facet hyperplanes of Q from start to end.

    Consecutive facets must meet in a codimension-2 face and every hyperplane
    must lie in ``allowed``.
    """
    pairs = _codim2_faces_of(A, Q)
    nb = {}
    for a, b in pairs:
        if a in allowed and b in allowed:
            nb.setdefault(a, []).append(b)
            nb.setdefault(b, []).append(a)
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == end:
            break
        for v in sorted(nb.get(u, ())):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    if end not in prev:
        raise AssertionError(f"no facet route in {Q} from {start} to {end}")
    route = [end]
    while prev[route[-1]] is not None:
        route.append(prev[route[-1]])
    return route[::-1]


def _flip(sv: str, idx) -> str:
    s = list(sv)
    for i in idx:
        s[i] = "-" if s[i] == "+" else "+"
    return "".join(s)


def _half_arc(poly: Polygon, start: str, second: str) -> tuple:
    cyc, n, k = poly.cycle, len(poly.cycle), poly.k
    i = cyc.index(start)
    step = 1 if cyc[(i + 1) % n] == second else -1
    if cyc[(i + step) % n] != second:
        raise AssertionError("regions are not consecutive on the polygon")
    return tuple(cyc[(i + step * t) % n] for t in range(k + 1))


def connect_reduced(A: Arrangement, g: GalleryPath, r: GalleryPath) -> MoveLog:
    """Braid moves turning reduced path g into reduced path r (same endpoints)."""
    if g.source != r.source or g.target != r.target:
        raise ValueError("paths have different endpoints")
    if not (is_reduced(g) and is_reduced(r)):
        raise ValueError("both paths must be reduced")
    return MoveLog(_connect(A, g.regions, r.regions))


def _connect(A: Arrangement, g: tuple, r: tuple) -> list:
    if g == r:
        return []
    if g[1] == r[1]:
        return [Move(m.kind, m.position + 1, m.polygon) for m in _connect(A, g[1:], r[1:])]
    Q0, Qk = g[0], g[-1]
    sep = {i for i in range(A.size) if Q0[i] != Qk[i]}
    h_start = next(i for i in range(A.size) if g[0][i] != g[1][i])
    h_end = next(i for i in range(A.size) if r[0][i] != r[1][i])
    route = _facet_route(A, Q0, h_start, h_end, sep)
    h_prev = route[-2]
    center = _codim2_faces_of(A, Q0)[tuple(sorted((h_prev, h_end)))]
    poly = polygon_at(A, center)
    local = [i for i, c in enumerate(center) if c == "0"]
    T = _flip(Q0, local)
    mu = geometric_reduced_path(A, T, Qk).regions
    via_prev = _half_arc(poly, Q0, _flip(Q0, [h_prev]))
    via_end = _half_arc(poly, Q0, r[1])
    assert via_prev[-1] == T and via_end[-1] == T
    gamma2 = via_prev + mu[1:]
    rho2 = via_end + mu[1:]
    moves = _connect(A, g, gamma2)
    moves.append(Move("braid", 0, poly))
    moves += [Move(m.kind, m.position + 1, m.polygon) for m in _connect(A, rho2[1:], r[1:])]
    return moves


def rewrite_to_reduced(A: Arrangement, p: GalleryPath) -> tuple[GalleryPath, MoveLog]:
    """Braid and nil moves shortening p to a reduced path with the same endpoints."""
    log = MoveLog()
    cur = p
    while not is_reduced(cur):
        regs = cur.regions
        k = next(j for j in range(1, len(regs)) if j > _sep_count(regs[0], regs[j]))
        shortcut = geometric_reduced_path(A, regs[0], regs[k]).regions
        target = shortcut + (regs[k - 1],)
        moves = _connect(A, regs[:k], target)
        step = MoveLog(moves + [Move("nil", k - 2)])
        cur = step.replay(cur)
        log.extend(step.moves)
    return cur, log


def reduced_paths(A: Arrangement, Q: str, R: str) -> list[GalleryPath]:
    """All reduced paths from Q to R, by breadth-first expansion across S(Q, R)."""
    sep = [i for i in range(A.size) if Q[i] != R[i]]
    out = []

    def grow(path):
        cur = path[-1]
        if cur == R:
            out.append(GalleryPath(tuple(path)))
            return
        for i in sep:
            if cur[i] != R[i]:
                nxt = cur[:i] + R[i] + cur[i + 1:]
                facet = cur[:i] + "0" + cur[i + 1:]
                if nxt in A.region_set and facet in A.face_set:
                    grow(path + [nxt])

    grow([Q])
    return sorted(out, key=lambda p: [sign_key(x) for x in p.regions])
