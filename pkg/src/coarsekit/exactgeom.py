"""Exact rational polyhedral primitives.

Everything here works over :class:`fractions.Fraction`.  Feasibility of
systems mixing weak inequalities, strict inequalities and equalities is
decided by Fourier-Motzkin elimination; a witness point is recovered by
back-substitution, which is what ``relative_interior_point`` relies on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple[Fraction, ...]


class DimensionMismatch(ValueError):
    pass


class EmptyPolyhedronError(ValueError):
    pass


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction.  Floats are rejected."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"not a rational: {value!r}") from None
        if q == 0:
            raise ValueError(f"zero denominator: {value!r}")
        return Fraction(p, q)
    raise ValueError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(parse_rational(v) for v in values)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``{x : normal . x >= offset}``."""

    normal: Vector
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", vec(self.normal))
        object.__setattr__(self, "offset", parse_rational(self.offset))
        if not any(self.normal):
            raise ValueError("halfspace normal must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def negated(self) -> "Halfspace":
        return Halfspace(tuple(-a for a in self.normal), -self.offset)

    def value(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.offset


@dataclass(frozen=True)
class Polyhedron:
    """H-representation; an empty constraint list is all of R^n."""

    ambient_dim: int
    constraints: tuple = ()

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        cons = tuple(self.constraints)
        for h in cons:
            if h.dim != self.ambient_dim:
                raise DimensionMismatch(
                    f"constraint of length {h.dim} in ambient dimension {self.ambient_dim}")
        object.__setattr__(self, "constraints", cons)

    @classmethod
    def from_rows(cls, ambient_dim: int, rows, equalities=()) -> "Polyhedron":
        """Build from ``(normal, offset)`` pairs; each equality adds two halfspaces."""
        cons = [Halfspace(a, b) for a, b in rows]
        for a, b in equalities:
            h = Halfspace(a, b)
            cons += [h, h.negated()]
        return cls(ambient_dim, tuple(cons))

    def contains_point(self, x: Sequence) -> bool:
        return all(h.value(x) >= 0 for h in self.constraints)

    def is_empty(self) -> bool:
        return not feasible(self.constraints, (), self.ambient_dim)


@dataclass(frozen=True)
class AffineSubspace:
    base_point: Vector
    directions: tuple = field(default=())

    @property
    def dim(self) -> int:
        return len(self.directions)

    def contains_point(self, x: Sequence) -> bool:
        diff = [Fraction(a) - b for a, b in zip(x, self.base_point)]
        if not self.directions:
            return not any(diff)
        return matrix_rank(list(self.directions) + [diff]) == len(self.directions)


# -- linear algebra ---------------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0]) if rows else 0


def null_space(rows: Sequence[Sequence], n: int) -> list[Vector]:
    """Basis of ``{v : row . v = 0 for every row}`` in R^n."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


# -- Fourier-Motzkin ----------------------------------------------------------
# A row is (coeffs, rhs, strict) meaning coeffs . x >= rhs (or > when strict).

def _normalize(row):
    coeffs, rhs, strict = row
    lead = next((abs(c) for c in coeffs if c != 0), None)
    if lead is None or lead == 1:
        return (tuple(coeffs), rhs, strict)
    return (tuple(c / lead for c in coeffs), rhs / lead, strict)


def _prune(rows):
    """Drop trivial rows, keep the tightest row per direction.

    Returns None when a constant row is violated.
    """
    best = {}
    for coeffs, rhs, strict in rows:
        if not any(coeffs):
            if rhs > 0 or (rhs == 0 and strict):
                return None
            continue
        coeffs, rhs, strict = _normalize((coeffs, rhs, strict))
        old = best.get(coeffs)
        if old is None or rhs > old[0] or (rhs == old[0] and strict and not old[1]):
            best[coeffs] = (rhs, strict)
    return [(c, r, s) for c, (r, s) in best.items()]


def _eliminate(rows, j):
    pos, neg, rest = [], [], []
    for row in rows:
        c = row[0][j]
        (pos if c > 0 else neg if c < 0 else rest).append(row)
    out = list(rest)
    for pc, pr, ps in pos:
        a = pc[j]
        for nc, nr, ns in neg:
            b = -nc[j]
            coeffs = tuple(x / a + y / b for x, y in zip(pc, nc))
            out.append((coeffs, pr / a + nr / b, ps or ns))
    return _prune(out)


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    """A value inside the given bounds, preferring small integers."""
    def ok(v):
        if lo is not None and (v < lo or (lo_strict and v == lo)):
            return False
        if hi is not None and (v > hi or (hi_strict and v == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is not None and lo >= 0:
        cand = Fraction(lo.__floor__() + 1)
    else:
        cand = Fraction(hi.__ceil__() - 1)
    return cand if ok(cand) else (lo + hi) / 2


def _solve_inequalities(rows, n) -> Optional[list[Fraction]]:
    rows = _prune(rows)
    if rows is None:
        return None
    stages = []
    remaining = list(range(n))
    while remaining:
        # cheapest variable first
        def cost(j):
            p = sum(1 for r in rows if r[0][j] > 0)
            q = sum(1 for r in rows if r[0][j] < 0)
            return (p * q - p - q, j)
        j = min(remaining, key=cost)
        stages.append((j, rows))
        rows = _eliminate(rows, j)
        if rows is None:
            return None
        remaining.remove(j)
    x = [Fraction(0)] * n
    known = set()
    for j, sys_rows in reversed(stages):
        lo = hi = None
        lo_s = hi_s = False
        for coeffs, rhs, strict in sys_rows:
            c = coeffs[j]
            if c == 0:
                continue
            r = (rhs - sum(coeffs[i] * x[i] for i in known)) / c
            if c > 0:
                if lo is None or r > lo:
                    lo, lo_s = r, strict
                elif r == lo:
                    lo_s = lo_s or strict
            else:
                if hi is None or r < hi:
                    hi, hi_s = r, strict
                elif r == hi:
                    hi_s = hi_s or strict
        x[j] = _pick(lo, lo_s, hi, hi_s)
        known.add(j)
    return x


def solve(ineqs, eqs, n) -> Optional[Vector]:
    """A rational point satisfying every row, or None.

    ``ineqs``: iterable of ``(coeffs, rhs, strict)``; ``eqs``: ``(coeffs, rhs)``.
    """
    ineqs = [(tuple(Fraction(c) for c in a), Fraction(b), bool(s)) for a, b, s in ineqs]
    eqs = [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in eqs]
    for a, *_ in list(ineqs) + list(eqs):
        if len(a) != n:
            raise DimensionMismatch(f"row of length {len(a)} in dimension {n}")
    return _solve_cached(tuple(ineqs), tuple(eqs), n)


@lru_cache(maxsize=200_000)
def _solve_cached(ineqs, eqs, n):
    if not eqs:
        x = _solve_inequalities(list(ineqs), n)
        return None if x is None else tuple(x)
    red, pivots = rref([list(a) + [b] for a, b in eqs])
    if n in pivots:
        return None
    free = [c for c in range(n) if c not in pivots]
    # x_p = row[n] - sum_f row[f] x_f
    subst = {p: row for row, p in zip(red, pivots)}

    def reduce(coeffs, rhs):
        new = [Fraction(0)] * len(free)
        for k, f in enumerate(free):
            new[k] = coeffs[f] - sum((coeffs[p] * subst[p][f] for p in pivots), Fraction(0))
        return tuple(new), rhs - sum((coeffs[p] * subst[p][n] for p in pivots), Fraction(0))

    rows = []
    for a, b, s in ineqs:
        na, nb = reduce(a, b)
        rows.append((na, nb, s))
    if free:
        y = _solve_inequalities(rows, len(free))
        if y is None:
            return None
    else:
        if _prune(rows) is None:
            return None
        y = []
    x = [Fraction(0)] * n
    for k, f in enumerate(free):
        x[f] = y[k]
    for p in pivots:
        row = subst[p]
        x[p] = row[n] - sum((row[f] * x[f] for f in free), Fraction(0))
    return tuple(x)


def _check_dims(items, n):
    for h in items:
        if len(h.normal) != n:
            raise DimensionMismatch(f"normal of length {len(h.normal)} in dimension {n}")


def feasible(constraints: Sequence[Halfspace], equalities: Sequence[Halfspace],
             ambient_dim: int) -> bool:
    """Exact feasibility of ``{normal.x >= offset}`` and ``{normal.x = offset}`` rows."""
    _check_dims(constraints, ambient_dim)
    _check_dims(equalities, ambient_dim)
    rows = [(h.normal, h.offset, False) for h in constraints]
    return solve(rows, [(h.normal, h.offset) for h in equalities], ambient_dim) is not None


# -- polyhedron queries ---------------------------------------------------------

def _rows(P: Polyhedron):
    return [(h.normal, h.offset, False) for h in P.constraints]


@lru_cache(maxsize=50_000)
def implicit_equalities(P: Polyhedron) -> tuple[int, ...]:
    """Indices of constraints that hold with equality on all of P (P nonempty)."""
    base = _rows(P)
    tight = []
    for i, h in enumerate(P.constraints):
        if solve(base + [(h.normal, h.offset, True)], [], P.ambient_dim) is None:
            tight.append(i)
    return tuple(tight)


def polyhedron_dim(P: Polyhedron) -> int:
    if P.is_empty():
        return -1
    eq = [P.constraints[i].normal for i in implicit_equalities(P)]
    return P.ambient_dim - matrix_rank(eq)


def affine_hull(P: Polyhedron) -> AffineSubspace:
    if P.is_empty():
        raise EmptyPolyhedronError("affine hull of an empty polyhedron")
    eq = [P.constraints[i].normal for i in implicit_equalities(P)]
    return AffineSubspace(relative_interior_point(P), tuple(null_space(eq, P.ambient_dim)))


def relative_interior_point(P: Polyhedron) -> Vector:
    if P.is_empty():
        raise EmptyPolyhedronError("relative interior of an empty polyhedron")
    tight = set(implicit_equalities(P))
    eqs = [(P.constraints[i].normal, P.constraints[i].offset) for i in sorted(tight)]
    rows = [(h.normal, h.offset, True) for i, h in enumerate(P.constraints) if i not in tight]
    x = solve(rows, eqs, P.ambient_dim)
    assert x is not None
    return x


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatch("intersecting polyhedra of different ambient dimension")
    return Polyhedron(P.ambient_dim, P.constraints + Q.constraints)


def contains(P: Polyhedron, Q: Polyhedron) -> bool:
    """Whether the point set of Q lies inside P."""
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatch("containment across ambient dimensions")
    base = _rows(Q)
    for h in P.constraints:
        # a point of Q with normal.x < offset
        if solve(base + [(tuple(-a for a in h.normal), -h.offset, True)], [], P.ambient_dim) is not None:
            return False
    return True


def same_set(P: Polyhedron, Q: Polyhedron) -> bool:
    return contains(P, Q) and contains(Q, P)


@lru_cache(maxsize=100_000)
def is_face(F: Polyhedron, P: Polyhedron) -> bool:
    """Whether F is a face of P (the empty set and P itself included).

    F is a face iff it equals the smallest face of P containing it, which is
    P cut by every constraint of P that is tight on all of F.
    """
    if F.ambient_dim != P.ambient_dim:
        raise DimensionMismatch("face test across ambient dimensions")
    if F.is_empty():
        return True
    if not contains(P, F):
        return False
    base = _rows(F)
    eqs = []
    for h in P.constraints:
        if solve(base + [(h.normal, h.offset, True)], [], P.ambient_dim) is None:
            eqs.append((h.normal, h.offset))
    smallest = Polyhedron.from_rows(P.ambient_dim, [(h.normal, h.offset) for h in P.constraints], eqs)
    return contains(F, smallest)
