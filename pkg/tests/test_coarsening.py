import random

import pytest

from coarsekit.arrangement import PlanarFan, polygons
from coarsekit.coarsening import (CLOSURE_VIOLATED, NOT_CONVEX, OK, CoarseningError, EdgeSet,
                                  build_coarsening, component_complex, count_coarsenings,
                                  enumerate_coarsenings, fan_coarsening_reason, has_polygon_property,
                                  has_weak_polygon_property, has_zonotopal_polygon_property,
                                  polygon_clauses, supporting_halfspace_exists, tietze_check)
from coarsekit.complexes import ArrangementComplex, NonConvexSupport, is_convex_support

import oracles
from catalog import A2, A3, CENTRAL4, GENERIC4, LINES, PLANES, S4

SQUARE = PlanarFan(((1, 0), (0, 1), (-1, 0), (0, -1)))
HEX = PlanarFan(((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)))


def edge_subsets(C):
    edges = C.graph.edges
    for m in range(1 << len(edges)):
        yield EdgeSet(C.graph, [e for i, e in enumerate(edges) if m >> i & 1])


@pytest.mark.parametrize("removed,reason", [
    ((0, 0, 0, 0), OK),
    ((1, 1, 1, 1), OK),
    ((1, 0, 1, 0), OK),            # two opposite halfplanes
    ((0, 1, 1, 1), NOT_CONVEX),    # one ray left
    ((1, 0, 0, 0), CLOSURE_VIOLATED),  # a halfplane cone next to two quadrants
    ((0, 0, 1, 0), CLOSURE_VIOLATED),
])
def test_square_fan(removed, reason):
    assert fan_coarsening_reason(SQUARE, [bool(x) for x in removed]) == reason


def test_hex_fan():
    assert fan_coarsening_reason(HEX, [False, True, False, True, False, True]) == OK
    assert fan_coarsening_reason(HEX, [False, True, True, False, False, False]) == CLOSURE_VIOLATED
    assert fan_coarsening_reason(HEX, [False, True, True, True, False, False]) == NOT_CONVEX


@pytest.mark.parametrize("k", [2, 3, 4])
def test_fan_rule_matches_cone_counting(k):
    from coarsekit.om import synthetic_fan
    fan = synthetic_fan(k, ())
    n = 2 * k
    for m in range(1 << n):
        removed = [bool(m >> j & 1) for j in range(n)]
        kept = [j for j in range(n) if not removed[j]]
        assert (fan_coarsening_reason(fan, removed) == OK) == oracles.fan_ok_by_counting(k, kept)


def test_a2_examples():
    C = ArrangementComplex.full(A2)
    pair = EdgeSet(C.graph, [("++", "+-"), ("-+", "--")])
    assert has_polygon_property(pair, C).ok
    single = EdgeSet(C.graph, [("++", "+-")])
    check = has_polygon_property(single, C)
    assert not check.ok and check.verdicts[0].reason == CLOSURE_VIOLATED
    with pytest.raises(CoarseningError):
        build_coarsening(single, C)
    cx = build_coarsening(pair, C)
    assert sorted(map(sorted, cx.cells)) == [["++", "+-"], ["-+", "--"]]


def test_a2_enumeration_exact():
    C = ArrangementComplex.full(A2)
    got = [E.sorted_edges() for E in enumerate_coarsenings(C)]
    assert got == [[], [("++", "-+"), ("+-", "--")], [("++", "+-"), ("-+", "--")],
                   [("++", "+-"), ("++", "-+"), ("+-", "--"), ("-+", "--")]]


@pytest.mark.parametrize("A,expected", [(A2, 4), (A3, 22), (CENTRAL4, 136)])
def test_enumeration_matches_brute_force(A, expected):
    C = ArrangementComplex.full(A)
    brute = {E.edges for E in edge_subsets(C)
             if oracles.edges_define_coarsening(A, A.regions, E.edges)}
    enum = [E.edges for E in enumerate_coarsenings(C)]
    assert len(enum) == len(set(enum)) == len(brute) == expected
    assert set(enum) == brute


def test_enumeration_order_is_lexicographic():
    C = ArrangementComplex.full(A3)
    edges = C.graph.edges
    vecs = [tuple(int(e in E.edges) for e in edges) for E in enumerate_coarsenings(C)]
    assert vecs == sorted(vecs)


@pytest.mark.parametrize("A", [A3, CENTRAL4])
def test_zonotopal_and_weak_properties(A):
    C = ArrangementComplex.full(A)
    for E in edge_subsets(C):
        poly = has_polygon_property(E, C).ok
        assert has_zonotopal_polygon_property(E, C) == poly
        if poly:
            assert has_weak_polygon_property(E, C)


def test_weak_property_is_weaker():
    C = ArrangementComplex.full(A3)
    weak_only = [E for E in edge_subsets(C)
                 if has_weak_polygon_property(E, C) and not has_polygon_property(E, C).ok]
    assert weak_only


def test_subcomplex_enumeration():
    regs = ["+++", "++-", "+-+"]  # x > 0 within A3
    C = ArrangementComplex(A3, regs)
    assert C.is_convex and polygons(A3, regs) == []
    assert count_coarsenings(C) == 4  # no interior codimension-2 face: all subsets
    with pytest.raises(NonConvexSupport):
        list(enumerate_coarsenings(ArrangementComplex(A2, ["++", "--"])))


def test_generic_arrangement_sampled():
    C = ArrangementComplex.full(GENERIC4)
    rng = random.Random(3)
    enum = {E.edges for E in enumerate_coarsenings(C)}
    edges = C.graph.edges
    for _ in range(300):
        E = frozenset(e for e in edges if rng.random() < 0.7)
        assert (E in enum) == oracles.edges_define_coarsening(GENERIC4, GENERIC4.regions, E)
    for E in list(enum)[::7]:
        assert oracles.edges_define_coarsening(GENERIC4, GENERIC4.regions, E)


def test_clauses_cover_polygon():
    C = ArrangementComplex.full(A2)
    cl = polygon_clauses(C.graph, polygons(A2))
    # k = 2: each single edge forces its opposite
    assert len(cl) == 4 and all(len(p) == 1 for p, _ in cl)


def test_s4_enumeration():
    C = ArrangementComplex.full(S4)
    assert count_coarsenings(C) == 26424


def test_component_complex_without_check():
    C = ArrangementComplex.full(A2)
    cx = component_complex(EdgeSet(C.graph, [("++", "+-")]), C)
    assert len(cx.cells) == 3


def test_edge_set_validation():
    C = ArrangementComplex.full(A2)
    with pytest.raises(ValueError):
        EdgeSet(C.graph, [("++", "--")])


# -- Tietze -------------------------------------------------------------------------

def test_supporting_halfspace():
    assert supporting_halfspace_exists([[(1, 0)], [(0, 1)]], 2) is False
    assert supporting_halfspace_exists([[(1, 0), (0, 1)], [(1, 0), (0, -1)]], 2)
    assert not supporting_halfspace_exists([[]], 2)


def test_tietze_a2():
    cells = lambda regs: [A2.polyhedron(r) for r in regs]
    assert tietze_check(cells(["++", "+-"])).ok
    res = tietze_check(cells(["++", "+-", "-+"]))
    assert not res.ok and res.witness["hypothesis"] == "ii" and res.witness["face"] == "00"
    res = tietze_check(cells(["++", "--"]))
    assert not res.ok and res.witness["hypothesis"] == "i"
    assert tietze_check(cells(A2.regions)).ok


@pytest.mark.parametrize("A", [A2, A3, LINES["3-generic"], PLANES["coordinate"]])
def test_tietze_matches_convexity(A):
    for m in range(1, 1 << len(A.regions)):
        regs = [r for i, r in enumerate(A.regions) if m >> i & 1]
        res = tietze_check([A.polyhedron(r) for r in regs])
        assert res.ok == oracles.convex_union(A, regs) == is_convex_support(A, regs)
        if not res.ok:
            assert res.witness["hypothesis"] in ("i", "ii")
