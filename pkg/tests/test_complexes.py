import random
from itertools import combinations

import pytest

from coarsekit.complexes import (CONNECTIVITY_FAILED, FACE_CLOSURE_BROKEN,
                                 INTERSECTION_NOT_FACE_OF_FIRST, INTERSECTION_NOT_FACE_OF_SECOND,
                                 ArrangementComplex, GeneralComplex, NonConvexSupport, NotACoarsening,
                                 ValidationReport, cell_graph, cell_polyhedron, check_face_closure,
                                 coarsens, components, edge_set_of, induced_arrangement,
                                 is_convex_region_set, is_convex_support, regions_in, support_is_convex,
                                 validate_complex, validate_shortcut_convex)
from coarsekit.exactgeom import Polyhedron

import oracles
from catalog import A2, A3, CENTRAL4, GENERIC4, LINES, PLANES, random_cell_sets


def subsets(items):
    items = list(items)
    for m in range(1, 1 << len(items)):
        yield [x for i, x in enumerate(items) if m >> i & 1]


@pytest.mark.parametrize("A", [A2, A3, CENTRAL4, GENERIC4, LINES["grid"], LINES["3-generic"],
                               PLANES["coordinate"], PLANES["pencil+plane"]])
def test_convex_support_matches_sign_hull(A):
    for regs in subsets(A.regions):
        expected = oracles.convex_union(A, regs)
        assert is_convex_support(A, regs) == expected
        assert is_convex_region_set(A, regs) == expected


def test_quadrants_form_a_complex():
    cells = [A2.polyhedron(r) for r in A2.regions]
    assert validate_complex(cells).ok
    assert validate_shortcut_convex(cells).ok
    assert support_is_convex(cells)


def test_overlap_is_reported_with_reason():
    halfplane = cell_polyhedron(A2, ["++", "+-"])
    quadrant = A2.polyhedron("++")
    report = validate_complex([halfplane, quadrant, A2.polyhedron("-+"), A2.polyhedron("--")])
    assert not report.ok
    assert report.violations[0] == (0, 1, INTERSECTION_NOT_FACE_OF_FIRST)
    js = report.to_json()
    assert js["ok"] is False and js["violations"][0] == {"cells": [0, 1],
                                                         "reason": INTERSECTION_NOT_FACE_OF_FIRST}
    report = validate_complex([quadrant, halfplane])
    assert report.violations == [(0, 1, INTERSECTION_NOT_FACE_OF_SECOND)]


def test_shortcut_rejects_nonconvex_support():
    cells = [A2.polyhedron(r) for r in ("++", "+-", "-+")]
    with pytest.raises(NonConvexSupport):
        validate_shortcut_convex(cells)
    assert validate_complex(cells).ok


def test_shortcut_rejects_lower_dimensional_cells():
    segment = Polyhedron.from_rows(2, [((1, 0), 0)], [((0, 1), 0)])
    with pytest.raises(ValueError):
        validate_shortcut_convex([A2.polyhedron("++"), segment])


def test_cell_polyhedron_requires_convexity():
    with pytest.raises(NonConvexSupport):
        cell_polyhedron(A2, ["++", "--"])
    P = cell_polyhedron(A3, ["+++", "++-"])
    assert regions_in(A3, P) == {"+++", "++-"}


def test_components_are_canonical():
    comps = components(A2.regions, [("+-", "--")])
    assert comps == [frozenset({"++"}), frozenset({"+-", "--"}), frozenset({"-+"})]
    vs = ["++", "+-", "-+", "--"]
    assert sorted(map(set, components(vs, [("++", "--")])), key=len) == \
        sorted(map(set, oracles.components(vs, [("++", "--")])), key=len)


def test_arrangement_complex():
    C = ArrangementComplex.full(A3)
    assert C.is_convex
    assert len(C.graph.edges) == 6
    assert set(C.faces) == set(A3.faces)
    with pytest.raises(ValueError):
        ArrangementComplex(A2, ["00"])
    with pytest.raises(ValueError):
        ArrangementComplex(A2, [])


def test_face_closure():
    assert check_face_closure(A2, A2.faces).ok
    r = check_face_closure(A2, ["++", "+0", "0+"])
    assert not r.ok and r.violations[0][2] == FACE_CLOSURE_BROKEN


def test_coarsening_relation_and_edge_set():
    fine = GeneralComplex.from_regions(A2, [[r] for r in A2.regions])
    coarse = GeneralComplex.from_regions(A2, [["++", "+-"], ["-+", "--"]])
    assert coarsens(coarse, fine) and coarsens(fine, fine)
    assert not coarsens(fine, coarse)
    assert edge_set_of(coarse, fine) == {("++", "+-"), ("-+", "--")}
    with pytest.raises(NotACoarsening):
        edge_set_of(fine, coarse)
    g = cell_graph(coarse)
    assert g.vertices == ("c0", "c1") and len(g.edges) == 1


def test_coarsening_across_arrangements():
    # halfplanes x >= 0 / x <= 0 described by polyhedra with their own arrangement
    halves = GeneralComplex.from_polyhedra([Polyhedron.from_rows(2, [((1, 0), 0)]),
                                            Polyhedron.from_rows(2, [((-1, 0), 0)])])
    fine = GeneralComplex.from_regions(A3, [[r] for r in A3.regions])
    assert coarsens(halves, fine)
    assert not coarsens(fine, halves)


def test_induced_arrangement():
    cells = [A3.polyhedron(r) for r in A3.regions]
    B = induced_arrangement(cells)
    assert B.size == 3
    assert len(B.regions) == 6


def test_validation_report_json():
    r = ValidationReport([(-1, -1, CONNECTIVITY_FAILED, "00")])
    assert r.to_json()["violations"][0]["detail"] == "00"
    assert not r


def _brute_complex(A, cells):
    closures = [oracles.closure_faces(A, c) for c in cells]
    for M, N in combinations(closures, 2):
        S = M & N
        if not (oracles.is_face_of_cell(A, S, M) and oracles.is_face_of_cell(A, S, N)):
            return False
    return True


@pytest.mark.parametrize("name", ["A2", "A3", "central4", "generic4", "coordinate+diagonal"])
def test_validate_complex_matches_combinatorial_oracle(name):
    A = {"A2": A2, "A3": A3, "central4": CENTRAL4, "generic4": GENERIC4,
         "coordinate+diagonal": PLANES["coordinate+diagonal"]}[name]
    rng = random.Random(7)
    for cells in random_cell_sets(rng, A, 25):
        polys = [cell_polyhedron(A, c) for c in cells]
        assert validate_complex(polys).ok == _brute_complex(A, cells)
        if support_is_convex(polys):
            assert validate_shortcut_convex(polys).ok == validate_complex(polys).ok
