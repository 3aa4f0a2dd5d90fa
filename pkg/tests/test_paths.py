import random

import pytest

from coarsekit.arrangement import adjacency_graph, polygon_at
from coarsekit.paths import (GalleryPath, Move, MoveError, MoveLog, apply_braid, apply_nil,
                             connect_reduced, geometric_reduced_path, is_reduced, reduced_paths,
                             rewrite_to_reduced)

import oracles
from catalog import A2, A3, GENERIC4, LINES, PLANES, S4


def random_walk(rng, A, length):
    nb = adjacency_graph(A).neighbors
    path = [rng.choice(A.regions)]
    for _ in range(length):
        path.append(rng.choice(nb[path[-1]]))
    return GalleryPath(tuple(path))


def test_path_validation():
    with pytest.raises(ValueError):
        GalleryPath(())
    with pytest.raises(ValueError):
        GalleryPath(("++", "--"))
    p = GalleryPath(("++", "+-", "--"))
    assert p.length == 2 and is_reduced(p)
    assert p.to_json() == {"regions": ["++", "+-", "--"]}
    assert not is_reduced(GalleryPath(("++", "+-", "++")))


def test_braid_move_a3():
    poly = polygon_at(A3, "000")
    cyc = poly.cycle
    p = GalleryPath(cyc[:4])
    q = apply_braid(p, 0, poly)
    assert q.source == p.source and q.target == p.target and q != p
    assert apply_braid(q, 0, poly) == p
    with pytest.raises(MoveError):
        apply_braid(GalleryPath(cyc[:3]), 0, poly)
    with pytest.raises(MoveError):
        apply_braid(p, 1, poly)


def test_nil_move():
    p = GalleryPath(("++", "+-", "++", "-+"))
    assert apply_nil(p, 0) == GalleryPath(("++", "-+"))
    with pytest.raises(MoveError):
        apply_nil(p, 1)


def test_move_log_json_and_errors():
    log = MoveLog([Move("nil", 0)])
    assert log.to_json() == [{"kind": "nil", "position": 0, "polygon": None}]
    with pytest.raises(MoveError):
        MoveLog([Move("swap", 0)]).replay(GalleryPath(("++",)))


@pytest.mark.parametrize("name", sorted(LINES))
def test_reduced_paths_match_dfs(name):
    A = LINES[name]
    for Q in A.regions:
        for R in A.regions:
            got = [p.regions for p in reduced_paths(A, Q, R)]
            assert sorted(got) == oracles.all_reduced_paths(A, Q, R)
            assert got, "some reduced path always exists"


@pytest.mark.parametrize("A", [A3, GENERIC4, S4, PLANES["coordinate+diagonal"]])
def test_geometric_path_is_reduced(A):
    for Q in A.regions[:6]:
        for R in A.regions:
            p = geometric_reduced_path(A, Q, R)
            assert p.source == Q and p.target == R and is_reduced(p)


@pytest.mark.parametrize("A", [A3, GENERIC4, LINES["3-concurrent+1-parallel-to-diagonal"]])
def test_connect_all_reduced_pairs(A):
    for Q in A.regions:
        for R in A.regions:
            paths = reduced_paths(A, Q, R)
            for g in paths:
                for r in paths:
                    assert connect_reduced(A, g, r).replay(g) == r


def test_connect_in_three_dimensions():
    A = S4
    rng = random.Random(5)
    for _ in range(10):
        Q, R = rng.sample(A.regions, 2)
        paths = reduced_paths(A, Q, R)
        g, r = rng.choice(paths), rng.choice(paths)
        assert connect_reduced(A, g, r).replay(g) == r


def test_connect_rejects_bad_input():
    with pytest.raises(ValueError):
        connect_reduced(A2, GalleryPath(("++", "+-")), GalleryPath(("++", "-+")))
    with pytest.raises(ValueError):
        p = GalleryPath(("++", "+-", "++"))
        connect_reduced(A2, p, p)


@pytest.mark.parametrize("A", [A2, A3, GENERIC4, S4, PLANES["pencil+plane"]])
def test_rewrite_random_walks(A):
    rng = random.Random(11)
    for _ in range(60):
        p = random_walk(rng, A, rng.randint(0, 10))
        q, log = rewrite_to_reduced(A, p)
        assert is_reduced(q)
        assert (q.source, q.target) == (p.source, p.target)
        assert q.length == sum(a != b for a, b in zip(p.source, p.target))
        assert log.replay(p) == q
