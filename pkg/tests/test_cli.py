import json
import subprocess
import sys

import pytest

from coarsekit.cli import main, run

A2_DOC = {"dim": 2, "hyperplanes": [{"normal": ["1", "0"], "offset": "0"},
                                    {"normal": ["0", "1"], "offset": "0"}]}
A3_DOC = {"dim": 2, "hyperplanes": [{"normal": ["1", "0"]}, {"normal": ["0", "1"]},
                                    {"normal": ["1", "-1"], "offset": "0"}]}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return write


@pytest.fixture
def a2(files):
    return files("a2.json", A2_DOC)


def test_check_polygon_property_pair(files, a2):
    edges = files("pair.json", {"edges": [["++", "+-"], ["-+", "--"]]})
    res = run(["check-polygon-property", "--arrangement", a2, "--edges", edges])
    assert res.exit_code == 0 and res.payload["ok"] is True


def test_check_polygon_property_failure_has_witness(files, a2):
    edges = files("one.json", {"edges": [["++", "+-"]]})
    res = run(["check-polygon-property", "--arrangement", a2, "--edges", edges])
    assert res.exit_code == 1
    assert res.payload["witness"]["polygon"] == "00"
    assert res.payload["witness"]["reason"] == "closure-violated"


def test_enumerate_count(a2):
    res = run(["enumerate", "--arrangement", a2, "--count"])
    assert res.exit_code == 0 and res.payload == {"count": 4}
    assert res.text == '{"count": 4}\n'


def test_enumerate_records_check_back(files, a2):
    res = run(["enumerate", "--arrangement", a2])
    lines = res.text.splitlines()
    assert len(lines) == 4
    for i, line in enumerate(lines):
        e = files(f"e{i}.json", line)
        assert run(["check-polygon-property", "--arrangement", a2, "--edges", e]).exit_code == 0


def test_malformed_rational(files):
    bad = files("bad.json", {"dim": 2, "hyperplanes": [{"normal": ["1/0", "0"], "offset": "0"}]})
    res = run(["faces", "--arrangement", bad])
    assert res.exit_code == 2
    assert "hyperplanes[0].normal[0]" in res.payload["error"]


@pytest.mark.parametrize("doc,field", [
    ({"hyperplanes": []}, "dim"),
    ({"dim": 2, "hyperplanes": [{"offset": "0"}]}, "normal"),
    ({"dim": 2, "hyperplanes": [{"normal": ["1"], "offset": "0"}]}, "hyperplane 0"),
    ("{not json", "not valid JSON"),
])
def test_input_errors_name_the_field(files, doc, field):
    res = run(["faces", "--arrangement", files("x.json", doc)])
    assert res.exit_code == 2 and field in res.payload["error"]


def test_missing_flags_and_bad_commands(a2):
    assert run(["check-polygon-property", "--arrangement", a2]).exit_code == 2
    assert run(["no-such-command"]).exit_code == 2
    assert run(["path-rewrite", "--om", "--arrangement", a2]).exit_code == 2
    assert run(["faces", "--arrangement", "/nonexistent.json"]).exit_code == 2


def test_unknown_region_in_edges(files, a2):
    edges = files("e.json", {"edges": [["++", "00"]]})
    res = run(["check-polygon-property", "--arrangement", a2, "--edges", edges])
    assert res.exit_code == 2 and "edges" in res.payload["error"]


def test_determinism(a2):
    runs = [run(["polygons", "--arrangement", a2]).text for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_coarsen_round_trip(files, a2):
    edges = files("pair.json", {"edges": [["++", "+-"], ["-+", "--"]]})
    res = run(["coarsen", "--arrangement", a2, "--edges", edges])
    assert res.exit_code == 0
    cells = files("cells.json", {"dim": 2, "cells": res.payload["polyhedra"]})
    assert run(["check-complex", "--cells", cells]).exit_code == 0
    assert run(["check-shortcut", "--cells", cells]).exit_code == 0
    assert run(["tietze", "--cells", cells]).exit_code == 0


def test_check_complex_and_shortcut(files, a2):
    overlap = files("o.json", {"cells": [["++", "+-"], ["++"]]})
    res = run(["check-complex", "--arrangement", a2, "--cells", overlap])
    assert res.exit_code == 1 and res.payload["witness"]["cells"] == [0, 1]
    lshape = files("l.json", {"cells": [["++"], ["+-"], ["-+"]]})
    res = run(["check-shortcut", "--arrangement", a2, "--cells", lshape])
    assert res.exit_code == 1 and res.payload["reason"] == "support-not-convex"
    res = run(["tietze", "--arrangement", a2, "--cells", lshape])
    assert res.exit_code == 1 and res.payload["witness"]["hypothesis"] == "ii"
    nonconvex = files("n.json", {"cells": [["++", "--"]]})
    assert run(["check-complex", "--arrangement", a2, "--cells", nonconvex]).exit_code == 2


def test_paths(files):
    a3 = files("a3.json", A3_DOC)
    walk = files("w.json", {"regions": ["+++", "++-", "+++", "+-+", "--+"]})
    res = run(["path-rewrite", "--arrangement", a3, "--path", walk])
    assert res.exit_code == 0
    assert res.payload["path"]["regions"] == ["+++", "+-+", "--+"]
    g = files("g.json", {"regions": ["+++", "++-", "-+-", "---"]})
    r = files("r.json", {"regions": ["+++", "+-+", "--+", "---"]})
    res = run(["path-connect", "--arrangement", a3, "--path", g, "--target", r])
    assert res.exit_code == 0 and res.payload["moves"][0]["kind"] == "braid"
    notred = files("nr.json", {"regions": ["+++", "++-", "+++"]})
    assert run(["path-connect", "--arrangement", a3, "--path", notred, "--target", notred]).exit_code == 2
    jump = files("j.json", {"regions": ["+++", "-++"]})
    assert run(["path-rewrite", "--arrangement", a3, "--path", jump]).exit_code == 2


def test_om_commands(files, a2):
    cov = files("cov.json", {"covectors": ["00", "++", "--", "+-", "-+"]})
    res = run(["om-validate", "--covectors", cov])
    assert res.exit_code == 1 and res.payload["witness"]["axiom"] == "elimination"
    good = files("good.json", {"covectors": ["++", "+0", "+-", "0+", "00", "0-", "-+", "-0", "--"]})
    assert run(["om-validate", "--covectors", good]).payload["rank"] == 2
    assert run(["om-enumerate", "--covectors", good, "--count"]).payload == {"count": 4}
    assert run(["enumerate", "--om", "--arrangement", a2, "--count"]).payload == {"count": 4}
    gens = files("gens.json", {"generators": ["++", "--"]})
    assert run(["om-polytope", "--arrangement", a2, "--generators", gens]).exit_code == 1
    gens = files("gens2.json", {"generators": ["++", "+-"]})
    res = run(["om-polytope", "--arrangement", a2, "--generators", gens])
    assert res.exit_code == 0 and res.payload["polyhedron"] == {"halfspaces": [{"e": 0, "side": "+"}]}
    quad = files("q.json", {"halfspaces": [{"e": 0, "side": "+"}, {"e": 1, "side": "+"}]})
    res = run(["om-faces", "--arrangement", a2, "--polyhedron", quad])
    assert len(res.payload["faces"]) == 4 and len(res.payload["accessible"]) == 2
    cells = files("c.json", {"cells": [["++"], ["+-"], ["-+"], ["--"]]})
    assert run(["om-shortcut", "--arrangement", a2, "--cells", cells]).exit_code == 0
    assert run(["om-tietze", "--arrangement", a2, "--cells", cells]).exit_code == 0
    assert run(["om-check-complex", "--arrangement", a2, "--cells", cells]).exit_code == 0
    pair = files("pair.json", {"edges": [["++", "+-"], ["-+", "--"]]})
    res = run(["om-coarsen", "--arrangement", a2, "--edges", pair])
    assert res.exit_code == 0 and res.payload["cells"] == [["++", "+-"], ["-+", "--"]]


def test_om_needs_central_arrangement(files):
    shifted = files("s.json", {"dim": 1, "hyperplanes": [{"normal": ["1"], "offset": "1"}]})
    assert run(["om-faces", "--arrangement", shifted]).exit_code == 2


def test_output_flag(tmp_path, a2, capsys):
    out = tmp_path / "out.json"
    assert main(["faces", "--arrangement", a2, "--output", str(out)]) == 0
    assert json.loads(out.read_text())["regions"] == ["++", "+-", "-+", "--"]
    assert capsys.readouterr().out == ""


def test_module_entry_point(a2):
    proc = subprocess.run([sys.executable, "-m", "coarsekit", "enumerate", "--arrangement", a2, "--count"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"count": 4}
    proc = subprocess.run([sys.executable, "-m", "coarsekit", "faces"], capture_output=True, text=True)
    assert proc.returncode == 2 and "--arrangement" in proc.stderr
