"""Command-line interface: every check, construction and enumeration over JSON files.

Exit codes: 0 when a check passes or a construction succeeds, 1 when a check
fails (the payload carries a witness), 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import NamedTuple, Optional

from .arrangement import adjacency_graph, polygons, sign_key
from .coarsening import (CoarseningError, EdgeSet, build_coarsening, enumerate_coarsenings,
                         has_polygon_property, tietze_check)
from .complexes import (ArrangementComplex, NonConvexSupport, cell_polyhedron, regions_in,
                        validate_complex, validate_shortcut_convex)
from .exactgeom import polyhedron_dim
from .om import (OMLattice, OMPolyhedron, accessible_faces, is_om_polytope, om_build_coarsening,
                 om_coarsen_check, om_enumerate_coarsenings, om_faces, om_from_arrangement,
                 om_polygons, om_rank, om_shortcut_validate, om_tietze, om_validate_complex,
                 region_polyhedron, tope_graph, validate_covector_set)
from .paths import (GalleryPath, MoveError, connect_reduced, is_reduced, rewrite_to_reduced)
from .serialize import (InputError, arrangement_from_json, dumps, edges_from_json,
                        om_polyhedron_from_json, path_from_json, polyhedron_from_json,
                        polyhedron_to_json, sign_vector)

SUPPORT_NOT_CONVEX = "support-not-convex"


class Failure(Exception):
    """A check that did not pass; ``payload`` is the witness document."""

    def __init__(self, payload):
        super().__init__("check failed")
        self.payload = payload


# -- input loading ------------------------------------------------------------------

def _read_json(path: str, flag: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{flag}: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{flag}: {path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _arrangement(args, required=True):
    cells_doc = _cells_doc(args)
    if args.arrangement is not None:
        return arrangement_from_json(_read_json(args.arrangement, "--arrangement"))
    if cells_doc is not None and isinstance(cells_doc, dict) and "arrangement" in cells_doc:
        return arrangement_from_json(cells_doc["arrangement"], "cells.arrangement")
    if required:
        raise InputError(f"--arrangement is required for {args.command}")
    return None


def _cells_doc(args):
    if args.cells is None:
        return None
    if not hasattr(args, "_cells_cache"):
        args._cells_cache = _read_json(args.cells, "--cells")
    return args._cells_cache


def _raw_cells(args):
    doc = _cells_doc(args)
    if doc is None:
        return None
    raw = doc.get("cells") if isinstance(doc, dict) else doc
    if not isinstance(raw, list) or not raw:
        raise InputError("cells: expected a nonempty array")
    return raw


def _region_list(A, cell, where):
    if not cell:
        raise InputError(f"{where}: empty cell")
    out = []
    for i, s in enumerate(cell):
        sv = sign_vector(s, A.size, f"{where}[{i}]")
        if sv not in A.region_set:
            raise InputError(f"{where}[{i}]: {sv} is not a region of the arrangement")
        out.append(sv)
    return frozenset(out)


def _geometric_cells(args):
    """Polyhedra for the --cells file; region lists need an arrangement."""
    raw = _require(args, "cells") and _raw_cells(args)
    A = None
    if any(isinstance(c, list) for c in raw):
        A = _arrangement(args)
    dim = A.ambient_dim if A else None
    if dim is None:
        doc = _cells_doc(args)
        dim = doc.get("dim") if isinstance(doc, dict) else None
        if dim is None:
            try:
                dim = len(raw[0]["halfspaces"][0]["normal"])
            except (KeyError, IndexError, TypeError):
                raise InputError("cells: cannot infer the dimension; add a \"dim\" field") from None
    out = []
    for i, c in enumerate(raw):
        where = f"cells[{i}]"
        if isinstance(c, list):
            regs = _region_list(A, c, where)
            try:
                out.append(cell_polyhedron(A, regs))
            except ValueError as exc:
                raise InputError(f"{where}: {exc}") from None
        else:
            P = polyhedron_from_json(c, dim, where)
            if P.is_empty():
                raise InputError(f"{where}: empty polyhedron")
            out.append(P)
    return out


def _support_regions(args, A):
    raw = _raw_cells(args)
    if raw is None:
        return A.regions
    regs = set()
    for i, c in enumerate(raw):
        where = f"cells[{i}]"
        if isinstance(c, list):
            regs |= _region_list(A, c, where)
        else:
            regs |= regions_in(A, polyhedron_from_json(c, A.ambient_dim, where))
    return tuple(sorted(regs, key=sign_key))


def _lattice(args) -> OMLattice:
    if args.covectors is not None:
        doc = _read_json(args.covectors, "--covectors")
        raw = doc.get("covectors") if isinstance(doc, dict) else doc
        if not isinstance(raw, list) or not raw:
            raise InputError("covectors: expected a nonempty array")
        size = len(raw[0]) if isinstance(raw[0], str) else 0
        cov = [sign_vector(x, size, f"covectors[{i}]") for i, x in enumerate(raw)]
        try:
            return OMLattice(size, frozenset(cov))
        except ValueError as exc:
            raise InputError(f"covectors: {exc}") from None
    A = _arrangement(args, required=False)
    if A is None:
        raise InputError(f"--covectors or a central --arrangement is required for {args.command}")
    if not A.is_central:
        raise InputError("arrangement: an oriented matroid needs a central arrangement")
    return om_from_arrangement(A)


def _om_cells(args, L) -> list:
    raw = _require(args, "cells") and _raw_cells(args)
    out = []
    for i, c in enumerate(raw):
        where = f"cells[{i}]"
        if isinstance(c, list):
            topes = []
            for t, s in enumerate(c):
                sv = sign_vector(s, L.ground_size, f"{where}[{t}]")
                if sv not in L.topes:
                    raise InputError(f"{where}[{t}]: {sv} is not a tope")
                topes.append(sv)
            if not topes:
                raise InputError(f"{where}: empty cell")
            P = region_polyhedron(L, topes)
            if frozenset(t for t in L.topes if t in P.covectors) != frozenset(topes):
                raise InputError(f"{where}: the topes do not form a polyhedron")
        else:
            P = OMPolyhedron(L, om_polyhedron_from_json(c, L.ground_size, where))
            if not P.covectors:
                raise InputError(f"{where}: empty polyhedron")
        out.append(P)
    return out


def _om_support(args, L):
    if args.cells is None:
        return L.topes
    topes = set()
    for P in _om_cells(args, L):
        topes |= {t for t in L.topes if t in P.covectors}
    return tuple(sorted(topes, key=sign_key))


def _edges(args, size):
    return edges_from_json(_read_json(_require(args, "edges"), "--edges"), size)


def _edge_set(graph, pairs):
    try:
        return EdgeSet(graph, frozenset(pairs))
    except ValueError as exc:
        raise InputError(f"edges: {exc}") from None


def _path(args, flag):
    return _read_json(_require(args, flag), f"--{flag}")


# -- commands -------------------------------------------------------------------------

def _polygon_json(p):
    return {"center_face": p.center_face, "cycle": list(p.cycle),
            "rays": [list(r) for r in p.fan.rays]}


def _graph_json(g):
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges],
            "labels": list(g.labels)}


def _om_polyhedron_json(P: OMPolyhedron):
    d = P.to_json()
    d["covectors"] = sorted(P.covectors, key=sign_key)
    d["rank"] = om_rank(P)
    return d


def cmd_faces(args):
    if args.om:
        L = _lattice(args)
        if args.polyhedron is not None:
            doc = _read_json(args.polyhedron, "--polyhedron")
            P = OMPolyhedron(L, om_polyhedron_from_json(doc, L.ground_size))
            if not P.covectors:
                raise InputError("polyhedron: empty")
            return {"accessible": [_om_polyhedron_json(F) for F in accessible_faces(P)],
                    "faces": [_om_polyhedron_json(F) for F in om_faces(P)]}
        return {"covectors": [{"covector": x, "rank": L.rank_of[x]} for x in L.ordered],
                "rank": L.rank, "topes": list(L.topes)}
    A = _arrangement(args)
    return {"faces": list(A.faces), "regions": list(A.regions)}


def cmd_graph(args):
    if args.om:
        L = _lattice(args)
        return _graph_json(tope_graph(L, _om_support(args, L)))
    A = _arrangement(args)
    return _graph_json(adjacency_graph(A, _support_regions(args, A)))


def cmd_polygons(args):
    if args.om:
        L = _lattice(args)
        return {"polygons": [_polygon_json(p) for p in om_polygons(L, _om_support(args, L))]}
    A = _arrangement(args)
    return {"polygons": [_polygon_json(p) for p in polygons(A, _support_regions(args, A))]}


def _convex_complex(A, regs):
    C = ArrangementComplex(A, regs)
    if not C.is_convex:
        raise Failure({"ok": False, "reason": SUPPORT_NOT_CONVEX, "regions": list(C.regions)})
    return C


def _verdict_payload(check):
    out = {"ok": check.ok, "polygons": [v.to_json() for v in check.verdicts]}
    bad = [v for v in check.verdicts if not v.ok]
    if bad:
        out["witness"] = bad[0].to_json()
    return out


def cmd_check_polygon_property(args):
    if args.om:
        L = _lattice(args)
        support = _om_support(args, L)
        E = _edge_set(tope_graph(L, support), _edges(args, L.ground_size))
        check = _om_call(om_coarsen_check, L, support, E)
    else:
        A = _arrangement(args)
        C = _convex_complex(A, _support_regions(args, A))
        E = _edge_set(C.graph, _edges(args, A.size))
        check = has_polygon_property(E, C)
    payload = _verdict_payload(check)
    if not check.ok:
        raise Failure(payload)
    return payload


def _om_call(fn, L, *rest):
    try:
        return fn(L, *rest)
    except CoarseningError:
        raise
    except ValueError as exc:
        if "support is not a polyhedron" in str(exc):
            raise Failure({"ok": False, "reason": SUPPORT_NOT_CONVEX}) from None
        raise


def cmd_coarsen(args):
    if args.om:
        L = _lattice(args)
        support = _om_support(args, L)
        E = _edge_set(tope_graph(L, support), _edges(args, L.ground_size))
        try:
            res = _om_call(om_build_coarsening, L, support, E)
        except CoarseningError as exc:
            raise Failure({"ok": False, "witness": exc.verdict.to_json()}) from None
        return {"ok": True, "cells": [sorted(c, key=sign_key) for c in res.classes],
                "polyhedra": [P.to_json() for P in res.polyhedra]}
    A = _arrangement(args)
    C = _convex_complex(A, _support_regions(args, A))
    E = _edge_set(C.graph, _edges(args, A.size))
    try:
        res = build_coarsening(E, C)
    except CoarseningError as exc:
        raise Failure({"ok": False, "witness": exc.verdict.to_json()}) from None
    return {"ok": True, "cells": [sorted(c, key=sign_key) for c in res.cells],
            "polyhedra": [polyhedron_to_json(P) for P in res.polyhedra]}


def cmd_enumerate(args):
    if args.om:
        L = _lattice(args)
        gen = _om_call(om_enumerate_coarsenings, L, _om_support(args, L))
    else:
        A = _arrangement(args)
        gen = enumerate_coarsenings(_convex_complex(A, _support_regions(args, A)))
    if args.count:
        return {"count": sum(1 for _ in gen)}
    return _Lines(E.to_json() for E in gen)


def cmd_check_complex(args):
    if args.om:
        L = _lattice(args)
        report = om_validate_complex(L, _om_cells(args, L))
    else:
        report = validate_complex(_geometric_cells(args))
    payload = report.to_json()
    if not report.ok:
        payload["witness"] = payload["violations"][0]
        raise Failure(payload)
    return payload


def cmd_check_shortcut(args):
    if args.om:
        L = _lattice(args)
        k = L.rank - 2 if args.k is None else args.k
        cells = _om_cells(args, L)
        tz = om_tietze(L, cells) if all(om_rank(M) == L.rank for M in cells) else None
        if tz is not None and not tz.ok:
            raise Failure({"ok": False, "reason": SUPPORT_NOT_CONVEX, "witness": tz.witness})
        try:
            report = om_shortcut_validate(L, cells, k)
        except ValueError as exc:
            raise InputError(f"--k: {exc}") from None
    else:
        cells = _geometric_cells(args)
        d = cells[0].ambient_dim
        if args.k is not None and args.k != d - 2:
            raise InputError(f"--k: the geometric shortcut inspects intersections of dimension > d-2 = {d - 2}")
        try:
            report = validate_shortcut_convex(cells)
        except NonConvexSupport:
            raise Failure({"ok": False, "reason": SUPPORT_NOT_CONVEX}) from None
    payload = report.to_json()
    if not report.ok:
        payload["witness"] = payload["violations"][0]
        raise Failure(payload)
    return payload


def cmd_tietze(args):
    if args.om:
        L = _lattice(args)
        cells = _om_cells(args, L)
        if any(om_rank(M) != L.rank for M in cells):
            raise InputError("cells: every cell must have full rank")
        res = om_tietze(L, cells)
    else:
        cells = _geometric_cells(args)
        n = cells[0].ambient_dim
        for i, P in enumerate(cells):
            if polyhedron_dim(P) != n:
                raise InputError(f"cells[{i}]: not full-dimensional")
        res = tietze_check(cells)
    payload = {"ok": res.ok}
    if not res.ok:
        payload["witness"] = res.witness
        raise Failure(payload)
    return payload


def _gallery_path(A, doc, where):
    regs = path_from_json(doc, A.size, where)
    for i, r in enumerate(regs):
        if r not in A.region_set:
            raise InputError(f"{where}.regions[{i}]: {r} is not a region")
    try:
        p = GalleryPath(regs)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None
    for i, (a, b) in enumerate(zip(regs, regs[1:])):
        j = next(t for t in range(A.size) if a[t] != b[t])
        if a[:j] + "0" + a[j + 1:] not in A.face_set:
            raise InputError(f"{where}.regions[{i + 1}]: {a} and {b} do not share a facet")
    return p


def cmd_path_rewrite(args):
    A = _arrangement(args)
    p = _gallery_path(A, _path(args, "path"), "path")
    reduced, log = rewrite_to_reduced(A, p)
    return {"moves": log.to_json(), "path": reduced.to_json()}


def cmd_path_connect(args):
    A = _arrangement(args)
    g = _gallery_path(A, _path(args, "path"), "path")
    r = _gallery_path(A, _path(args, "target"), "target")
    if (g.source, g.target) != (r.source, r.target):
        raise InputError("target: endpoints differ from those of path")
    for name, p in (("path", g), ("target", r)):
        if not is_reduced(p):
            raise InputError(f"{name}: not a reduced path")
    log = connect_reduced(A, g, r)
    try:
        ok = log.replay(g) == r
    except MoveError:
        ok = False
    if not ok:
        raise Failure({"ok": False, "moves": log.to_json()})
    return {"moves": log.to_json(), "path": r.to_json()}


def cmd_om_validate(args):
    doc = _read_json(_require(args, "covectors"), "--covectors")
    raw = doc.get("covectors") if isinstance(doc, dict) else doc
    if not isinstance(raw, list):
        raise InputError("covectors: expected an array")
    size = len(raw[0]) if raw and isinstance(raw[0], str) else 0
    cov = [sign_vector(x, size, f"covectors[{i}]") for i, x in enumerate(raw)]
    check = validate_covector_set(cov)
    if not check.ok:
        raise Failure({"ok": False, "witness": check.witness})
    L = OMLattice(size, frozenset(cov))
    return {"ok": True, "rank": L.rank, "topes": list(L.topes)}


def cmd_om_polytope(args):
    L = _lattice(args)
    doc = _read_json(_require(args, "generators"), "--generators")
    raw = doc.get("generators") if isinstance(doc, dict) else doc
    if not isinstance(raw, list) or not raw:
        raise InputError("generators: expected a nonempty array")
    gens = [sign_vector(x, L.ground_size, f"generators[{i}]") for i, x in enumerate(raw)]
    for i, g in enumerate(gens):
        if g not in L.topes:
            raise InputError(f"generators[{i}]: {g} is not a tope")
    if not is_om_polytope(L, gens):
        raise Failure({"ok": False, "generators": sorted(set(gens), key=sign_key)})
    P = region_polyhedron(L, gens)
    return {"ok": True, "polyhedron": P.to_json()}


class _Lines(list):
    """Payload emitted as newline-delimited JSON."""

    def __init__(self, items):
        super().__init__(items)


GEOMETRIC = {
    "faces": cmd_faces,
    "graph": cmd_graph,
    "polygons": cmd_polygons,
    "check-polygon-property": cmd_check_polygon_property,
    "coarsen": cmd_coarsen,
    "enumerate": cmd_enumerate,
    "check-complex": cmd_check_complex,
    "check-shortcut": cmd_check_shortcut,
    "tietze": cmd_tietze,
}
OTHER = {
    "path-rewrite": cmd_path_rewrite,
    "path-connect": cmd_path_connect,
    "om-validate": cmd_om_validate,
    "om-polytope": cmd_om_polytope,
}
# om-<name> is <name> --om
COMMANDS = dict(GEOMETRIC, **OTHER, **{f"om-{k}": v for k, v in GEOMETRIC.items()})
ALIASES = {"om-coarsen-check": "om-check-polygon-property", "om-shortcut": "om-check-shortcut",
           "om-build": "om-coarsen"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coarsekit", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS) + sorted(ALIASES))
    parser.add_argument("--arrangement", metavar="FILE")
    parser.add_argument("--cells", metavar="FILE")
    parser.add_argument("--edges", metavar="FILE")
    parser.add_argument("--path", metavar="FILE")
    parser.add_argument("--target", metavar="FILE")
    parser.add_argument("--covectors", metavar="FILE")
    parser.add_argument("--polyhedron", metavar="FILE")
    parser.add_argument("--generators", metavar="FILE")
    parser.add_argument("--count", action="store_true")
    parser.add_argument("--k", type=int)
    parser.add_argument("--om", action="store_true")
    parser.add_argument("--output", metavar="FILE")
    return parser


class CommandResult(NamedTuple):
    exit_code: int
    text: str
    output: Optional[str] = None

    @property
    def payload(self):
        lines = self.text.splitlines()
        if len(lines) == 1:
            return json.loads(lines[0])
        return [json.loads(x) for x in lines]


def run(argv) -> CommandResult:
    """Execute a command and return its exit code and serialized payload."""
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = args.output
        args.command = ALIASES.get(args.command, args.command)
        if args.command.startswith("om-") and args.command[3:] in GEOMETRIC:
            args.om = True
        elif args.om and args.command not in GEOMETRIC:
            raise InputError(f"--om does not apply to {args.command}")
        payload = COMMANDS[args.command](args)
        code = 0
    except Failure as f:
        payload, code = f.payload, 1
    except (ValueError, IndexError) as exc:
        payload, code = {"error": str(exc)}, 2
    if isinstance(payload, _Lines):
        text = "".join(dumps(item) + "\n" for item in payload)
    else:
        text = dumps(payload) + "\n"
    return CommandResult(code, text, output)


def main(argv: Optional[list] = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    if res.exit_code == 2:
        print(f"coarsekit: {res.payload['error']}", file=sys.stderr)
    if res.output and res.exit_code != 2:
        with open(res.output, "w", encoding="utf-8") as fh:
            fh.write(res.text)
    else:
        sys.stdout.write(res.text)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
