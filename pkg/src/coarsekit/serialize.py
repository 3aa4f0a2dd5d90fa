"""JSON formats shared by the command line and tests."""
from __future__ import annotations

import json
from typing import Any

from .arrangement import Arrangement, sign_key
from .exactgeom import Halfspace, Polyhedron, format_rational, parse_rational


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _field(where, fn, value):
    try:
        return fn(value)
    except InputError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _rational(where, value):
    return _field(where, parse_rational, value)


def _vector(where, value):
    if not isinstance(value, list):
        raise InputError(f"{where}: expected an array")
    return tuple(_rational(f"{where}[{i}]", v) for i, v in enumerate(value))


def _get(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def arrangement_from_json(d, where="arrangement") -> Arrangement:
    dim = _get(d, "dim", where)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"{where}.dim: expected a positive integer")
    hs = _get(d, "hyperplanes", where)
    if not isinstance(hs, list):
        raise InputError(f"{where}.hyperplanes: expected an array")
    rows = []
    for i, h in enumerate(hs):
        w = f"{where}.hyperplanes[{i}]"
        rows.append((_vector(f"{w}.normal", _get(h, "normal", w)),
                     _rational(f"{w}.offset", h.get("offset", "0"))))
    return _field(where, lambda r: Arrangement(dim, tuple(r)), rows)


def arrangement_to_json(A: Arrangement):
    return {"dim": A.ambient_dim,
            "hyperplanes": [{"normal": [format_rational(c) for c in a], "offset": format_rational(b)}
                            for a, b in A.hyperplanes]}


def halfspace_from_json(d, where) -> Halfspace:
    normal = _vector(f"{where}.normal", _get(d, "normal", where))
    offset = _rational(f"{where}.offset", _get(d, "offset", where))
    return _field(where, lambda _: Halfspace(normal, offset), None)


def halfspace_to_json(h: Halfspace):
    return {"normal": [format_rational(c) for c in h.normal], "offset": format_rational(h.offset)}


def polyhedron_from_json(d, dim, where) -> Polyhedron:
    hs = _get(d, "halfspaces", where)
    cons = tuple(halfspace_from_json(h, f"{where}.halfspaces[{i}]") for i, h in enumerate(hs))
    return _field(where, lambda _: Polyhedron(dim, cons), None)


def polyhedron_to_json(P: Polyhedron):
    return {"halfspaces": [halfspace_to_json(h) for h in P.constraints]}


def sign_vector(value, size, where) -> str:
    if not isinstance(value, str) or len(value) != size or any(c not in "+-0" for c in value):
        raise InputError(f"{where}: expected a sign string of length {size} over '+-0'")
    return value


def edges_from_json(d, size, where="edges"):
    raw = _get(d, "edges", where)
    if not isinstance(raw, list):
        raise InputError(f"{where}.edges: expected an array")
    out = []
    for i, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"{where}.edges[{i}]: expected a pair")
        out.append(tuple(sign_vector(s, size, f"{where}.edges[{i}]") for s in e))
    return out


def path_from_json(d, size, where="path"):
    raw = _get(d, "regions", where)
    if not isinstance(raw, list) or not raw:
        raise InputError(f"{where}.regions: expected a nonempty array")
    return tuple(sign_vector(s, size, f"{where}.regions[{i}]") for i, s in enumerate(raw))


def region_cells_to_json(A: Arrangement, cells):
    return {"arrangement": arrangement_to_json(A),
            "cells": [sorted(c, key=sign_key) for c in cells]}


def om_polyhedron_from_json(d, size, where="polyhedron"):
    hs = _get(d, "halfspaces", where)
    out = []
    for i, h in enumerate(hs):
        w = f"{where}.halfspaces[{i}]"
        e, s = _get(h, "e", w), _get(h, "side", w)
        if not isinstance(e, int) or not 0 <= e < size:
            raise InputError(f"{w}.e: expected an index below {size}")
        if s not in ("+", "-"):
            raise InputError(f"{w}.side: expected '+' or '-'")
        out.append((e, s))
    return frozenset(out)
