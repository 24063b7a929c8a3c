"""JSON documents for quadruples and reports.

A quadruple document looks like::

    {"format": "sixterm.quadruple/1",
     "name": "cyclic", "params": {"k": 3}, "scalar": 3,
     "group": {"name": "C3", "order": 3, "table": [[...]]},
     "modules": [{"name": "A", "rank": 1, "ring": "Z", "action": {"0": [[1]], ...}}, ...],
     "maps": [{"from": "A", "to": "B", "matrix": [[...]]}, ...],
     "homotopy": [{"from": "B", "to": "A", "matrix": ...}, ...] or null}

Modules come in the order A, B, C, D and maps in the order d_AB, d_BC,
d_CD.  Output is canonical: sorted keys, two-space indent, trailing newline.
"""

from __future__ import annotations

import json

import jsonschema
import numpy as np

from . import gmodules as gm
from . import groups as gr
from . import quadruples as qd

FORMAT = "sixterm.quadruple/1"


class SchemaViolation(ValueError):
    """The document does not have the documented shape."""


class CorruptInput(ValueError):
    """The document parses but its mathematics does not check out."""


def _matrix():
    return {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}


_MAP = {
    "type": "object",
    "required": ["from", "to", "matrix"],
    "properties": {"from": {"type": "string"}, "to": {"type": "string"}, "matrix": _matrix()},
}

QUADRUPLE_SCHEMA = {
    "type": "object",
    "required": ["format", "group", "modules", "maps", "homotopy"],
    "properties": {
        "format": {"const": FORMAT},
        "name": {"type": "string"},
        "params": {"type": "object", "additionalProperties": {"type": "integer"}},
        "scalar": {"type": ["integer", "null"]},
        "group": {
            "type": "object",
            "required": ["order", "table"],
            "properties": {"name": {"type": "string"}, "order": {"type": "integer", "minimum": 1}, "table": _matrix()},
        },
        "modules": {
            "type": "array",
            "minItems": 4,
            "maxItems": 4,
            "items": {
                "type": "object",
                "required": ["name", "rank", "ring", "action"],
                "properties": {
                    "name": {"type": "string"},
                    "rank": {"type": "integer", "minimum": 0},
                    "ring": {"type": "string", "pattern": "^Z(/[1-9][0-9]*)?$"},
                    "action": {"type": "object", "additionalProperties": _matrix()},
                    "summands": {"type": "array"},
                },
            },
        },
        "maps": {"type": "array", "minItems": 3, "maxItems": 3, "items": _MAP},
        "homotopy": {"oneOf": [{"type": "null"}, {"type": "array", "minItems": 3, "maxItems": 3, "items": _MAP}]},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "result", "exit_code"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "result": {},
        "exit_code": {"type": "integer", "minimum": 0, "maximum": 4},
    },
}


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def plain(x):
    """numpy scalars and arrays to JSON-ready Python values."""
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _map_doc(f, src, tgt):
    return {"from": src, "to": tgt, "matrix": np.asarray(f.matrix, dtype=np.int64).tolist()}


def quadruple_to_doc(Q):
    G = Q.group
    mods = []
    for M in Q.modules:
        d = M.describe()
        d["summands"] = [[lab, int(r)] for lab, r in M.summands]
        mods.append(d)
    names = "ABCD"
    hom = None
    if Q.homotopy is not None:
        hom = [_map_doc(h, names[i + 1], names[i]) for i, h in enumerate(Q.homotopy)]
    return plain({
        "format": FORMAT,
        "name": Q.name,
        "params": dict(Q.params),
        "scalar": Q.scalar,
        "group": {"name": G.name, "order": G.order, "table": G.table.tolist()},
        "modules": mods,
        "maps": [_map_doc(d, names[i], names[i + 1]) for i, d in enumerate(Q.maps)],
        "homotopy": hom,
    })


def _ring(s):
    return 0 if s == "Z" else int(s.split("/")[1])


def _check_schema(doc, schema):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        raise SchemaViolation(e.message) from None


def quadruple_from_doc(doc):
    """Rebuild and re-verify a quadruple; raises SchemaViolation or CorruptInput."""
    _check_schema(doc, QUADRUPLE_SCHEMA)
    g = doc["group"]
    try:
        table = np.array(g["table"], dtype=np.int64)
        if table.shape != (g["order"], g["order"]):
            raise CorruptInput("group table has the wrong shape")
        G = gr.FiniteGroup(table, g.get("name", "G")).validate()
        mods = []
        for md in doc["modules"]:
            r = md["rank"]
            if sorted(md["action"], key=int) != [str(x) for x in range(G.order)]:
                raise CorruptInput(f"module {md['name']} needs one matrix per group element")
            act = np.array([md["action"][str(x)] for x in range(G.order)], dtype=np.int64).reshape(G.order, r, r)
            summ = tuple((lab, int(k)) for lab, k in md.get("summands", [])) or ((md["name"], r),)
            mods.append(gm.GModule(G, _ring(md["ring"]), act, md["name"], summ).validate())
        maps = [np.array(m["matrix"], dtype=np.int64).reshape(-1, mods[i].rank) for i, m in enumerate(doc["maps"])]
        hom = None
        if doc["homotopy"] is not None:
            hom = [np.array(h["matrix"], dtype=np.int64).reshape(-1, mods[i + 1].rank) for i, h in enumerate(doc["homotopy"])]
        dmaps = [gm.ModuleMap(S, T, M) for M, (S, T) in zip(maps, zip(mods, mods[1:]))]
        hmaps = None
        if hom is not None:
            hmaps = tuple(gm.ModuleMap(S, T, H) for H, (S, T) in zip(hom, zip(mods[1:], mods)))
    except (ValueError, gr.GroupError, gm.ModuleError) as e:
        if isinstance(e, CorruptInput):
            raise
        raise CorruptInput(str(e)) from None
    Q = qd.ExactQuadruple(G, *mods, *dmaps, hmaps, doc.get("scalar"), doc.get("name", "Q"), dict(doc.get("params", {})))
    rep = qd.verify(Q)
    if not rep.ok:
        bad = [k for k, v in rep.as_dict().items() if v is False]
        raise CorruptInput(f"imported quadruple fails: {', '.join(bad)}")
    return Q


def load_quadruple(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaViolation(f"not JSON: {e}") from None
    return quadruple_from_doc(doc)


def validate_report(doc):
    _check_schema(doc, REPORT_SCHEMA)
    return doc
