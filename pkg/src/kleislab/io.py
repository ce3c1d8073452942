"""JSON documents <-> workspaces of named structures.

Documents::

    {"poset": {"elements": [...], "le": [[x, y], ...]}}
    {"relation": {"source": <poset>, "target": <poset>, "pairs": [[x, y], ...]}}
    {"lattice": {"from_poset": <poset>}}   or   {"lattice": {"elements": [...], "le": [...]}}
    {"map": {"source": <poset|lattice>, "target": <poset|lattice>, "table": {x: y}}}
    {"coalgebra": {"carrier": <poset>, "step": [[x, y], ...]}}
    {"operator_algebra": {"lattice": <lattice>, "op": {x: y}}}
    {"bimorphism": {"left": <lattice>, "right": <lattice>, "target": <lattice>, "table": [[a, b, c], ...]}}

A workspace document maps names to such objects (optionally under
``"bindings"``, next to a ``"config"`` block).  Wherever a structure is
expected a string may name another binding.  Labels that are not JSON
scalars are tagged: ``{"set": [...]}`` for frozensets and ``{"tuple": [...]}``
for tuples.  ``table`` may also be a list of ``[x, y]`` pairs, which is what
the serializer emits when labels are not strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .duality import Coalgebra, OperatorAlgebra
from .errors import SchemaError, UnknownBinding, ValidationError
from .finstruct import (
    FinPoset,
    MonotoneMap,
    SpecRelation,
    bits,
    build_poset,
    check_spec_relation,
    monotone_map,
)
from .lattice import DistLattice, LatticeMap, downset_lattice, lattice_from_order
from .monoidal import Bimorphism, make_bimorphism

KINDS = ("poset", "relation", "lattice", "map", "coalgebra", "operator_algebra", "bimorphism")

DEFAULT_CONFIG = {"cap_sets": 4, "cap_posets": 3, "cap_tensor": 2, "seed": 0, "jobs": 1}


@dataclass
class Workspace:
    bindings: dict = field(default_factory=dict)
    config: dict = field(default_factory=lambda: dict(DEFAULT_CONFIG))

    def __getitem__(self, name):
        try:
            return self.bindings[name]
        except KeyError:
            raise UnknownBinding(f"no binding named {name!r}; have {sorted(self.bindings)}") from None

    def kind(self, name):
        return kind_of(self[name])

    def __eq__(self, other):
        if not isinstance(other, Workspace):
            return NotImplemented
        return list(self.bindings.items()) == list(other.bindings.items()) and self.config == other.config


def kind_of(obj):
    if isinstance(obj, FinPoset):
        return "poset"
    if isinstance(obj, SpecRelation):
        return "relation"
    if isinstance(obj, DistLattice):
        return "lattice"
    if isinstance(obj, (MonotoneMap, LatticeMap)):
        return "map"
    if isinstance(obj, Coalgebra):
        return "coalgebra"
    if isinstance(obj, OperatorAlgebra):
        return "operator_algebra"
    if isinstance(obj, Bimorphism):
        return "bimorphism"
    raise TypeError(f"not a workspace object: {type(obj).__name__}")


# ---------------------------------------------------------------------------
# labels


def decode_label(x, path=()):
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    if isinstance(x, dict) and len(x) == 1:
        (tag, body), = x.items()
        if tag == "set" and isinstance(body, list):
            return frozenset(decode_label(y, path + ("set",)) for y in body)
        if tag == "tuple" and isinstance(body, list):
            return tuple(decode_label(y, path + ("tuple",)) for y in body)
    if isinstance(x, list):
        # bare lists are read as tuples so that [x, y] labels survive
        return tuple(decode_label(y, path) for y in x)
    raise SchemaError(f"unsupported label {x!r}", path)


def encode_label(x):
    if isinstance(x, frozenset):
        items = [encode_label(y) for y in x]
        return {"set": sorted(items, key=_sort_key)}
    if isinstance(x, tuple):
        return {"tuple": [encode_label(y) for y in x]}
    return x


def _sort_key(x):
    return json.dumps(x, sort_keys=True)


# ---------------------------------------------------------------------------
# parsing


def _expect(doc, key, path, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"missing field {key!r}", path)
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"field {key!r} must be {kind.__name__}", path + (key,))
    return v


def _pairs(raw, path):
    if not isinstance(raw, list):
        raise SchemaError("expected a list of pairs", path)
    out = []
    for k, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != 2:
            raise SchemaError("expected a pair [x, y]", path + (k,))
        out.append((decode_label(p[0], path + (k, 0)), decode_label(p[1], path + (k, 1))))
    return out


def _table(raw, path):
    if isinstance(raw, dict):
        return {k: decode_label(v, path + (k,)) for k, v in raw.items()}
    return dict(_pairs(raw, path))


class _Resolver:
    def __init__(self, raw):
        self.raw = raw
        self.done = {}
        self.active = set()

    def binding(self, name, path):
        if name in self.done:
            return self.done[name]
        if name not in self.raw:
            raise UnknownBinding(f"reference to unknown binding {name!r} at {'/'.join(map(str, path))}")
        if name in self.active:
            raise SchemaError(f"circular reference through {name!r}", path)
        self.active.add(name)
        obj = self.parse_any(self.raw[name], ("bindings", name))
        self.active.discard(name)
        self.done[name] = obj
        return obj

    def parse_any(self, doc, path):
        if isinstance(doc, str):
            return self.binding(doc, path)
        if not isinstance(doc, dict) or len(doc) != 1 or next(iter(doc)) not in KINDS:
            raise SchemaError(f"expected an object with exactly one key from {KINDS}", path)
        (kind, body), = doc.items()
        return getattr(self, "parse_" + kind)(body, path + (kind,))

    def expect(self, doc, kinds, path):
        obj = self.parse_any(doc, path)
        if kind_of(obj) not in kinds:
            raise SchemaError(f"expected {' or '.join(kinds)}, got {kind_of(obj)}", path)
        return obj

    def parse_poset(self, body, path):
        if isinstance(body, str):
            return self.expect(body, ("poset",), path)
        els = _expect(body, "elements", path, list)
        labels = [decode_label(x, path + ("elements", k)) for k, x in enumerate(els)]
        if len(set(labels)) != len(labels):
            raise SchemaError("duplicate element labels", path + ("elements",))
        pairs = _pairs(body.get("le", []), path + ("le",))
        return build_poset(labels, pairs)

    def _poset_ref(self, doc, path):
        # accepts {"poset": {...}}, a bare poset body, or a binding name
        if isinstance(doc, dict) and "elements" in doc:
            return self.parse_poset(doc, path)
        return self.expect(doc, ("poset",), path)

    def _lattice_ref(self, doc, path):
        if isinstance(doc, dict) and ("from_poset" in doc or "elements" in doc):
            return self.parse_lattice(doc, path)
        return self.expect(doc, ("lattice",), path)

    def parse_relation(self, body, path):
        X = self._poset_ref(_expect(body, "source", path), path + ("source",))
        Y = self._poset_ref(_expect(body, "target", path), path + ("target",))
        return check_spec_relation(_pairs(body.get("pairs", []), path + ("pairs",)), X, Y)

    def parse_lattice(self, body, path):
        if "from_poset" in body:
            return downset_lattice(self._poset_ref(body["from_poset"], path + ("from_poset",)))
        return lattice_from_order(self.parse_poset(body, path))

    def parse_map(self, body, path):
        src = self._struct(_expect(body, "source", path), path + ("source",))
        tgt = self._struct(_expect(body, "target", path), path + ("target",))
        table = _table(_expect(body, "table", path), path + ("table",))
        if kind_of(src) == "poset" and kind_of(tgt) == "poset":
            return monotone_map(src, tgt, _full_table(src, table, path))
        if kind_of(src) == "lattice" and kind_of(tgt) == "lattice":
            return _lattice_map(src, tgt, table, path)
        raise SchemaError("map source and target must both be posets or both lattices", path)

    def _struct(self, doc, path):
        if isinstance(doc, dict) and "from_poset" in doc:
            return self.parse_lattice(doc, path)
        if isinstance(doc, dict) and "elements" in doc:
            return self.parse_poset(doc, path)
        return self.parse_any(doc, path)

    def parse_coalgebra(self, body, path):
        X = self._poset_ref(_expect(body, "carrier", path), path + ("carrier",))
        step = check_spec_relation(_pairs(body.get("step", []), path + ("step",)), X, X)
        return Coalgebra(X, step)

    def parse_operator_algebra(self, body, path):
        L = self._lattice_ref(_expect(body, "lattice", path), path + ("lattice",))
        op = _lattice_map(L, L, _table(_expect(body, "op", path), path + ("op",)), path)
        return OperatorAlgebra(L, op)

    def parse_bimorphism(self, body, path):
        L = self._lattice_ref(_expect(body, "left", path), path + ("left",))
        M = self._lattice_ref(_expect(body, "right", path), path + ("right",))
        N = self._lattice_ref(_expect(body, "target", path), path + ("target",))
        table = [[None] * len(M) for _ in range(len(L))]
        for k, row in enumerate(_expect(body, "table", path, list)):
            if not isinstance(row, list) or len(row) != 3:
                raise SchemaError("expected a triple [a, b, c]", path + ("table", k))
            a, b, c = (decode_label(v, path + ("table", k)) for v in row)
            table[L.idx(a)][M.idx(b)] = N.idx(c)
        missing = [(L.label(i), M.label(j)) for i in range(len(L)) for j in range(len(M)) if table[i][j] is None]
        if missing:
            raise SchemaError(f"bimorphism table misses {missing[0]!r}", path + ("table",))
        return make_bimorphism(L, M, N, table)


def _full_table(src, table, path):
    out = {}
    for x in src.elements:
        if x in table:
            out[x] = table[x]
        elif _key(x) in table:
            out[x] = table[_key(x)]
        else:
            raise SchemaError(f"table misses {x!r}", path + ("table",))
    return out


def _lattice_map(L, M, table, path):
    table = _full_table(L, table, path)
    return LatticeMap(L, M, [M.idx(table[x]) for x in L.elements])


def _key(x):
    # object keys in JSON are strings; tagged labels appear in their JSON text form
    return x if isinstance(x, str) else json.dumps(encode_label(x), sort_keys=True)


def parse(doc):
    """Validate a JSON document (already decoded) into a :class:`Workspace`."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", ())
    config = dict(DEFAULT_CONFIG)
    if "config" in doc:
        extra = doc["config"]
        if not isinstance(extra, dict):
            raise SchemaError("config must be an object", ("config",))
        unknown = set(extra) - set(DEFAULT_CONFIG)
        if unknown:
            raise SchemaError(f"unknown config keys {sorted(unknown)}", ("config",))
        config.update(extra)
    if len(doc) == 1 and next(iter(doc)) in KINDS:
        raw = {next(iter(doc)): doc}
    elif "bindings" in doc:
        raw = doc["bindings"]
        if not isinstance(raw, dict):
            raise SchemaError("bindings must be an object", ("bindings",))
    else:
        raw = {k: v for k, v in doc.items() if k != "config"}
    res = _Resolver(raw)
    return Workspace({name: res.binding(name, ("bindings", name)) for name in raw}, config)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno})", ()) from None
    return parse(doc)


def load(path):
    with open(path) as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# serializing


def _poset_body(P):
    return {
        "elements": [encode_label(x) for x in P.elements],
        "le": [[encode_label(P.elements[i]), encode_label(P.elements[j])] for i, j in P.cover_pairs()],
    }


def _lattice_body(L):
    if L.generator is not None and L == downset_lattice(L.generator):
        return {"from_poset": {"poset": _poset_body(L.generator)}}
    return _poset_body(L.carrier)


def _table_doc(pairs):
    if all(isinstance(x, str) for x, _ in pairs):
        return {x: encode_label(y) for x, y in pairs}
    return [[encode_label(x), encode_label(y)] for x, y in pairs]


def _ordered_pairs(r):
    X, Y = r.source, r.target
    return [[encode_label(X.elements[i]), encode_label(Y.elements[j])] for i, row in enumerate(r.rows) for j in bits(row)]


def serialize(obj):
    """One structure as a JSON-ready document."""
    kind = kind_of(obj)
    if kind == "poset":
        return {"poset": _poset_body(obj)}
    if kind == "relation":
        return {
            "relation": {
                "source": {"poset": _poset_body(obj.source)},
                "target": {"poset": _poset_body(obj.target)},
                "pairs": _ordered_pairs(obj),
            }
        }
    if kind == "lattice":
        return {"lattice": _lattice_body(obj)}
    if kind == "map":
        return {
            "map": {
                "source": serialize(obj.source),
                "target": serialize(obj.target),
                "table": _table_doc([(x, obj(x)) for x in obj.source.elements]),
            }
        }
    if kind == "coalgebra":
        return {"coalgebra": {"carrier": {"poset": _poset_body(obj.carrier)}, "step": _ordered_pairs(obj.step)}}
    if kind == "operator_algebra":
        L = obj.lattice
        return {
            "operator_algebra": {
                "lattice": {"lattice": _lattice_body(L)},
                "op": _table_doc([(x, obj.op(x)) for x in L.elements]),
            }
        }
    L, M, N = obj.left, obj.right, obj.target
    return {
        "bimorphism": {
            "left": {"lattice": _lattice_body(L)},
            "right": {"lattice": _lattice_body(M)},
            "target": {"lattice": _lattice_body(N)},
            "table": [
                [encode_label(L.label(a)), encode_label(M.label(b)), encode_label(N.label(obj.table[a][b]))]
                for a in range(len(L))
                for b in range(len(M))
            ],
        }
    }


def serialize_workspace(ws):
    return {"config": dict(ws.config), "bindings": {name: serialize(obj) for name, obj in ws.bindings.items()}}


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False)


__all__ = [
    "Workspace",
    "parse",
    "loads",
    "load",
    "serialize",
    "serialize_workspace",
    "dumps",
    "decode_label",
    "encode_label",
    "kind_of",
    "ValidationError",
]
