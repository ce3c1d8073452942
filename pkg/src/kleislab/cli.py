"""Command line front end.

Exit codes: 0 when everything checked passes, 1 when a check fails, 2 on bad
input (unreadable JSON, schema or validation errors, unknown names).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from . import duality as D
from . import io as kio
from . import monoidal as M
from .catalog import posets, sets
from .dot import render
from .errors import KleislabError, NotALattice
from .finstruct import all_spec_relations, compose_rel
from .lattice import HEMI, HOM, TOP_MEET, downset_lattice, enumerate_lattice_maps, lattice_from_order
from .monadkit import _jsonable, describe
from .runner import SUITES, run_suite, summarize

log = logging.getLogger("kleislab")

FLAG_CLASSES = {"hemi": HEMI, "hom": HOM, "top_meet": TOP_MEET}


def _load(path):
    if path == "-":
        return kio.loads(sys.stdin.read())
    return kio.load(path)


def _pick(ws, name, kinds=None):
    if name is None:
        if len(ws.bindings) != 1:
            raise KleislabError(f"choose a binding with --binding; have {sorted(ws.bindings)}")
        name = next(iter(ws.bindings))
    obj = ws[name]
    if kinds and kio.kind_of(obj) not in kinds:
        raise KleislabError(f"binding {name!r} is a {kio.kind_of(obj)}, expected {' or '.join(kinds)}")
    return obj


def _emit(args, obj, name="result"):
    if args.format == "dot":
        sys.stdout.write(render(obj, name))
    else:
        print(kio.dumps(kio.serialize(obj)))


def _emit_json(doc):
    print(json.dumps(doc, indent=2))


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    ws = _load(args.input)
    _emit_json({name: {"kind": kio.kind_of(obj), "size": _size(obj)} for name, obj in ws.bindings.items()})
    return 0


def _size(obj):
    kind = kio.kind_of(obj)
    if kind == "poset":
        return len(obj)
    if kind == "relation":
        return len(obj.pairs)
    if kind == "lattice":
        return len(obj)
    if kind in ("coalgebra",):
        return len(obj.carrier)
    if kind == "operator_algebra":
        return len(obj.lattice)
    return len(obj.source)


def cmd_dualize(args):
    ws = _load(args.input)
    obj = _pick(ws, args.binding)
    kind = kio.kind_of(obj)
    if kind == "poset":
        out = D.J_obj(obj)
    elif kind == "relation":
        out = D.J_spec(obj)
    elif kind == "map" and hasattr(obj.source, "join"):
        out = D.from_hemimorphism(obj)
    elif kind == "map":
        out = D.J_map(obj)
    elif kind == "coalgebra":
        out = D.coalg_to_operator(obj)
    elif kind == "operator_algebra":
        out = D.operator_to_coalg(obj)
    elif kind == "lattice":
        out = D.spectrum(obj)
    else:
        raise KleislabError(f"nothing to dualize for a {kind}")
    _emit(args, out)
    return 0


def cmd_spectrum(args):
    ws = _load(args.input)
    L = _pick(ws, args.binding, ("lattice",))
    _emit(args, D.spectrum(L))
    return 0


def cmd_compose(args):
    ws = _load(args.input)
    r = _pick(ws, args.first, ("relation",))
    s = _pick(ws, args.second, ("relation",))
    _emit(args, compose_rel(r, s))
    return 0


def cmd_product(args):
    ws = _load(args.input)
    X1 = _pick(ws, args.left, ("poset",))
    X2 = _pick(ws, args.right, ("poset",))
    S, p1, p2 = M.specrel_product(X1, X2)
    if args.format == "dot":
        sys.stdout.write(render(S, "sum"))
        return 0
    _emit_json(
        {
            "product": kio.serialize(S),
            "projections": [kio.serialize(p1), kio.serialize(p2)],
        }
    )
    return 0


def cmd_tensor(args):
    ws = _load(args.input)
    a, b = ws[args.left], ws[args.right]
    ka, kb = kio.kind_of(a), kio.kind_of(b)
    if ka == kb == "relation":
        out = M.tensor_rel(a, b)
    elif ka == kb == "poset":
        out = M.tensor_poset(a, b)
    elif ka == kb == "lattice":
        t = M.lattice_tensor(a, b)
        if args.format == "dot":
            sys.stdout.write(render(t.tensor_lattice, "tensor"))
            return 0
        _emit_json({"tensor": kio.serialize(t.tensor_lattice), "universal": kio.serialize(t.universal)})
        return 0
    else:
        raise KleislabError(f"cannot tensor a {ka} with a {kb}")
    _emit(args, out)
    return 0


def cmd_factor(args):
    ws = _load(args.input)
    f = _pick(ws, args.binding, ("bimorphism",))
    t = M.lattice_tensor(f.left, f.right)
    g = M.factor_bimorphism(f, t)
    unique = None
    Z = f.target.generator
    if Z is not None and max(len(t.left_poset), len(t.right_poset), len(Z)) <= args.cap_tensor:
        hits = [h for h in enumerate_lattice_maps(t.tensor_lattice, f.target, HEMI) if M.compose_after_p(h, t) == f.table]
        unique = hits == [g]
    if args.format == "dot":
        sys.stdout.write(render(g, "factor"))
        return 0
    _emit_json({"factor": kio.serialize(g), "hemimorphism": g.is_hemimorphism, "unique": unique})
    return 0 if g.is_hemimorphism and unique is not False else 1


def cmd_props(args):
    ws = _load(args.input)
    r = _pick(ws, args.binding, ("relation",))
    h = D.J_spec(r)
    total = M.is_total(r)
    partial = M.partial_map_report(r)
    doc = {
        "total": {"relational": total, "preserves_top": M.preserves_top(h)},
        "partial_map": partial,
    }
    agree = total == M.preserves_top(h) and len(set(partial.values())) == 1
    if args.partner:
        s = _pick(ws, args.partner, ("relation",))
        js = M.joint_successor_report(r, s)
        doc["joint_successor"] = js
        agree = agree and len(set(js.values())) == 1
    _emit_json(doc)
    return 0 if agree else 1


def cmd_coalg(args):
    ws = _load(args.input)
    obj = _pick(ws, args.binding, ("poset", "coalgebra", "operator_algebra"))
    kind = kio.kind_of(obj)
    if kind == "coalgebra":
        _emit(args, D.coalg_to_operator(obj))
        return 0
    if kind == "operator_algebra":
        _emit(args, D.operator_to_coalg(obj))
        return 0
    coalgs = all_spec_relations(obj, obj)
    ops = enumerate_lattice_maps(D.J_obj(obj), D.J_obj(obj), HEMI)
    r = D.coalgebra_category_check(obj, obj, coalgs, coalgs, ops, ops)
    ok = len(coalgs) == len(ops) and r["mismatch"] is None and r["rel_morphisms"] == r["alg_morphisms"]
    _emit_json(
        {
            "carrier": describe(obj),
            "coalgebras": len(coalgs),
            "operators": len(ops),
            "endo_morphisms": {"relational": r["rel_morphisms"], "algebraic": r["alg_morphisms"]},
            "mismatch": r["mismatch"],
        }
    )
    return 0 if ok else 1


def cmd_check(args):
    caps = {"cap_sets": args.cap_sets, "cap_posets": args.cap_posets, "cap_tensor": args.cap_tensor}
    report = run_suite(args.suite, caps, seed=args.seed, jobs=args.jobs, timings=args.timings)
    failed = any(e["status"] != "pass" for e in report)
    if args.summary:
        _emit_json({"summary": summarize(report), "failures": [e for e in report if e["status"] != "pass"]})
    else:
        for e in report:
            print(json.dumps(e, sort_keys=True))
    return 1 if failed else 0


def cmd_render(args):
    ws = _load(args.input)
    obj = _pick(ws, args.binding)
    sys.stdout.write(render(obj, args.binding or "G"))
    return 0


def cmd_enumerate(args):
    n = args.size
    if args.kind == "posets":
        out = list(posets(n))
    elif args.kind == "sets":
        out = list(sets(n))
    elif args.kind == "lattices":
        out = []
        for P in posets(n, 1):
            try:
                lattice_from_order(P)
            except NotALattice:
                continue
            out.append(P)
        out = [lattice_from_order(P) for P in out]
    elif args.kind == "downset-lattices":
        out = [downset_lattice(P) for P in posets(n)]
    else:
        ws = _load(args.input)
        X, Y = _pick(ws, args.source, ("poset",)), _pick(ws, args.target, ("poset",))
        if args.kind == "relations":
            out = all_spec_relations(X, Y)
        else:
            out = enumerate_lattice_maps(D.J_obj(Y), D.J_obj(X), FLAG_CLASSES[args.flags])
    if args.count:
        _emit_json({"kind": args.kind, "count": len(out)})
    elif args.format == "dot":
        for k, obj in enumerate(out):
            sys.stdout.write(render(obj, f"{args.kind}_{k}"))
    else:
        _emit_json([kio.serialize(o) for o in out])
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-sets", type=int, default=None, help="largest set in exhaustive sweeps")
    common.add_argument("--cap-posets", type=int, default=None, help="largest poset in exhaustive sweeps")
    common.add_argument("--cap-tensor", type=int, default=2, help="largest factor in bimorphism sweeps")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for suites")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="kleislab", description="Finite Kleisli dualities workbench.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, input_arg=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if input_arg:
            sp.add_argument("input", help="JSON document, or - for stdin")
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "parse a document and report its bindings")
    sp = add("dualize", cmd_dualize, "apply the duality to a poset, relation, map or (co)algebra")
    sp.add_argument("--binding")
    sp = add("spectrum", cmd_spectrum, "points of a distributive lattice")
    sp.add_argument("--binding")
    sp = add("compose", cmd_compose, "relational composite: first, then second")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("product", cmd_product, "product of two posets among spectral relations")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("tensor", cmd_tensor, "tensor of two relations, posets or down-set lattices")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("factor", cmd_factor, "factor a bimorphism through the lattice tensor")
    sp.add_argument("--binding")
    sp = add("props", cmd_props, "totality, partial-map and joint-successor checks")
    sp.add_argument("--binding")
    sp.add_argument("--partner", help="second relation for the joint-successor check")
    sp = add("coalg", cmd_coalg, "translate coalgebras and operators, or count them on a poset")
    sp.add_argument("--binding")
    sp = add("check", cmd_check, "run a verification suite", input_arg=False)
    sp.add_argument("suite", choices=list(SUITES) + ["all"])
    sp.add_argument("--timings", action="store_true", help="fill in millis (reports stop being reproducible)")
    sp.add_argument("--summary", action="store_true", help="print counts and failures only")
    sp = add("render", cmd_render, "DOT text for a binding")
    sp.add_argument("--binding")
    sp = add("enumerate", cmd_enumerate, "list catalog objects or hom-sets", input_arg=False)
    sp.add_argument("kind", choices=("posets", "sets", "lattices", "downset-lattices", "relations", "maps"))
    sp.add_argument("size", type=int, nargs="?", default=3)
    sp.add_argument("--input", help="document holding --source/--target for relations and maps")
    sp.add_argument("--source")
    sp.add_argument("--target")
    sp.add_argument("--flags", choices=sorted(FLAG_CLASSES), default="hemi")
    sp.add_argument("--count", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except KleislabError as e:
        witness = getattr(e, "witness", None)
        path = getattr(e, "path", None)
        msg = {"error": type(e).__name__, "message": str(e)}
        if witness is not None:
            msg["witness"] = _jsonable(witness)
        if path:
            msg["path"] = list(path)
        print(json.dumps(msg, default=repr), file=sys.stderr)
        return 2
    except OSError as e:
        print(json.dumps({"error": "OSError", "message": str(e)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
