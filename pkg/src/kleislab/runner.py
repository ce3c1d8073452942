"""Suites of exhaustive checks and their JSON reports.

Each suite is a list of tasks; a task is a module-level function returning
``(item, ok, witness)`` triples, so tasks can be farmed out to worker
processes.  Report order is fixed by the task list, never by completion
order.  ``millis`` stays ``None`` unless timings are requested, which keeps
reports byte-identical between runs.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from . import duality as D
from . import monoidal as M
from .catalog import posets, sets
from .errors import NotALattice, UnknownSuite
from .finstruct import (
    all_monotone_maps,
    all_spec_relations,
    compose_maps,
    compose_rel,
    identity_rel,
)
from .instances import get_instance
from .lattice import (
    HEMI,
    HOM,
    TOP_MEET,
    compose_lattice_maps,
    enumerate_lattice_maps,
    is_boolean,
    lattice_from_order,
    lattice_iso,
)
from .monadkit import KleisliMorphism, POSETS, _jsonable, check_adjunction, check_monad_laws, describe, sample_morphisms

SUITES = ("monad-laws", "duality", "monoidal", "dictionary")

# sizes used when a cap is not given explicitly
SUITE_DEFAULTS = {
    "monad-laws": {"cap_sets": 4, "cap_posets": 4},
    "duality": {"cap_sets": 4, "cap_posets": 3},
    "monoidal": {"cap_sets": 2, "cap_posets": 3, "cap_tensor": 2},
    "dictionary": {"cap_sets": 2, "cap_posets": 3},
}


# ---------------------------------------------------------------------------
# monad laws


def task_monad_laws(instance, cap_sets, cap_posets, seed):
    T = get_instance(instance)
    objs = list(posets(cap_posets)) if T.base is POSETS else list(sets(cap_sets))
    morphs = sample_morphisms(objs, random.Random(seed), per_pair=2)
    rep = check_monad_laws(T, objs, morphs, seed=seed)
    return [(f"{instance}:{e['law']}:{e['object']}", e["status"] == "pass", e.get("witness")) for e in rep.entries]


# ---------------------------------------------------------------------------
# duality


def task_hom_sweep(cap_posets):
    out = []
    for r in D.hom_bijection_sweep(posets(cap_posets)):
        if r["kind"] == "pair":
            item = f"hom:{r['source']}->{r['target']}"
            ok = r["bijective"] and r["identity"] and r["relations"] == r["hemimorphisms"]
            out.append((item, ok, None if ok else r))
        else:
            out.append(("compose:" + "->".join(r["objects"]), r["functorial"], r["witness"]))
    return out


def task_j(package, cap_sets, cap_posets, seed):
    p = D.make_package(package)
    objs = list(posets(cap_posets)) if package == "specrel_dlat" else list(sets(cap_sets))
    morphs = sample_morphisms(objs, random.Random(seed), per_pair=2)
    rep = D.check_j(p, objs, morphs, seed=seed)
    return [(f"{package}:{e['law']}:{e['object']}", e["status"] == "pass", e.get("witness")) for e in rep.entries]


def task_spectrum(cap_posets):
    out = []
    P = list(posets(cap_posets + 1))
    for X in P:
        ev = D.eval_unit(X)
        ok = len(ev.target) == len(X) and len(set(ev.table)) == len(X) and all(
            X.le_idx(i, j) == ev.target.le_idx(ev.table[i], ev.table[j]) for i in range(len(X)) for j in range(len(X))
        )
        out.append((f"spectrum_iso:{describe(X)}", ok, None))
    small = list(posets(cap_posets))
    for X in small:
        for Y in small:
            bad = None
            for r in all_spec_relations(X, Y):
                h = D.J_spec(r)
                if D.transport_relation(r, D.eval_unit(X), D.eval_unit(Y)) != D.spectrum_relation(h):
                    bad = sorted(map(repr, r.pairs))
                    break
                if D.from_hemimorphism(h) != r:
                    bad = {"round_trip": sorted(map(repr, r.pairs))}
                    break
            out.append((f"spectrum_natural:{describe(X)}->{describe(Y)}", bad is None, bad))
    return out


def task_filter_homs(cap_sets):
    p = D.make_package("setF_cabool_meet")
    T = p.monad
    out = []
    S = list(sets(min(cap_sets, 2)))
    for X in S:
        for Y in S:
            TY = T.obj(Y)
            arrows = all_monotone_maps(X, TY)
            images = {D.filter_duality_J(KleisliMorphism(X, Y, f)) for f in arrows}
            homs = set(enumerate_lattice_maps(D.J_obj(Y), D.J_obj(X), TOP_MEET))
            ok = len(images) == len(arrows) and images == homs
            out.append((f"filter_homs:{describe(X)}->{describe(Y)}", ok, None if ok else {"kleisli": len(arrows), "homs": len(homs)}))
    return out


def task_stone(cap_sets):
    out = []
    V, Vh = D.make_package("specrel_dlat"), D.make_package("stonerel_bool")
    for X in sets(cap_sets):
        same = [V.j(X, a) for a in V.monad.obj(X).elements] == [Vh.j(X, a) for a in Vh.monad.obj(X).elements]
        out.append((f"stone_restriction:{describe(X)}", same and is_boolean(D.J_obj(X)) is not None, None))
    return out


def task_adjunction(cap_posets):
    out = []
    P = list(posets(cap_posets))
    for flags, tag in ((HEMI, "hemi"), (HOM, "hom"), (TOP_MEET, "top_meet")):
        adj = D.algebraic_adjunction(flags)
        for e in check_adjunction(adj, P, [D.J_obj(X) for X in P]).entries:
            out.append((f"adjunction_{tag}:{e['law']}:{e['object']}", e["status"] == "pass", e.get("witness")))
    p = D.make_package("specrel_dlat")
    for X in list(posets(min(cap_posets, 2))):
        for Y in list(posets(min(cap_posets, 2))):
            bad = next((r for r in all_spec_relations(X, Y) if D.J_via_comparison(p, r) != D.J_spec(r)), None)
            out.append((f"comparison:{describe(X)}->{describe(Y)}", bad is None, None if bad is None else sorted(map(repr, bad.pairs))))
    return out


def task_coalgebras(cap_posets):
    out = []
    P = list(posets(cap_posets))
    coalgs = {X: all_spec_relations(X, X) for X in P}
    ops = {X: enumerate_lattice_maps(D.J_obj(X), D.J_obj(X), HEMI) for X in P}
    for X in P:
        bad = None
        if len(coalgs[X]) != len(ops[X]):
            bad = {"coalgebras": len(coalgs[X]), "operators": len(ops[X])}
        else:
            images = {D.coalg_to_operator(D.Coalgebra(X, e)).op for e in coalgs[X]}
            if images != set(ops[X]):
                bad = "translation is not onto the operators"
            elif any(D.operator_to_coalg(D.OperatorAlgebra(D.J_obj(X), o)).step != D.from_hemimorphism(o) for o in ops[X]):
                bad = "round trip failed"
        out.append((f"coalg_objects:{describe(X)}", bad is None, bad))
    for X in P:
        for X2 in P:
            r = D.coalgebra_category_check(X, X2, coalgs[X], coalgs[X2], ops[X], ops[X2])
            ok = r["mismatch"] is None and r["rel_morphisms"] == r["alg_morphisms"]
            out.append((f"coalg_morphisms:{describe(X)}->{describe(X2)}", ok, None if ok else r))
    # composition: J reverses composition of monotone maps, so commuting squares paste
    for X in P:
        for Y in P:
            for Z in P:
                bad = None
                for f in all_monotone_maps(X, Y):
                    for g in all_monotone_maps(Y, Z):
                        if D.J_map(compose_maps(f, g)) != compose_lattice_maps(D.J_map(g), D.J_map(f)):
                            bad = {"f": f.as_dict(), "g": g.as_dict()}
                            break
                    if bad:
                        break
                out.append((f"coalg_composition:{describe(X)}->{describe(Y)}->{describe(Z)}", bad is None, bad))
    return out


def task_essential_surjectivity(cap_posets):
    lats = []
    for P in posets(6, 1):
        try:
            lats.append(lattice_from_order(P))
        except NotALattice:
            pass
    found = D.essential_surjectivity(lats, list(posets(5)))
    return [(f"essentially_surjective:{describe(L.carrier)}", X is not None, None) for L, X in found]


# ---------------------------------------------------------------------------
# monoidal


def task_products(cap_sets):
    out = []
    one = next(iter(sets(1, 1)))
    S, p1, p2 = M.specrel_product(one, one)
    T1 = M.tensor_poset(one, one)
    ok = S.is_antichain() and len(S) == 2 and len(all_spec_relations(one, S)) == 4 and len(all_spec_relations(one, T1)) == 2
    out.append(("product_1x1", ok, {"sum": len(all_spec_relations(one, S)), "tensor": len(all_spec_relations(one, T1))}))
    P = list(posets(cap_sets))
    for Z in P:
        for X1 in P:
            for X2 in P:
                S, p1, p2 = M.specrel_product(X1, X2)
                groups = {}
                for t in all_spec_relations(Z, S):
                    groups.setdefault((compose_rel(t, p1), compose_rel(t, p2)), []).append(t)
                bad = None
                for r in all_spec_relations(Z, X1):
                    for s in all_spec_relations(Z, X2):
                        if groups.get((r, s)) != [M.pairing(r, s, S)]:
                            bad = {"r": sorted(map(repr, r.pairs)), "s": sorted(map(repr, s.pairs))}
                            break
                    if bad:
                        break
                out.append((f"product:{describe(Z)}->{describe(X1)}+{describe(X2)}", bad is None, bad))
                S, i1, i2 = M.specrel_coproduct(X1, X2)
                groups = {}
                for t in all_spec_relations(S, Z):
                    groups.setdefault((compose_rel(i1, t), compose_rel(i2, t)), []).append(t)
                bad = None
                for r in all_spec_relations(X1, Z):
                    for s in all_spec_relations(X2, Z):
                        if groups.get((r, s)) != [M.copairing(r, s, S)]:
                            bad = {"r": sorted(map(repr, r.pairs)), "s": sorted(map(repr, s.pairs))}
                            break
                    if bad:
                        break
                out.append((f"coproduct:{describe(X1)}+{describe(X2)}->{describe(Z)}", bad is None, bad))
    return out


def task_vietoris(cap_posets):
    out = []
    P = list(posets(cap_posets))
    for X1 in P:
        for X2 in P:
            r = M.check_vietoris_sum_iso(X1, X2)
            ok = all(v for k, v in r.items() if k != "sizes")
            out.append((f"vietoris_sum:{describe(X1)}+{describe(X2)}", ok, None if ok else r))
            a = M.vietoris_prod_adjunction(X1, X2)
            ok = a["unit"] and a["counit"] and a["Pi_monotone"] and a["can_monotone"]
            out.append((f"vietoris_prod:{describe(X1)}x{describe(X2)}", ok, a["witness"]))
    return out


def task_tensor(cap_posets):
    out = []
    P = list(posets(cap_posets))
    for X in P:
        for Y in P:
            L, N = D.J_obj(X), D.J_obj(Y)
            t = M.lattice_tensor(L, N)
            ok = lattice_iso(t.tensor_lattice, M.bi_ideal_tensor(L, N)) is not None
            out.append((f"tensor_iso:{describe(X)}x{describe(Y)}", ok, None))
    for X in P:
        ok = all(M.check_diag_and_bang(X).values())
        out.append((f"diag_bang:{describe(X)}", ok, None if ok else M.check_diag_and_bang(X)))
    return out


def task_factorisation(cap_tensor):
    out = []
    P = list(posets(cap_tensor))
    for X in P:
        for Y in P:
            for Z in P:
                r = M.check_unique_factorisation(X, Y, Z)
                ok = not r["failures"] and not r["non_bimorphic_composites"] and r["bimorphisms"] == r["hemimorphisms"]
                out.append((f"factor:{describe(X)}x{describe(Y)}->{describe(Z)}", ok, None if ok else r))
    return out


def task_tensor_rel(cap_sets):
    out = []
    P = list(posets(cap_sets))
    for X in P:
        for Y in P:
            ok = M.tensor_rel(identity_rel(X), identity_rel(Y)) == identity_rel(M.tensor_poset(X, Y))
            out.append((f"tensor_identity:{describe(X)}x{describe(Y)}", ok, None))
    # interchange on all composable quadruples of relations between two objects
    for X in P:
        for Y in P:
            rels_X = all_spec_relations(X, X)
            rels_Y = all_spec_relations(Y, Y)
            bad = None
            for r in rels_X:
                for r2 in rels_X:
                    for s in rels_Y:
                        for s2 in rels_Y:
                            lhs = compose_rel(M.tensor_rel(r, s), M.tensor_rel(r2, s2))
                            if lhs != M.tensor_rel(compose_rel(r, r2), compose_rel(s, s2)):
                                bad = [sorted(map(repr, q.pairs)) for q in (r, r2, s, s2)]
                                break
                        if bad:
                            break
                    if bad:
                        break
                if bad:
                    break
            out.append((f"tensor_interchange:{describe(X)}x{describe(Y)}", bad is None, bad))
    return out


# ---------------------------------------------------------------------------
# dictionary


def task_dictionary(cap_posets):
    out = []
    P = list(posets(cap_posets))
    for X in P:
        for Y in P:
            tot = part = None
            for r in all_spec_relations(X, Y):
                h = D.J_spec(r)
                if tot is None and M.is_total(r) != M.preserves_top(h):
                    tot = sorted(map(repr, r.pairs))
                rep = M.partial_map_report(r)
                if part is None and len(set(rep.values())) != 1:
                    part = {"pairs": sorted(map(repr, r.pairs)), "conditions": rep}
            pair = f"{describe(X)}->{describe(Y)}"
            out.append((f"total:{pair}", tot is None, tot))
            out.append((f"partial_map:{pair}", part is None, part))
    return out


def task_joint_successor(cap_sets):
    out = []
    P = list(posets(cap_sets))
    for X in P:
        for Y in P:
            rels = all_spec_relations(X, Y)
            bad = None
            for r in rels:
                for s in rels:
                    rep = M.joint_successor_report(r, s)
                    if len(set(rep.values())) != 1:
                        bad = {"r": sorted(map(repr, r.pairs)), "s": sorted(map(repr, s.pairs)), "conditions": rep}
                        break
                if bad:
                    break
            out.append((f"joint_successor:{describe(X)}->{describe(Y)}", bad is None, bad))
    return out


# ---------------------------------------------------------------------------
# assembly


def suite_tasks(name, caps, seed=0):
    c = dict(SUITE_DEFAULTS[name])
    c.update({k: v for k, v in caps.items() if v is not None and k in c})
    if name == "monad-laws":
        return [
            partial(task_monad_laws, inst, c["cap_sets"], c["cap_posets"], seed)
            for inst in ("powerset", "filter", "vietoris", "vhat")
        ]
    if name == "duality":
        return [
            partial(task_hom_sweep, c["cap_posets"]),
            # j and the spectrum isomorphism are cheap enough for the size-4 catalog
            *(partial(task_j, p, c["cap_sets"], c["cap_posets"] + 1, seed) for p in D.PACKAGES),
            partial(task_spectrum, c["cap_posets"]),
            partial(task_filter_homs, c["cap_sets"]),
            partial(task_stone, c["cap_sets"]),
            partial(task_adjunction, c["cap_posets"]),
            partial(task_coalgebras, c["cap_posets"]),
            partial(task_essential_surjectivity, c["cap_posets"]),
        ]
    if name == "monoidal":
        return [
            partial(task_products, c["cap_sets"]),
            partial(task_vietoris, c["cap_posets"]),
            partial(task_tensor, c["cap_posets"]),
            partial(task_factorisation, c["cap_tensor"]),
            partial(task_tensor_rel, c["cap_sets"]),
        ]
    if name == "dictionary":
        return [partial(task_dictionary, c["cap_posets"]), partial(task_joint_successor, c["cap_sets"])]
    raise UnknownSuite(f"unknown suite {name!r}; choose from {list(SUITES) + ['all']}")


def _run_task(task, timings):
    t0 = time.perf_counter()
    rows = task()
    ms = round((time.perf_counter() - t0) * 1000) if timings else None
    return rows, ms


def run_suite(name, caps=None, seed=0, jobs=1, timings=False):
    """Run one suite (or ``all``) and return the list of report entries."""
    caps = caps or {}
    names = list(SUITES) if name == "all" else [name]
    if name != "all" and name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {list(SUITES) + ['all']}")
    work = [(n, t) for n in names for t in suite_tasks(n, caps, seed)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, [t for _, t in work], [timings] * len(work)))
    else:
        results = [_run_task(t, timings) for _, t in work]
    report = []
    for (suite, _), (rows, ms) in zip(work, results):
        for item, ok, witness in rows:
            entry = {"suite": suite, "item": item, "status": "pass" if ok else "fail"}
            if not ok and witness is not None:
                entry["witness"] = _jsonable(witness)
            entry["millis"] = ms
            report.append(entry)
    return report


def summarize(report):
    out = {}
    for e in report:
        s = out.setdefault(e["suite"], {"pass": 0, "fail": 0})
        s[e["status"]] += 1
    return out
