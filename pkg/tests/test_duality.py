import pytest

import oracles
from kleislab.catalog import posets, sets
from kleislab.duality import (
    PACKAGES,
    Coalgebra,
    OperatorAlgebra,
    J_map,
    J_obj,
    J_spec,
    J_via_comparison,
    algebraic_adjunction,
    check_j,
    coalg_to_operator,
    coalgebra_category_check,
    essential_surjectivity,
    eval_unit,
    filter_duality_J,
    from_hemimorphism,
    hom_bijection_sweep,
    j_component,
    make_package,
    operator_to_coalg,
    spectrum,
    spectrum_relation,
)
from kleislab.errors import NotHemimorphism, SourceTargetMismatch
from kleislab.finstruct import (
    MonotoneMap,
    all_spec_relations,
    chain,
    discrete,
    empty_rel,
    identity_rel,
    monotone_map,
)
from kleislab.instances import Filter
from kleislab.lattice import (
    HEMI,
    HOM,
    TOP_MEET,
    LatticeMap,
    chain_lattice,
    enumerate_lattice_maps,
    identity_lattice_map,
    lattice_iso,
)
from kleislab.monadkit import KleisliMorphism, check_adjunction

C2 = chain(2, "ab")


def _le(P):
    return {(x, y) for x in P.elements for y in P.elements if P.le(x, y)}


def test_identity_relation_gives_identity():
    assert J_spec(identity_rel(C2)) == identity_lattice_map(J_obj(C2))


def test_empty_relation_gives_bottom():
    h = J_spec(empty_rel(C2, C2))
    assert set(h.table) == {J_obj(C2).bottom}


@pytest.mark.parametrize("X", list(posets(2)), ids=repr)
@pytest.mark.parametrize("Y", list(posets(2)), ids=repr)
def test_J_spec_matches_oracle(X, Y):
    for r in all_spec_relations(X, Y):
        ref = oracles.J_of(r.pairs, X.elements, Y.elements, _le(Y))
        h = J_spec(r)
        assert {B: h(B) for B in ref} == ref


def test_two_chain_hom_set():
    rels = all_spec_relations(C2, C2)
    hemis = enumerate_lattice_maps(J_obj(C2), J_obj(C2), HEMI)
    assert len(rels) == len(hemis) == 6
    assert {J_spec(r) for r in rels} == set(hemis)


def test_from_hemimorphism_inverts():
    for h in enumerate_lattice_maps(J_obj(C2), J_obj(C2), HEMI):
        assert J_spec(from_hemimorphism(h)) == h
    assert from_hemimorphism(identity_lattice_map(J_obj(C2))) == identity_rel(C2)


def test_from_hemimorphism_rejects_non_hemimorphism():
    L = J_obj(C2)
    top = [L.top] * len(L)
    with pytest.raises(NotHemimorphism):
        from_hemimorphism(LatticeMap(L, L, top))


def test_sweep_small():
    items = list(hom_bijection_sweep(list(posets(2))))
    pairs = [i for i in items if i["kind"] == "pair"]
    assert all(i["bijective"] and i["identity"] for i in pairs)
    assert all(i["functorial"] for i in items if i["kind"] == "triple")


def test_spectrum_examples():
    assert len(spectrum(chain_lattice(2))) == 1
    S = spectrum(chain_lattice(3))
    assert len(S) == 2 and len(S.cover_pairs()) == 1


@pytest.mark.parametrize("X", list(posets(4)), ids=repr)
def test_eval_unit_is_iso(X):
    ev = eval_unit(X)
    assert sorted(ev.table) == list(range(len(X)))
    assert all(X.le_idx(i, j) == ev.target.le_idx(ev.table[i], ev.table[j]) for i in range(len(X)) for j in range(len(X)))


def test_spectrum_relation_recovers_relation():
    X = discrete("pq")
    for r in all_spec_relations(C2, X):
        s = spectrum_relation(J_spec(r))
        f, g = eval_unit(C2), eval_unit(X)
        assert all(s.rows[f.table[i]] >> g.table[j] & 1 == r.rows[i] >> j & 1 for i in range(2) for j in range(2))


@pytest.mark.parametrize("name", PACKAGES)
def test_j_bijective_on_small_objects(name):
    p = make_package(name)
    objs = list(sets(3)) if name != "specrel_dlat" else list(posets(3))
    for X in objs:
        res = j_component(p, X)
        assert res["injective"] and res["surjective"], res
    assert check_j(p, objs[:3]).ok


def test_j_counts():
    assert j_component("specrel_dlat", C2)["size_T"] == 3
    assert j_component("specrel_dlat", C2)["size_hom"] == 3
    r = j_component("rel_cabool", discrete("ab"))
    assert r["size_T"] == r["size_hom"] == 4
    r = j_component("rel_cabool", discrete(""))
    assert r["size_T"] == r["size_hom"] == 1


def test_powerset_j_determined_by_largest_element():
    # a join-preserving map P(X) -> 2 is fixed by the largest set it sends to 0
    p = make_package("rel_cabool")
    X = discrete("abc")
    for a in p.monad.obj(X).elements:
        phi = p.j(X, a)
        zero = [U for U in J_obj(X).elements if U not in phi]
        assert max(zero, key=len) == frozenset(X.elements) - a


def test_filter_constant_improper():
    X = discrete("ab")
    k = KleisliMorphism(X, X, monotone_map(X, make_package("setF_cabool_meet").monad.obj(X), lambda x: Filter(frozenset())))
    h = filter_duality_J(k)
    assert set(h.table) == {J_obj(X).top}
    assert h.has(TOP_MEET)


def test_filter_unit_gives_identity():
    T = make_package("setF_cabool_meet").monad
    X = discrete("ab")
    k = KleisliMorphism(X, X, T.unit_map(X))
    assert filter_duality_J(k) == identity_lattice_map(J_obj(X))


@pytest.mark.parametrize("flags", [HEMI, HOM, TOP_MEET], ids=["hemi", "hom", "top_meet"])
def test_algebraic_adjunction_triangles(flags):
    P = list(posets(2))
    assert check_adjunction(algebraic_adjunction(flags), P, [J_obj(X) for X in P]).ok


def test_comparison_functor_agrees_with_J():
    p = make_package("specrel_dlat")
    for r in all_spec_relations(C2, C2):
        assert J_via_comparison(p, r) == J_spec(r)


def test_coalgebra_translation_examples():
    c = Coalgebra(C2, identity_rel(C2))
    assert coalg_to_operator(c).op == identity_lattice_map(J_obj(C2))
    e = coalg_to_operator(Coalgebra(C2, empty_rel(C2, C2)))
    assert set(e.op.table) == {J_obj(C2).bottom}
    ops = enumerate_lattice_maps(J_obj(C2), J_obj(C2), HEMI)
    assert len(all_spec_relations(C2, C2)) == len(ops) == 6
    for o in ops:
        a = OperatorAlgebra(J_obj(C2), o)
        assert coalg_to_operator(operator_to_coalg(a)) == a


def test_coalgebra_rejects_foreign_step():
    with pytest.raises(SourceTargetMismatch):
        Coalgebra(C2, identity_rel(discrete("ab")))


def test_coalgebra_morphisms_on_two_chain():
    rels = all_spec_relations(C2, C2)
    r = coalgebra_category_check(C2, C2, rels, rels)
    assert r["mismatch"] is None
    assert r["rel_morphisms"] == r["alg_morphisms"] == 25


def test_J_map_is_preimage():
    f = MonotoneMap(C2, C2, [1, 1])
    g = J_map(f)
    assert g.has(HOM)
    assert g(frozenset("a")) == frozenset()


def test_essential_surjectivity_small():
    lattices = [chain_lattice(n) for n in range(1, 5)] + [J_obj(discrete("ab"))]
    for L, X in essential_surjectivity(lattices, list(posets(3))):
        assert X is not None and lattice_iso(J_obj(X), L) is not None


def test_stone_restriction():
    V, Vh = make_package("specrel_dlat"), make_package("stonerel_bool")
    X = discrete("abc")
    assert [V.j(X, a) for a in V.monad.obj(X).elements] == [Vh.j(X, a) for a in Vh.monad.obj(X).elements]
