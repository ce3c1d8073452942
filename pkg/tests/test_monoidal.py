import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleislab.catalog import posets
from kleislab.duality import J_obj, J_spec
from kleislab.errors import NotBimorphism, SourceTargetMismatch
from kleislab.finstruct import (
    MonotoneMap,
    all_spec_relations,
    chain,
    compose_rel,
    discrete,
    empty_rel,
    full_rel,
    identity_rel,
    lower_graph,
    poset_sum,
)
from kleislab.lattice import HEMI, chain_lattice, enumerate_lattice_maps, identity_lattice_map, lattice_iso
from kleislab.monoidal import (
    ONE,
    bang_dual,
    bang_rel,
    bi_ideal_tensor,
    check_diag_and_bang,
    check_unique_factorisation,
    check_vietoris_sum_iso,
    compose_after_p,
    diag_rel,
    diagonal_condition,
    down_directed_condition,
    enumerate_bimorphisms,
    factor_bimorphism,
    is_partial_map,
    is_total,
    joint_successor,
    joint_successor_report,
    lattice_tensor,
    make_bimorphism,
    meet_bimorphism,
    pairing,
    partial_map_report,
    preserves_top,
    smallest_element_condition,
    specrel_coproduct,
    specrel_product,
    tensor_poset,
    tensor_rel,
    vietoris_prod_adjunction,
)

C2 = chain(2, "ab")
AB = discrete("pq")
SMALL = list(posets(2))


def test_simplest_product_is_not_the_tensor():
    S, _, _ = specrel_product(ONE, ONE)
    assert S.is_antichain() and len(S) == 2
    assert len(all_spec_relations(ONE, S)) == 4
    assert len(all_spec_relations(ONE, tensor_poset(ONE, ONE))) == 2


def test_product_with_empty():
    E = discrete("")
    S, p1, _ = specrel_product(C2, E)
    assert len(S) == 2
    assert compose_rel(p1, identity_rel(C2)) == p1


@pytest.mark.parametrize("Z", SMALL, ids=repr)
def test_pairing_is_unique_mediator(Z):
    X1, X2 = C2, ONE
    S, p1, p2 = specrel_product(X1, X2)
    for r in all_spec_relations(Z, X1):
        for s in all_spec_relations(Z, X2):
            hits = [t for t in all_spec_relations(Z, S) if compose_rel(t, p1) == r and compose_rel(t, p2) == s]
            assert hits == [pairing(r, s, S)]


def test_pairing_with_empty():
    r = identity_rel(C2)
    t = pairing(r, empty_rel(C2, ONE))
    S, p1, _ = specrel_product(C2, ONE)
    assert compose_rel(t, p1) == r
    assert pairing(empty_rel(C2, C2), empty_rel(C2, C2)).rows == (0, 0)
    with pytest.raises(SourceTargetMismatch):
        pairing(r, identity_rel(ONE))


def test_coproduct_injections_are_lower_graphs():
    S, i1, i2 = specrel_coproduct(ONE, ONE)
    _, j1, j2 = poset_sum(ONE, ONE)
    assert i1 == lower_graph(j1) and i2 == lower_graph(j2)


def test_tensor_of_identities_is_identity():
    assert tensor_rel(identity_rel(C2), identity_rel(AB)) == identity_rel(tensor_poset(C2, AB))
    assert tensor_rel(empty_rel(C2, C2), identity_rel(AB)).rows == (0,) * 4


def test_interchange_law():
    rels = all_spec_relations(C2, C2)
    for r in rels[::2]:
        for r2 in rels[1::2]:
            s, s2 = identity_rel(ONE), full_rel(ONE, ONE)
            lhs = compose_rel(tensor_rel(r, s), tensor_rel(r2, s2))
            assert lhs == tensor_rel(compose_rel(r, r2), compose_rel(s, s2))


@pytest.mark.parametrize("X1", list(posets(2)), ids=repr)
@pytest.mark.parametrize("X2", list(posets(2)), ids=repr)
def test_vietoris_of_sum(X1, X2):
    res = check_vietoris_sum_iso(X1, X2)
    assert res["f_monotone"] and res["g_monotone"] and res["gf_identity"] and res["fg_identity"]


def test_vietoris_sum_sizes():
    assert check_vietoris_sum_iso(ONE, ONE)["sizes"] == (4, 4)


def test_vietoris_product_adjunction_example():
    res = vietoris_prod_adjunction(C2, C2)
    assert res["unit"] and res["counit"]
    Pi, can = res["Pi"], res["can"]
    VP = Pi.target
    W = frozenset({("a", "b"), ("b", "a"), ("b", "b")})
    full = frozenset((x, y) for x in "ab" for y in "ab")
    back = VP.elements[Pi.table[can.table[VP.index[W]]]]
    assert back == full
    assert VP.le(back, W)


def test_tensor_sizes():
    assert len(lattice_tensor(J_obj(ONE), J_obj(ONE)).tensor_lattice) == 2
    C3 = J_obj(C2)
    assert len(lattice_tensor(C3, C3).tensor_lattice) == 6
    E = J_obj(discrete(""))
    assert len(lattice_tensor(C3, E).tensor_lattice) == 1


@pytest.mark.parametrize("X", SMALL, ids=repr)
@pytest.mark.parametrize("Y", SMALL, ids=repr)
def test_bi_ideal_tensor_matches(X, Y):
    t = lattice_tensor(J_obj(X), J_obj(Y))
    assert lattice_iso(t.tensor_lattice, bi_ideal_tensor(J_obj(X), J_obj(Y))) is not None


def test_p_factors_through_identity():
    t = lattice_tensor(J_obj(C2), J_obj(AB))
    g = factor_bimorphism(t.universal, t)
    assert g == identity_lattice_map(t.tensor_lattice)


def test_meet_factors_as_diagonal():
    t = lattice_tensor(J_obj(C2), J_obj(C2))
    assert factor_bimorphism(meet_bimorphism(C2), t) == J_spec(diag_rel(C2))


def test_join_is_not_a_bimorphism():
    L = J_obj(C2)
    with pytest.raises(NotBimorphism):
        make_bimorphism(L, L, L, L.join)


@pytest.mark.parametrize("X", SMALL, ids=repr)
@pytest.mark.parametrize("Y", SMALL, ids=repr)
def test_unique_factorisation_into_chain(X, Y):
    res = check_unique_factorisation(X, Y, C2)
    assert res["failures"] == [] and res["non_bimorphic_composites"] == 0
    assert res["bimorphisms"] == res["hemimorphisms"]


def test_bimorphism_count_matches_hemimorphisms():
    L = J_obj(C2)
    t = lattice_tensor(L, L)
    assert len(enumerate_bimorphisms(L, L, L)) == len(enumerate_lattice_maps(t.tensor_lattice, L, HEMI))


def test_compose_after_p_round_trip():
    L = J_obj(C2)
    t = lattice_tensor(L, L)
    for f in enumerate_bimorphisms(L, L, chain_lattice(2))[:20]:
        assert compose_after_p(factor_bimorphism(f, t), t) == f.table


def test_totality_examples():
    assert is_total(full_rel(AB, AB)) and preserves_top(J_spec(full_rel(AB, AB)))
    assert not is_total(empty_rel(AB, AB)) and not preserves_top(J_spec(empty_rel(AB, AB)))


@pytest.mark.parametrize("X", list(posets(2)), ids=repr)
@pytest.mark.parametrize("Y", list(posets(2)), ids=repr)
def test_totality_dictionary(X, Y):
    for r in all_spec_relations(X, Y):
        assert is_total(r) == preserves_top(J_spec(r))


def test_partial_map_examples():
    f = MonotoneMap(C2, AB, [0, 0])
    assert is_partial_map(lower_graph(f))
    rep = partial_map_report(full_rel(AB, AB))
    assert not any(rep.values())
    assert not smallest_element_condition(full_rel(AB, AB))
    assert not down_directed_condition(full_rel(AB, AB))
    assert not diagonal_condition(full_rel(AB, AB))
    assert is_partial_map(empty_rel(AB, AB))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(posets(3))), st.sampled_from(list(posets(2))), st.data())
def test_partial_map_conditions_agree(X, Y, data):
    r = data.draw(st.sampled_from(all_spec_relations(X, Y)))
    assert len(set(partial_map_report(r).values())) == 1


def test_joint_successor_examples():
    full, empty = full_rel(C2, C2), empty_rel(C2, C2)
    assert joint_successor(full, empty)
    assert not joint_successor(empty, empty)
    with pytest.raises(SourceTargetMismatch):
        joint_successor_report(full, identity_rel(ONE))


def test_joint_successor_exhaustive_small():
    rels = all_spec_relations(C2, AB)
    for r in rels:
        for s in rels:
            assert len(set(joint_successor_report(r, s).values())) == 1


def test_diagonal_and_bang():
    assert diag_rel(ONE).rows == identity_rel(ONE).rows  # 1 (x) 1 is 1 up to relabelling
    h = J_spec(bang_rel(C2))
    assert h.table == bang_dual(C2).table
    assert [h(B) for B in J_obj(ONE).elements] == [frozenset(), frozenset("ab")]
    for X in posets(3):
        assert all(check_diag_and_bang(X).values())
