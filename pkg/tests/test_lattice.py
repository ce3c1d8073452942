import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from kleislab.catalog import posets
from kleislab.errors import NotALattice, NotDistributive, SourceTargetMismatch
from kleislab.finstruct import FinPoset, build_poset, chain, discrete
from kleislab.lattice import (
    HEMI,
    HOM,
    TOP_MEET,
    birkhoff_rep,
    brute_force_maps,
    chain_lattice,
    compose_lattice_maps,
    downset_lattice,
    enumerate_lattice_maps,
    identity_lattice_map,
    is_boolean,
    join_irreducibles,
    lattice_from_order,
    lattice_iso,
    two,
)

N5 = build_poset("0abc1", [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])
M3 = build_poset("0abc1", [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])


def test_non_distributive_rejected():
    for P in (N5, M3):
        with pytest.raises(NotDistributive) as e:
            lattice_from_order(P)
        assert len(e.value.witness) == 3


def test_non_lattice_rejected():
    with pytest.raises(NotALattice):
        lattice_from_order(discrete("ab"))


def test_downset_lattice_of_chain():
    L = downset_lattice(chain(2, "ab"))
    assert list(L.elements) == [frozenset(), frozenset("a"), frozenset("ab")]
    assert L.label(L.join[1][2]) == frozenset("ab")


@pytest.mark.parametrize("P", list(posets(3)), ids=repr)
def test_birkhoff_round_trip(P):
    L = downset_lattice(P)
    J, phi = birkhoff_rep(L)
    assert lattice_iso(J, L) is not None
    assert sorted(phi) == list(range(len(L)))
    assert len(join_irreducibles(L)) == len(P)


def test_three_chain_hemimorphisms():
    L = chain_lattice(3)
    assert len(enumerate_lattice_maps(L, L, HEMI)) == 6


@pytest.mark.parametrize("X", list(posets(3)), ids=repr)
@pytest.mark.parametrize("Y", list(posets(2)), ids=repr)
@pytest.mark.parametrize("flags", [HEMI, TOP_MEET, HOM], ids=["hemi", "top_meet", "hom"])
def test_csp_matches_brute_force(X, Y, flags):
    L, M = downset_lattice(X), downset_lattice(Y)
    assert enumerate_lattice_maps(L, M, flags) == brute_force_maps(L, M, flags)


def test_one_element_lattice_has_no_homomorphism_to_two():
    # bottom and top coincide, so no map can send them to different elements
    L = downset_lattice(FinPoset([], []))
    assert enumerate_lattice_maps(L, two(), HOM) == []
    assert len(enumerate_lattice_maps(L, two(), HEMI)) == 1


def test_hemimorphisms_match_set_oracle():
    X, Y = chain(2, "ab"), discrete("pq")
    L, M = downset_lattice(X), downset_lattice(Y)
    ref = oracles.hemimorphisms(
        list(L.elements), lambda a, b: a | b, frozenset(), list(M.elements), lambda a, b: a | b, frozenset()
    )
    assert len(enumerate_lattice_maps(L, M, HEMI)) == len(ref)


def test_boolean_lattices():
    assert is_boolean(downset_lattice(discrete("abc"))) is not None
    assert is_boolean(chain_lattice(3)) is None
    B = downset_lattice(discrete("abcd"))
    diamond = downset_lattice(discrete("ab"))
    assert len(enumerate_lattice_maps(B, diamond, HEMI)) == 256


def test_compose_and_identity():
    L = chain_lattice(3)
    f = enumerate_lattice_maps(L, L, HEMI)[2]
    assert compose_lattice_maps(identity_lattice_map(L), f) == f
    with pytest.raises(SourceTargetMismatch):
        compose_lattice_maps(f, identity_lattice_map(two()))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(posets(4))))
def test_lattice_iso_detects_relabeling(P):
    L = downset_lattice(P)
    relabeled = lattice_from_order(L.carrier.relabel([f"e{i}" for i in range(len(L))]))
    assert lattice_iso(L, relabeled) is not None
