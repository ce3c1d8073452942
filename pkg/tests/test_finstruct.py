import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from kleislab.catalog import posets, random_poset
from kleislab.errors import AntisymmetryViolation, NotMonotone, NotOpenMap, NotWeakeningClosed, SourceTargetMismatch, UnknownLabel
from kleislab.finstruct import (
    SIERPINSKI,
    SubSet,
    all_spec_relations,
    build_poset,
    chain,
    check_spec_relation,
    compose_rel,
    discrete,
    down_sets,
    empty_rel,
    full_rel,
    identity_rel,
    lower_graph,
    monotone_map,
    poset_iso,
    poset_product,
    poset_sum,
    up_sets,
    upper_graph,
)


def _order(P):
    return set(P.order_pairs())


def test_closure_and_le():
    P = build_poset("abc", [("a", "b"), ("b", "c")])
    assert P.le("a", "c")
    assert not P.le("c", "a")
    assert list(P.cover_pairs()) == [(0, 1), (1, 2)]


def test_antisymmetry_rejected_with_witness():
    with pytest.raises(AntisymmetryViolation) as e:
        build_poset("ab", [("a", "b"), ("b", "a")])
    assert set(e.value.witness) == {"a", "b"}


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        build_poset("ab", [("a", "z")])


def test_sierpinski_has_one_below_zero():
    assert SIERPINSKI.le(1, 0)
    assert not SIERPINSKI.le(0, 1)
    # {1} is the open point: a down-set
    assert frozenset({1}) in {S.labels for S in down_sets(SIERPINSKI)}


@pytest.mark.parametrize("P", list(posets(4)), ids=lambda P: repr(P))
def test_down_and_up_sets_match_oracle(P):
    le = _order(P)
    assert {S.labels for S in down_sets(P)} == set(oracles.down_sets(P.elements, le))
    assert {S.labels for S in up_sets(P)} == set(oracles.up_sets(P.elements, le))


def test_grid_has_six_down_sets():
    P = poset_product(chain(2), chain(2))[0]
    assert len(down_sets(P)) == 6


def test_subset_closure_kind():
    P = chain(2)
    SubSet(P, 0b01, "down")
    with pytest.raises(Exception):
        SubSet(P, 0b10, "down")
    assert SubSet(P, 0b10, "up").complement().mask == 0b01


def test_monotone_map_validation():
    X, Y = chain(2), discrete("pq")
    with pytest.raises(NotMonotone):
        monotone_map(X, Y, {0: "p", 1: "q"})


@pytest.mark.parametrize("X", list(posets(2)), ids=repr)
@pytest.mark.parametrize("Y", list(posets(2)), ids=repr)
def test_spec_relations_match_oracle(X, Y):
    ours = {r.pairs for r in all_spec_relations(X, Y)}
    ref = set(oracles.spec_relations(X.elements, _order(X), Y.elements, _order(Y)))
    assert ours == ref


def test_specrel_chain_count():
    # all 2^4 pair sets on the 2-chain, filtered by weakening-closure
    assert len(all_spec_relations(chain(2), chain(2))) == 6


def test_weakening_witness_is_a_quadruple():
    X, Y = chain(2, "ab"), discrete("p")
    with pytest.raises(NotWeakeningClosed) as e:
        check_spec_relation([("b", "p")], X, Y)
    assert e.value.witness == ("a", "b", "p", "p")


def test_identity_is_order_and_neutral():
    X = build_poset("abc", [("a", "c")])
    Y = chain(2)
    assert identity_rel(X).pairs == frozenset(_order(X))
    for r in all_spec_relations(X, Y):
        assert compose_rel(identity_rel(X), r) == r
        assert compose_rel(r, identity_rel(Y)) == r


def test_compose_mismatch():
    with pytest.raises(SourceTargetMismatch):
        compose_rel(empty_rel(chain(1), chain(2)), empty_rel(chain(1), chain(1)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_composition_matches_pair_oracle(seed, a, b, c):
    rng = random.Random(seed)
    X, Y, Z = (random_poset(n, rng) for n in (a, b, c))
    rs, ss = all_spec_relations(X, Y), all_spec_relations(Y, Z)
    r, s = rng.choice(rs), rng.choice(ss)
    assert compose_rel(r, s).pairs == oracles.compose(r.pairs, s.pairs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_composition_associative(seed):
    rng = random.Random(seed)
    W, X, Y, Z = (random_poset(rng.randint(1, 3), rng) for _ in range(4))
    r = rng.choice(all_spec_relations(W, X))
    s = rng.choice(all_spec_relations(X, Y))
    t = rng.choice(all_spec_relations(Y, Z))
    assert compose_rel(compose_rel(r, s), t) == compose_rel(r, compose_rel(s, t))


def test_lower_and_upper_graphs():
    X = chain(2, "ab")
    Y = chain(3, "pqr")
    f = monotone_map(X, Y, {"a": "p", "b": "r"})
    assert lower_graph(f).pairs == {("a", "p"), ("a", "q"), ("a", "r"), ("b", "r")}
    with pytest.raises(NotOpenMap):
        upper_graph(f)
    S, i1, i2 = poset_sum(X, discrete("z"))
    assert upper_graph(i1).pairs == {((0, "a"), "a"), ((0, "a"), "b"), ((0, "b"), "b")}


def test_empty_and_full():
    X = chain(2)
    assert full_rel(X, X).pairs == {(x, y) for x in X.elements for y in X.elements}
    assert empty_rel(X, X).pairs == frozenset()


def test_sum_and_product_shapes():
    S, _, _ = poset_sum(chain(2), chain(1))
    assert len(S) == 3 and len(list(S.cover_pairs())) == 1
    P, p1, p2 = poset_product(chain(2), chain(2))
    assert len(P) == 4 and len(list(P.cover_pairs())) == 4
    assert p1((1, 0)) == 1 and p2((1, 0)) == 0


def test_poset_iso():
    P = build_poset("abc", [("a", "c"), ("b", "c")])
    Q = build_poset("xyz", [("y", "x"), ("z", "x")])
    t = poset_iso(P, Q)
    assert t is not None and Q.elements[t[2]] == "x"
    assert poset_iso(P, chain(3)) is None
