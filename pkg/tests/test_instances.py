import pytest

import oracles
from kleislab.catalog import posets
from kleislab.errors import EncodingError
from kleislab.finstruct import MonotoneMap, chain, discrete
from kleislab.instances import (
    Filter,
    FilterInstance,
    PowersetInstance,
    VHatInstance,
    VietorisInstance,
    decode_filter,
    filter_mult,
    filter_mult_literal,
    get_instance,
    literal_filters,
    vietoris_map,
    vietoris_object,
)


@pytest.mark.parametrize("n", range(4))
def test_every_finite_filter_is_principal(n):
    X = discrete("abc"[:n])
    F = FilterInstance()
    encoded = {decode_filter(X, f) for f in F.obj(X).elements}
    assert encoded == set(literal_filters(X.elements))
    assert len(encoded) == 2**n


@pytest.mark.parametrize("n", range(3))
def test_filter_mult_matches_literal(n):
    X = discrete("ab"[:n])
    T = FilterInstance()
    FFX = T.obj(T.obj(X))
    for A in FFX.elements:
        assert filter_mult_literal(X, A) == decode_filter(X, filter_mult(A, X))


def test_filter_mult_rejects_bad_encoding():
    with pytest.raises(EncodingError):
        filter_mult(Filter(frozenset({"a"})))
    with pytest.raises(EncodingError):
        filter_mult(Filter(frozenset({Filter(frozenset({"z"}))})), discrete("a"))


def test_improper_filter_contains_everything():
    assert frozenset() in Filter(frozenset())
    assert frozenset("a") not in Filter(frozenset("ab"))


@pytest.mark.parametrize("P", list(posets(3)), ids=repr)
def test_vietoris_object_matches_oracle(P):
    le = {(x, y) for x in P.elements for y in P.elements if P.le(x, y)}
    VX = vietoris_object(P)
    assert set(VX.elements) == set(oracles.up_sets(P.elements, le))
    for A in VX.elements:
        for B in VX.elements:
            assert VX.le(A, B) == (B <= A)


def test_vietoris_of_two_chain():
    VX = vietoris_object(chain(2, "ab"))
    assert len(VX) == 3
    assert len(VX.cover_pairs()) == 2


def test_vietoris_count_matches_build():
    T = VietorisInstance()
    for P in posets(4):
        assert T.count_obj(P, 10**6) == len(vietoris_object(P))


def test_vietoris_map_is_up_closed_image():
    X, Y = discrete("ab"), chain(2, "pq")
    f = MonotoneMap(X, Y, [1, 0])
    Vf = vietoris_map(f)
    assert Vf(frozenset("a")) == frozenset("q")
    assert Vf(frozenset("b")) == frozenset("pq")
    assert Vf.non_monotone_witness() is None


def test_powerset_sizes():
    T = PowersetInstance()
    assert len(T.obj(discrete("abc"))) == 8
    assert T.mult(None, frozenset({frozenset("a"), frozenset("bc")})) == frozenset("abc")


def test_vhat_requires_discrete():
    T = VHatInstance()
    assert T.base.is_object(discrete("ab"))
    assert not T.base.is_object(chain(2))


def test_registry():
    assert get_instance("filter").name == "filter"
    with pytest.raises(KeyError):
        get_instance("nope")
