import random

import pytest

from kleislab.catalog import posets, sets
from kleislab.finstruct import chain, discrete
from kleislab.instances import PowersetInstance, VietorisInstance
from kleislab.monadkit import (
    IdentityMonad,
    KleisliMorphism,
    check_adjunction,
    check_em_algebra,
    check_monad_laws,
    free_algebra,
    kleisli_adjunction,
    kleisli_compose,
    kleisli_identity,
    sample_morphisms,
)


class DroppingPowerset(PowersetInstance):
    """Union that forgets one element: violates the unit laws."""

    name = "dropping"

    def mult(self, X, A):
        out = frozenset().union(*A)
        return out - {min(out, default=None)} if len(out) > 1 else out


class TopVietoris(VietorisInstance):
    """Unit sends everything to the whole space: fails unit_left."""

    name = "top"

    def unit(self, X, x):
        return frozenset(X.elements)


def _laws(report):
    return {e["law"]: e["status"] == "pass" for e in report.entries}


def test_identity_monad_passes():
    r = check_monad_laws(IdentityMonad(), list(posets(3)))
    assert r.ok


def test_powerset_passes_with_morphisms():
    objs = list(sets(3))
    ms = sample_morphisms(objs, random.Random(0), per_pair=2)
    r = check_monad_laws(PowersetInstance(), objs, ms)
    assert r.ok and len(r) > len(objs) * 5


def test_broken_mult_is_detected():
    r = check_monad_laws(DroppingPowerset(), [discrete("ab")])
    assert not r.ok
    assert all("witness" in e for e in r.failures)


def test_broken_unit_is_detected():
    r = check_monad_laws(TopVietoris(), [chain(2, "ab")])
    laws = _laws(r)
    assert laws["unit_left"] is False or laws["unit_right"] is False


def test_kleisli_category_laws():
    T = VietorisInstance()
    X = chain(2, "ab")
    k = KleisliMorphism(X, X, T.unit_map(X))
    assert kleisli_compose(T, kleisli_identity(T, X), k) == k
    assert kleisli_compose(T, k, kleisli_identity(T, X)) == k


@pytest.mark.parametrize("T", [PowersetInstance(), VietorisInstance()], ids=lambda t: t.name)
def test_kleisli_adjunction_triangles(T):
    objs = list(sets(2)) if T.name == "powerset" else list(posets(2))
    assert check_adjunction(kleisli_adjunction(T), objs).ok


@pytest.mark.parametrize("X", list(posets(2)), ids=repr)
def test_free_algebra_is_an_algebra(X):
    T = VietorisInstance()
    assert check_em_algebra(T, free_algebra(T, X)).ok
