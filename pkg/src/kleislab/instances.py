"""The four concrete monads at finite scale.

* ``powerset`` on finite sets: direct image, singletons, union.
* ``filter`` on finite sets: every filter on a finite set is principal, so a
  filter is stored as its generator ``A`` (meaning ``up A``); the improper
  filter ``up {}`` is included.
* ``vietoris`` on finite posets: up-sets (closed sets) under reverse inclusion.
* ``vhat`` on finite discrete posets (finite Stone spaces).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import config
from .errors import EncodingError
from .finstruct import FinPoset, discrete, popcount, up_masks
from .monadkit import POSETS, SETS, FinCategoryView, MonadInstance

STONE = FinCategoryView(
    "Stone", SETS.is_object, SETS.is_morphism, SETS.compose, SETS.identity, object_kind="finite discrete space"
)


def _all_masks(n):
    return sorted(range(1 << n), key=lambda m: (popcount(m), m))


def _random_subset(pool, rng, density=0.5):
    return frozenset(x for x in pool if rng.random() < density)


class PowersetInstance(MonadInstance):
    name = "powerset"
    base = SETS

    def build_obj(self, X):
        return discrete([X.labels_of(m) for m in _all_masks(len(X))])

    def fmap(self, f, a):
        return frozenset(f(x) for x in a)

    def unit(self, X, x):
        return frozenset((x,))

    def mult(self, X, A):
        return frozenset().union(*A)

    def random_element(self, Y, rng, pool=None):
        return _random_subset(Y.elements if pool is None else pool, rng)


class VHatInstance(PowersetInstance):
    """Lower Vietoris transferred to finite Stone spaces; ``e(x) = {x}``."""

    name = "vhat"
    base = STONE


@dataclass(frozen=True)
class Filter:
    """Principal filter ``up base`` on a finite set."""

    base: frozenset

    def __repr__(self):
        inner = ",".join(sorted(map(repr, self.base)))
        return f"up{{{inner}}}"

    def __contains__(self, A):
        return self.base <= A


class FilterInstance(MonadInstance):
    name = "filter"
    base = SETS

    def build_obj(self, X):
        return discrete([Filter(X.labels_of(m)) for m in _all_masks(len(X))])

    def fmap(self, f, a):
        # {B | f^-1[B] in up A} = up f[A]
        return Filter(frozenset(f(x) for x in a.base))

    def unit(self, X, x):
        return Filter(frozenset((x,)))

    def mult(self, X, A):
        if config.CHECKS and X is not None and len(X) <= 2:
            assert filter_mult_literal(X, A) == decode_filter(X, filter_mult(A, X))
        return filter_mult(A)

    def random_element(self, Y, rng, pool=None):
        return Filter(_random_subset(Y.elements if pool is None else pool, rng))


def filter_mult(F, X=None):
    """``m(F) = {A | A^# in F}`` on encodings: the union of the generators.

    With ``X`` given the encoding is validated against it.
    """
    if not isinstance(F, Filter) or not all(isinstance(f, Filter) for f in F.base):
        raise EncodingError("expected a filter of filters", witness=repr(F))
    if X is not None:
        for f in F.base:
            if not f.base <= frozenset(X.elements):
                raise EncodingError("generator outside the carrier", witness=repr(f))
    return Filter(frozenset().union(*(f.base for f in F.base)))


# literal filters, used as an independent oracle for small carriers


def _subsets(labels):
    labels = list(labels)
    return [frozenset(c) for k in range(len(labels) + 1) for c in combinations(labels, k)]


def is_filter(family, universe):
    """Upward closed, closed under binary meets and containing the universe."""
    family = frozenset(family)
    subsets = _subsets(universe)
    if frozenset(universe) not in family:
        return False
    for A in family:
        for B in family:
            if A & B not in family:
                return False
        for B in subsets:
            if A <= B and B not in family:
                return False
    return True


def literal_filters(universe):
    """All filters on ``universe`` by brute force over families of subsets."""
    subsets = _subsets(universe)
    out = []
    for code in range(1 << len(subsets)):
        fam = frozenset(S for i, S in enumerate(subsets) if code >> i & 1)
        if is_filter(fam, universe):
            out.append(fam)
    return out


def decode_filter(X, f):
    """Encoded filter on ``X`` as the literal family of subsets."""
    return frozenset(S for S in _subsets(X.elements) if f.base <= S)


def filter_mult_literal(X, F):
    """``{A subset X | A^# in F}`` with everything spelled out literally."""
    FX = [Filter(S) for S in _subsets(X.elements)]
    literal_F = frozenset(
        frozenset(decode_filter(X, f) for f in fam) for fam in _subsets(FX) if F.base <= fam
    )
    out = set()
    for A in _subsets(X.elements):
        sharp = frozenset(decode_filter(X, f) for f in FX if A in decode_filter(X, f))
        if sharp in literal_F:
            out.add(A)
    return frozenset(out)


class VietorisInstance(MonadInstance):
    name = "vietoris"
    base = POSETS

    def build_obj(self, X):
        return vietoris_object(X)

    def count_obj(self, Y, limit):
        count = 0

        def rec(i, inc, exc):
            nonlocal count
            if count > limit:
                return
            while i < len(Y) and (inc | exc) >> i & 1:
                i += 1
            if i == len(Y):
                count += 1
                return
            b = Y.up[i]
            if not b & exc:
                rec(i + 1, inc | b, exc)
            rec(i + 1, inc, exc | (1 << i))

        rec(0, 0, 0)
        return count

    def fmap(self, f, a):
        Y = f.target
        return Y.labels_of(Y.up_closure(Y.mask_of(f(x) for x in a)))

    def unit(self, X, x):
        return X.labels_of(X.up[X.index[x]])

    def mult(self, X, A):
        return frozenset().union(*A)

    def random_element(self, Y, rng, pool=None):
        k = rng.randint(0, 3)
        gens = rng.sample(list(Y.elements), min(k, len(Y)))
        return Y.labels_of(Y.up_closure(Y.mask_of(gens)))


def vietoris_object(X):
    """``VX``: up-sets of ``X`` with ``A <= B`` iff ``A`` contains ``B``."""
    masks = up_masks(X)
    up = []
    for m in masks:
        u = 0
        for j, m2 in enumerate(masks):
            if m2 & ~m == 0:
                u |= 1 << j
        up.append(u)
    return FinPoset([X.labels_of(m) for m in masks], up)


_V = VietorisInstance()


def vietoris_map(f):
    """``Vf``: ``A |-> up-closure of f[A]``."""
    return _V.map(f)


INSTANCES = {
    "powerset": PowersetInstance,
    "filter": FilterInstance,
    "vietoris": VietorisInstance,
    "vhat": VHatInstance,
}


def get_instance(name):
    try:
        return INSTANCES[name]()
    except KeyError:
        raise KeyError(f"unknown monad instance {name!r}; choose from {sorted(INSTANCES)}") from None


def is_stone(X):
    return X.is_antichain()


__all__ = [
    "PowersetInstance",
    "VHatInstance",
    "FilterInstance",
    "VietorisInstance",
    "Filter",
    "filter_mult",
    "filter_mult_literal",
    "literal_filters",
    "decode_filter",
    "vietoris_object",
    "vietoris_map",
    "INSTANCES",
    "get_instance",
    "is_stone",
]
