"""Deterministic catalogs of small finite objects.

Posets are enumerated up to isomorphism: every poset of size n arises from one
of size n-1 by adding a new maximal element above some down-set, so we grow
level by level and keep one canonical representative per class.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import permutations, product

from .finstruct import FinPoset, build_poset, discrete, down_masks, popcount

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def default_labels(n):
    if n <= len(LETTERS):
        return list(LETTERS[:n])
    return [f"x{i}" for i in range(n)]


def _invariant(P, i):
    below = sorted(popcount(P.down[j]) for j in range(len(P)) if P.down[i] >> j & 1)
    above = sorted(popcount(P.up[j]) for j in range(len(P)) if P.up[i] >> j & 1)
    return (popcount(P.down[i]), popcount(P.up[i]), tuple(below), tuple(above))


def _encode(P, perm):
    """Up-masks after renaming old index ``perm[k]`` to new index ``k``."""
    new_of = {old: new for new, old in enumerate(perm)}
    out = []
    for old in perm:
        m = 0
        for j in range(len(P)):
            if P.up[old] >> j & 1:
                m |= 1 << new_of[j]
        out.append(m)
    return tuple(out)


def canonical_form(P):
    """Isomorphism-invariant key of ``P`` (a tuple of up-masks)."""
    n = len(P)
    inv = [_invariant(P, i) for i in range(n)]
    classes = {}
    for i in range(n):
        classes.setdefault(inv[i], []).append(i)
    groups = [classes[k] for k in sorted(classes)]
    best = None
    for choice in product(*(permutations(g) for g in groups)):
        perm = [i for g in choice for i in g]
        enc = _encode(P, perm)
        if best is None or enc < best:
            best = enc
    return (tuple(sorted(inv)), best if best is not None else ())


def canonical_poset(P, labels=None):
    _, enc = canonical_form(P)
    return FinPoset(default_labels(len(P)) if labels is None else labels, enc)


@lru_cache(maxsize=None)
def _posets_of_size(n):
    if n == 0:
        return (FinPoset([], []),)
    seen = {}
    for P in _posets_of_size(n - 1):
        for D in down_masks(P):
            # new element n-1 sits above exactly the elements of D
            up = [m | (1 << (n - 1)) if D >> i & 1 else m for i, m in enumerate(P.up)]
            up.append(1 << (n - 1))
            Q = FinPoset(default_labels(n), up)
            key = canonical_form(Q)
            if key not in seen:
                seen[key] = FinPoset(default_labels(n), key[1])
    return tuple(seen[k] for k in sorted(seen))


def posets(max_size, min_size=0):
    """All posets with ``min_size <= |P| <= max_size`` up to isomorphism."""
    for n in range(min_size, max_size + 1):
        yield from _posets_of_size(n)


def sets(max_size, min_size=0):
    """One discrete poset (finite set) per cardinality."""
    for n in range(min_size, max_size + 1):
        yield discrete(default_labels(n))


def catalog(kind, max_size, min_size=0):
    if kind in ("set", "sets"):
        return sets(max_size, min_size)
    if kind in ("poset", "posets"):
        return posets(max_size, min_size)
    raise ValueError(f"unknown catalog kind {kind!r}")


def random_poset(n, rng, density=0.35):
    """Random poset: closure of random forward edges over a shuffled order."""
    labels = default_labels(n)
    order = list(range(n))
    rng.shuffle(order)
    pairs = [
        (labels[order[i]], labels[order[j]])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]
    return build_poset(labels, pairs)


def random_posets(count, min_size, max_size, seed=0):
    rng = random.Random(seed)
    return [random_poset(rng.randint(min_size, max_size), rng) for _ in range(count)]
