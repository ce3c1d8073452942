"""Brute-force reference implementations on plain Python sets.

Nothing here imports kleislab; the tests compare the package against these.
Orders are sets of pairs ``(x, y)`` meaning ``x <= y``.
"""

from itertools import chain, combinations, permutations, product


def subsets(xs):
    xs = list(xs)
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))]


def is_partial_order(elems, le):
    for x in elems:
        if (x, x) not in le:
            return False
    for (x, y) in le:
        if (y, x) in le and x != y:
            return False
        for (y2, z) in le:
            if y == y2 and (x, z) not in le:
                return False
    return True


def labeled_posets(n):
    """Every partial order on ``range(n)`` by filtering all relations."""
    elems = list(range(n))
    off = [(x, y) for x in elems for y in elems if x != y]
    diag = {(x, x) for x in elems}
    out = []
    for extra in subsets(off):
        le = diag | extra
        if is_partial_order(elems, le):
            out.append(frozenset(le))
    return out


def iso_classes(n):
    """Number of posets on ``n`` points up to isomorphism."""
    seen = set()
    classes = 0
    for le in labeled_posets(n):
        if le in seen:
            continue
        classes += 1
        for p in permutations(range(n)):
            seen.add(frozenset((p[x], p[y]) for x, y in le))
    return classes


def down_sets(elems, le):
    return [S for S in subsets(elems) if all(x in S for y in S for x in elems if (x, y) in le)]


def up_sets(elems, le):
    return [S for S in subsets(elems) if all(y in S for x in S for y in elems if (x, y) in le)]


def spec_relations(X, leX, Y, leY):
    """Pair sets closed under ``x' <= x r y <= y'``."""
    pairs = [(x, y) for x in X for y in Y]
    out = []
    for R in subsets(pairs):
        ok = all((x2, y2) in R for (x, y) in R for x2 in X for y2 in Y if (x2, x) in leX and (y, y2) in leY)
        if ok:
            out.append(R)
    return out


def compose(R, S):
    """``S . R``."""
    return frozenset((x, z) for (x, y) in R for (y2, z) in S if y == y2)


def J_of(R, X, Y, leY):
    """``B |-> {x | R(x) meets B}`` on down-sets of Y."""
    return {B: frozenset(x for x in X if any((x, y) in R for y in B)) for B in down_sets(Y, leY)}


def hemimorphisms(L, join, bottom, M, joinM, bottomM):
    """All maps ``L -> M`` preserving bottom and binary joins (tables as dicts)."""
    out = []
    for vals in product(M, repeat=len(L)):
        f = dict(zip(L, vals))
        if f[bottom] != bottomM:
            continue
        if all(f[join(a, b)] == joinM(f[a], f[b]) for a in L for b in L):
            out.append(f)
    return out


def monotone_maps(X, leX, Y, leY):
    out = []
    for vals in product(Y, repeat=len(X)):
        f = dict(zip(X, vals))
        if all((f[a], f[b]) in leY for (a, b) in leX):
            out.append(f)
    return out
