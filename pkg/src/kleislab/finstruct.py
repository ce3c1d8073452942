"""Finite posets read as finite spectral spaces.

Order convention used throughout the package: ``x <= y`` means ``y`` lies in
the closure of ``{x}``.  Opens are therefore the down-sets and closed sets are
the up-sets.  The Sierpinski space ``{0, 1}`` with ``{1}`` open has ``1 < 0``.

Subsets are stored as int bitmasks over the element sequence of their poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian

from . import config
from .errors import (
    AntisymmetryViolation,
    NotMonotone,
    NotOpenMap,
    NotWeakeningClosed,
    SizeCapExceeded,
    SourceTargetMismatch,
    UnknownLabel,
)


def bits(mask):
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask):
    return bin(mask).count("1")


class FinPoset:
    """Finite partial order on a sequence of distinct hashable labels.

    ``up[i]`` is the mask of elements ``>= i`` and ``down[i]`` the mask of
    elements ``<= i``; both include ``i`` itself.
    """

    __slots__ = ("elements", "index", "up", "down", "_hash")

    def __init__(self, elements, up):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.up = tuple(up)
        n = len(self.elements)
        down = [0] * n
        for i in range(n):
            for j in bits(self.up[i]):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._hash = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self.index

    def __eq__(self, other):
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self.elements == other.elements and self.up == other.up

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.elements, self.up))
        return self._hash

    def __repr__(self):
        covers = [(self.elements[i], self.elements[j]) for i, j in self.cover_pairs()]
        return f"FinPoset({list(self.elements)!r}, covers={covers!r})"

    @property
    def full(self):
        return (1 << len(self.elements)) - 1

    def le(self, x, y):
        """``x <= y`` on labels."""
        return bool(self.up[self.index[x]] >> self.index[y] & 1)

    def le_idx(self, i, j):
        return bool(self.up[i] >> j & 1)

    def order_pairs(self):
        """All label pairs ``(x, y)`` with ``x <= y``."""
        return {(self.elements[i], self.elements[j]) for i in range(len(self)) for j in bits(self.up[i])}

    def cover_pairs(self):
        """Index pairs of the transitive reduction (Hasse covers), sorted."""
        out = []
        for i in range(len(self)):
            strict = self.up[i] & ~(1 << i)
            for j in bits(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out

    def mask_of(self, labels):
        mask = 0
        for x in labels:
            try:
                mask |= 1 << self.index[x]
            except KeyError:
                raise UnknownLabel(f"unknown element {x!r}", witness=x) from None
        return mask

    def labels_of(self, mask):
        return frozenset(self.elements[i] for i in bits(mask))

    def up_closure(self, mask):
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def down_closure(self, mask):
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def is_down_closed(self, mask):
        return self.down_closure(mask) == mask

    def is_up_closed(self, mask):
        return self.up_closure(mask) == mask

    def is_antichain(self):
        return all(self.up[i] == 1 << i for i in range(len(self)))

    def linear_extension(self):
        """Indices sorted so that every element comes after everything below it."""
        return sorted(range(len(self)), key=lambda i: (popcount(self.down[i]), i))

    def subposet(self, mask):
        """Induced order on the elements in ``mask`` (keeping their order)."""
        keep = list(bits(mask))
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            m = 0
            for j in bits(self.up[old] & mask):
                m |= 1 << pos[j]
            up.append(m)
        return FinPoset([self.elements[i] for i in keep], up)

    def relabel(self, labels):
        """Same order on a new label sequence."""
        labels = list(labels)
        if len(labels) != len(self) or len(set(labels)) != len(labels):
            raise ValueError("relabel needs one distinct label per element")
        return FinPoset(labels, self.up)


def _closure_tables(n, pairs):
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        up[i] |= 1 << j
    # Warshall on bitmasks
    for k in range(n):
        bk = 1 << k
        for i in range(n):
            if up[i] & bk:
                up[i] |= up[k]
    return up


def build_poset(labels, pairs=(), cap=None):
    """Reflexive-transitive closure of ``pairs`` on ``labels``.

    Raises ``AntisymmetryViolation`` when the closure identifies two distinct
    labels and ``UnknownLabel`` for pairs outside ``labels``.
    """
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be distinct")
    cap = config.DEFAULT_SIZE_CAP if cap is None else cap
    if cap is not None and cap >= 0 and len(labels) > cap:
        raise SizeCapExceeded(f"{len(labels)} elements exceeds the size cap {cap}")
    index = {x: i for i, x in enumerate(labels)}
    idx_pairs = []
    for x, y in pairs:
        for z in (x, y):
            if z not in index:
                raise UnknownLabel(f"pair ({x!r}, {y!r}) mentions unknown label {z!r}", witness=(x, y))
        idx_pairs.append((index[x], index[y]))
    up = _closure_tables(len(labels), idx_pairs)
    for i in range(len(labels)):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise AntisymmetryViolation(
                    f"{labels[i]!r} <= {labels[j]!r} <= {labels[i]!r}",
                    witness=(labels[i], labels[j]),
                )
    return FinPoset(labels, up)


def discrete(labels):
    """Antichain on ``labels``: the finite Stone space / finite set."""
    labels = list(labels)
    return FinPoset(labels, [1 << i for i in range(len(labels))])


def chain(n, labels=None):
    """``labels[0] < labels[1] < ...``; default labels ``0..n-1``."""
    labels = list(range(n)) if labels is None else list(labels)
    return FinPoset(labels, [((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)])


SIERPINSKI = FinPoset((1, 0), (0b11, 0b10))  # 1 < 0, {1} open


# ---------------------------------------------------------------------------
# subsets


@dataclass(frozen=True)
class SubSet:
    parent: FinPoset
    mask: int
    closure_kind: str = "none"

    def __post_init__(self):
        if self.closure_kind == "down" and not self.parent.is_down_closed(self.mask):
            raise ValueError("mask is not down-closed")
        if self.closure_kind == "up" and not self.parent.is_up_closed(self.mask):
            raise ValueError("mask is not up-closed")

    @property
    def labels(self):
        return self.parent.labels_of(self.mask)

    def __contains__(self, label):
        return bool(self.mask >> self.parent.index[label] & 1)

    def __iter__(self):
        return (self.parent.elements[i] for i in bits(self.mask))

    def __len__(self):
        return popcount(self.mask)

    def complement(self):
        kind = {"down": "up", "up": "down"}.get(self.closure_kind, "none")
        return SubSet(self.parent, self.parent.full & ~self.mask, kind)


def _enumerate_closed(n, below):
    """All masks ``S`` over ``range(n)`` with ``i in S => below[i] <= S``."""
    out = []

    def rec(i, inc, exc):
        while i < n and (inc | exc) >> i & 1:
            i += 1
        if i == n:
            out.append(inc)
            return
        b = below[i]
        if not b & exc:
            rec(i + 1, inc | b, exc)
        # elements above an excluded i are rejected later via `b & exc`
        rec(i + 1, inc, exc | (1 << i))

    rec(0, 0, 0)
    return out


def down_masks(P):
    masks = _enumerate_closed(len(P), P.down)
    masks.sort(key=lambda m: (popcount(m), m))
    return masks


def up_masks(P):
    masks = _enumerate_closed(len(P), P.up)
    masks.sort(key=lambda m: (popcount(m), m))
    return masks


def down_sets(P):
    """Every down-closed subset (= every open) of ``P``, canonically ordered."""
    return [SubSet(P, m, "down") for m in down_masks(P)]


def up_sets(P):
    """Every up-closed subset (= every closed set) of ``P``, canonically ordered."""
    return [SubSet(P, m, "up") for m in up_masks(P)]


# ---------------------------------------------------------------------------
# monotone maps


class MonotoneMap:
    __slots__ = ("source", "target", "table")

    def __init__(self, source, target, table):
        self.source = source
        self.target = target
        self.table = tuple(table)

    def __call__(self, x):
        return self.target.elements[self.table[self.source.index[x]]]

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (self.source, self.target, self.table) == (other.source, other.target, other.table)

    def __hash__(self):
        return hash((self.source, self.target, self.table))

    def __repr__(self):
        return f"MonotoneMap({self.as_dict()!r})"

    def as_dict(self):
        return {x: self(x) for x in self.source.elements}

    def image_mask(self, mask):
        out = 0
        for i in bits(mask):
            out |= 1 << self.table[i]
        return out

    def preimage_mask(self, mask):
        out = 0
        for i, j in enumerate(self.table):
            if mask >> j & 1:
                out |= 1 << i
        return out

    def is_open(self):
        """Image of every down-set is a down-set (enough to test principal ones)."""
        return all(self.target.is_down_closed(self.image_mask(d)) for d in self.source.down)

    def non_monotone_witness(self):
        src, tgt = self.source, self.target
        for i in range(len(src)):
            for j in bits(src.up[i]):
                if not tgt.le_idx(self.table[i], self.table[j]):
                    return (src.elements[i], src.elements[j])
        return None


def monotone_map(source, target, mapping):
    """Validated map from a ``{label: label}`` mapping (or callable)."""
    get = mapping if callable(mapping) else mapping.__getitem__
    table = []
    for x in source.elements:
        try:
            y = get(x)
        except KeyError:
            raise UnknownLabel(f"map undefined at {x!r}", witness=x) from None
        if y not in target.index:
            raise UnknownLabel(f"{y!r} is not an element of the target", witness=(x, y))
        table.append(target.index[y])
    f = MonotoneMap(source, target, table)
    w = f.non_monotone_witness()
    if w is not None:
        raise NotMonotone(f"{w[0]!r} <= {w[1]!r} but images are not ordered", witness=w)
    return f


def identity_map(P):
    return MonotoneMap(P, P, range(len(P)))


def compose_maps(f, g):
    """``g . f`` (``f`` applied first)."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of f differs from source of g")
    return MonotoneMap(f.source, g.target, [g.table[j] for j in f.table])


def all_monotone_maps(X, Y):
    """Every monotone map ``X -> Y`` in lexicographic table order."""
    order = X.linear_extension()
    n = len(X)
    table = [0] * n
    out = []

    def rec(k):
        if k == n:
            out.append(MonotoneMap(X, Y, table))
            return
        i = order[k]
        allowed = Y.full
        for j in bits(X.down[i] & ~(1 << i)):
            allowed &= Y.up[table[j]]
        for v in bits(allowed):
            table[i] = v
            rec(k + 1)

    rec(0)
    out.sort(key=lambda f: f.table)
    return out


# ---------------------------------------------------------------------------
# relations


class SpecRelation:
    """Weakening-closed relation ``X -/-> Y``; ``rows[i]`` is the fiber of ``X[i]``."""

    __slots__ = ("source", "target", "rows")

    def __init__(self, source, target, rows):
        self.source = source
        self.target = target
        self.rows = tuple(rows)

    def __eq__(self, other):
        if not isinstance(other, SpecRelation):
            return NotImplemented
        return (self.source, self.target, self.rows) == (other.source, other.target, other.rows)

    def __hash__(self):
        return hash((self.source, self.target, self.rows))

    def __repr__(self):
        return f"SpecRelation({sorted(self.pairs, key=repr)!r})"

    @property
    def pairs(self):
        X, Y = self.source, self.target
        return frozenset((X.elements[i], Y.elements[j]) for i, row in enumerate(self.rows) for j in bits(row))

    def holds(self, x, y):
        return bool(self.rows[self.source.index[x]] >> self.target.index[y] & 1)

    def fiber(self, x):
        return self.target.labels_of(self.rows[self.source.index[x]])

    def image_mask(self, mask):
        out = 0
        for i in bits(mask):
            out |= self.rows[i]
        return out


def weakening_witness(X, Y, rows):
    """First ``(x, x', y', y)`` with ``x <= x' r y' <= y`` but not ``x r y``."""
    for i in range(len(X)):
        for i2 in bits(X.up[i]):
            for j2 in bits(rows[i2]):
                missing = Y.up[j2] & ~rows[i]
                if missing:
                    j = next(bits(missing))
                    return (X.elements[i], X.elements[i2], Y.elements[j2], Y.elements[j])
    return None


def is_weakening_closed(X, Y, rows):
    for i in range(len(X)):
        if Y.up_closure(rows[i]) != rows[i]:
            return False
        for i2 in bits(X.up[i]):
            if rows[i2] & ~rows[i]:
                return False
    return True


def check_spec_relation(pairs, X, Y):
    """Validate a raw pair set as a spectral relation ``X -/-> Y``."""
    rows = [0] * len(X)
    for x, y in pairs:
        if x not in X.index:
            raise UnknownLabel(f"{x!r} is not in the source", witness=(x, y))
        if y not in Y.index:
            raise UnknownLabel(f"{y!r} is not in the target", witness=(x, y))
        rows[X.index[x]] |= 1 << Y.index[y]
    w = weakening_witness(X, Y, rows)
    if w is not None:
        x, x2, y2, y = w
        raise NotWeakeningClosed(
            f"{x!r} <= {x2!r} r {y2!r} <= {y!r} but not {x!r} r {y!r}", witness=w
        )
    return SpecRelation(X, Y, rows)


def empty_rel(X, Y):
    return SpecRelation(X, Y, [0] * len(X))


def full_rel(X, Y):
    return SpecRelation(X, Y, [Y.full] * len(X))


def _kleisli_composite_rows(r, s):
    """Rows of ``m . V(s^) . r^`` computed literally through up-sets of Z."""
    Z = s.target
    closed = up_masks(Z)
    out = []
    for row in r.rows:
        # V(s^)(r(x)): closure in VZ (reverse inclusion) of {s(y) | y in r(x)}
        images = [s.rows[j] for j in bits(row)]
        hyper = [C for C in closed if any(C & ~A == 0 for A in images)]
        union = 0
        for C in hyper:
            union |= C
        out.append(union)
    return out


def compose_rel(r, s):
    """``s . r``: first ``r: X -/-> Y`` then ``s: Y -/-> Z``."""
    if r.target != s.source:
        raise SourceTargetMismatch("target of r differs from source of s")
    rows = [s_img for s_img in (_image(s, row) for row in r.rows)]
    if config.CHECKS:
        assert is_weakening_closed(r.source, s.target, rows), "composite lost weakening-closure"
        assert rows == _kleisli_composite_rows(r, s), "Kleisli composite differs from relational one"
    return SpecRelation(r.source, s.target, rows)


def _image(s, mask):
    out = 0
    for j in bits(mask):
        out |= s.rows[j]
    return out


def identity_rel(X):
    """Kleisli identity: the order relation ``<=`` itself."""
    return SpecRelation(X, X, X.up)


def lower_graph(f):
    """``f_*``: ``x f_* y`` iff ``f(x) <= y``."""
    return SpecRelation(f.source, f.target, [f.target.up[j] for j in f.table])


def upper_graph(f, openness_required=True):
    """``f^*: Y -/-> X`` with ``y f^* x`` iff ``y <= f(x)``."""
    if openness_required and not f.is_open():
        raise NotOpenMap("image of some down-set is not a down-set", witness=f.as_dict())
    X, Y = f.source, f.target
    rows = [0] * len(Y)
    for i, j in enumerate(f.table):
        for y in bits(Y.down[j]):
            rows[y] |= 1 << i
    w = weakening_witness(Y, X, rows)
    if w is not None:
        raise NotWeakeningClosed("f^* is not weakening-closed", witness=w)
    return SpecRelation(Y, X, rows)


def all_spec_relations(X, Y):
    """Brute force over all ``2^(|X||Y|)`` pair sets, keeping the valid ones."""
    m, n = len(X), len(Y)
    out = []
    for code in range(1 << (m * n)):
        rows = [(code >> (i * n)) & ((1 << n) - 1) for i in range(m)]
        if is_weakening_closed(X, Y, rows):
            out.append(SpecRelation(X, Y, rows))
    return out


# ---------------------------------------------------------------------------
# sums and products


def poset_sum(X1, X2):
    """Topological sum with labels ``(0, x)`` / ``(1, y)`` and both injections."""
    n1 = len(X1)
    labels = [(0, x) for x in X1.elements] + [(1, y) for y in X2.elements]
    up = list(X1.up) + [m << n1 for m in X2.up]
    S = FinPoset(labels, up)
    i1 = MonotoneMap(X1, S, range(n1))
    i2 = MonotoneMap(X2, S, range(n1, n1 + len(X2)))
    return S, i1, i2


def poset_product(X1, X2):
    """Componentwise order on ``X1 x X2`` (labels ``(x, y)``) and projections."""
    n2 = len(X2)
    labels = [(x, y) for x in X1.elements for y in X2.elements]
    up = []
    for i in range(len(X1)):
        for j in range(n2):
            m = 0
            for i2 in bits(X1.up[i]):
                m |= X2.up[j] << (i2 * n2)
            up.append(m)
    P = FinPoset(labels, up)
    p1 = MonotoneMap(P, X1, [i for i, _ in _cartesian(range(len(X1)), range(n2))])
    p2 = MonotoneMap(P, X2, [j for _, j in _cartesian(range(len(X1)), range(n2))])
    return P, p1, p2


def poset_iso(P, Q):
    """An order isomorphism ``P -> Q`` as an index table, or ``None``."""
    n = len(P)
    if n != len(Q):
        return None

    def sig(R, i):
        return (popcount(R.down[i]), popcount(R.up[i]))

    sp = [sig(P, i) for i in range(n)]
    sq = [sig(Q, j) for j in range(n)]
    if sorted(sp) != sorted(sq):
        return None
    order = P.linear_extension()
    table = [-1] * n
    used = 0

    def rec(k):
        nonlocal used
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used >> j & 1 or sq[j] != sp[i]:
                continue
            ok = True
            for i2 in order[:k]:
                j2 = table[i2]
                if P.le_idx(i2, i) != Q.le_idx(j2, j) or P.le_idx(i, i2) != Q.le_idx(j, j2):
                    ok = False
                    break
            if ok:
                table[i] = j
                used |= 1 << j
                if rec(k + 1):
                    return True
                used &= ~(1 << j)
        table[i] = -1
        return False

    return tuple(table) if rec(0) else None
