"""Finite distributive lattices, their maps, and the Birkhoff correspondence."""

from __future__ import annotations

from itertools import product as _cartesian

from . import config
from .errors import NotALattice, NotDistributive, SourceTargetMismatch, UnknownElement
from .finstruct import FinPoset, bits, down_masks, popcount, poset_iso
from .search import backtrack

PRESERVES_BOTTOM = "preserves_bottom"
PRESERVES_JOINS = "preserves_finite_joins"
PRESERVES_TOP = "preserves_top"
PRESERVES_MEETS = "preserves_finite_meets"

ALL_FLAGS = frozenset({PRESERVES_BOTTOM, PRESERVES_JOINS, PRESERVES_TOP, PRESERVES_MEETS})
HEMI = frozenset({PRESERVES_BOTTOM, PRESERVES_JOINS})
TOP_MEET = frozenset({PRESERVES_TOP, PRESERVES_MEETS})
HOM = ALL_FLAGS


class DistLattice:
    """Extensional finite distributive lattice.

    Elements are the labels of ``carrier``; ``join``/``meet`` are index tables.
    When the lattice was built as the down-set lattice of a poset,
    ``generator`` is that poset and ``rep[i]`` the down-set mask of element i.
    """

    __slots__ = ("carrier", "join", "meet", "bottom", "top", "generator", "rep", "_hash")

    def __init__(self, carrier, join, meet, bottom, top, generator=None, rep=None):
        self.carrier = carrier
        self.join = tuple(tuple(r) for r in join)
        self.meet = tuple(tuple(r) for r in meet)
        self.bottom = bottom
        self.top = top
        self.generator = generator
        self.rep = None if rep is None else tuple(rep)
        self._hash = None

    def __len__(self):
        return len(self.carrier)

    @property
    def elements(self):
        return self.carrier.elements

    def __eq__(self, other):
        if not isinstance(other, DistLattice):
            return NotImplemented
        return self.carrier == other.carrier and self.join == other.join and self.meet == other.meet

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.carrier, self.join))
        return self._hash

    def __repr__(self):
        return f"DistLattice({len(self)} elements)"

    def idx(self, x):
        try:
            return self.carrier.index[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not a lattice element", witness=x) from None

    def label(self, i):
        return self.carrier.elements[i]

    @property
    def bottom_label(self):
        return self.label(self.bottom)

    @property
    def top_label(self):
        return self.label(self.top)

    def join_of(self, x, y):
        return self.label(self.join[self.idx(x)][self.idx(y)])

    def meet_of(self, x, y):
        return self.label(self.meet[self.idx(x)][self.idx(y)])

    def join_all(self, idxs):
        out = self.bottom
        for i in idxs:
            out = self.join[out][i]
        return out

    def le_idx(self, i, j):
        return self.carrier.le_idx(i, j)


def _lub_table(P):
    n = len(P)
    table = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            ub = P.up[a] & P.up[b]
            least = [c for c in bits(ub) if P.up[c] & ub == ub]
            if len(least) != 1:
                raise NotALattice(
                    f"{P.elements[a]!r} and {P.elements[b]!r} have no least upper bound",
                    witness=(P.elements[a], P.elements[b]),
                )
            table[a][b] = table[b][a] = least[0]
    return table


def _glb_table(P):
    n = len(P)
    table = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            lb = P.down[a] & P.down[b]
            great = [c for c in bits(lb) if P.down[c] & lb == lb]
            if len(great) != 1:
                raise NotALattice(
                    f"{P.elements[a]!r} and {P.elements[b]!r} have no greatest lower bound",
                    witness=(P.elements[a], P.elements[b]),
                )
            table[a][b] = table[b][a] = great[0]
    return table


def distributivity_witness(join, meet):
    n = len(join)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    return (x, y, z)
    return None


def lattice_from_order(P, check_distributive=True):
    """Validate the poset ``P`` as a distributive lattice (eager O(n^3) check).

    ``check_distributive=False`` only checks the lattice axioms; callers use
    it when distributivity follows from a later isomorphism check.
    """
    if len(P) == 0:
        raise NotALattice("the empty poset has no bottom or top")
    join, meet = _lub_table(P), _glb_table(P)
    w = distributivity_witness(join, meet) if check_distributive else None
    if w is not None:
        raise NotDistributive(
            "x /\\ (y \\/ z) != (x /\\ y) \\/ (x /\\ z)",
            witness=tuple(P.elements[i] for i in w),
        )
    bottom = next(i for i in range(len(P)) if P.up[i] == P.full)
    top = next(i for i in range(len(P)) if P.down[i] == P.full)
    return DistLattice(P, join, meet, bottom, top)


def downset_lattice(P):
    """Lattice of down-sets (opens) of ``P`` under inclusion."""
    masks = down_masks(P)
    pos = {m: i for i, m in enumerate(masks)}
    labels = [P.labels_of(m) for m in masks]
    up = []
    for m in masks:
        u = 0
        for j, m2 in enumerate(masks):
            if m & ~m2 == 0:
                u |= 1 << j
        up.append(u)
    carrier = FinPoset(labels, up)
    join = [[pos[a | b] for b in masks] for a in masks]
    meet = [[pos[a & b] for b in masks] for a in masks]
    L = DistLattice(carrier, join, meet, pos[0], pos[P.full], generator=P, rep=masks)
    if config.CHECKS:
        assert distributivity_witness(L.join, L.meet) is None
    return L


def two():
    """The two-element lattice ``{} < {'*'}`` (down-sets of a point)."""
    return downset_lattice(FinPoset(["*"], [1]))


def join_irreducible_idxs(L):
    out = []
    for x in range(len(L)):
        if x == L.bottom:
            continue
        if all(L.join[a][b] != x for a in range(len(L)) for b in range(len(L)) if a != x and b != x):
            out.append(x)
    return out


def join_irreducibles(L):
    """Sub-poset of join-irreducible elements."""
    mask = 0
    for i in join_irreducible_idxs(L):
        mask |= 1 << i
    return L.carrier.subposet(mask)


def birkhoff_rep(L):
    """``L`` as a down-set lattice of its join-irreducibles, with the element map.

    Returns ``(J, phi)`` where ``phi[i]`` is the index in ``J`` of element i.
    """
    P = join_irreducibles(L)
    J = downset_lattice(P)
    jis = join_irreducible_idxs(L)
    phi = []
    for x in range(len(L)):
        mask = 0
        for k, j in enumerate(jis):
            if L.le_idx(j, x):
                mask |= 1 << k
        phi.append(J.rep.index(mask))
    return J, tuple(phi)


# ---------------------------------------------------------------------------
# maps


class LatticeMap:
    __slots__ = ("source", "target", "table", "verified_class")

    def __init__(self, source, target, table, verified_class=None):
        self.source = source
        self.target = target
        self.table = tuple(table)
        self.verified_class = frozenset(map_flags(source, target, self.table)) if verified_class is None else verified_class

    def __call__(self, x):
        return self.target.label(self.table[self.source.idx(x)])

    def __eq__(self, other):
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return (self.source, self.target, self.table) == (other.source, other.target, other.table)

    def __hash__(self):
        return hash((self.source, self.target, self.table))

    def __repr__(self):
        return f"LatticeMap({self.as_dict()!r}, {sorted(self.verified_class)})"

    def as_dict(self):
        return {x: self(x) for x in self.source.elements}

    def has(self, flags):
        return frozenset(flags) <= self.verified_class

    @property
    def is_hemimorphism(self):
        return HEMI <= self.verified_class


def map_flags(L, M, table):
    flags = set()
    n = len(L)
    if table[L.bottom] == M.bottom:
        flags.add(PRESERVES_BOTTOM)
    if table[L.top] == M.top:
        flags.add(PRESERVES_TOP)
    if all(table[L.join[a][b]] == M.join[table[a]][table[b]] for a in range(n) for b in range(a + 1, n)):
        flags.add(PRESERVES_JOINS)
    if all(table[L.meet[a][b]] == M.meet[table[a]][table[b]] for a in range(n) for b in range(a + 1, n)):
        flags.add(PRESERVES_MEETS)
    return flags


def classify_map(table, L, M):
    """LatticeMap carrying exactly the preservation flags that hold.

    ``table`` is a ``{element: element}`` mapping (or callable) on labels.
    """
    get = table if callable(table) else table.__getitem__
    idx = []
    for x in L.elements:
        try:
            y = get(x)
        except KeyError:
            raise UnknownElement(f"map undefined at {x!r}", witness=x) from None
        idx.append(M.idx(y))
    return LatticeMap(L, M, idx)


def identity_lattice_map(L):
    return LatticeMap(L, L, range(len(L)), ALL_FLAGS)


def compose_lattice_maps(f, g):
    """``g . f``."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of f differs from source of g")
    return LatticeMap(f.source, g.target, [g.table[j] for j in f.table])


def enumerate_lattice_maps(L, M, flags=HEMI):
    """Every map ``L -> M`` preserving ``flags``, by constraint backtracking."""
    flags = frozenset(flags)
    n = len(L)
    order = L.carrier.linear_extension()
    pos = {x: k for k, x in enumerate(order)}
    domains = [range(len(M))] * n
    checks = [[] for _ in range(n)]

    def at(*xs):
        return checks[max(pos[x] for x in xs)]

    def bind(i, j, k, op_L, op_M):
        a, b, c = pos[i], pos[j], pos[k]
        return lambda v: v[c] == op_M[v[a]][v[b]]

    if PRESERVES_BOTTOM in flags:
        domains[pos[L.bottom]] = (M.bottom,)
    if PRESERVES_TOP in flags:
        # intersect: on the one-element lattice bottom and top coincide
        domains[pos[L.top]] = tuple(v for v in domains[pos[L.top]] if v == M.top)
    for a in range(n):
        for b in range(a + 1, n):
            if PRESERVES_JOINS in flags:
                c = L.join[a][b]
                at(a, b, c).append(bind(a, b, c, L.join, M.join))
            if PRESERVES_MEETS in flags:
                c = L.meet[a][b]
                at(a, b, c).append(bind(a, b, c, L.meet, M.meet))
    out = []
    for vals in backtrack(domains, checks):
        table = [vals[pos[x]] for x in range(n)]
        out.append(LatticeMap(L, M, table))
    out.sort(key=lambda f: f.table)
    return out


def brute_force_maps(L, M, flags=HEMI):
    """Oracle: filter all ``|M|^|L|`` tables."""
    flags = frozenset(flags)
    out = []
    for table in _cartesian(range(len(M)), repeat=len(L)):
        if flags <= map_flags(L, M, table):
            out.append(LatticeMap(L, M, table))
    return out


# ---------------------------------------------------------------------------
# Boolean algebras and isomorphism


class BoolWitness:
    __slots__ = ("lattice", "complement")

    def __init__(self, lattice, complement):
        self.lattice = lattice
        self.complement = tuple(complement)

    def __call__(self, x):
        L = self.lattice
        return L.label(self.complement[L.idx(x)])


def is_boolean(L):
    """Complement table if every element has a complement, else ``None``."""
    comp = []
    for x in range(len(L)):
        c = [y for y in range(len(L)) if L.join[x][y] == L.top and L.meet[x][y] == L.bottom]
        if not c:
            return None
        comp.append(c[0])
    return BoolWitness(L, comp)


def lattice_iso(L, M):
    """An isomorphism ``L -> M`` as an index table, or ``None``.

    Backtracks on the join-irreducible posets, extends by joins and checks the
    result against both operation tables.
    """
    if len(L) != len(M):
        return None
    jl, jm = join_irreducible_idxs(L), join_irreducible_idxs(M)
    if len(jl) != len(jm):
        return None
    PL = L.carrier.subposet(sum(1 << i for i in jl))
    PM = M.carrier.subposet(sum(1 << i for i in jm))
    t = poset_iso(PL, PM)
    if t is None:
        return None
    phi = []
    for x in range(len(L)):
        phi.append(M.join_all(jm[t[k]] for k, j in enumerate(jl) if L.le_idx(j, x)))
    if len(set(phi)) != len(L):
        return None
    n = len(L)
    for a in range(n):
        for b in range(n):
            if phi[L.join[a][b]] != M.join[phi[a]][phi[b]] or phi[L.meet[a][b]] != M.meet[phi[a]][phi[b]]:
                return None
    return tuple(phi)


def chain_lattice(n):
    """The ``n``-element chain as a distributive lattice (``n >= 1``)."""
    from .finstruct import chain

    return lattice_from_order(chain(n))


def is_chain(P):
    return all(popcount(P.up[i]) + popcount(P.down[i]) == len(P) + 1 for i in range(len(P)))
