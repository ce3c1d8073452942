"""Products, tensors and the relation/lattice property dictionary.

In the category of spectral relations the sum of posets is both product and
coproduct; the genuinely monoidal structure is the tensor ``X (x) Y``, the
product poset, acting on relations componentwise.  On the algebraic side the
tensor of ``JX`` and ``JY`` is ``J(X (x) Y)`` with universal bimorphism
``p(A, B) = A x B``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config
from .duality import J_obj, J_spec, _rep_pos
from .errors import NotBimorphism, SourceTargetMismatch
from .finstruct import (
    FinPoset,
    MonotoneMap,
    SpecRelation,
    bits,
    compose_rel,
    lower_graph,
    poset_product,
    poset_sum,
    upper_graph,
    up_masks,
)
from .instances import vietoris_object
from .lattice import (
    HEMI,
    PRESERVES_MEETS,
    PRESERVES_TOP,
    DistLattice,
    LatticeMap,
    enumerate_lattice_maps,
    lattice_from_order,
)
from .search import backtrack

ONE = FinPoset(["*"], [1])


# ---------------------------------------------------------------------------
# sums as products and coproducts


def specrel_product(X1, X2):
    """``X1 + X2`` with projections ``i1^*``, ``i2^*`` (upper graphs of the injections)."""
    S, i1, i2 = poset_sum(X1, X2)
    return S, upper_graph(i1), upper_graph(i2)


def specrel_coproduct(X1, X2):
    """``X1 + X2`` with injections ``i1_*``, ``i2_*`` (lower graphs)."""
    S, i1, i2 = poset_sum(X1, X2)
    return S, lower_graph(i1), lower_graph(i2)


def pairing(r, s, S=None):
    """``<r, s>: Z -/-> X1 + X2``: ``z`` relates to ``(0, x)`` iff ``z r x``, to ``(1, x)`` iff ``z s x``."""
    if r.source != s.source:
        raise SourceTargetMismatch("pairing needs relations with a common source")
    if S is None:
        S = poset_sum(r.target, s.target)[0]
    n1 = len(r.target)
    return SpecRelation(r.source, S, [a | (b << n1) for a, b in zip(r.rows, s.rows)])


def copairing(r, s, S=None):
    """``[r, s]: X1 + X2 -/-> Z``."""
    if r.target != s.target:
        raise SourceTargetMismatch("copairing needs relations with a common target")
    if S is None:
        S = poset_sum(r.source, s.source)[0]
    return SpecRelation(S, r.target, list(r.rows) + list(s.rows))


# ---------------------------------------------------------------------------
# tensor of relations


def tensor_poset(X, Y):
    return poset_product(X, Y)[0]


def _pi_mask(A, B, n2):
    """``A x B`` as a mask over the product indices."""
    out = 0
    for i in bits(A):
        out |= B << (i * n2)
    return out


def tensor_rel(r, s):
    """``(x, y) (r (x) s) (x', y')`` iff ``x r x'`` and ``y s y'``."""
    P, Q = tensor_poset(r.source, s.source), tensor_poset(r.target, s.target)
    n2 = len(s.target)
    rows = [_pi_mask(a, b, n2) for a in r.rows for b in s.rows]
    out = SpecRelation(P, Q, rows)
    if config.CHECKS:
        assert out == _tensor_via_pi(r, s, P, Q)
    return out


def _tensor_via_pi(r, s, P, Q):
    # Pi . (r^ x s^): pair of closed sets sent to their product, read off labels
    rows = []
    for x in r.source.elements:
        for y in s.source.elements:
            W = frozenset((a, b) for a in r.fiber(x) for b in s.fiber(y))
            rows.append(Q.mask_of(W))
    return SpecRelation(P, Q, rows)


def diagonal_map(X):
    P = tensor_poset(X, X)
    n = len(X)
    return MonotoneMap(X, P, [i * n + i for i in range(n)])


def diag_rel(X):
    """``Delta_*: X -/-> X (x) X``."""
    return lower_graph(diagonal_map(X))


def bang_rel(X):
    """``!_*: X -/-> 1``, the full relation."""
    return lower_graph(MonotoneMap(X, ONE, [0] * len(X)))


# ---------------------------------------------------------------------------
# Vietoris structure maps


def vietoris_sum_iso(X1, X2):
    """``f: V(X1 + X2) -> VX1 x VX2``, ``C |-> (C n X1, C n X2)``, and its inverse ``g``."""
    S, _, _ = poset_sum(X1, X2)
    VS = vietoris_object(S)
    V1, V2 = vietoris_object(X1), vietoris_object(X2)
    Prod = poset_product(V1, V2)[0]
    ftab = []
    for C in VS.elements:
        A1 = frozenset(x for tag, x in C if tag == 0)
        A2 = frozenset(x for tag, x in C if tag == 1)
        ftab.append(Prod.index[(A1, A2)])
    gtab = []
    for A1, A2 in Prod.elements:
        gtab.append(VS.index[frozenset((0, x) for x in A1) | frozenset((1, x) for x in A2)])
    return MonotoneMap(VS, Prod, ftab), MonotoneMap(Prod, VS, gtab)


def check_vietoris_sum_iso(X1, X2):
    f, g = vietoris_sum_iso(X1, X2)
    return {
        "f_monotone": f.non_monotone_witness() is None,
        "g_monotone": g.non_monotone_witness() is None,
        "gf_identity": [g.table[j] for j in f.table] == list(range(len(f.source))),
        "fg_identity": [f.table[j] for j in g.table] == list(range(len(g.source))),
        "sizes": (len(f.source), len(g.source)),
    }


def vietoris_prod_adjunction(X1, X2):
    """Check ``Pi -| can`` between ``VX1 x VX2`` and ``V(X1 (x) X2)`` pointwise.

    ``Pi(A, B) = A x B`` and ``can = <V pi1, V pi2>``; the order on each ``V``
    is reverse inclusion.
    """
    P, p1, p2 = poset_product(X1, X2)
    V1, V2, VP = vietoris_object(X1), vietoris_object(X2), vietoris_object(P)
    Prod = poset_product(V1, V2)[0]
    n2 = len(X2)
    pos_P = {m: k for k, m in enumerate(up_masks(P))}
    masks1, masks2 = up_masks(X1), up_masks(X2)

    pi_tab = []
    for a, A in enumerate(masks1):
        for b, B in enumerate(masks2):
            pi_tab.append(pos_P[_pi_mask(A, B, n2)])
    Pi = MonotoneMap(Prod, VP, pi_tab)

    can_tab = []
    for W in up_masks(P):
        A = X1.up_closure(p1.image_mask(W))
        B = X2.up_closure(p2.image_mask(W))
        can_tab.append(Prod.index[(X1.labels_of(A), X2.labels_of(B))])
    can = MonotoneMap(VP, Prod, can_tab)

    unit_fail = next(
        (Prod.elements[k] for k in range(len(Prod)) if not Prod.le_idx(k, can.table[Pi.table[k]])), None
    )
    counit_fail = next(
        (VP.elements[w] for w in range(len(VP)) if not VP.le_idx(Pi.table[can.table[w]], w)), None
    )
    return {
        "Pi_monotone": Pi.non_monotone_witness() is None,
        "can_monotone": can.non_monotone_witness() is None,
        "unit": unit_fail is None,
        "counit": counit_fail is None,
        "witness": unit_fail if unit_fail is not None else counit_fail,
        "Pi": Pi,
        "can": can,
    }


# ---------------------------------------------------------------------------
# bimorphisms and the lattice tensor


@dataclass(frozen=True)
class Bimorphism:
    left: DistLattice
    right: DistLattice
    target: DistLattice
    table: tuple  # table[a][b] -> target index

    def __call__(self, a, b):
        return self.target.label(self.table[self.left.idx(a)][self.right.idx(b)])


def bimorphism_witness(left, right, target, table):
    """First violated clause, or ``None`` when ``table`` is a bimorphism."""
    L, M, N = left, right, target
    for b in range(len(M)):
        if table[L.bottom][b] != N.bottom:
            return ("bottom", L.label(L.bottom), M.label(b))
        for a in range(len(L)):
            for a2 in range(len(L)):
                if table[L.join[a][a2]][b] != N.join[table[a][b]][table[a2][b]]:
                    return ("join_left", L.label(a), L.label(a2), M.label(b))
    for a in range(len(L)):
        if table[a][M.bottom] != N.bottom:
            return ("bottom", L.label(a), M.label(M.bottom))
        for b in range(len(M)):
            for b2 in range(len(M)):
                if table[a][M.join[b][b2]] != N.join[table[a][b]][table[a][b2]]:
                    return ("join_right", L.label(a), M.label(b), M.label(b2))
    return None


def make_bimorphism(left, right, target, table):
    table = tuple(tuple(row) for row in table)
    w = bimorphism_witness(left, right, target, table)
    if w is not None:
        raise NotBimorphism("map is not a hemimorphism in each argument", witness=w)
    return Bimorphism(left, right, target, table)


@dataclass(frozen=True)
class TensorPackage:
    left_poset: FinPoset
    right_poset: FinPoset
    tensor_lattice: DistLattice
    universal: Bimorphism


def lattice_tensor(L, M):
    """``JX (x) JY = J(X (x) Y)`` with ``p(A, B) = A x B``."""
    X, Y = L.generator, M.generator
    if X is None or Y is None:
        raise ValueError("tensor needs lattices presented as down-set lattices")
    P = tensor_poset(X, Y)
    T = J_obj(P)
    pos = _rep_pos(T)
    n2 = len(Y)
    table = [[pos[_pi_mask(A, B, n2)] for B in M.rep] for A in L.rep]
    return TensorPackage(X, Y, T, make_bimorphism(L, M, T, table))


def compose_after_p(g, t):
    """``g . p`` as a bimorphism table."""
    p = t.universal
    return tuple(tuple(g.table[c] for c in row) for row in p.table)


def factor_bimorphism(f, t):
    """The hemimorphism ``g`` with ``g . p = f``: ``g(W) = join{f(A, B) | A x B <= W}``."""
    w = bimorphism_witness(f.left, f.right, f.target, f.table)
    if w is not None:
        raise NotBimorphism("cannot factor a non-bimorphism", witness=w)
    T, p, N = t.tensor_lattice, t.universal, f.target
    boxes = [(a, b, T.rep[p.table[a][b]]) for a in range(len(f.left)) for b in range(len(f.right))]
    table = []
    for W in T.rep:
        acc = N.bottom
        for a, b, box in boxes:
            if box & ~W == 0:
                acc = N.join[acc][f.table[a][b]]
        table.append(acc)
    g = LatticeMap(T, N, table)
    if config.CHECKS:
        assert g.is_hemimorphism and compose_after_p(g, t) == f.table
    return g


def enumerate_bimorphisms(L, M, N):
    """All bimorphisms ``L x M -> N`` by constraint backtracking over cells."""
    nL, nM = len(L), len(M)
    order_L = L.carrier.linear_extension()
    order_M = M.carrier.linear_extension()
    cells = [(a, b) for a in order_L for b in order_M]
    pos = {c: k for k, c in enumerate(cells)}
    domains = [range(len(N))] * len(cells)
    checks = [[] for _ in cells]
    for (a, b), k in pos.items():
        if a == L.bottom or b == M.bottom:
            domains[k] = (N.bottom,)

    def eq(c, c1, c2):
        return lambda v: v[c] == N.join[v[c1]][v[c2]]

    for b in range(nM):
        for a in range(nL):
            for a2 in range(a + 1, nL):
                c, c1, c2 = pos[(L.join[a][a2], b)], pos[(a, b)], pos[(a2, b)]
                checks[max(c, c1, c2)].append(eq(c, c1, c2))
    for a in range(nL):
        for b in range(nM):
            for b2 in range(b + 1, nM):
                c, c1, c2 = pos[(a, M.join[b][b2])], pos[(a, b)], pos[(a, b2)]
                checks[max(c, c1, c2)].append(eq(c, c1, c2))
    out = []
    for vals in backtrack(domains, checks):
        table = tuple(tuple(vals[pos[(a, b)]] for b in range(nM)) for a in range(nL))
        out.append(Bimorphism(L, M, N, table))
    out.sort(key=lambda f: f.table)
    return out


def check_unique_factorisation(X, Y, Z):
    """Every bimorphism ``JX x JY -> JZ`` factors through ``p`` by exactly one hemimorphism."""
    L, M, N = J_obj(X), J_obj(Y), J_obj(Z)
    t = lattice_tensor(L, M)
    buckets = {}
    for g in enumerate_lattice_maps(t.tensor_lattice, N, HEMI):
        buckets.setdefault(compose_after_p(g, t), []).append(g)
    bims = enumerate_bimorphisms(L, M, N)
    failures = []
    for f in bims:
        hits = buckets.get(f.table, [])
        g = factor_bimorphism(f, t)
        if len(hits) != 1 or hits[0] != g:
            failures.append({"bimorphism": f.table, "factorisations": len(hits)})
    stray = [k for k in buckets if bimorphism_witness(L, M, N, k) is not None]
    return {
        "bimorphisms": len(bims),
        "hemimorphisms": sum(len(v) for v in buckets.values()),
        "failures": failures,
        "non_bimorphic_composites": len(stray),
    }


def bi_ideal_tensor(L, M):
    """Independent tensor of join-semilattices: bi-ideals of ``L x M`` under inclusion.

    A bi-ideal is a down-set containing every ``(bot, b)`` and ``(a, bot)``
    that is closed under joins in either coordinate with the other fixed.
    """
    nL, nM = len(L), len(M)
    cells = [(a, b) for a in range(nL) for b in range(nM)]
    cid = {c: k for k, c in enumerate(cells)}
    below = []
    for a, b in cells:
        m = 0
        for a2 in range(nL):
            if L.le_idx(a2, a):
                for b2 in range(nM):
                    if M.le_idx(b2, b):
                        m |= 1 << cid[(a2, b2)]
        below.append(m)

    row_mask = [0] * nL
    col_mask = [0] * nM
    for k, (a, b) in enumerate(cells):
        row_mask[a] |= 1 << k
        col_mask[b] |= 1 << k

    def close(S, new):
        # S is closed except possibly around the cells in ``new``
        work = list(bits(new))
        S |= new
        while work:
            k = work.pop()
            a, b = cells[k]
            add = below[k] & ~S
            for k2 in bits(S & col_mask[b]):
                add |= 1 << cid[(L.join[a][cells[k2][0]], b)]
            for k2 in bits(S & row_mask[a]):
                add |= 1 << cid[(a, M.join[b][cells[k2][1]])]
            add &= ~S
            if add:
                S |= add
                work.extend(bits(add))
        return S

    base = 0
    for a in range(nL):
        base |= 1 << cid[(a, M.bottom)]
    for b in range(nM):
        base |= 1 << cid[(L.bottom, b)]
    start = close(0, base)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for k in range(len(cells)):
                if not S >> k & 1:
                    T = close(S, 1 << k)
                    if T not in seen:
                        seen.add(T)
                        nxt.append(T)
        frontier = nxt
    ideals = sorted(seen, key=lambda m: (bin(m).count("1"), m))
    up = []
    for S in ideals:
        u = 0
        for j, S2 in enumerate(ideals):
            if S & ~S2 == 0:
                u |= 1 << j
        up.append(u)
    # distributivity is not checked here; it follows from lattice_iso with J(X (x) Y)
    return lattice_from_order(FinPoset(list(range(len(ideals))), up), check_distributive=False)


# ---------------------------------------------------------------------------
# relational properties and their algebraic counterparts


def is_total(r):
    return all(r.rows)


def preserves_top(h):
    return h.has({PRESERVES_TOP})


def smallest_element_condition(r):
    """(i) each fiber is empty or has a smallest element."""
    Y = r.target
    return all(row == 0 or any(Y.up[j] == row for j in bits(row)) for row in r.rows)


def down_directed_condition(r):
    """(ii) each fiber is empty or down-directed within itself."""
    Y = r.target
    for row in r.rows:
        for j in bits(row):
            for k in bits(row):
                if not Y.down[j] & Y.down[k] & row:
                    return False
    return True


def diagonal_condition(r):
    """(iii) ``(r (x) r) . Delta_* = Delta_* . r``."""
    return compose_rel(diag_rel(r.source), tensor_rel(r, r)) == compose_rel(r, diag_rel(r.target))


def partial_map_report(r):
    h = J_spec(r)
    return {
        "smallest": smallest_element_condition(r),
        "directed": down_directed_condition(r),
        "diagonal": diagonal_condition(r),
        "preserves_meets": h.has({PRESERVES_MEETS}),
    }


def is_partial_map(r):
    rep = partial_map_report(r)
    values = set(rep.values())
    if len(values) != 1:
        raise AssertionError(f"partial-map conditions disagree: {rep}")
    return values.pop()


def joint_successor_report(r, s):
    if r.source != s.source or r.target != s.target:
        raise SourceTargetMismatch("joint successor needs parallel relations")
    X = r.source
    direct = all(a | b for a, b in zip(r.rows, s.rows))
    paired = pairing(r, s)
    composite = compose_rel(paired, bang_rel(paired.target)) == bang_rel(X)
    hr, hs = J_spec(r), J_spec(s)
    L = hr.target
    algebraic = L.join[hr.table[hr.source.top]][hs.table[hs.source.top]] == L.top
    return {"direct": direct, "composite": composite, "algebraic": algebraic}


def joint_successor(r, s):
    rep = joint_successor_report(r, s)
    values = set(rep.values())
    if len(values) != 1:
        raise AssertionError(f"joint-successor conditions disagree: {rep}")
    return values.pop()


def meet_bimorphism(X):
    L = J_obj(X)
    return make_bimorphism(L, L, L, L.meet)


def bang_dual(X):
    """The map ``J1 = 2 -> JX`` sending bottom to bottom and top to top."""
    L = J_obj(X)
    J1 = J_obj(ONE)
    return LatticeMap(J1, L, [L.bottom if J1.rep[k] == 0 else L.top for k in range(len(J1))])


def check_diag_and_bang(X):
    t = lattice_tensor(J_obj(X), J_obj(X))
    JD = J_spec(diag_rel(X))
    return {
        "diag_is_factor_of_meet": factor_bimorphism(meet_bimorphism(X), t) == JD,
        "diag_after_p_is_meet": compose_after_p(JD, t) == J_obj(X).meet,
        "bang_is_bottom_top": J_spec(bang_rel(X)) == bang_dual(X),
    }


__all__ = [
    "specrel_product",
    "specrel_coproduct",
    "pairing",
    "copairing",
    "tensor_poset",
    "tensor_rel",
    "diag_rel",
    "bang_rel",
    "diagonal_map",
    "vietoris_sum_iso",
    "check_vietoris_sum_iso",
    "vietoris_prod_adjunction",
    "Bimorphism",
    "make_bimorphism",
    "bimorphism_witness",
    "TensorPackage",
    "lattice_tensor",
    "factor_bimorphism",
    "compose_after_p",
    "enumerate_bimorphisms",
    "check_unique_factorisation",
    "bi_ideal_tensor",
    "is_total",
    "preserves_top",
    "smallest_element_condition",
    "down_directed_condition",
    "diagonal_condition",
    "partial_map_report",
    "is_partial_map",
    "joint_successor_report",
    "joint_successor",
    "meet_bimorphism",
    "bang_dual",
    "check_diag_and_bang",
]
