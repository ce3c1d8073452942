"""Monads on categories of finite structures, checked by exhaustive sweeps.

Categories are intensional: a ``FinCategoryView`` is a bundle of predicates
and callables.  A monad is described elementwise (``fmap``, ``unit``, ``mult``
act on single elements) so the laws can be checked on ``T^3 X`` without
building it; ``obj`` materialises ``TX`` as a poset when needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import Mismatch, NotAMonadMorphism
from .finstruct import FinPoset, MonotoneMap, all_monotone_maps, compose_maps, identity_map


def describe(P):
    """Short stable text for a poset, e.g. ``{a,b,c|a<c,b<c}``."""
    if not isinstance(P, FinPoset):
        return repr(P)
    els = ",".join(_short(x) for x in P.elements)
    covers = ",".join(f"{_short(P.elements[i])}<{_short(P.elements[j])}" for i, j in P.cover_pairs())
    return "{" + els + ("|" + covers if covers else "") + "}"


def _short(x):
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(_short(y) for y in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(_short(y) for y in x) + ")"
    return str(x)


@dataclass(frozen=True)
class FinCategoryView:
    name: str
    is_object: Callable[[Any], bool]
    is_morphism: Callable[[Any], bool]
    compose: Callable[[Any, Any], Any]  # compose(f, g) = g . f
    identity: Callable[[Any], Any]
    equal: Callable[[Any, Any], bool] = lambda a, b: a == b
    object_kind: str = "finite poset"


def _is_monotone(f):
    return isinstance(f, MonotoneMap) and f.non_monotone_witness() is None


POSETS = FinCategoryView(
    "Spec", lambda X: isinstance(X, FinPoset), _is_monotone, compose_maps, identity_map
)
SETS = FinCategoryView(
    "Set",
    lambda X: isinstance(X, FinPoset) and X.is_antichain(),
    lambda f: isinstance(f, MonotoneMap) and f.source.is_antichain() and f.target.is_antichain(),
    compose_maps,
    identity_map,
    object_kind="finite set",
)


class FnMap:
    """Map given by a Python callable.

    ``target`` may be passed as a zero-argument callable; it is then only
    built on first access (``TTX`` can be far too large to materialise).
    """

    __slots__ = ("source", "_target", "fn")

    def __init__(self, source, target, fn):
        self.source = source
        self._target = target
        self.fn = fn

    @property
    def target(self):
        if callable(self._target) and not isinstance(self._target, FinPoset):
            self._target = self._target()
        return self._target

    def __call__(self, x):
        return self.fn(x)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    entries: list = field(default_factory=list)

    def add(self, law, obj, ok, witness=None, **extra):
        entry = {"law": law, "object": obj, "status": "pass" if ok else "fail"}
        if not ok and witness is not None:
            entry["witness"] = _jsonable(witness)
        entry.update(extra)
        self.entries.append(entry)
        return ok

    def extend(self, other):
        self.entries.extend(other.entries)
        return self

    @property
    def ok(self):
        return all(e["status"] == "pass" for e in self.entries)

    @property
    def failures(self):
        return [e for e in self.entries if e["status"] != "pass"]

    def __len__(self):
        return len(self.entries)


def _jsonable(x):
    if isinstance(x, frozenset):
        return sorted((_jsonable(y) for y in x), key=repr)
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


# ---------------------------------------------------------------------------
# monads


class MonadInstance:
    """Base class; subclasses supply ``obj``, ``fmap``, ``unit``, ``mult``.

    ``fmap(f, a)`` applies ``Tf`` to one element ``a`` of ``T(f.source)``;
    ``f`` only needs to be callable and carry ``.target``.
    """

    name = "monad"
    base = POSETS

    def __init__(self):
        self._obj_cache = {}

    def obj(self, X):
        try:
            return self._obj_cache[X]
        except KeyError:
            TX = self._obj_cache[X] = self.build_obj(X)
            return TX

    def build_obj(self, X):
        raise NotImplementedError

    def fmap(self, f, a):
        raise NotImplementedError

    def unit(self, X, x):
        raise NotImplementedError

    def mult(self, X, A):
        raise NotImplementedError

    def obj_size_log2(self, Y):
        """Upper bound for ``log2 |TY|`` without building it."""
        return len(Y)

    def random_element(self, Y, rng, pool=None):
        """Random element of ``TY`` (``pool`` restricts the generating elements)."""
        TY = self.obj(Y)
        return rng.choice(TY.elements)

    # derived maps -----------------------------------------------------

    def map(self, f):
        TX, TY = self.obj(f.source), self.obj(f.target)
        return MonotoneMap(TX, TY, [TY.index[self.fmap(f, a)] for a in TX.elements])

    def unit_map(self, X):
        TX = self.obj(X)
        return MonotoneMap(X, TX, [TX.index[self.unit(X, x)] for x in X.elements])

    def mult_map(self, X):
        TX, TTX = self.obj(X), self.obj(self.obj(X))
        return MonotoneMap(TTX, TX, [TX.index[self.mult(X, A)] for A in TTX.elements])

    def mult_fn(self, X):
        return FnMap(None, lambda: self.obj(X), lambda A: self.mult(X, A))

    def unit_fn(self, X):
        return FnMap(X, lambda: self.obj(X), lambda x: self.unit(X, x))

    def equal(self, X, a, b):
        """Equality of two elements of ``TX``."""
        return a == b


class IdentityMonad(MonadInstance):
    name = "identity"

    def build_obj(self, X):
        return X

    def fmap(self, f, a):
        return f(a)

    def unit(self, X, x):
        return x

    def mult(self, X, A):
        return A


def level_elements(T, X, level, rng, max_exhaustive=4096, samples=48):
    """Elements of ``T^level X``: all of them when affordable, else a sample.

    Returns ``(elements, exhaustive_flag)``.
    """
    if level == 0:
        return list(X.elements), True
    below, below_all = level_elements(T, X, level - 1, rng, max_exhaustive, samples)
    Y = _tower(T, X, level - 1) if below_all else None
    if Y is not None and T.obj_size_log2(Y) <= max_exhaustive.bit_length() - 1:
        return list(T.obj(Y).elements), True
    if Y is not None and hasattr(T, "count_obj") and T.count_obj(Y, max_exhaustive) <= max_exhaustive:
        return list(T.obj(Y).elements), True
    out = []
    for _ in range(samples):
        out.append(T.random_element(Y, rng, pool=below))
    # units of lower-level elements are always worth including
    out.extend(T.unit(Y, b) for b in below[: samples // 4])
    return _dedupe(out), False


def _tower(T, X, level):
    Y = X
    for _ in range(level):
        Y = T.obj(Y)
    return Y


def _dedupe(xs):
    seen, out = set(), []
    for x in xs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def sample_morphisms(objects, rng, per_pair=3, max_pairs=None):
    """Deterministic sample of monotone maps between catalog objects."""
    out = []
    pairs = [(X, Y) for X in objects for Y in objects]
    if max_pairs is not None and len(pairs) > max_pairs:
        pairs = rng.sample(pairs, max_pairs)
    for X, Y in pairs:
        maps = all_monotone_maps(X, Y)
        if len(maps) > per_pair:
            maps = rng.sample(maps, per_pair)
        out.extend(maps)
    return out


def check_monad_laws(T, sample, morphisms=None, seed=0, max_exhaustive=4096, samples=48):
    """Unit, associativity, functoriality and naturality on sampled objects.

    Each object gets one report entry per law; a failing entry carries the
    first offending element.
    """
    rng = random.Random(seed)
    report = Report()
    for X in sample:
        name = describe(X)
        if not T.base.is_object(X):
            report.add("object_in_base", name, False, witness=name)
            continue
        TX = T.obj(X)
        e = T.unit_fn(X)
        eT = T.unit_fn(TX)
        m = T.mult_fn(X)

        w = next((a for a in TX.elements if not T.equal(X, T.fmap(identity_map(X), a), a)), None)
        report.add("functor_identity", name, w is None, w, monad=T.name)

        em = T.unit_map(X)
        report.add("unit_monotone", name, em.non_monotone_witness() is None, em.non_monotone_witness(), monad=T.name)

        w = next((a for a in TX.elements if not T.equal(X, T.mult(X, eT(a)), a)), None)
        report.add("unit_left", name, w is None, w, monad=T.name)  # m . e_T = 1

        w = next((a for a in TX.elements if not T.equal(X, T.mult(X, T.fmap(e, a)), a)), None)
        report.add("unit_right", name, w is None, w, monad=T.name)  # m . Te = 1

        second, all2 = level_elements(T, X, 2, rng, max_exhaustive, samples)
        if all2:
            mm = T.mult_map(X)
            w = mm.non_monotone_witness()
            report.add("mult_monotone", name, w is None, w, monad=T.name)

        third, all3 = level_elements(T, X, 3, rng, max_exhaustive, samples)
        mT = T.mult_fn(TX)
        w = next(
            (A for A in third if not T.equal(X, T.mult(X, T.fmap(m, A)), T.mult(X, mT(A)))),
            None,
        )
        report.add("associativity", name, w is None, w, monad=T.name, exhaustive=all3, checked=len(third))

    morphisms = list(morphisms or ())
    by_source = {}
    for f in morphisms:
        by_source.setdefault(f.source, []).append(f)
    for f in morphisms:
        X, Y = f.source, f.target
        name = f"{describe(X)}->{describe(Y)}"
        w = next((x for x in X.elements if not T.equal(Y, T.fmap(f, T.unit(X, x)), T.unit(Y, f(x)))), None)
        report.add("unit_natural", name, w is None, w, monad=T.name)
        Tf = FnMap(T.obj(X), T.obj(Y), lambda a, f=f: T.fmap(f, a))
        second, all2 = level_elements(T, X, 2, rng, max_exhaustive, samples)
        w = next(
            (A for A in second if not T.equal(Y, T.mult(Y, T.fmap(Tf, A)), T.fmap(f, T.mult(X, A)))),
            None,
        )
        report.add("mult_natural", name, w is None, w, monad=T.name, exhaustive=all2)
        nexts = by_source.get(Y) or [identity_map(Y)]
        g = nexts[rng.randrange(len(nexts))]
        w = next(
            (
                a
                for a in T.obj(X).elements
                if not T.equal(g.target, T.fmap(compose_maps(f, g), a), T.fmap(g, T.fmap(f, a)))
            ),
            None,
        )
        report.add("functor_composition", name, w is None, w, monad=T.name)
    return report


# ---------------------------------------------------------------------------
# Kleisli category


@dataclass(frozen=True)
class KleisliMorphism:
    source: Any
    target: Any
    arrow: Any  # base morphism source -> T(target)


def kleisli_identity(T, X):
    return KleisliMorphism(X, X, T.unit_map(X))


def kleisli_compose(T, f, g):
    """``g . f = m_Z . Tg . f``."""
    if f.target != g.source:
        raise Mismatch("middle objects differ")
    Z = g.target
    TZ = T.obj(Z)
    table = [TZ.index[T.mult(Z, T.fmap(g.arrow, f.arrow(x)))] for x in f.source.elements]
    return KleisliMorphism(f.source, Z, MonotoneMap(f.source, TZ, table))


def kleisli_left_adjoint(T, f):
    """``F_T f = e_Y . f``."""
    return KleisliMorphism(f.source, f.target, compose_maps(f, T.unit_map(f.target)))


def kleisli_right_adjoint(T, k):
    """``G_T k = m_Y . Tk : TX -> TY``."""
    X, Y = k.source, k.target
    TX, TY = T.obj(X), T.obj(Y)
    return MonotoneMap(TX, TY, [TY.index[T.mult(Y, T.fmap(k.arrow, a))] for a in TX.elements])


def kleisli_view(T):
    return FinCategoryView(
        f"{T.base.name}_{T.name}",
        T.base.is_object,
        lambda k: isinstance(k, KleisliMorphism),
        lambda f, g: kleisli_compose(T, f, g),
        lambda X: kleisli_identity(T, X),
    )


# ---------------------------------------------------------------------------
# adjunctions


@dataclass(frozen=True)
class Adjunction:
    """``F -| G : A <-> X`` with unit ``eta_X: X -> GFX`` and counit ``eps_A: FGA -> A``."""

    A: FinCategoryView
    X: FinCategoryView
    F_obj: Callable
    F_mor: Callable
    G_obj: Callable
    G_mor: Callable
    unit: Callable
    counit: Callable


def kleisli_adjunction(T):
    K = kleisli_view(T)
    return Adjunction(
        A=K,
        X=T.base,
        F_obj=lambda X: X,
        F_mor=lambda f: kleisli_left_adjoint(T, f),
        G_obj=T.obj,
        G_mor=lambda k: kleisli_right_adjoint(T, k),
        unit=T.unit_map,
        counit=lambda A: KleisliMorphism(T.obj(A), A, identity_map(T.obj(A))),
    )


def _first_difference(a, b):
    ta = getattr(a, "arrow", a)
    tb = getattr(b, "arrow", b)
    if hasattr(ta, "table") and hasattr(tb, "table") and ta.source == tb.source:
        for x, i, j in zip(ta.source.elements, ta.table, tb.table):
            if i != j:
                return (x, ta.target.elements[i], tb.target.elements[j])
    return (repr(a), repr(b))


def check_adjunction(adj, sample_X, sample_A=None):
    """Triangle identities ``eps_F . F eta = 1`` and ``G eps . eta_G = 1``."""
    report = Report()
    for X in sample_X:
        lhs = adj.A.compose(adj.F_mor(adj.unit(X)), adj.counit(adj.F_obj(X)))
        rhs = adj.A.identity(adj.F_obj(X))
        ok = adj.A.equal(lhs, rhs)
        report.add("triangle_F", describe(X), ok, None if ok else _first_difference(lhs, rhs))
    for A in sample_A if sample_A is not None else sample_X:
        GA = adj.G_obj(A)
        lhs = adj.X.compose(adj.unit(GA), adj.G_mor(adj.counit(A)))
        rhs = adj.X.identity(GA)
        ok = adj.X.equal(lhs, rhs)
        report.add("triangle_G", describe(A), ok, None if ok else _first_difference(lhs, rhs))
    return report


def comparison_C(adj, f):
    """``C f = eps_{FY} . F f`` for a Kleisli morphism ``f: X -/-> Y``.

    ``adj`` is an adjunction whose induced monad is the one ``f`` lives in,
    i.e. ``f.arrow: X -> G F Y``.
    """
    FY = adj.F_obj(f.target)
    return adj.A.compose(adj.F_mor(f.arrow), adj.counit(FY))


# ---------------------------------------------------------------------------
# Eilenberg-Moore algebras


@dataclass(frozen=True)
class EMAlgebra:
    carrier: Any
    structure: Any  # TX -> X, callable on labels, with .target == carrier


def free_algebra(T, X):
    return EMAlgebra(T.obj(X), FnMap(T.obj(T.obj(X)), T.obj(X), lambda A: T.mult(X, A)))


def check_em_algebra(T, alg, seed=0, max_exhaustive=4096, samples=48):
    rng = random.Random(seed)
    X, a = alg.carrier, alg.structure
    report = Report()
    name = describe(X)
    w = next((x for x in X.elements if a(T.unit(X, x)) != x), None)
    report.add("algebra_unit", name, w is None, w)
    second, all2 = level_elements(T, X, 2, rng, max_exhaustive, samples)
    w = next((A for A in second if a(T.mult(X, A)) != a(T.fmap(a, A))), None)
    report.add("algebra_mult", name, w is None, w, exhaustive=all2)
    return report


# ---------------------------------------------------------------------------
# monad morphisms


@dataclass(frozen=True)
class MonadMorphism:
    """``j: T -> T'`` given elementwise by ``component(X, a)``."""

    source: MonadInstance
    target: MonadInstance
    component: Callable

    def at(self, X):
        return FnMap(self.source.obj(X), None, lambda a: self.component(X, a))


def check_monad_morphism(j, sample, morphisms=(), seed=0, max_exhaustive=4096, samples=48):
    """Unit square, multiplication square (``j^2 = T'j . j_T``) and naturality."""
    T, S = j.source, j.target
    rng = random.Random(seed)
    report = Report()
    for X in sample:
        name = describe(X)
        w = next((x for x in X.elements if not S.equal(X, j.component(X, T.unit(X, x)), S.unit(X, x))), None)
        report.add("unit_square", name, w is None, w)
        TX = T.obj(X)
        jX = FnMap(TX, S.obj(X), lambda a, X=X: j.component(X, a))
        second, all2 = level_elements(T, X, 2, rng, max_exhaustive, samples)
        w = None
        for A in second:
            j2 = S.fmap(jX, j.component(TX, A))
            if not S.equal(X, j.component(X, T.mult(X, A)), S.mult(X, j2)):
                w = A
                break
        report.add("mult_square", name, w is None, w, exhaustive=all2)
    for f in morphisms:
        X, Y = f.source, f.target
        w = next(
            (a for a in T.obj(X).elements if not S.equal(Y, j.component(Y, T.fmap(f, a)), S.fmap(f, j.component(X, a)))),
            None,
        )
        report.add("naturality", f"{describe(X)}->{describe(Y)}", w is None, w)
    return report


def induced_monad_morphism(T, S, extension, sample, morphisms=(), seed=0):
    """The monad morphism ``j_X(a) = (h |-> extension(X, h, a))`` of a left morphism.

    ``S`` is the monad of the target adjunction; its elements over ``X`` are
    functions of the tests ``h``.  Raises ``NotAMonadMorphism`` with the first
    failing report entry.
    """

    def component(X, a):
        return S.from_function(X, lambda h: extension(X, h, a))

    j = MonadMorphism(T, S, component)
    report = check_monad_morphism(j, sample, morphisms, seed=seed)
    if not report.ok:
        raise NotAMonadMorphism("induced transformation fails a monad-morphism law", witness=report.failures[0])
    return j, report
