"""Finite presheaves on a finite category and the maps between them.

A presheaf ``X`` stores, for every object ``c``, a tuple of hashable element
identifiers ``X.at(c)`` and a total action table ``X.act(x, f) = x·f`` for
``x`` at ``dst(f)``.  Everything is computed pointwise and exactly; the
exhaustive searches (hom-sets, isomorphisms, subpresheaves) are meant for the
small instances this library is about.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

from . import limits
from .errors import (
    FunctorialityViolation,
    IllTypedDiagram,
    MalformedData,
    NaturalityViolation,
)
from .fincat import FiniteCategory, MorphismClass


def sort_key(x):
    """Deterministic ordering for heterogeneous element identifiers."""
    if isinstance(x, str):
        return (0, x, "")
    if isinstance(x, int):
        return (1, "", f"{x:020d}")
    return (2, type(x).__name__, repr(x))


class Presheaf:
    """A finite presheaf; construction validates functoriality unless ``check=False``."""

    __slots__ = ("site", "carrier", "action", "_index")

    def __init__(self, site: FiniteCategory, carrier, action, *, check=True):
        self.site = site
        self.carrier = {c: tuple(carrier.get(c, ())) for c in site.objects}
        self.action = dict(action)
        self._index = None
        limits.check(self.size, limits.carrier_limit(), "presheaf carrier size")
        if check:
            self._check()

    def _check(self):
        C = self.site
        for c, xs in self.carrier.items():
            if len(set(xs)) != len(xs):
                raise MalformedData(f"duplicate elements in the carrier at {c!r}")
        members = {c: set(xs) for c, xs in self.carrier.items()}
        for f in C.morphisms:
            for x in self.carrier[f.dst]:
                try:
                    y = self.action[x, f.id]
                except KeyError:
                    raise MalformedData(f"action of {f.id!r} on {x!r} is missing") from None
                if y not in members[f.src]:
                    raise MalformedData(f"{x!r}·{f.id} = {y!r} is not an element at {f.src!r}")
        for c in C.objects:
            i = C.identity[c]
            for x in self.carrier[c]:
                if self.action[x, i] != x:
                    raise FunctorialityViolation(f"{x!r}·{i} != {x!r}", (x, i, i))
        for g in C.morphisms:
            for f in C.morphisms:
                if g.src != f.dst:
                    continue
                gf = C.compose(g.id, f.id)
                for x in self.carrier[g.dst]:
                    if self.action[self.action[x, g.id], f.id] != self.action[x, gf]:
                        raise FunctorialityViolation(
                            f"({x!r}·{g.id})·{f.id} != {x!r}·({g.id} ∘ {f.id})", (x, g.id, f.id)
                        )

    @property
    def size(self) -> int:
        return sum(len(xs) for xs in self.carrier.values())

    def at(self, c):
        return self.carrier[c]

    def act(self, x, f):
        return self.action[x, f]

    def elements(self):
        for c in self.site.objects:
            for x in self.carrier[c]:
                yield c, x

    def sizes(self):
        return tuple(len(self.carrier[c]) for c in self.site.objects)

    def __eq__(self, other):
        if not isinstance(other, Presheaf) or self.site != other.site:
            return False
        if any(set(self.carrier[c]) != set(other.carrier[c]) for c in self.site.objects):
            return False
        return self.action == other.action

    __hash__ = None

    def __repr__(self):
        sizes = ", ".join(f"{c}:{len(xs)}" for c, xs in self.carrier.items())
        return f"<Presheaf on {self.site.name or 'category'} ({sizes})>"


class NatTrans:
    """A natural transformation, stored as per-object element maps."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Presheaf, target: Presheaf, components, *, check=True):
        if source.site != target.site:
            raise IllTypedDiagram("source and target live on different sites")
        self.source = source
        self.target = target
        self.components = {c: dict(components.get(c, {})) for c in source.site.objects}
        if check:
            self._check()

    def _check(self):
        X, Y = self.source, self.target
        for c in X.site.objects:
            comp = self.components[c]
            ys = set(Y.at(c))
            for x in X.at(c):
                if x not in comp:
                    raise MalformedData(f"component at {c!r} is undefined on {x!r}")
                if comp[x] not in ys:
                    raise MalformedData(f"component at {c!r} sends {x!r} outside the target")
        for f in X.site.morphisms:
            cb, cc = self.components[f.src], self.components[f.dst]
            for x in X.at(f.dst):
                if cb[X.act(x, f.id)] != Y.act(cc[x], f.id):
                    raise NaturalityViolation(
                        f"naturality fails at {x!r} along {f.id!r}", (x, f.id)
                    )

    @property
    def site(self):
        return self.source.site

    def __call__(self, c, x):
        return self.components[c][x]

    def __eq__(self, other):
        return (
            isinstance(other, NatTrans)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    __hash__ = None

    def key(self):
        """Hashable fingerprint of the components (source/target not included)."""
        return tuple(
            (c, tuple(sorted(comp.items(), key=lambda kv: sort_key(kv[0]))))
            for c, comp in self.components.items()
        )

    def __repr__(self):
        return f"<NatTrans {self.source!r} -> {self.target!r}>"


class Subpresheaf:
    """A subset of each carrier, closed under the action."""

    __slots__ = ("ambient", "selected", "_presheaf")

    def __init__(self, ambient: Presheaf, selected, *, check=True):
        self.ambient = ambient
        self.selected = {c: frozenset(selected.get(c, ())) for c in ambient.site.objects}
        self._presheaf = None
        if check:
            for c in ambient.site.objects:
                if not self.selected[c] <= set(ambient.at(c)):
                    raise MalformedData(f"selection at {c!r} is not inside the carrier")
            for f in ambient.site.morphisms:
                for x in self.selected[f.dst]:
                    y = ambient.act(x, f.id)
                    if y not in self.selected[f.src]:
                        raise FunctorialityViolation(
                            f"selection not closed: {x!r}·{f.id} = {y!r} is missing", (x, f.id)
                        )

    @classmethod
    def full(cls, X: Presheaf):
        return cls(X, {c: X.at(c) for c in X.site.objects}, check=False)

    @classmethod
    def empty(cls, X: Presheaf):
        return cls(X, {}, check=False)

    def __contains__(self, item):
        c, x = item
        return x in self.selected[c]

    def is_full(self) -> bool:
        return all(len(self.selected[c]) == len(self.ambient.at(c)) for c in self.selected)

    @property
    def size(self) -> int:
        return sum(len(s) for s in self.selected.values())

    def __le__(self, other):
        return all(self.selected[c] <= other.selected[c] for c in self.selected)

    def __eq__(self, other):
        return (
            isinstance(other, Subpresheaf)
            and self.ambient == other.ambient
            and self.selected == other.selected
        )

    __hash__ = None

    def key(self):
        return tuple(
            (c, tuple(sorted(s, key=sort_key))) for c, s in self.selected.items()
        )

    def presheaf(self) -> Presheaf:
        if self._presheaf is None:
            X = self.ambient
            carrier = {c: tuple(x for x in X.at(c) if x in self.selected[c]) for c in X.site.objects}
            action = {
                (x, f.id): X.act(x, f.id) for f in X.site.morphisms for x in carrier[f.dst]
            }
            self._presheaf = Presheaf(X.site, carrier, action, check=False)
        return self._presheaf

    def inclusion(self) -> NatTrans:
        P = self.presheaf()
        return NatTrans(P, self.ambient, {c: {x: x for x in P.at(c)} for c in P.site.objects}, check=False)

    def __repr__(self):
        sizes = ", ".join(f"{c}:{len(s)}" for c, s in self.selected.items())
        return f"<Subpresheaf ({sizes}) of {self.ambient!r}>"


# --- basic constructions ---------------------------------------------------

def validate(raw, site: FiniteCategory, *, source=None, target=None):
    """Validate raw presheaf data (``carrier``/``action``) or raw map data (``components``)."""
    if "components" in raw:
        if source is None or target is None:
            raise MalformedData("a natural transformation needs its source and target")
        comps = {c: dict(m) for c, m in raw["components"].items()}
        return NatTrans(source, target, comps)
    try:
        carrier = {c: list(xs) for c, xs in raw["carrier"].items()}
        entries = raw["action"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedData(f"malformed presheaf description: {exc}") from None
    if isinstance(entries, dict):
        action = dict(entries)
    else:
        action = {(e["element"], e["morphism"]): e["result"] for e in entries}
    for c in carrier:
        if c not in site.objects:
            raise MalformedData(f"carrier mentions unknown object {c!r}")
    # the identity action is implied when a file omits it
    for c in site.objects:
        for x in carrier.get(c, ()):
            action.setdefault((x, site.identity[c]), x)
    return Presheaf(site, carrier, action)


def identity(X: Presheaf) -> NatTrans:
    return NatTrans(X, X, {c: {x: x for x in X.at(c)} for c in X.site.objects}, check=False)


def compose(g: NatTrans, f: NatTrans) -> NatTrans:
    """``g ∘ f``."""
    if f.target != g.source:
        raise IllTypedDiagram("maps are not composable")
    comps = {c: {x: g.components[c][y] for x, y in f.components[c].items()} for c in f.site.objects}
    return NatTrans(f.source, g.target, comps, check=False)


def terminal(C: FiniteCategory) -> Presheaf:
    return _terminal(C)


@lru_cache(maxsize=None)
def _terminal(C):
    carrier = {c: ("*",) for c in C.objects}
    action = {("*", f.id): "*" for f in C.morphisms}
    return Presheaf(C, carrier, action, check=False)


def to_terminal(X: Presheaf) -> NatTrans:
    T = terminal(X.site)
    return NatTrans(X, T, {c: {x: "*" for x in X.at(c)} for c in X.site.objects}, check=False)


def initial(C: FiniteCategory) -> Presheaf:
    return Presheaf(C, {}, {}, check=False)


@lru_cache(maxsize=None)
def representable(C: FiniteCategory, c) -> Presheaf:
    """``C(-, c)``: elements at ``d`` are the morphism ids ``d -> c``; action is precomposition."""
    carrier = {d: C.hom(d, c) for d in C.objects}
    action = {(t, f.id): C.compose(t, f.id) for f in C.morphisms for t in carrier[f.dst]}
    return Presheaf(C, carrier, action, check=False)


def yoneda(X: Presheaf, c, x) -> NatTrans:
    """The map ``C(-, c) -> X`` sending ``t`` to ``x·t``."""
    R = representable(X.site, c)
    comps = {d: {t: X.act(x, t) for t in R.at(d)} for d in X.site.objects}
    return NatTrans(R, X, comps, check=False)


def element_of(f: NatTrans, c):
    """Inverse of :func:`yoneda` for maps out of ``C(-, c)``."""
    return f.components[c][f.site.identity[c]]


# --- limits ----------------------------------------------------------------

def product(X: Presheaf, Y: Presheaf):
    """``(X × Y, π₁, π₂)`` with elements the pairs ``(x, y)``."""
    if X.site != Y.site:
        raise IllTypedDiagram("product of presheaves on different sites")
    C = X.site
    carrier = {c: tuple(itertools.product(X.at(c), Y.at(c))) for c in C.objects}
    limits.check(sum(map(len, carrier.values())), limits.carrier_limit(), "product size")
    action = {
        ((x, y), f.id): (X.act(x, f.id), Y.act(y, f.id))
        for f in C.morphisms
        for x, y in carrier[f.dst]
    }
    P = Presheaf(C, carrier, action, check=False)
    p1 = NatTrans(P, X, {c: {p: p[0] for p in carrier[c]} for c in C.objects}, check=False)
    p2 = NatTrans(P, Y, {c: {p: p[1] for p in carrier[c]} for c in C.objects}, check=False)
    return P, p1, p2


def pair(f: NatTrans, g: NatTrans, target: Presheaf) -> NatTrans:
    """``⟨f, g⟩`` into a product built by :func:`product` or :func:`pullback`."""
    comps = {
        c: {x: (f.components[c][x], g.components[c][x]) for x in f.source.at(c)}
        for c in f.site.objects
    }
    return NatTrans(f.source, target, comps)


def equalizer(f: NatTrans, g: NatTrans) -> Subpresheaf:
    if f.source != g.source or f.target != g.target:
        raise IllTypedDiagram("equalizer needs a parallel pair")
    X = f.source
    sel = {c: [x for x in X.at(c) if f.components[c][x] == g.components[c][x]] for c in X.site.objects}
    return Subpresheaf(X, sel, check=False)


def pullback(f: NatTrans, g: NatTrans):
    """Pullback of the cospan ``X --f--> Z <--g-- Y`` as ``(P, p_X, p_Y)``."""
    if f.target != g.target:
        raise IllTypedDiagram("pullback needs a cospan")
    X, Y = f.source, g.source
    C = X.site
    carrier = {}
    for c in C.objects:
        fc, gc = f.components[c], g.components[c]
        by_image = {}
        for y in Y.at(c):
            by_image.setdefault(gc[y], []).append(y)
        carrier[c] = tuple((x, y) for x in X.at(c) for y in by_image.get(fc[x], ()))
    limits.check(sum(map(len, carrier.values())), limits.carrier_limit(), "pullback size")
    action = {
        ((x, y), h.id): (X.act(x, h.id), Y.act(y, h.id))
        for h in C.morphisms
        for x, y in carrier[h.dst]
    }
    P = Presheaf(C, carrier, action, check=False)
    p1 = NatTrans(P, X, {c: {p: p[0] for p in carrier[c]} for c in C.objects}, check=False)
    p2 = NatTrans(P, Y, {c: {p: p[1] for p in carrier[c]} for c in C.objects}, check=False)
    return P, p1, p2


def limit(kind: str, *args):
    """Dispatch to :func:`product`, :func:`equalizer` or :func:`pullback`."""
    table = {"product": product, "equalizer": equalizer, "pullback": pullback}
    if kind not in table:
        raise IllTypedDiagram(f"unknown limit kind {kind!r}")
    return table[kind](*args)


def kernel_pair(f: NatTrans):
    return pullback(f, f)


def preimage(f: NatTrans, S: Subpresheaf) -> Subpresheaf:
    """Pullback of the subobject ``S`` of ``f.target`` along ``f``."""
    if S.ambient != f.target:
        raise IllTypedDiagram("subobject does not live over the codomain")
    X = f.source
    sel = {c: [x for x in X.at(c) if f.components[c][x] in S.selected[c]] for c in X.site.objects}
    return Subpresheaf(X, sel, check=False)


# --- colimits --------------------------------------------------------------

def coproduct(X: Presheaf, Y: Presheaf):
    """``(X + Y, ι₁, ι₂)`` with elements ``(0, x)`` and ``(1, y)``."""
    if X.site != Y.site:
        raise IllTypedDiagram("coproduct of presheaves on different sites")
    C = X.site
    carrier = {c: tuple((0, x) for x in X.at(c)) + tuple((1, y) for y in Y.at(c)) for c in C.objects}
    action = {}
    for f in C.morphisms:
        for x in X.at(f.dst):
            action[(0, x), f.id] = (0, X.act(x, f.id))
        for y in Y.at(f.dst):
            action[(1, y), f.id] = (1, Y.act(y, f.id))
    S = Presheaf(C, carrier, action, check=False)
    i1 = NatTrans(X, S, {c: {x: (0, x) for x in X.at(c)} for c in C.objects}, check=False)
    i2 = NatTrans(Y, S, {c: {y: (1, y) for y in Y.at(c)} for c in C.objects}, check=False)
    return S, i1, i2


def sum_of(presheaves, site: FiniteCategory):
    """Coproduct of a list, elements tagged ``(i, x)``; returns ``(S, injections)``."""
    carrier = {c: [] for c in site.objects}
    action = {}
    for i, X in enumerate(presheaves):
        for c in site.objects:
            carrier[c].extend((i, x) for x in X.at(c))
        for f in site.morphisms:
            for x in X.at(f.dst):
                action[(i, x), f.id] = (i, X.act(x, f.id))
    S = Presheaf(site, carrier, action, check=False)
    injections = [
        NatTrans(X, S, {c: {x: (i, x) for x in X.at(c)} for c in site.objects}, check=False)
        for i, X in enumerate(presheaves)
    ]
    return S, injections


def _quotient_from_rep(X: Presheaf, rep):
    C = X.site
    carrier = {}
    for c in C.objects:
        seen = []
        for x in X.at(c):
            r = rep[c][x]
            if r not in seen:
                seen.append(r)
        carrier[c] = tuple(sorted(seen, key=sort_key))
    action = {(r, f.id): rep[f.src][X.act(r, f.id)] for f in C.morphisms for r in carrier[f.dst]}
    Q = Presheaf(C, carrier, action, check=False)
    q = NatTrans(X, Q, {c: dict(rep[c]) for c in C.objects}, check=False)
    return Q, q


def congruence_closure(X: Presheaf, pairs):
    """Smallest action-stable equivalence relation containing ``pairs``.

    ``pairs`` is an iterable of ``(c, x, y)``.  Returns ``rep[c][x]``, the least
    element (by :func:`sort_key`) of the class of ``x``.
    """
    C = X.site
    parent = {(c, x): (c, x) for c, x in X.elements()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    todo = list(pairs)
    while todo:
        c, x, y = todo.pop()
        a, b = find((c, x)), find((c, y))
        if a == b:
            continue
        parent[a] = b
        for f in C.morphisms:
            if f.dst == c:
                todo.append((f.src, X.act(x, f.id), X.act(y, f.id)))
    classes = {}
    for c, x in X.elements():
        classes.setdefault(find((c, x)), []).append(x)
    rep = {c: {} for c in C.objects}
    for (c, _), members in classes.items():
        r = min(members, key=sort_key)
        for x in members:
            rep[c][x] = r
    return rep


def quotient(X: Presheaf, pairs):
    """Quotient of ``X`` by the congruence generated by ``pairs``; returns ``(Q, q)``."""
    return _quotient_from_rep(X, congruence_closure(X, pairs))


def quotient_by_congruence(e):
    """Coequalizer ``C(-, c) -> Q`` of a congruence on a representable.

    Elements of ``Q`` are the least morphism ids of each class.
    """
    C = e.site
    X = representable(C, e.apex)
    rep = {d: {} for d in C.objects}
    for d in C.objects:
        for block in e.blocks(d):
            r = min(block, key=sort_key)
            for t in block:
                rep[d][t] = r
    return _quotient_from_rep(X, rep)


def colimit(kind: str, *args):
    """Dispatch to :func:`coproduct` or :func:`quotient_by_congruence`."""
    if kind == "coproduct":
        return coproduct(*args)
    if kind == "quotient_by_congruence":
        return quotient_by_congruence(*args)
    raise IllTypedDiagram(f"unknown colimit kind {kind!r}")


# --- factorization and classification --------------------------------------

def image(f: NatTrans) -> Subpresheaf:
    Y = f.target
    sel = {c: set(f.components[c].values()) for c in Y.site.objects}
    return Subpresheaf(Y, sel, check=False)


def image_factorization(f: NatTrans):
    """``f = mono ∘ epi``; returns ``(epi, mono)`` with the mono part a Subpresheaf."""
    im = image(f)
    epi = NatTrans(f.source, im.presheaf(), f.components, check=False)
    return epi, im


def is_mono(f: NatTrans) -> bool:
    return all(len(set(m.values())) == len(m) for m in f.components.values())


def is_epi(f: NatTrans) -> bool:
    return all(set(f.components[c].values()) == set(f.target.at(c)) for c in f.site.objects)


def morphism_class(f: NatTrans) -> MorphismClass:
    mono, epi = is_mono(f), is_epi(f)
    split = False
    if mono:
        idX = identity(f.source).components
        for r in hom(f.target, f.source):
            if all(
                r.components[c][f.components[c][x]] == idX[c][x] for c in f.site.objects for x in f.source.at(c)
            ):
                split = True
                break
    return MorphismClass(mono=mono, epi=epi, iso=mono and epi, split_mono=split)


# --- subobject classifier --------------------------------------------------

@lru_cache(maxsize=None)
def sieves(C: FiniteCategory, c):
    """All sieves on ``c`` as sorted tuples of morphism ids, by brute force."""
    arrows = C.into(c)
    limits.check(2 ** len(arrows), limits.ENUMERATION_LIMIT, "sieve candidates")
    found = []
    for mask in range(2 ** len(arrows)):
        S = {arrows[i] for i in range(len(arrows)) if mask >> i & 1}
        if all(C.compose(t, f.id) in S for t in S for f in C.morphisms if f.dst == C.src(t)):
            found.append(tuple(sorted(S)))
    found.sort(key=lambda s: (len(s), s))
    return tuple(found)


def _pull_sieve(C, S, f):
    return tuple(sorted(g for g in C.into(C.src(f)) if C.compose(f, g) in S))


@lru_cache(maxsize=None)
def omega(C: FiniteCategory) -> Presheaf:
    carrier = {c: sieves(C, c) for c in C.objects}
    action = {(S, f.id): _pull_sieve(C, set(S), f.id) for f in C.morphisms for S in carrier[f.dst]}
    return Presheaf(C, carrier, action, check=False)


def top_sieve(C: FiniteCategory, c):
    return tuple(sorted(C.into(c)))


def truth(C: FiniteCategory) -> Subpresheaf:
    """The subobject ``⊤ : 1 -> Ω`` (maximal sieves)."""
    return Subpresheaf(omega(C), {c: [top_sieve(C, c)] for c in C.objects}, check=False)


def characteristic(m: Subpresheaf) -> NatTrans:
    X = m.ambient
    C = X.site
    comps = {
        c: {x: tuple(sorted(f for f in C.into(c) if X.act(x, f) in m.selected[C.src(f)])) for x in X.at(c)}
        for c in C.objects
    }
    return NatTrans(X, omega(C), comps, check=False)


def omega_and_characteristic(m: Subpresheaf):
    chi = characteristic(m)
    if preimage(chi, truth(m.ambient.site)) != m:
        raise AssertionError("characteristic map does not pull ⊤ back to the subobject")
    return omega(m.ambient.site), chi


# --- exhaustive searches ---------------------------------------------------

def _object_order(C):
    # objects receiving more arrows first, so lower elements tend to be forced
    return sorted(C.objects, key=lambda c: (-len(C.into(c)), C.objects.index(c)))


def hom(X: Presheaf, Y: Presheaf, *, injective=False, limit=None):
    """Generate every natural transformation ``X -> Y`` (deterministic order).

    Backtracks element by element; an element that is a restriction of an
    already-mapped one has its image forced.
    """
    if X.site != Y.site:
        raise IllTypedDiagram("hom between presheaves on different sites")
    C = X.site
    order = [(c, x) for c in _object_order(C) for x in X.at(c)]
    parents = {(c, x): [] for c, x in order}
    children = {(c, x): [] for c, x in order}
    for f in C.morphisms:
        if C.is_identity(f.id):
            continue
        for x in X.at(f.dst):
            y = X.act(x, f.id)
            parents[f.src, y].append((f.dst, x, f.id))
            children[f.dst, x].append((f.src, y, f.id))
    comps = {c: {} for c in C.objects}
    used = {c: set() for c in C.objects}
    count = 0

    def consistent(c, x, v):
        for d, p, f in parents[c, x]:
            if p in comps[d] and Y.act(comps[d][p], f) != v:
                return False
        for b, y, f in children[c, x]:
            if y in comps[b] and comps[b][y] != Y.act(v, f):
                return False
            if y == x and b == c and Y.act(v, f) != v:
                return False
        return True

    def rec(i):
        nonlocal count
        if i == len(order):
            count += 1
            yield NatTrans(X, Y, {c: dict(m) for c, m in comps.items()}, check=False)
            return
        c, x = order[i]
        forced = None
        for d, p, f in parents[c, x]:
            if p in comps[d]:
                forced = Y.act(comps[d][p], f)
                break
        candidates = (forced,) if forced is not None else Y.at(c)
        for v in candidates:
            if injective and v in used[c]:
                continue
            if not consistent(c, x, v):
                continue
            comps[c][x] = v
            used[c].add(v)
            yield from rec(i + 1)
            del comps[c][x]
            used[c].discard(v)
            if limit is not None and count >= limit:
                return

    yield from rec(0)


def find_isomorphism(X: Presheaf, Y: Presheaf):
    if X.site != Y.site or X.sizes() != Y.sizes():
        return None
    for f in hom(X, Y, injective=True):
        return f
    return None


def is_isomorphic(X: Presheaf, Y: Presheaf) -> bool:
    return find_isomorphism(X, Y) is not None


def generated_subpresheaf(X: Presheaf, generators) -> Subpresheaf:
    """Least subpresheaf containing the given ``(c, x)`` pairs."""
    sel = {c: set() for c in X.site.objects}
    for c, x in generators:
        for f in X.site.into(c):
            sel[X.site.src(f)].add(X.act(x, f))
    return Subpresheaf(X, sel, check=False)


def subpresheaves(X: Presheaf):
    """Every subpresheaf of ``X``, by brute force over subsets of elements."""
    elems = list(X.elements())
    limits.check(2 ** len(elems), limits.ENUMERATION_LIMIT, "subset enumeration")
    C = X.site
    for mask in range(2 ** len(elems)):
        sel = {c: set() for c in C.objects}
        for i, (c, x) in enumerate(elems):
            if mask >> i & 1:
                sel[c].add(x)
        if all(X.act(x, f.id) in sel[f.src] for f in C.morphisms for x in sel[f.dst]):
            yield Subpresheaf(X, sel, check=False)


# --- enumeration up to isomorphism -----------------------------------------

def _assignment_order(C):
    """Non-identity morphisms ordered so that composites of earlier ones come late."""
    todo = [f for f in C.morphism_ids if not C.is_identity(f)]
    done, order = set(), []
    while todo:
        pick = None
        for h in todo:
            for g in done:
                for f in done:
                    if C.src(g) == C.dst(f) and C.compose(g, f) == h:
                        pick = (h, (g, f))
                        break
                if pick:
                    break
            if pick:
                break
        if pick is None:
            pick = (todo[0], None)
        order.append(pick)
        done.add(pick[0])
        todo.remove(pick[0])
    return order


def _encode(C, sizes, tables, perms):
    # tables: morphism -> tuple image of element index; perms: object -> permutation
    out = []
    for f in C.morphism_ids:
        if C.is_identity(f):
            continue
        s, d = C.src(f), C.dst(f)
        table = tables[f]
        new = [0] * sizes[d]
        for i, j in enumerate(table):
            new[perms[d][i]] = perms[s][j]
        out.append(tuple(new))
    return tuple(out)


def _canonical(C, sizes, tables):
    objs = C.objects
    best = None
    for combo in itertools.product(*(itertools.permutations(range(sizes[c])) for c in objs)):
        perms = dict(zip(objs, combo))
        code = _encode(C, sizes, tables, perms)
        if best is None or code < best:
            best = code
    return best


def canonical_form(X: Presheaf):
    """An isomorphism invariant that separates non-isomorphic presheaves."""
    C = X.site
    sizes = {c: len(X.at(c)) for c in C.objects}
    index = {c: {x: i for i, x in enumerate(X.at(c))} for c in C.objects}
    tables = {
        f.id: tuple(index[f.src][X.act(x, f.id)] for x in X.at(f.dst))
        for f in C.morphisms
        if not C.is_identity(f.id)
    }
    return (tuple(sizes[c] for c in C.objects), _canonical(C, sizes, tables))


def enumerate_presheaves(C: FiniteCategory, bound: int):
    """All presheaves with at most ``bound`` elements at each object, up to isomorphism.

    Elements at each object are the integers ``0..n-1``.  Output is ordered by
    carrier sizes and then by canonical code.
    """
    order = _assignment_order(C)
    objs = C.objects
    constraints = {f: [] for f, _ in order}
    for g, _ in order:
        for h, _ in order:
            if C.src(g) != C.dst(h):
                continue
            k = C.compose(g, h)
            entry = (g, h, None if C.is_identity(k) else k)
            for m in {g, h, k} - set(C.identity.values()):
                constraints[m].append(entry)
    found = {}
    for size_combo in itertools.product(range(bound + 1), repeat=len(objs)):
        sizes = dict(zip(objs, size_combo))
        tables = {}

        def ok(f):
            # x·(g ∘ h) = (x·g)·h for every composable pair touching f with all parts assigned
            for g, h, k in constraints[f]:
                if g not in tables or h not in tables or k is not None and k not in tables:
                    continue
                tg, th = tables[g], tables[h]
                tk = tables[k] if k is not None else None
                for x in range(sizes[C.dst(g)]):
                    if th[tg[x]] != (x if tk is None else tk[x]):
                        return False
            return True

        def rec(i):
            if i == len(order):
                code = _canonical(C, sizes, tables)
                key = (size_combo, code)
                if key not in found:
                    found[key] = dict(tables)
                return
            f, factor = order[i]
            s, d = C.src(f), C.dst(f)
            if factor is not None:
                g, h = factor
                options = [tuple(tables[h][tables[g][x]] for x in range(sizes[d]))]
            else:
                options = itertools.product(range(sizes[s]), repeat=sizes[d])
            for table in options:
                tables[f] = tuple(table)
                if ok(f):
                    rec(i + 1)
                del tables[f]

        rec(0)
    result = []
    for (size_combo, _), tables in sorted(found.items()):
        sizes = dict(zip(objs, size_combo))
        carrier = {c: tuple(range(sizes[c])) for c in objs}
        action = {}
        for f in C.morphisms:
            for x in range(sizes[f.dst]):
                action[x, f.id] = x if C.is_identity(f.id) else tables[f.id][x]
        result.append(Presheaf(C, carrier, action, check=False))
    return result


# --- randomized instances --------------------------------------------------

def relabel(X: Presheaf, names=None) -> Presheaf:
    """Copy of ``X`` whose elements are renamed ``c:i`` (or by a given mapping)."""
    C = X.site
    if names is None:
        names = {c: {x: f"{c}:{i}" for i, x in enumerate(X.at(c))} for c in C.objects}
    carrier = {c: tuple(names[c][x] for x in X.at(c)) for c in C.objects}
    action = {
        (names[f.dst][x], f.id): names[f.src][X.act(x, f.id)] for f in C.morphisms for x in X.at(f.dst)
    }
    return Presheaf(C, carrier, action, check=False)


def random_presheaf(C: FiniteCategory, rng: random.Random, *, generators=3, merges=2) -> Presheaf:
    """A quotient of a random sum of representables."""
    k = rng.randint(0, generators)
    reps = [representable(C, rng.choice(C.objects)) for _ in range(k)]
    S, _ = sum_of(reps, C)
    pairs = []
    nonempty = [c for c in C.objects if len(S.at(c)) >= 2]
    for _ in range(rng.randint(0, merges) if nonempty else 0):
        c = rng.choice(nonempty)
        x, y = rng.sample(list(S.at(c)), 2)
        pairs.append((c, x, y))
    Q, _ = quotient(S, pairs)
    return relabel(Q)


def random_map(Y: Presheaf, rng: random.Random, *, generators=3, merges=2) -> NatTrans:
    """A random map into ``Y``: Yoneda-extend random figures, then quotient the domain
    by a random congruence contained in the kernel."""
    C = Y.site
    objs = [c for c in C.objects if Y.at(c)]
    k = rng.randint(0, generators) if objs else 0
    chosen = [(c, rng.choice(Y.at(c))) for c in (rng.choice(objs) for _ in range(k))]
    reps = [representable(C, c) for c, _ in chosen]
    S, _ = sum_of(reps, C)
    comps = {c: {} for c in C.objects}
    for i, (c, y) in enumerate(chosen):
        for d in C.objects:
            for t in C.hom(d, c):
                comps[d][(i, t)] = Y.act(y, t)
    g = NatTrans(S, Y, comps, check=False)
    pairs = []
    for _ in range(rng.randint(0, merges)):
        candidates = [
            (c, x, z)
            for c in C.objects
            for x in S.at(c)
            for z in S.at(c)
            if x != z and comps[c][x] == comps[c][z]
        ]
        if not candidates:
            break
        pairs.append(rng.choice(candidates))
    rep = congruence_closure(S, pairs)
    Q, q = _quotient_from_rep(S, rep)
    names = {c: {x: f"{c}:{i}" for i, x in enumerate(Q.at(c))} for c in C.objects}
    X = relabel(Q, names)
    out = {c: {names[c][rep[c][x]]: comps[c][x] for x in S.at(c)} for c in C.objects}
    return NatTrans(X, Y, out)

