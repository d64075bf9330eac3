"""Congruences on representables, the local state classifier Ξ, σ, and probes.

A congruence with apex ``c`` partitions every hom-set ``C(d, c)`` so that
related pairs stay related under precomposition.  The congruences with apex
``c`` are the elements of Ξ at ``c``; restriction along ``f: b -> c`` is
``e·f``.  The singularity measurement ``σ_X`` sends a figure to its kernel.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from . import limits
from . import presheaf as ps
from .errors import (
    InternalInvariantError,
    MalformedData,
    NotClosedUnderRestriction,
    OracleInconsistent,
    SiteMismatch,
    XiLabError,
)
from .fincat import FiniteCategory


class Congruence:
    """An action-stable equivalence relation on the representable ``C(-, apex)``.

    Stored as a canonical partition of every hom-set into sorted blocks.
    """

    __slots__ = ("site", "apex", "parts", "_key", "_hash", "_cls")

    def __init__(self, site: FiniteCategory, apex, parts, *, check=True):
        self.site = site
        self.apex = apex
        canon = {}
        for d in site.objects:
            blocks = parts.get(d, ())
            canon[d] = tuple(sorted(tuple(sorted(b)) for b in blocks if b))
        self.parts = canon
        self._key = (apex, tuple(canon[d] for d in site.objects))
        self._hash = hash(self._key)
        self._cls = {d: {t: i for i, b in enumerate(canon[d]) for t in b} for d in site.objects}
        if check:
            self._check()

    def _check(self):
        C = self.site
        for d in C.objects:
            flat = sorted(t for b in self.parts[d] for t in b)
            if flat != sorted(C.hom(d, self.apex)):
                raise MalformedData(f"blocks at {d!r} do not partition C({d}, {self.apex})")
        for h in C.morphisms:
            cls_src = self._cls[h.src]
            for block in self.parts[h.dst]:
                if len({cls_src[C.compose(t, h.id)] for t in block}) > 1:
                    raise MalformedData(
                        f"relation at {h.dst!r} is not stable under precomposition with {h.id!r}"
                    )

    def blocks(self, d):
        return self.parts[d]

    def related(self, d, t1, t2) -> bool:
        return self._cls[d][t1] == self._cls[d][t2]

    @property
    def num_blocks(self) -> int:
        return sum(len(b) for b in self.parts.values())

    def is_diagonal(self) -> bool:
        return all(len(b) == 1 for bs in self.parts.values() for b in bs)

    def is_total(self) -> bool:
        return all(len(bs) <= 1 for bs in self.parts.values())

    def __le__(self, other: "Congruence") -> bool:
        """Relation inclusion: every pair related here is related in ``other``."""
        if other.apex != self.apex:
            return False
        for d, bs in self.parts.items():
            cls = other._cls[d]
            for b in bs:
                if len({cls[t] for t in b}) > 1:
                    return False
        return True

    def __lt__(self, other):
        return self <= other and self != other

    def __eq__(self, other):
        return (
            isinstance(other, Congruence)
            and self._hash == other._hash
            and self._key == other._key
            and self.site == other.site
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (-self.num_blocks, repr(self._key))

    def __repr__(self):
        inner = "; ".join(
            f"{d}: " + " | ".join("{" + ",".join(b) + "}" for b in bs)
            for d, bs in self.parts.items()
            if bs
        )
        return f"Congruence@{self.apex}({inner})"


def diagonal(C: FiniteCategory, c) -> Congruence:
    return Congruence(C, c, {d: [[t] for t in C.hom(d, c)] for d in C.objects}, check=False)


def total(C: FiniteCategory, c) -> Congruence:
    return Congruence(C, c, {d: [list(C.hom(d, c))] for d in C.objects}, check=False)


def meet(e1: Congruence, e2: Congruence) -> Congruence:
    """Pointwise intersection of the relations."""
    if e1.apex != e2.apex or e1.site != e2.site:
        raise SiteMismatch("meet of congruences with different apexes")
    parts = {}
    for d in e1.site.objects:
        groups = {}
        for t in e1.site.hom(d, e1.apex):
            groups.setdefault((e1._cls[d][t], e2._cls[d][t]), []).append(t)
        parts[d] = list(groups.values())
    return Congruence(e1.site, e1.apex, parts, check=False)


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in _set_partitions(rest):
        yield [[first]] + smaller
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]


def _bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


@lru_cache(maxsize=None)
def enumerate_congruences(C: FiniteCategory, c):
    """All congruences with apex ``c``: diagonal first, total last."""
    objs = C.objects
    candidates = 1
    for d in objs:
        candidates *= _bell(len(C.hom(d, c)))
    limits.check(candidates, limits.ENUMERATION_LIMIT, "congruence candidates")
    found = []
    per_object = [list(_set_partitions(C.hom(d, c))) for d in objs]
    for combo in itertools.product(*per_object):
        parts = dict(zip(objs, combo))
        cls = {d: {t: i for i, b in enumerate(parts[d]) for t in b} for d in objs}
        stable = True
        for h in C.morphisms:
            for block in parts[h.dst]:
                if len({cls[h.src][C.compose(t, h.id)] for t in block}) > 1:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            found.append(Congruence(C, c, parts, check=False))
    found.sort(key=Congruence.sort_key)
    return tuple(found)


def restrict_congruence(e: Congruence, f) -> Congruence:
    """``e·f`` for ``f: b -> apex``: ``t₁ ~ t₂`` iff ``f∘t₁ ~ f∘t₂`` in ``e``."""
    C = e.site
    if C.dst(f) != e.apex:
        raise MalformedData(f"{f!r} does not land in the apex {e.apex!r}")
    b = C.src(f)
    parts = {}
    for d in C.objects:
        groups = {}
        for t in C.hom(d, b):
            groups.setdefault(e._cls[d][C.compose(f, t)], []).append(t)
        parts[d] = list(groups.values())
    return Congruence(C, b, parts, check=False)


def kernel_of_figure(X: ps.Presheaf, c, x) -> Congruence:
    """Self-incidence of the figure ``x ∈ X(c)``: ``t₁ ~ t₂`` iff ``x·t₁ = x·t₂``."""
    C = X.site
    parts = {}
    for d in C.objects:
        groups = {}
        for t in C.hom(d, c):
            groups.setdefault(X.act(x, t), []).append(t)
        parts[d] = list(groups.values())
    return Congruence(C, c, parts, check=False)


class Xi:
    """The local state classifier of a finite presheaf site with its semilattice structure."""

    def __init__(self, site: FiniteCategory):
        self.site = site
        carrier = {c: enumerate_congruences(site, c) for c in site.objects}
        action = {
            (e, f.id): restrict_congruence(e, f.id) for f in site.morphisms for e in carrier[f.dst]
        }
        self.presheaf = ps.Presheaf(site, carrier, action, check=False)
        self._names = {}
        for c in site.objects:
            k = 0
            for e in carrier[c]:
                if e.is_total():
                    label = "total"
                elif e.is_diagonal():
                    label = "diag"
                else:
                    k += 1
                    label = f"e{k}"
                self._names[e] = f"{label}@{c}"
        self._by_name = {v: k for k, v in self._names.items()}
        self.rename(_NICKNAMES.get(site.name, {}))

    def at(self, c):
        return self.presheaf.at(c)

    def top(self, c) -> Congruence:
        return self.presheaf.at(c)[-1]

    def top_point(self) -> ps.NatTrans:
        comps = {c: {"*": self.top(c)} for c in self.site.objects}
        return ps.NatTrans(ps.terminal(self.site), self.presheaf, comps, check=False)

    def meet(self, e1, e2) -> Congruence:
        return meet(e1, e2)

    def meet_map(self):
        """``∧ : Ξ × Ξ -> Ξ`` as a natural transformation."""
        P, _, _ = ps.product(self.presheaf, self.presheaf)
        comps = {c: {(a, b): meet(a, b) for a, b in P.at(c)} for c in self.site.objects}
        return P, ps.NatTrans(P, self.presheaf, comps, check=False)

    def name(self, e: Congruence) -> str:
        return self._names[e]

    def lookup(self, name: str) -> Congruence:
        try:
            return self._by_name[name]
        except KeyError:
            raise MalformedData(f"unknown congruence name {name!r}") from None

    def rename(self, mapping):
        """Replace generic names (e.g. ``e1@[1]``) by friendlier ones."""
        for old, new in mapping.items():
            if old not in self._by_name:
                continue
            e = self.lookup(old)
            del self._by_name[old]
            self._names[e] = new
            self._by_name[new] = e

    def __repr__(self):
        sizes = ", ".join(f"{c}:{len(self.at(c))}" for c in self.site.objects)
        return f"<Xi on {self.site.name or 'category'} ({sizes})>"


_NICKNAMES: dict = {}


def register_nicknames(site_name: str, mapping) -> None:
    """Friendlier congruence names for a named site, applied to every Ξ built for it."""
    _NICKNAMES.setdefault(site_name, {}).update(mapping)
    build_xi.cache_clear()


@lru_cache(maxsize=None)
def build_xi(C: FiniteCategory) -> Xi:
    limits.check(
        sum(_bell(len(C.into(c))) for c in C.objects), limits.ENUMERATION_LIMIT, "Ξ construction"
    )
    return Xi(C)


def sigma(X: ps.Presheaf) -> ps.NatTrans:
    """The singularity measurement ``σ_X : X -> Ξ``."""
    xi = build_xi(X.site)
    comps = {c: {x: kernel_of_figure(X, c, x) for x in X.at(c)} for c in X.site.objects}
    return ps.NatTrans(X, xi.presheaf, comps, check=False)


def points(P: ps.Presheaf):
    """All global elements ``1 -> P``."""
    return list(ps.hom(ps.terminal(P.site), P))


def diagonal_is_point(C: FiniteCategory) -> bool:
    """Whether the diagonals form a natural family (a point of Ξ)."""
    return all(
        restrict_congruence(diagonal(C, f.dst), f.id) == diagonal(C, f.src) for f in C.morphisms
    )


# --- probes --------------------------------------------------------------------

class Probe:
    """Per-object sets of congruences closed under restriction."""

    __slots__ = ("site", "selected")

    def __init__(self, site: FiniteCategory, selected, *, check=True):
        self.site = site
        self.selected = {c: frozenset(selected.get(c, ())) for c in site.objects}
        if check:
            self._check()

    def _check(self):
        C = self.site
        for c, es in self.selected.items():
            for e in es:
                if not isinstance(e, Congruence) or e.apex != c or e.site != C:
                    raise MalformedData(f"{e!r} is not a congruence with apex {c!r}")
        for f in C.morphisms:
            for e in self.selected[f.dst]:
                r = restrict_congruence(e, f.id)
                if r not in self.selected[f.src]:
                    raise NotClosedUnderRestriction(
                        f"{e!r}·{f.id} = {r!r} is not selected", congruence=e, morphism=f.id
                    )

    def __contains__(self, item):
        c, e = item
        return e in self.selected[c]

    def __le__(self, other):
        return all(self.selected[c] <= other.selected[c] for c in self.selected)

    def __eq__(self, other):
        return isinstance(other, Probe) and self.site == other.site and self.selected == other.selected

    def __hash__(self):
        return hash(tuple(self.selected[c] for c in self.site.objects))

    def key(self):
        return tuple(
            (c, tuple(sorted(repr(e._key) for e in self.selected[c]))) for c in self.site.objects
        )

    def is_empty(self):
        return not any(self.selected.values())

    def name(self) -> str:
        xi = build_xi(self.site)
        parts = []
        for c in self.site.objects:
            es = [e for e in xi.at(c) if e in self.selected[c]]
            parts.append(f"{c}: " + (",".join(xi.name(e) for e in es) if es else "∅"))
        return "{" + "; ".join(parts) + "}"

    def __repr__(self):
        return f"Probe{self.name()}"


def validate_probe(raw, site: FiniteCategory) -> Probe:
    """Probe from a mapping ``object -> iterable`` of congruences or congruence names."""
    xi = build_xi(site)
    selected = {}
    for c, items in dict(raw).items():
        if c not in site.objects:
            raise MalformedData(f"probe mentions unknown object {c!r}")
        selected[c] = [xi.lookup(e) if isinstance(e, str) else e for e in items]
    return Probe(site, selected)


def all_probe(C: FiniteCategory) -> Probe:
    xi = build_xi(C)
    return Probe(C, {c: xi.at(c) for c in C.objects}, check=False)


def empty_probe(C: FiniteCategory) -> Probe:
    return Probe(C, {}, check=False)


def probe_closure(C: FiniteCategory, congruences) -> Probe:
    """Least probe containing the given congruences."""
    selected = {c: set() for c in C.objects}
    for e in congruences:
        for f in C.into(e.apex):
            selected[C.src(f)].add(restrict_congruence(e, f))
    return Probe(C, selected, check=False)


def is_saturated(P: Probe) -> bool:
    xi = build_xi(P.site)
    for c in P.site.objects:
        for e in P.selected[c]:
            for e2 in xi.at(c):
                if e <= e2 and e2 not in P.selected[c]:
                    return False
    return True


def saturate(P: Probe) -> Probe:
    """Least saturated probe containing ``P``."""
    xi = build_xi(P.site)
    selected = {c: [e2 for e2 in xi.at(c) if any(e <= e2 for e in P.selected[c])] for c in P.site.objects}
    return Probe(P.site, selected, check=False)


def intersect(probes) -> Probe:
    probes = list(probes)
    if not probes:
        raise MalformedData("intersect needs at least one probe")
    site = probes[0].site
    if any(p.site != site for p in probes):
        raise SiteMismatch("probes live on different sites")
    selected = {c: frozenset.intersection(*(p.selected[c] for p in probes)) for c in site.objects}
    return Probe(site, selected, check=False)


def probe_to_subpresheaf(P: Probe) -> ps.Subpresheaf:
    xi = build_xi(P.site)
    return ps.Subpresheaf(xi.presheaf, P.selected, check=False)


def subpresheaf_to_probe(S: ps.Subpresheaf) -> Probe:
    xi = build_xi(S.ambient.site)
    if S.ambient != xi.presheaf:
        raise SiteMismatch("subpresheaf does not live in Ξ")
    return Probe(S.ambient.site, S.selected, check=False)


def is_upper_closed(S: ps.Subpresheaf) -> bool:
    for c, es in S.selected.items():
        for e in es:
            for e2 in S.ambient.at(c):
                if e <= e2 and e2 not in es:
                    return False
    return True


def enumerate_probes(C: FiniteCategory):
    """Every probe, by brute force over per-object subsets of congruences."""
    xi = build_xi(C)
    per_object = []
    total_subsets = 1
    for c in C.objects:
        total_subsets *= 2 ** len(xi.at(c))
    limits.check(total_subsets, limits.ENUMERATION_LIMIT, "probe candidates")
    for c in C.objects:
        es = xi.at(c)
        per_object.append(
            [frozenset(es[i] for i in range(len(es)) if mask >> i & 1) for mask in range(2 ** len(es))]
        )
    found = []
    for combo in itertools.product(*per_object):
        selected = dict(zip(C.objects, combo))
        closed = all(
            restrict_congruence(e, f.id) in selected[f.src] for f in C.morphisms for e in selected[f.dst]
        )
        if closed:
            found.append(Probe(C, selected, check=False))
    return found


def probe_from_coherent(beta, site: FiniteCategory) -> Probe:
    """``P_β``: congruences whose quotient ``Q`` has ``β_Q`` equal to all of ``Q``.

    ``beta`` maps a presheaf to a Subpresheaf of it (or to an iterable of
    ``(c, x)`` pairs); only quotients of representables are queried.
    """
    xi = build_xi(site)
    selected = {c: [] for c in site.objects}
    for c in site.objects:
        for e in xi.at(c):
            Q, _ = ps.quotient_by_congruence(e)
            answer = beta(Q)
            if not isinstance(answer, ps.Subpresheaf):
                sel = {d: set() for d in site.objects}
                try:
                    for d, x in answer:
                        sel[d].add(x)
                except (TypeError, ValueError, KeyError):
                    raise OracleInconsistent(f"β gave an unusable answer on the quotient by {e!r}") from None
                answer = ps.Subpresheaf(Q, sel, check=False)
            try:
                ps.Subpresheaf(Q, answer.selected)
            except XiLabError as exc:
                raise OracleInconsistent(f"β answered a non-subpresheaf on the quotient by {e!r}: {exc}")
            if answer.ambient != Q:
                raise OracleInconsistent("β answered a subobject of a different presheaf")
            if answer.is_full():
                selected[c].append(e)
    return Probe(site, selected)


def check_lax(f: ps.NatTrans):
    """Raise if ``σ_X ⊆ σ_Y ∘ f`` fails anywhere; it never should."""
    X, Y = f.source, f.target
    for c in X.site.objects:
        for x in X.at(c):
            if not kernel_of_figure(X, c, x) <= kernel_of_figure(Y, c, f(c, x)):
                raise InternalInvariantError(f"lax cocone inclusion fails at {x!r} of sort {c!r}")
