"""Finite categories given by explicit composition tables.

Objects and morphisms are identified by strings.  A category is built from a
raw mapping with the keys ``objects``, ``morphisms``, ``identities`` and
``composition`` (see :func:`validate_category`), the same shape used by the
JSON category files.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from . import limits
from .errors import (
    IllTypedComposite,
    MalformedData,
    MissingIdentity,
    NonAssociative,
    UnknownCatalogName,
    UnknownMorphism,
)


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class MorphismClass:
    mono: bool
    epi: bool
    iso: bool
    split_mono: bool


class FiniteCategory:
    """A validated finite category.  Build instances with :func:`validate_category`."""

    def __init__(self, objects, morphisms, identity, compose, name=None):
        self.name = name
        self.objects = tuple(sorted(objects))
        self._mor = {m.id: m for m in sorted(morphisms, key=lambda m: m.id)}
        self.identity = dict(identity)
        self._compose = dict(compose)
        hom = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self._mor.values():
            hom[m.src, m.dst].append(m.id)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._into = {
            c: tuple(f for d in self.objects for f in self._hom[d, c]) for c in self.objects
        }
        self._identities = frozenset(self.identity.values())
        self._key = (
            self.objects,
            tuple((m.id, m.src, m.dst) for m in self._mor.values()),
            tuple(sorted(self.identity.items())),
            tuple(sorted(self._compose.items())),
        )
        self._hash = hash(self._key)

    # structure ---------------------------------------------------------

    @property
    def morphisms(self):
        return tuple(self._mor.values())

    @property
    def morphism_ids(self):
        return tuple(self._mor)

    def morphism(self, f) -> Morphism:
        try:
            return self._mor[f]
        except KeyError:
            raise UnknownMorphism(f"unknown morphism {f!r}") from None

    def src(self, f):
        return self.morphism(f).src

    def dst(self, f):
        return self.morphism(f).dst

    def hom(self, a, b):
        return self._hom[a, b]

    def into(self, c):
        """All morphisms with codomain ``c``, grouped by domain in object order."""
        return self._into[c]

    def is_identity(self, f) -> bool:
        return f in self._identities

    def compose(self, g, f):
        """``g ∘ f`` (apply ``f`` first)."""
        try:
            return self._compose[g, f]
        except KeyError:
            raise IllTypedComposite(f"{g} ∘ {f} is not defined", (g, f)) from None

    # dunder ------------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FiniteCategory) and self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        label = self.name or "category"
        return f"<FiniteCategory {label}: {len(self.objects)} objects, {len(self._mor)} morphisms>"

    def to_raw(self) -> dict:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "morphisms": [{"id": m.id, "src": m.src, "dst": m.dst} for m in self.morphisms],
            "identities": dict(sorted(self.identity.items())),
            "composition": [
                {"g": g, "f": f, "result": h} for (g, f), h in sorted(self._compose.items())
            ],
        }


def validate_category(raw: Mapping, *, name=None, morphism_limit=None) -> FiniteCategory:
    """Check a raw category description exhaustively and return the category.

    Raises MissingIdentity, IllTypedComposite or NonAssociative naming the
    offending morphism ids; MalformedData for structural problems.
    """
    limit = limits.MORPHISM_LIMIT if morphism_limit is None else morphism_limit
    try:
        objects = [str(o) for o in raw["objects"]]
        morphisms = [Morphism(str(m["id"]), str(m["src"]), str(m["dst"])) for m in raw["morphisms"]]
        identities = {str(k): str(v) for k, v in dict(raw.get("identities", {})).items()}
        table = [(str(e["g"]), str(e["f"]), str(e["result"])) for e in raw.get("composition", [])]
    except (KeyError, TypeError) as exc:
        raise MalformedData(f"malformed category description: {exc}") from None
    name = name if name is not None else raw.get("name")

    if len(set(objects)) != len(objects):
        raise MalformedData("duplicate object identifiers")
    limits.check(len(morphisms), limit, "morphism count")
    mor = {}
    for m in morphisms:
        if m.id in mor:
            raise MalformedData(f"duplicate morphism id {m.id!r}")
        if m.src not in objects or m.dst not in objects:
            raise MalformedData(f"morphism {m.id!r} has an unknown endpoint")
        mor[m.id] = m

    for o in objects:
        i = identities.get(o)
        if i is None:
            raise MissingIdentity(f"object {o!r} has no identity", ())
        if i not in mor or mor[i].src != o or mor[i].dst != o:
            raise MissingIdentity(f"identity {i!r} of {o!r} is not an endomorphism of {o!r}", (i,))
    if set(identities) - set(objects):
        raise MalformedData("identities listed for unknown objects")

    compose = {}
    for g, f, h in table:
        for x in (g, f, h):
            if x not in mor:
                raise IllTypedComposite(f"composition entry mentions unknown morphism {x!r}", (x,))
        if mor[g].src != mor[f].dst:
            raise IllTypedComposite(f"{g} ∘ {f} listed but {g} and {f} are not composable", (g, f))
        if mor[h].src != mor[f].src or mor[h].dst != mor[g].dst:
            raise IllTypedComposite(f"{g} ∘ {f} = {h} lands in the wrong hom-set", (g, f, h))
        if (g, f) in compose and compose[g, f] != h:
            raise IllTypedComposite(f"{g} ∘ {f} listed twice with different results", (g, f))
        compose[g, f] = h

    # identities compose trivially even when the table omits them
    for f in mor.values():
        compose.setdefault((identities[f.dst], f.id), f.id)
        compose.setdefault((f.id, identities[f.src]), f.id)

    for g in mor.values():
        for f in mor.values():
            if g.src == f.dst and (g.id, f.id) not in compose:
                raise IllTypedComposite(f"composite {g.id} ∘ {f.id} is missing", (g.id, f.id))

    for f in mor.values():
        if compose[identities[f.dst], f.id] != f.id:
            raise MissingIdentity(
                f"{identities[f.dst]} does not act as identity on {f.id}", (identities[f.dst], f.id)
            )
        if compose[f.id, identities[f.src]] != f.id:
            raise MissingIdentity(
                f"{identities[f.src]} does not act as identity on {f.id}", (identities[f.src], f.id)
            )

    for h in mor.values():
        for g in mor.values():
            if h.src != g.dst:
                continue
            hg = compose[h.id, g.id]
            for f in mor.values():
                if g.src != f.dst:
                    continue
                if compose[h.id, compose[g.id, f.id]] != compose[hg, f.id]:
                    raise NonAssociative(
                        f"({h.id} ∘ {g.id}) ∘ {f.id} != {h.id} ∘ ({g.id} ∘ {f.id})",
                        (h.id, g.id, f.id),
                    )

    return FiniteCategory(objects, mor.values(), identities, compose, name=name)


def classify_morphism(C: FiniteCategory, f) -> MorphismClass:
    m = C.morphism(f)
    a, b = m.src, m.dst
    mono = True
    for x in C.objects:
        images = [C.compose(f, g) for g in C.hom(x, a)]
        if len(set(images)) != len(images):
            mono = False
            break
    epi = True
    for y in C.objects:
        images = [C.compose(g, f) for g in C.hom(b, y)]
        if len(set(images)) != len(images):
            epi = False
            break
    retractions = [r for r in C.hom(b, a) if C.compose(r, f) == C.identity[a]]
    split_mono = bool(retractions)
    iso = any(C.compose(f, r) == C.identity[b] for r in retractions)
    return MorphismClass(mono=mono, epi=epi, iso=iso, split_mono=split_mono)


def all_monic(C: FiniteCategory) -> bool:
    return all(classify_morphism(C, f).mono for f in C.morphism_ids)


def terminal_object(C: FiniteCategory):
    """Least object ``t`` with exactly one morphism from every object, or None."""
    for t in C.objects:
        if all(len(C.hom(x, t)) == 1 for x in C.objects):
            return t
    return None


def _identity_cocones(C: FiniteCategory, v):
    choices = [C.hom(x, v) for x in C.objects]
    arrows = C.morphisms
    for legs in itertools.product(*choices):
        mu = dict(zip(C.objects, legs))
        if all(C.compose(mu[f.dst], f.id) == mu[f.src] for f in arrows):
            yield mu


def identity_colimit(C: FiniteCategory):
    """A colimit of the identity functor ``C -> C`` as ``(vertex, legs)``, or None.

    Every cocone is enumerated; a cocone is colimiting when each other cocone
    receives exactly one comparison map from it.
    """
    cocones = [(v, mu) for v in C.objects for mu in _identity_cocones(C, v)]
    for v, mu in cocones:
        universal = True
        for w, nu in cocones:
            comparisons = [
                u for u in C.hom(v, w) if all(C.compose(u, mu[x]) == nu[x] for x in C.objects)
            ]
            if len(comparisons) != 1:
                universal = False
                break
        if universal:
            return v, mu
    return None


# --- catalog ------------------------------------------------------------------

def _from_functions(name, sets, arrows):
    """Raw description of a concrete category of functions between finite sets.

    ``sets`` maps object -> size; ``arrows`` maps id -> (src, dst, images).
    Identities must be among the arrows; composites are looked up by value.
    """
    by_value = {}
    for mid, (s, d, images) in arrows.items():
        by_value[s, d, tuple(images)] = mid
    identities = {}
    for o, n in sets.items():
        identities[o] = by_value[o, o, tuple(range(n))]
    composition = []
    for gid, (gs, gd, gimg) in arrows.items():
        for fid, (fs, fd, fimg) in arrows.items():
            if gs != fd:
                continue
            value = tuple(gimg[i] for i in fimg)
            composition.append({"g": gid, "f": fid, "result": by_value[fs, gd, value]})
    return {
        "name": name,
        "objects": list(sets),
        "morphisms": [{"id": k, "src": s, "dst": d} for k, (s, d, _) in arrows.items()],
        "identities": identities,
        "composition": composition,
    }


def _raw_catalog(name):
    if name == "terminal":
        return _from_functions(name, {"*": 1}, {"id*": ("*", "*", (0,))})
    if name == "walking_arrow":
        return _from_functions(
            name,
            {"a": 1, "b": 2},
            {"id_a": ("a", "a", (0,)), "id_b": ("b", "b", (0, 1)), "f": ("a", "b", (0,))},
        )
    if name == "parallel_pair":
        # v ⇉ e: presheaves are non-reflexive graphs (x·s = source, x·t = target)
        return _from_functions(
            name,
            {"v": 1, "e": 2},
            {
                "id_v": ("v", "v", (0,)),
                "id_e": ("e", "e", (0, 1)),
                "s": ("v", "e", (0,)),
                "t": ("v", "e", (1,)),
            },
        )
    if name == "delta1":
        # ordinals [0] = {0}, [1] = {0 < 1} and all monotone maps
        return _from_functions(
            name,
            {"[0]": 1, "[1]": 2},
            {
                "id[0]": ("[0]", "[0]", (0,)),
                "id[1]": ("[1]", "[1]", (0, 1)),
                "d0": ("[0]", "[1]", (0,)),
                "d1": ("[0]", "[1]", (1,)),
                "!": ("[1]", "[0]", (0, 0)),
                "const0": ("[1]", "[1]", (0, 0)),
                "const1": ("[1]", "[1]", (1, 1)),
            },
        )
    if name == "walking_idempotent":
        return _from_functions(
            name, {"*": 2}, {"id*": ("*", "*", (0, 1)), "e": ("*", "*", (0, 0))}
        )
    raise UnknownCatalogName(f"unknown catalog category {name!r}; choose from {', '.join(CATALOG)}")


CATALOG = ("terminal", "walking_arrow", "parallel_pair", "delta1", "walking_idempotent")

_catalog_cache: dict = {}


def catalog(name: str) -> FiniteCategory:
    if name not in _catalog_cache:
        _catalog_cache[name] = validate_category(_raw_catalog(name), name=name)
    return _catalog_cache[name]


def raw_catalog(name: str) -> dict:
    """The raw (file-format) description of a catalog category."""
    return _raw_catalog(name)
