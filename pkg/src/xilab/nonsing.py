"""Non-singular maps: kernel-preserving maps, their coreflection, and descent."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from . import limits
from . import lsc
from . import presheaf as ps
from .errors import InternalInvariantError, NotAPullback

WITNESS_CAP = 16


@dataclass
class SingularityDefect:
    """Figures whose kernel grows under the map; empty iff the map is non-singular."""

    map: ps.NatTrans
    witnesses: list = field(default_factory=list)
    count: int = 0

    @property
    def nonsingular(self) -> bool:
        return self.count == 0

    def __repr__(self):
        state = "non-singular" if self.nonsingular else f"singular ({self.count} defects)"
        return f"<SingularityDefect {state}>"


def is_nonsingular(f: ps.NatTrans, *, cap: int = WITNESS_CAP) -> SingularityDefect:
    """Compare ``ker x`` with ``ker f(x)`` for every element of the domain.

    ``ker x ⊆ ker f(x)`` always holds; a violation is an internal error.
    """
    X, Y = f.source, f.target
    defect = SingularityDefect(f)
    for c in X.site.objects:
        for x in X.at(c):
            kx = lsc.kernel_of_figure(X, c, x)
            kfx = lsc.kernel_of_figure(Y, c, f(c, x))
            if not kx <= kfx:
                raise InternalInvariantError(f"kernel of {x!r} is not contained in that of its image")
            if kx != kfx:
                defect.count += 1
                if len(defect.witnesses) < cap:
                    defect.witnesses.append((c, x, kx, kfx))
    return defect


def nonsingular(f: ps.NatTrans) -> bool:
    return is_nonsingular(f, cap=0).nonsingular


class Coreflection(NamedTuple):
    sub: ps.Subpresheaf
    restricted: ps.NatTrans
    certificate: dict


def coreflect(f: ps.NatTrans) -> Coreflection:
    """The largest part of the domain on which ``f`` is non-singular.

    ``sub`` is the equalizer of ``σ_X`` and ``σ_Y ∘ f``; ``restricted`` is
    ``f`` composed with its inclusion.
    """
    sX = lsc.sigma(f.source)
    sYf = ps.compose(lsc.sigma(f.target), f)
    sub = ps.equalizer(sX, sYf)
    incl = sub.inclusion()
    restricted = ps.compose(f, incl)
    certificate = {
        "restricted_nonsingular": nonsingular(restricted),
        "counit_mono": ps.is_mono(incl),
        "counit_equalizer": True,
        "whole_domain": sub.is_full(),
    }
    return Coreflection(sub, restricted, certificate)


@dataclass
class UniversalCertificate:
    domains: int = 0
    maps_checked: int = 0
    nonsingular_composites: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def certify_universal(f: ps.NatTrans, domains, core: Coreflection | None = None) -> UniversalCertificate:
    """Exhaustive factorization search for the coreflection of ``f``.

    For every ``W`` in ``domains`` and every ``g: W -> X``: if ``f∘g`` is
    non-singular there must be exactly one ``h: W -> X'`` with ``incl∘h = g``.
    Also checks that such ``g`` are in bijection with the ``h`` for which
    ``f'∘h`` is non-singular.
    """
    core = core or coreflect(f)
    incl = core.sub.inclusion()
    Xp = incl.source
    cert = UniversalCertificate()
    for W in domains:
        cert.domains += 1
        lifts = {}
        good_h = 0
        for h in ps.hom(W, Xp):
            key = ps.compose(incl, h).key()
            lifts[key] = lifts.get(key, 0) + 1
            if nonsingular(ps.compose(core.restricted, h)):
                good_h += 1
        good_g = 0
        for g in ps.hom(W, f.source):
            cert.maps_checked += 1
            if not nonsingular(ps.compose(f, g)):
                continue
            good_g += 1
            n = lifts.get(g.key(), 0)
            if n != 1:
                cert.failures.append(("factorization", W, g, n))
        cert.nonsingular_composites += good_g
        if good_g != good_h:
            cert.failures.append(("bijection", W, good_g, good_h))
    return cert


def petit_hom(X: ps.Presheaf, Y: ps.Presheaf) -> list:
    """All non-singular maps ``X -> Y``."""
    out = []
    for n, f in enumerate(ps.hom(X, Y), 1):
        limits.check(n, limits.ENUMERATION_LIMIT, "hom enumeration")
        if nonsingular(f):
            out.append(f)
    return out


def is_cartesian_wrt(P: lsc.Probe, f: ps.NatTrans):
    """Whether the skeleton counit square at ``f`` is a pullback; ``(ok, witness)``.

    The witness is an element of the domain that is not ``P``-singular although its
    image is, or (when the square does not even exist) a singular element sent
    to a non-singular one.
    """
    from .shell import skeleton

    SX = skeleton(P, f.source)
    SY = skeleton(P, f.target)
    for c in f.site.objects:
        for x in f.source.at(c):
            inside = x in SX.selected[c]
            image_inside = f(c, x) in SY.selected[c]
            if inside != image_inside:
                return False, (c, x, f(c, x))
    return True, None


@dataclass
class DescentReport:
    commutes: bool
    pullback: bool
    right_epi: bool
    top_nonsingular: bool
    bottom_nonsingular: bool
    top_defect: SingularityDefect
    bottom_defect: SingularityDefect

    @property
    def descent_holds(self) -> bool:
        """False exactly when the pulled-back map is non-singular but the base map is not."""
        if not self.right_epi:
            return True
        return self.bottom_nonsingular or not self.top_nonsingular


def calibration_descent_check(top: ps.NatTrans, bottom: ps.NatTrans, left: ps.NatTrans, right: ps.NatTrans) -> DescentReport:
    """Check descent of non-singularity along ``right`` in the square::

        K --top--> B
        |left      |right
        A --bottom--> Y

    Raises NotAPullback if the square does not commute or is not a pullback.
    """
    if not (top.source == left.source and top.target == right.source
            and left.target == bottom.source and bottom.target == right.target):
        raise NotAPullback("maps do not form a square")
    if ps.compose(bottom, left) != ps.compose(right, top):
        raise NotAPullback("square does not commute")
    K = top.source
    for c in K.site.objects:
        pairs = [(left(c, k), top(c, k)) for k in K.at(c)]
        expected = {
            (a, b)
            for a in bottom.source.at(c)
            for b in right.source.at(c)
            if bottom(c, a) == right(c, b)
        }
        if len(set(pairs)) != len(pairs) or set(pairs) != expected:
            raise NotAPullback(f"square is not a pullback at {c!r}")
    top_defect = is_nonsingular(top)
    bottom_defect = is_nonsingular(bottom)
    return DescentReport(
        commutes=True,
        pullback=True,
        right_epi=ps.is_epi(right),
        top_nonsingular=top_defect.nonsingular,
        bottom_nonsingular=bottom_defect.nonsingular,
        top_defect=top_defect,
        bottom_defect=bottom_defect,
    )


def pullback_square(bottom: ps.NatTrans, right: ps.NatTrans):
    """The pullback square of ``bottom`` along ``right`` as ``(top, left)``."""
    _, left, top = ps.pullback(bottom, right)
    return top, left
