"""Skeleta of probes, shell-axiom checks, and the probe/coherent-family census."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import lsc
from . import presheaf as ps
from .errors import NotSaturated
from .fincat import FiniteCategory


def skeleton(P: lsc.Probe, X: ps.Presheaf) -> ps.Subpresheaf:
    """``Sk_P X``: the subpresheaf of figures whose kernel lies in ``P``.

    ``.presheaf()`` is ``Sk_P X`` and ``.inclusion()`` the mono ``sk_{P,X}``.
    """
    sel = {
        c: [x for x in X.at(c) if lsc.kernel_of_figure(X, c, x) in P.selected[c]]
        for c in X.site.objects
    }
    return ps.Subpresheaf(X, sel, check=False)


def is_skeletal(P: lsc.Probe, X: ps.Presheaf) -> bool:
    return skeleton(P, X).is_full()


def skeleton_of_map(P: lsc.Probe, psi: ps.NatTrans, *, require_saturated=True) -> ps.NatTrans:
    """``Sk_P ψ``, the restriction of ``ψ`` to the skeleta.

    Raises NotSaturated when ``P`` is not saturated (if required) or when some
    singular figure is sent to a non-singular one; the witness is
    ``(object, element, image)``.
    """
    SX = skeleton(P, psi.source)
    SY = skeleton(P, psi.target)
    for c in psi.site.objects:
        for x in SX.selected[c]:
            y = psi(c, x)
            if y not in SY.selected[c]:
                raise NotSaturated(
                    f"{x!r} is P-singular but its image {y!r} is not", witness=(c, x, y)
                )
    if require_saturated and not lsc.is_saturated(P):
        raise NotSaturated("probe is not saturated")
    A, B = SX.presheaf(), SY.presheaf()
    comps = {c: {x: psi(c, x) for x in A.at(c)} for c in psi.site.objects}
    return ps.NatTrans(A, B, comps, check=False)


def mono_cartesian(P: lsc.Probe, m: ps.NatTrans):
    """Whether ``Sk_P X`` is the pullback of ``Sk_P Y`` along ``m``; returns ``(ok, witness)``."""
    SX = skeleton(P, m.source)
    pulled = ps.preimage(m, skeleton(P, m.target))
    if pulled == SX:
        return True, None
    for c in m.site.objects:
        diff = pulled.selected[c] ^ SX.selected[c]
        if diff:
            return False, (c, sorted(diff, key=ps.sort_key)[0])
    return False, None


class CoherentFamilyOracle:
    """A family ``X ↦ β_X ⊆ X`` queried one presheaf at a time."""

    def __init__(self, site: FiniteCategory, assign, provenance="external"):
        self.site = site
        self.assign = assign
        self.provenance = provenance

    @classmethod
    def from_probe(cls, P: lsc.Probe):
        return cls(P.site, lambda X: skeleton(P, X), provenance="probe-backed")

    def __call__(self, X):
        return self.assign(X)

    def check_coherent(self, monos):
        """Pullback condition on each sampled mono; returns the failing monos."""
        failures = []
        for m in monos:
            if ps.preimage(m, self(m.target)) != self(m.source):
                failures.append(m)
        return failures


@dataclass
class AxiomResult:
    name: str
    passed: bool
    checked: int = 0
    witness: object = None


@dataclass
class ShellReport:
    probe: lsc.Probe
    saturated: bool
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def check_shell_axioms(P: lsc.Probe, presheaves=(), monos=(), maps=()) -> ShellReport:
    """Check the shell axioms for ``Sk_P`` on a sample.

    ``counit_monic``, ``idempotent``, ``coalgebras_skeletal`` and
    ``mono_cartesian`` hold for every probe; ``functorial`` (the skeleton of
    every sampled map exists and composes) needs saturation and reports a
    witness when it fails.
    """
    report = ShellReport(P, lsc.is_saturated(P))
    presheaves = list(presheaves)

    monic, idem, coalg = AxiomResult("counit_monic", True), AxiomResult("idempotent", True), AxiomResult(
        "coalgebras_skeletal", True
    )
    for X in presheaves:
        S = skeleton(P, X)
        monic.checked += 1
        if not ps.is_mono(S.inclusion()):
            monic.passed, monic.witness = False, X
        idem.checked += 1
        if not skeleton(P, S.presheaf()).is_full():
            idem.passed, idem.witness = False, X
        # coalgebra structure exists iff the counit is invertible iff X is skeletal
        coalg.checked += 1
        skeletal = all(lsc.kernel_of_figure(X, c, x) in P.selected[c] for c, x in X.elements())
        if skeletal != S.is_full():
            coalg.passed, coalg.witness = False, X
    report.results += [monic, idem, coalg]

    cart = AxiomResult("mono_cartesian", True)
    for m in monos:
        cart.checked += 1
        ok, witness = mono_cartesian(P, m)
        if not ok:
            cart.passed, cart.witness = False, witness
    report.results.append(cart)

    func = AxiomResult("functorial", True)
    for X in presheaves:
        func.checked += 1
        sid = skeleton_of_map(P, ps.identity(X), require_saturated=False)
        if sid != ps.identity(sid.source):
            func.passed, func.witness = False, ("identity", X)
    maps = list(maps)
    for psi in maps:
        func.checked += 1
        try:
            skeleton_of_map(P, psi, require_saturated=False)
        except NotSaturated as exc:
            func.passed, func.witness = False, exc.witness
            break
    if func.passed:
        for g in maps:
            for f in maps:
                if f.target != g.source:
                    continue
                gf = ps.compose(g, f)
                lhs = skeleton_of_map(P, gf, require_saturated=False)
                rhs = ps.compose(
                    skeleton_of_map(P, g, require_saturated=False),
                    skeleton_of_map(P, f, require_saturated=False),
                )
                func.checked += 1
                if lhs.components != rhs.components:
                    func.passed, func.witness = False, ("composition", f, g)
    report.results.append(func)
    return report


def find_functoriality_witness(P: lsc.Probe, presheaves):
    """Search maps between the given presheaves for one that leaves the skeleta."""
    for X in presheaves:
        for Y in presheaves:
            for psi in ps.hom(X, Y):
                try:
                    skeleton_of_map(P, psi, require_saturated=False)
                except NotSaturated as exc:
                    return psi, exc.witness
    return None


def _all_subobject_inclusions(X):
    return [S.inclusion() for S in ps.subpresheaves(X)]


@dataclass
class CensusRow:
    site: str
    probe: str
    saturated: bool
    upper_closed: bool
    coherent: bool
    idempotent: bool
    functorial: bool
    probe_roundtrip: bool
    family_roundtrip: bool
    empty_selection: bool = False  # some P(c) is empty; allowed, but flagged

    @property
    def passed(self) -> bool:
        return (
            self.saturated == self.upper_closed
            and self.coherent
            and self.idempotent
            and (self.functorial or not self.saturated)
            and self.probe_roundtrip
            and self.family_roundtrip
        )


@dataclass
class CensusReport:
    site: str
    bound: int
    probe_count: int
    subpresheaf_count: int
    saturated_count: int
    upper_closed_count: int
    presheaf_count: int
    bijection: bool
    rows: list

    @property
    def passed(self) -> bool:
        return (
            self.bijection
            and self.saturated_count == self.upper_closed_count
            and all(r.passed for r in self.rows)
        )


def roundtrip_census(C: FiniteCategory, bound: int = 3, *, functoriality_pairs: int = 400) -> CensusReport:
    """Exhaustive probe ↔ coherent family census on one site.

    Probes are enumerated directly and compared with the subpresheaves of Ξ;
    each probe's skeleton family is checked for coherence on every inclusion
    of a subpresheaf of the enumerated presheaves, both round trips are
    evaluated, and every probe gets a functoriality check on maps between
    enumerated presheaves (capped at ``functoriality_pairs`` source/target
    pairs); only saturated probes are required to pass it.
    """
    xi = lsc.build_xi(C)
    probes = lsc.enumerate_probes(C)
    subs = list(ps.subpresheaves(xi.presheaf))

    sub_keys = {S.key() for S in subs}
    image_keys = [lsc.probe_to_subpresheaf(P).key() for P in probes]
    bijection = (
        len(set(image_keys)) == len(probes)
        and set(image_keys) == sub_keys
        and all(lsc.subpresheaf_to_probe(lsc.probe_to_subpresheaf(P)) == P for P in probes)
        and all(lsc.probe_to_subpresheaf(lsc.subpresheaf_to_probe(S)) == S for S in subs)
    )

    presheaves = ps.enumerate_presheaves(C, bound)
    monos = [m for X in presheaves for m in _all_subobject_inclusions(X)]
    pairs = [(X, Y) for X in presheaves for Y in presheaves][:functoriality_pairs]
    maps = [psi for X, Y in pairs for psi in ps.hom(X, Y)]

    rows = []
    for P in probes:
        family = CoherentFamilyOracle.from_probe(P)
        saturated = lsc.is_saturated(P)
        upper = lsc.is_upper_closed(lsc.probe_to_subpresheaf(P))
        coherent = not family.check_coherent(monos)
        idempotent = all(skeleton(P, skeleton(P, X).presheaf()).is_full() for X in presheaves)
        functorial = True
        for psi in maps:
            try:
                skeleton_of_map(P, psi, require_saturated=False)
            except NotSaturated:
                functorial = False
                break
        recovered = lsc.probe_from_coherent(family, C)
        probe_roundtrip = recovered == P
        family_roundtrip = all(skeleton(recovered, X) == family(X) for X in presheaves)
        rows.append(
            CensusRow(
                site=C.name or "category",
                probe=P.name(),
                saturated=saturated,
                upper_closed=upper,
                coherent=coherent,
                idempotent=idempotent,
                functorial=functorial,
                probe_roundtrip=probe_roundtrip,
                family_roundtrip=family_roundtrip,
                empty_selection=any(not P.selected[c] for c in C.objects),
            )
        )
    rows.sort(key=lambda r: r.probe)
    return CensusReport(
        site=C.name or "category",
        bound=bound,
        probe_count=len(probes),
        subpresheaf_count=len(subs),
        saturated_count=sum(r.saturated for r in rows),
        upper_closed_count=sum(lsc.is_upper_closed(S) for S in subs),
        presheaf_count=len(presheaves),
        bijection=bijection,
        rows=rows,
    )
