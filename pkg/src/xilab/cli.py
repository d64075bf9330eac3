"""Command-line entry point: ``xilab <subcommand> [options]``."""
from __future__ import annotations

import argparse
import csv
import io as _stringio
import json
import random
import sys
from dataclasses import dataclass, field

from . import fincat
from . import io
from . import lsc
from . import nonsing
from . import presheaf as ps
from . import rgraph as rg
from . import shell
from .errors import CategoryError, InternalInvariantError, XiLabError

# what each report certifies
CERTIFIES = {
    "cat-validate": "finite category axioms (identities, typing, associativity)",
    "cat-catalog": "built-in finite sites",
    "xi": "local state classifier as the presheaf of congruences",
    "sigma": "singularity measurement: each figure goes to its kernel",
    "points": "global elements of the local state classifier",
    "probes": "probes as subpresheaves of the classifier; saturation and intersection",
    "shell-check": "skeleton of a probe is a shell (monic, idempotent, mono-cartesian counit)",
    "census": "probes correspond to coherent families of monos; saturated ones to upper-closed subobjects",
    "nonsingular": "non-singular maps preserve the kernel of every figure",
    "coreflect": "maps into Y have a non-singular coreflection given by an equalizer",
    "petit-hom": "hom-sets of the petit topos of non-singular maps",
    "cartesian": "non-singular maps are cartesian for every shell",
    "rgraph sigma": "reflexive graphs: loops go to 'loop', other edges to 'non-loop'",
    "rgraph nonsingular": "reflexive graphs: non-singular iff loops and non-loops are preserved",
    "rgraph leibniz": "Leibniz core is the nodes with their loops",
    "rgraph classify": "lightly dense subgraphs are classified by maps into the classifier",
    "rgraph sierpinski": "non-singular graphs over the one-loop graph form the arrow category of sets",
    "rgraph calibration": "kernel pair of A -> L is A+1+1 and descent fails",
    "colimit-identity": "colimit of the identity functor is the terminal object",
}


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    seed: int
    passed: bool = True
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    dot: str | None = None

    def header(self):
        return [
            f"# command: {self.command}",
            f"# certifies: {CERTIFIES.get(self.command, self.command)}",
            f"# seed: {self.seed}",
        ]

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = {
                "command": self.command,
                "certifies": CERTIFIES.get(self.command, self.command),
                "seed": self.seed,
                "passed": self.passed,
                "data": self.data,
            }
            if self.rows:
                payload["rows"] = self.rows
            return json.dumps(payload, indent=2, ensure_ascii=False, default=str) + "\n"
        if fmt == "csv":
            if not self.rows:
                raise UsageError(f"{self.command} has no tabular output; use text or json")
            buf = _stringio.StringIO()
            buf.write("\n".join(self.header()) + "\n")
            writer = csv.DictWriter(buf, fieldnames=list(self.rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.rows)
            return buf.getvalue()
        if fmt == "dot":
            if self.dot is None:
                raise UsageError(f"{self.command} has no DOT output")
            return self.dot
        body = list(self.lines)
        body.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(self.header() + body) + "\n"


# --- argument helpers ---------------------------------------------------------

def _category(args, default=None):
    ref = args.category or default
    if ref is None:
        raise UsageError("--category is required")
    return io.load_category(ref)


def _fixture_presheaf(ref: str, C):
    if ref == "terminal":
        return ps.terminal(C)
    if ref == "xi":
        return lsc.build_xi(C).presheaf
    if ref.startswith("representable:"):
        c = ref.split(":", 1)[1]
        if c not in C.objects:
            raise UsageError(f"unknown object {c!r}")
        return ps.representable(C, c)
    if ref in ("A", "L") and C.name == "delta1":
        return rg.to_presheaf(rg.arrow() if ref == "A" else rg.loop_graph())
    return None


def _presheaf(ref, C):
    if ref is None:
        raise UsageError("--presheaf is required")
    X = _fixture_presheaf(ref, C)
    if X is not None:
        return X
    return io.presheaf_from_raw(io.load_json(ref), C)


def _map(ref, C):
    if ref is None:
        raise UsageError("--map is required")
    if ref == "q" and C.name == "delta1":
        return rg.map_to_nattrans(rg.collapse())
    if ref.startswith("identity:"):
        return ps.identity(_presheaf(ref.split(":", 1)[1], C))
    if ref.startswith("sigma:"):
        return lsc.sigma(_presheaf(ref.split(":", 1)[1], C))
    return io.nattrans_from_raw(io.load_json(ref), C)


def _probe(ref, C):
    if ref is None:
        raise UsageError("--probe is required")
    if ref == "all":
        return lsc.all_probe(C)
    if ref == "empty":
        return lsc.empty_probe(C)
    if ref == "leibniz" and C.name == "delta1":
        return rg.leibniz_probe()
    return io.probe_from_raw(io.load_json(ref), C)


def _graph(args):
    if args.graph is None and args.presheaf is None:
        raise UsageError("--graph (or --presheaf over delta1) is required")
    if args.graph in ("A", "L"):
        return rg.arrow() if args.graph == "A" else rg.loop_graph()
    if args.graph is not None:
        return io.graph_from_raw(io.load_json(args.graph))
    return rg.to_graph(_presheaf(args.presheaf, fincat.catalog("delta1")))


def _element(x) -> str:
    return x if isinstance(x, str) else repr(x)


# --- commands -----------------------------------------------------------------

def cmd_cat_validate(args, rep: Report):
    if args.category is None:
        raise UsageError("--category is required")
    try:
        C = io.load_category(args.category)
    except CategoryError as exc:
        rep.passed = False
        rep.lines.append(f"invalid: {type(exc).__name__}: {exc}")
        rep.data = {"valid": False, "error": type(exc).__name__, "message": str(exc), "morphisms": list(exc.morphisms)}
        return
    rep.lines.append(f"valid: {C.name or 'category'} with {len(C.objects)} objects, {len(C.morphisms)} morphisms")
    rows = []
    for f in C.morphisms:
        k = fincat.classify_morphism(C, f.id)
        rows.append({"morphism": f.id, "src": f.src, "dst": f.dst, "mono": k.mono, "epi": k.epi, "iso": k.iso, "split_mono": k.split_mono})
        rep.lines.append(f"  {f.id}: {f.src} -> {f.dst} mono={k.mono} epi={k.epi} iso={k.iso}")
    rep.rows = rows
    rep.data = {"valid": True, "objects": list(C.objects), "morphisms": len(C.morphisms)}


def cmd_cat_catalog(args, rep: Report):
    if args.category:
        C = fincat.catalog(args.category)
        rep.data = fincat.raw_catalog(C.name)
        rep.lines.append(json.dumps(rep.data, indent=2))
        return
    for name in fincat.CATALOG:
        C = fincat.catalog(name)
        rep.rows.append({"name": name, "objects": len(C.objects), "morphisms": len(C.morphisms)})
        rep.lines.append(f"{name}: {len(C.objects)} objects, {len(C.morphisms)} morphisms")
    rep.data = {"catalog": list(fincat.CATALOG)}


def cmd_xi(args, rep: Report):
    C = _category(args)
    if C.name == "delta1":
        rg.xi_anchor()
    xi = lsc.build_xi(C)
    for c in C.objects:
        rep.lines.append(f"Ξ({c}): {len(xi.at(c))} congruences")
        for e in xi.at(c):
            blocks = "; ".join(
                f"{d}: " + " | ".join("{" + ",".join(b) + "}" for b in bs)
                for d, bs in io.describe_congruence(e).items()
            )
            rep.lines.append(f"  {xi.name(e)}  [{blocks}]")
            rep.rows.append({"object": c, "name": xi.name(e), "blocks": e.num_blocks})
    rep.data = io.xi_to_raw(C)
    if C.name in ("delta1", "parallel_pair"):
        names = {c: {e: xi.name(e) for e in xi.at(c)} for c in C.objects}
        named = ps.relabel(xi.presheaf, names)
        labels = None
        if C.name == "delta1":
            labels = {xi.name(e): lab for e, lab in rg.xi_anchor().items() if lab != rg.DEGENERATE}
        rep.dot = io.presheaf_to_dot(named, show_degenerate=args.degenerate, labels=labels)


def cmd_sigma(args, rep: Report):
    C = _category(args)
    X = _presheaf(args.presheaf, C)
    xi = lsc.build_xi(C)
    s = lsc.sigma(X)
    lsc.check_lax(ps.identity(X))
    for c in C.objects:
        for x in X.at(c):
            name = xi.name(s(c, x))
            rep.lines.append(f"{c} {_element(x)} -> {name}")
            rep.rows.append({"object": c, "element": _element(x), "kernel": name})
    rep.data = {"sigma": rep.rows}


def cmd_points(args, rep: Report):
    C = _category(args)
    xi = lsc.build_xi(C)
    pts = lsc.points(xi.presheaf)
    rep.lines.append(f"points of Ξ over {C.name or 'category'}: {len(pts)}")
    for p in pts:
        desc = ", ".join(f"{c}: {xi.name(p(c, '*'))}" for c in C.objects)
        rep.lines.append(f"  {{{desc}}}")
        rep.rows.append({c: xi.name(p(c, "*")) for c in C.objects})
    rep.lines.append(f"diagonals form a point: {lsc.diagonal_is_point(C)}")
    rep.data = {"count": len(pts), "diagonal_is_point": lsc.diagonal_is_point(C)}


def cmd_probes(args, rep: Report):
    C = _category(args)
    if args.action == "enumerate":
        probes = lsc.enumerate_probes(C)
        for P in probes:
            sat = lsc.is_saturated(P)
            rep.lines.append(f"{P.name()}  saturated={sat}")
            rep.rows.append({"probe": P.name(), "saturated": sat})
        rep.lines.append(f"total: {len(probes)}, saturated: {sum(r['saturated'] for r in rep.rows)}")
        rep.data = {"count": len(probes), "saturated": sum(r["saturated"] for r in rep.rows)}
    elif args.action == "saturate":
        P = _probe(_single(args.probe), C)
        S = lsc.saturate(P)
        rep.lines += [f"input: {P.name()}", f"saturation: {S.name()}"]
        rep.data = {"input": io.probe_to_raw(P), "saturation": io.probe_to_raw(S)}
    else:
        if not args.probe or len(args.probe) < 2:
            raise UsageError("intersect needs at least two --probe files")
        probes = [_probe(p, C) for p in args.probe]
        M = lsc.intersect(probes)
        rep.lines += [f"input: {P.name()}" for P in probes]
        rep.lines.append(f"intersection: {M.name()}  saturated={lsc.is_saturated(M)}")
        rep.data = {"intersection": io.probe_to_raw(M), "saturated": lsc.is_saturated(M)}


def _single(values):
    if not values:
        raise UsageError("--probe is required")
    if len(values) > 1:
        raise UsageError("exactly one --probe expected")
    return values[0]


def cmd_shell_check(args, rep: Report):
    C = _category(args)
    P = _probe(_single(args.probe), C)
    rng = random.Random(args.seed)
    sample = [ps.random_presheaf(C, rng) for _ in range(args.samples)]
    if args.presheaf:
        sample.insert(0, _presheaf(args.presheaf, C))
    sample += ps.enumerate_presheaves(C, min(args.bound, 3))
    monos = [S.inclusion() for X in sample[: args.samples] for S in ps.subpresheaves(X)]
    small = ps.enumerate_presheaves(C, min(args.bound, 3))
    maps = [f for X in small for Y in small for f in ps.hom(X, Y)]
    report = shell.check_shell_axioms(P, sample, monos, maps)
    rep.lines.append(f"probe: {P.name()}  saturated={report.saturated}")
    for r in report.results:
        w = "" if r.passed else f"  witness={r.witness!r}"
        rep.lines.append(f"  {r.name}: {'ok' if r.passed else 'FAILED'} ({r.checked} checks){w}")
        rep.rows.append({"axiom": r.name, "passed": r.passed, "checked": r.checked})
    rep.passed = report.passed
    rep.data = {"probe": io.probe_to_raw(P), "saturated": report.saturated, "axioms": rep.rows}


def cmd_census(args, rep: Report):
    C = _category(args)
    report = shell.roundtrip_census(C, bound=args.bound)
    rep.lines.append(
        f"site {report.site}: {report.probe_count} probes, {report.subpresheaf_count} subpresheaves of Ξ, "
        f"{report.saturated_count} saturated, {report.upper_closed_count} upper-closed, "
        f"{report.presheaf_count} presheaves (bound {report.bound})"
    )
    rep.lines.append(f"probe/subpresheaf bijection: {report.bijection}")
    for r in report.rows:
        row = {
            "site": r.site,
            "probe": r.probe,
            "saturated": r.saturated,
            "upper_closed": r.upper_closed,
            "coherent": r.coherent,
            "idempotent": r.idempotent,
            "functorial": r.functorial,
            "probe_roundtrip": r.probe_roundtrip,
            "family_roundtrip": r.family_roundtrip,
            "empty_selection": r.empty_selection,
            "passed": r.passed,
        }
        rep.rows.append(row)
        rep.lines.append("  " + "  ".join(f"{k}={v}" for k, v in row.items() if k != "site"))
    rep.passed = report.passed
    rep.data = {
        "probes": report.probe_count,
        "subpresheaves": report.subpresheaf_count,
        "saturated": report.saturated_count,
        "upper_closed": report.upper_closed_count,
        "bijection": report.bijection,
    }


def _defect_lines(defect, xi):
    out = []
    for c, x, kx, kfx in defect.witnesses:
        out.append(f"  {c} {_element(x)}: kernel {xi.name(kx)} becomes {xi.name(kfx)}")
    return out


def cmd_nonsingular(args, rep: Report):
    C = _category(args)
    f = _map(args.map, C)
    defect = nonsing.is_nonsingular(f)
    xi = lsc.build_xi(C)
    rep.lines.append(f"non-singular: {defect.nonsingular} ({defect.count} defects)")
    rep.lines += _defect_lines(defect, xi)
    rep.passed = defect.nonsingular
    rep.data = {
        "nonsingular": defect.nonsingular,
        "defects": [
            {"object": c, "element": _element(x), "kernel": xi.name(kx), "image_kernel": xi.name(kfx)}
            for c, x, kx, kfx in defect.witnesses
        ],
    }


def cmd_coreflect(args, rep: Report):
    C = _category(args)
    f = _map(args.map, C)
    core = nonsing.coreflect(f)
    sel = {c: sorted((_element(x) for x in core.sub.selected[c])) for c in C.objects}
    rep.lines.append("coreflection: " + "; ".join(f"{c}: {', '.join(v) or '∅'}" for c, v in sel.items()))
    for k, v in core.certificate.items():
        rep.lines.append(f"  {k}: {v}")
    cert = nonsing.certify_universal(f, ps.enumerate_presheaves(C, args.bound), core)
    rep.lines.append(
        f"universal property over {cert.domains} domains (bound {args.bound}): "
        f"{cert.maps_checked} maps, {cert.nonsingular_composites} non-singular composites, "
        f"{len(cert.failures)} failures"
    )
    rep.passed = core.certificate["restricted_nonsingular"] and core.certificate["counit_mono"] and cert.passed
    rep.data = {"sub": sel, "certificate": core.certificate, "universal_failures": len(cert.failures)}


def cmd_petit_hom(args, rep: Report):
    C = _category(args)
    X = _presheaf(args.presheaf, C)
    Y = _presheaf(args.target, C)
    total = sum(1 for _ in ps.hom(X, Y))
    found = nonsing.petit_hom(X, Y)
    rep.lines.append(f"maps: {total}, non-singular: {len(found)}")
    for f in found:
        comp = "; ".join(
            f"{c}: " + ", ".join(f"{_element(x)}->{_element(f(c, x))}" for x in X.at(c)) for c in C.objects
        )
        rep.lines.append(f"  {comp}")
    rep.data = {"maps": total, "nonsingular": len(found)}


def cmd_cartesian(args, rep: Report):
    C = _category(args)
    P = _probe(_single(args.probe), C)
    f = _map(args.map, C)
    ok, witness = nonsing.is_cartesian_wrt(P, f)
    ns = nonsing.nonsingular(f)
    rep.lines.append(f"probe: {P.name()}  saturated={lsc.is_saturated(P)}")
    rep.lines.append(f"map non-singular: {ns}")
    rep.lines.append(f"cartesian: {ok}" + ("" if ok else f"  witness={witness!r}"))
    rep.passed = ok
    rep.data = {"cartesian": ok, "nonsingular": ns, "witness": None if ok else [_element(w) for w in witness]}


def cmd_colimit_identity(args, rep: Report):
    names = [args.category] if args.category else list(fincat.CATALOG)
    for name in names:
        C = io.load_category(name)
        t = fincat.terminal_object(C)
        col = fincat.identity_colimit(C)
        v = col[0] if col else None
        agree = t == v
        rep.passed &= agree
        rep.lines.append(f"{C.name or name}: terminal={t} colimit={v} agree={agree}")
        rep.rows.append({"site": C.name or name, "terminal": t, "colimit": v, "agree": agree})
    rep.data = {"sites": rep.rows}


def cmd_rgraph(args, rep: Report):
    rg.xi_anchor()
    action = args.action
    if action == "sigma":
        G = _graph(args)
        labels = rg.sigma_fast(G)
        slow = rg.sigma_via_presheaf(G)
        for e, lab in labels.items():
            rep.lines.append(f"{_element(e)} -> {lab}")
            rep.rows.append({"edge": _element(e), "label": lab})
        rep.passed = labels == slow
        rep.lines.append(f"agrees with kernel computation: {labels == slow}")
        rep.data = {"labels": {_element(e): v for e, v in labels.items()}}
        rep.dot = rg.to_dot(G, show_degenerate=args.degenerate, labels=labels)
    elif action == "nonsingular":
        if args.map in (None, "q"):
            f = rg.collapse()
        else:
            f = io.graph_map_from_raw(io.load_json(args.map))
        ok, witness = rg.nonsingular_fast(f)
        slow = nonsing.nonsingular(rg.map_to_nattrans(f))
        rep.lines.append(f"non-singular: {ok}" + ("" if ok else f"  witness edge={_element(witness)}"))
        rep.lines.append(f"agrees with kernel computation: {ok == slow}")
        rep.passed = ok and ok == slow
        rep.data = {"nonsingular": ok, "witness": None if ok else _element(witness)}
    elif action == "leibniz":
        G = _graph(args)
        coh = rg.cohesion(G)
        core = coh.leibniz_core
        rep.lines.append(f"points: {len(coh.points)}")
        rep.lines.append(f"components: {len(coh.components)} " + str([list(c) for c in coh.components]))
        rep.lines.append(f"Leibniz: {coh.is_leibniz}")
        rep.lines.append("core loops: " + ", ".join(sorted(_element(e) for e in core.edges)))
        same = shell.skeleton(rg.leibniz_probe(), rg.to_presheaf(G)) == core.to_subpresheaf()
        rep.lines.append(f"core equals the skeleton of the loop probe: {same}")
        rep.passed = same
        rep.data = {"points": len(coh.points), "components": len(coh.components), "leibniz": coh.is_leibniz}
    elif action == "classify":
        G = _graph(args)
        if args.subgraph is None:
            u = rg.leibniz_core(G)
        else:
            u = io.subgraph_from_raw(io.load_json(args.subgraph), G)
        defect = rg.lightly_dense_defect(u)
        if defect is not None:
            rep.passed = False
            rep.lines.append(f"not lightly dense: {defect[0]} {_element(defect[1])}")
            rep.data = {"lightly_dense": False, "witness": [defect[0], _element(defect[1])]}
            return
        chi = rg.classify_lightly_dense(u)
        unique = len(rg.classifying_maps(u)) == 1
        for e, lab in chi.edge_map.items():
            rep.lines.append(f"{_element(e)} -> {lab}")
        rep.lines.append(f"unique discrete-fiber classifying map: {unique}")
        rep.passed = unique
        rep.data = {"lightly_dense": True, "chi": {_element(e): v for e, v in chi.edge_map.items()}, "unique": unique}
        rep.dot = rg.to_dot(G, show_degenerate=args.degenerate, labels=chi.edge_map)
    elif action == "sierpinski":
        r = rg.sierpinski_check(args.bound)
        rep.lines.append(f"graphs up to {r.bound} nodes and {r.edge_bound} edges: {r.graphs} ({r.loop_only} loop-only)")
        rep.lines.append("non-singular map to L exists iff all edges are loops, and is unique: "
                         f"{not any(f[0] == 'maps to L' for f in r.failures)}")
        rep.lines.append(f"maps over L = maps of functions loops -> nodes: {r.hom_pairs} pairs, "
                         f"{r.maps_compared} maps, {len(r.failures)} failures")
        rep.passed = r.passed
        rep.data = {"graphs": r.graphs, "loop_only": r.loop_only, "hom_pairs": r.hom_pairs, "failures": len(r.failures)}
    elif action == "calibration":
        r = rg.calibration_counterexample()
        d = r.descent
        rep.lines.append(f"kernel pair of q: A -> L has sizes {r.kernel_pair_sizes}")
        rep.lines.append(f"kernel pair ≅ A + 1 + 1: {r.kernel_pair_is_A_plus_1_plus_1}")
        rep.lines.append(f"q epi: {d.right_epi}")
        rep.lines.append(f"pulled-back projection non-singular: {d.top_nonsingular}")
        rep.lines.append(f"q non-singular: {d.bottom_nonsingular}")
        rep.lines.append(f"descent holds: {d.descent_holds}")
        rep.passed = r.passed
        rep.data = {
            "kernel_pair_sizes": r.kernel_pair_sizes,
            "is_A_plus_1_plus_1": r.kernel_pair_is_A_plus_1_plus_1,
            "top_nonsingular": d.top_nonsingular,
            "bottom_nonsingular": d.bottom_nonsingular,
            "descent_holds": d.descent_holds,
        }


COMMANDS = {
    "cat-validate": cmd_cat_validate,
    "cat-catalog": cmd_cat_catalog,
    "xi": cmd_xi,
    "sigma": cmd_sigma,
    "points": cmd_points,
    "probes": cmd_probes,
    "shell-check": cmd_shell_check,
    "census": cmd_census,
    "nonsingular": cmd_nonsingular,
    "coreflect": cmd_coreflect,
    "petit-hom": cmd_petit_hom,
    "cartesian": cmd_cartesian,
    "rgraph": cmd_rgraph,
    "colimit-identity": cmd_colimit_identity,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--category", help="catalog name or category file")
    common.add_argument("--presheaf", help="presheaf file, graph file, or fixture (terminal, xi, representable:<c>, A, L)")
    common.add_argument("--target", help="second presheaf (petit-hom)")
    common.add_argument("--map", help="map file or fixture (q, identity:<p>, sigma:<p>)")
    common.add_argument("--probe", action="append", help="probe file or all/empty/leibniz; repeat for intersect")
    common.add_argument("--graph", help="graph file or fixture A/L (rgraph)")
    common.add_argument("--subgraph", help="subgraph file {nodes, edges} (rgraph classify)")
    common.add_argument("--bound", type=int, default=3, help="enumeration bound (default 3)")
    common.add_argument("--samples", type=int, default=20, help="random samples (default 20)")
    common.add_argument("--seed", type=int, default=0, help="seed for random sampling (default 0)")
    common.add_argument("--format", choices=("text", "json", "csv", "dot"), default="text")
    common.add_argument("--degenerate", action="store_true", help="draw degenerate edges (dotted) in DOT output")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="xilab", description="Local state classifiers, probes and non-singular maps on finite sites.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=CERTIFIES.get(name))
        if name == "probes":
            p.add_argument("action", choices=("enumerate", "saturate", "intersect"))
        if name == "rgraph":
            p.add_argument("action", choices=("sigma", "nonsingular", "leibniz", "classify", "sierpinski", "calibration"))
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.bound <= 0 or args.samples < 0:
        parser.error("--bound must be positive and --samples non-negative")
    command = args.command if args.command != "rgraph" else f"rgraph {args.action}"
    rep = Report(command, args.seed)
    try:
        COMMANDS[args.command](args, rep)
        text = rep.render(args.format)
    except UsageError as exc:
        print(f"xilab: error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"xilab: internal invariant violated: {exc}", file=sys.stderr)
        return 3
    except XiLabError as exc:
        print(f"xilab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
