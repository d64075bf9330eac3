"""JSON file formats and DOT export."""
from __future__ import annotations

import json
from pathlib import Path

from . import fincat
from . import lsc
from . import presheaf as ps
from . import rgraph as rg
from .errors import MalformedData


def _freeze(v):
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v


def _thaw(v):
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedData(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise MalformedData(f"cannot read {path}: {exc.strerror}") from None


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


# --- categories ----------------------------------------------------------------

def load_category(ref: str) -> fincat.FiniteCategory:
    """A catalog name or a path to a category file."""
    if ref in fincat.CATALOG:
        return fincat.catalog(ref)
    raw = load_json(ref)
    return fincat.validate_category(raw, name=raw.get("name") if isinstance(raw, dict) else None)


# --- presheaves and maps -------------------------------------------------------

def _plain(X: ps.Presheaf) -> bool:
    return all(isinstance(x, (str, int)) and not isinstance(x, bool) for _, x in X.elements())


def presheaf_to_raw(X: ps.Presheaf) -> dict:
    """Elements that are not strings or integers are renamed ``c:i`` first."""
    if not _plain(X):
        X = ps.relabel(X)
    C = X.site
    action = [
        {"element": x, "morphism": f.id, "result": X.act(x, f.id)}
        for f in C.morphisms
        if not C.is_identity(f.id)
        for x in X.at(f.dst)
    ]
    return {
        "site": C.name,
        "carrier": {c: list(X.at(c)) for c in C.objects},
        "action": action,
    }


def presheaf_from_raw(raw, site: fincat.FiniteCategory) -> ps.Presheaf:
    if not isinstance(raw, dict):
        raise MalformedData("a presheaf description must be a record")
    if "nodes" in raw:
        return rg.to_presheaf(graph_from_raw(raw))
    try:
        carrier = {c: [_freeze(x) for x in xs] for c, xs in raw["carrier"].items()}
        action = [
            {"element": _freeze(e["element"]), "morphism": e["morphism"], "result": _freeze(e["result"])}
            for e in raw["action"]
        ]
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedData(f"malformed presheaf description: missing {exc}") from None
    return ps.validate({"carrier": carrier, "action": action}, site)


def nattrans_to_raw(f: ps.NatTrans) -> dict:
    if not (_plain(f.source) and _plain(f.target)):
        raise MalformedData("map files need string or integer elements; relabel first")
    return {
        "source": presheaf_to_raw(f.source),
        "target": presheaf_to_raw(f.target),
        "components": {
            c: [[x, f(c, x)] for x in f.source.at(c)] for c in f.site.objects
        },
    }


def nattrans_from_raw(raw, site: fincat.FiniteCategory) -> ps.NatTrans:
    if not isinstance(raw, dict):
        raise MalformedData("a map description must be a record")
    if "nodes" in raw and "source" in raw:
        return rg.map_to_nattrans(graph_map_from_raw(raw))
    try:
        X = presheaf_from_raw(raw["source"], site)
        Y = presheaf_from_raw(raw["target"], site)
        comps = {}
        for c, entries in raw["components"].items():
            if isinstance(entries, dict):
                comps[c] = {_freeze(k): _freeze(v) for k, v in entries.items()}
            else:
                comps[c] = {_freeze(k): _freeze(v) for k, v in entries}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedData(f"malformed map description: {exc}") from None
    return ps.validate({"components": comps}, site, source=X, target=Y)


# --- probes and Ξ ----------------------------------------------------------------

def probe_to_raw(P: lsc.Probe) -> dict:
    xi = lsc.build_xi(P.site)
    return {c: [xi.name(e) for e in xi.at(c) if e in P.selected[c]] for c in P.site.objects}


def probe_from_raw(raw, site: fincat.FiniteCategory) -> lsc.Probe:
    if not isinstance(raw, dict):
        raise MalformedData("a probe description maps objects to congruence names")
    for c, names in raw.items():
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise MalformedData(f"probe entry for {c!r} must be a list of congruence names")
    return lsc.validate_probe(raw, site)


def describe_congruence(e: lsc.Congruence) -> dict:
    return {d: [sorted(b, key=ps.sort_key) for b in e.blocks(d)] for d in e.site.objects if e.blocks(d)}


def xi_to_raw(C: fincat.FiniteCategory) -> dict:
    """Ξ as a presheaf file with named elements, plus the name sidecar."""
    xi = lsc.build_xi(C)
    X = xi.presheaf
    names = {c: {e: xi.name(e) for e in X.at(c)} for c in C.objects}
    named = ps.relabel(X, names)
    return {
        "presheaf": presheaf_to_raw(named),
        "names": {xi.name(e): describe_congruence(e) for c in C.objects for e in X.at(c)},
    }


# --- graphs ---------------------------------------------------------------------

def graph_to_raw(X: rg.ReflexiveGraph) -> dict:
    return {
        "nodes": list(X.nodes),
        "edges": [{"id": e, "src": s, "tgt": t} for e, (s, t) in X.edges.items()],
    }


def graph_from_raw(raw) -> rg.ReflexiveGraph:
    try:
        edges = {}
        for e in raw.get("edges", []):
            if e["id"] in edges:
                raise MalformedData(f"duplicate edge id {e['id']!r}")
            edges[e["id"]] = (_freeze(e["src"]), _freeze(e["tgt"]))
        return rg.ReflexiveGraph([_freeze(n) for n in raw["nodes"]], edges, name=raw.get("name"))
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedData(f"malformed graph description: {exc}") from None


def graph_map_to_raw(f: rg.GraphMap) -> dict:
    return {
        "source": graph_to_raw(f.source),
        "target": graph_to_raw(f.target),
        "nodes": [[n, f.node_map[n]] for n in f.source.nodes],
        "edges": [[e, f.edge_map[e]] for e in f.source.edges],
    }


def graph_map_from_raw(raw) -> rg.GraphMap:
    try:
        X = graph_from_raw(raw["source"])
        Y = graph_from_raw(raw["target"])
        nm = {_freeze(a): _freeze(b) for a, b in raw["nodes"]}
        em = {_freeze(a): _freeze(b) for a, b in raw.get("edges", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedData(f"malformed graph map description: {exc}") from None
    return rg.GraphMap(X, Y, nm, em)


def subgraph_from_raw(raw, X: rg.ReflexiveGraph) -> rg.Subgraph:
    try:
        return rg.Subgraph(X, [_freeze(n) for n in raw["nodes"]], [_freeze(e) for e in raw.get("edges", [])])
    except (KeyError, TypeError) as exc:
        raise MalformedData(f"malformed subgraph description: {exc}") from None


# --- DOT ------------------------------------------------------------------------

def _q(x) -> str:
    text = x if isinstance(x, str) else repr(x)
    return '"' + text.replace('"', '\\"') + '"'


def presheaf_to_dot(X: ps.Presheaf, *, show_degenerate: bool = False, labels=None) -> str:
    """Draw a presheaf on ``delta1`` or ``parallel_pair`` as a graph."""
    name = X.site.name
    if name == "delta1":
        G, names = rg.from_presheaf(X)
        edge_labels = {names["[1]"][e]: labels[e] for e in labels} if labels else None
        return rg.to_dot(G, show_degenerate=show_degenerate, labels=edge_labels)
    if name == "parallel_pair":
        lines = ["digraph G {"]
        for n in X.at("v"):
            lines.append(f"  {_q(n)};")
        for e in X.at("e"):
            label = labels.get(e, e) if labels else e
            lines.append(f"  {_q(X.act(e, 's'))} -> {_q(X.act(e, 't'))} [label={_q(label)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise MalformedData("DOT export is available for presheaves on delta1 and parallel_pair")
