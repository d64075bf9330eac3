"""Reflexive graphs: a direct implementation of presheaves on Δ₁ with their
cohesive structure, the fast singularity labelling, and the lightly dense classifier."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from . import fincat
from . import lsc
from . import nonsing
from . import presheaf as ps
from .errors import InternalInvariantError, MalformedData, NotLightlyDense, NotOverDelta1
from . import limits

LOOP = "loop"
NON_LOOP = "non-loop"
DEGENERATE = "degenerate"


def degenerate_id(n) -> str:
    return f"id_{n}"


class ReflexiveGraph:
    """Nodes plus non-degenerate edges ``id -> (src, tgt)``; every node also
    carries a degenerate edge named ``id_<node>``."""

    def __init__(self, nodes, edges=None, *, name=None):
        nodes = list(nodes)
        self.nodes = tuple(sorted(set(nodes), key=ps.sort_key))
        if len(self.nodes) != len(nodes):
            raise MalformedData("duplicate nodes")
        self.edges = dict(sorted((edges or {}).items(), key=lambda kv: ps.sort_key(kv[0])))
        self.name = name
        members = set(self.nodes)
        degenerate = {degenerate_id(n) for n in self.nodes}
        for e, (s, t) in self.edges.items():
            if s not in members or t not in members:
                raise MalformedData(f"edge {e!r} has an endpoint outside the node set")
            if e in degenerate:
                raise MalformedData(f"edge id {e!r} collides with a degenerate edge")

    def src(self, e):
        return self._ends(e)[0]

    def tgt(self, e):
        return self._ends(e)[1]

    def _ends(self, e):
        if e in self.edges:
            return self.edges[e]
        for n in self.nodes:
            if degenerate_id(n) == e:
                return (n, n)
        raise MalformedData(f"unknown edge {e!r}")

    def all_edges(self):
        return [degenerate_id(n) for n in self.nodes] + list(self.edges)

    def is_degenerate(self, e) -> bool:
        return e not in self.edges

    def loops(self):
        return [e for e, (s, t) in self.edges.items() if s == t]

    def non_loops(self):
        return [e for e, (s, t) in self.edges.items() if s != t]

    def edges_between(self, s, t):
        out = [e for e, ends in self.edges.items() if ends == (s, t)]
        return ([degenerate_id(s)] if s == t else []) + out

    def __eq__(self, other):
        return isinstance(other, ReflexiveGraph) and self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self):
        return hash((self.nodes, tuple(self.edges.items())))

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<ReflexiveGraph {label}{len(self.nodes)} nodes, {len(self.edges)} edges>"


class GraphMap:
    """A homomorphism; ``edge_map`` covers the non-degenerate source edges."""

    def __init__(self, source: ReflexiveGraph, target: ReflexiveGraph, node_map, edge_map, *, check=True):
        self.source = source
        self.target = target
        self.node_map = dict(node_map)
        self.edge_map = dict(edge_map)
        if check:
            self._check()

    def _check(self):
        X, Y = self.source, self.target
        for n in X.nodes:
            if self.node_map.get(n) not in Y.nodes:
                raise MalformedData(f"node {n!r} is not sent to a node of the target")
        for e, (s, t) in X.edges.items():
            if e not in self.edge_map:
                raise MalformedData(f"edge {e!r} has no image")
            img = self.edge_map[e]
            if Y._ends(img) != (self.node_map[s], self.node_map[t]):
                raise MalformedData(f"image of edge {e!r} does not respect its endpoints")

    def edge(self, e):
        if e in self.edge_map:
            return self.edge_map[e]
        return degenerate_id(self.node_map[self.source.src(e)])

    def key(self):
        return (
            tuple(sorted(self.node_map.items(), key=lambda kv: ps.sort_key(kv[0]))),
            tuple(sorted(self.edge_map.items(), key=lambda kv: ps.sort_key(kv[0]))),
        )

    def __eq__(self, other):
        return (
            isinstance(other, GraphMap)
            and self.source == other.source
            and self.target == other.target
            and self.key() == other.key()
        )

    __hash__ = None

    def __repr__(self):
        return f"<GraphMap {self.source!r} -> {self.target!r}>"


def identity(X: ReflexiveGraph) -> GraphMap:
    return GraphMap(X, X, {n: n for n in X.nodes}, {e: e for e in X.edges}, check=False)


def compose(g: GraphMap, f: GraphMap) -> GraphMap:
    return GraphMap(
        f.source,
        g.target,
        {n: g.node_map[f.node_map[n]] for n in f.source.nodes},
        {e: g.edge(f.edge_map[e]) for e in f.source.edges},
        check=False,
    )


def graph_hom(X: ReflexiveGraph, Y: ReflexiveGraph):
    """Every homomorphism ``X -> Y`` in a deterministic order."""
    edges = list(X.edges.items())
    for images in itertools.product(Y.nodes, repeat=len(X.nodes)):
        nm = dict(zip(X.nodes, images))
        choices = [Y.edges_between(nm[s], nm[t]) for _, (s, t) in edges]
        for picked in itertools.product(*choices):
            yield GraphMap(X, Y, nm, {e: p for (e, _), p in zip(edges, picked)}, check=False)


# --- conversion --------------------------------------------------------------

def delta1() -> fincat.FiniteCategory:
    return fincat.catalog("delta1")


def to_presheaf(X: ReflexiveGraph) -> ps.Presheaf:
    """The presheaf on Δ₁ with nodes at ``[0]`` and all edges at ``[1]``."""
    D = delta1()
    carrier = {"[0]": X.nodes, "[1]": tuple(X.all_edges())}
    action = {}
    for n in X.nodes:
        action[n, "id[0]"] = n
        action[n, "!"] = degenerate_id(n)
    for e in X.all_edges():
        s, t = X._ends(e)
        action[e, "id[1]"] = e
        action[e, "d0"] = s
        action[e, "d1"] = t
        action[e, "const0"] = degenerate_id(s)
        action[e, "const1"] = degenerate_id(t)
    return ps.Presheaf(D, carrier, action, check=False)


def _require_delta1(P: ps.Presheaf):
    if P.site != delta1():
        raise NotOverDelta1("presheaf does not live over delta1")


def from_presheaf(P: ps.Presheaf, *, name=None):
    """The graph of a presheaf on Δ₁, plus the renaming of its elements.

    Returns ``(graph, names)`` where ``names[c][x]`` is the graph name of the
    element ``x`` at ``c``; degenerate edges get their canonical names.
    """
    _require_delta1(P)
    nodes = P.at("[0]")
    names = {"[0]": {n: n for n in nodes}, "[1]": {}}
    degenerate = {P.act(n, "!"): n for n in nodes}
    edges = {}
    for e in P.at("[1]"):
        if e in degenerate:
            names["[1]"][e] = degenerate_id(degenerate[e])
        else:
            names["[1]"][e] = e
            edges[e] = (P.act(e, "d0"), P.act(e, "d1"))
    return ReflexiveGraph(nodes, edges, name=name), names


def to_graph(P: ps.Presheaf, *, name=None) -> ReflexiveGraph:
    return from_presheaf(P, name=name)[0]


def map_to_nattrans(f: GraphMap) -> ps.NatTrans:
    X, Y = to_presheaf(f.source), to_presheaf(f.target)
    comps = {
        "[0]": dict(f.node_map),
        "[1]": {e: f.edge(e) for e in f.source.all_edges()},
    }
    return ps.NatTrans(X, Y, comps, check=False)


def map_from_nattrans(f: ps.NatTrans) -> GraphMap:
    _require_delta1(f.source)
    _require_delta1(f.target)
    X, xn = from_presheaf(f.source)
    Y, yn = from_presheaf(f.target)
    nm = {n: f("[0]", n) for n in f.source.at("[0]")}
    em = {xn["[1]"][e]: yn["[1]"][f("[1]", e)] for e in f.source.at("[1]") if xn["[1]"][e] in X.edges}
    return GraphMap(X, Y, nm, em)


# --- fixtures --------------------------------------------------------------

def point() -> ReflexiveGraph:
    return ReflexiveGraph(["*"], name="1")


def arrow() -> ReflexiveGraph:
    """``A``: two nodes joined by one edge (the representable at ``[1]``)."""
    return ReflexiveGraph([0, 1], {"a": (0, 1)}, name="A")


def loop_graph() -> ReflexiveGraph:
    """``L``: one node with one non-degenerate loop."""
    return ReflexiveGraph(["*"], {"l": ("*", "*")}, name="L")


def collapse() -> GraphMap:
    """``q: A -> L``."""
    return GraphMap(arrow(), loop_graph(), {0: "*", 1: "*"}, {"a": "l"})


def discrete(S) -> ReflexiveGraph:
    return ReflexiveGraph(list(S), name="discrete")


def codiscrete(S) -> ReflexiveGraph:
    S = sorted(set(S), key=ps.sort_key)
    edges = {f"{a}->{b}": (a, b) for a in S for b in S if a != b}
    # the degenerate edge is the only edge a -> a
    return ReflexiveGraph(S, edges, name="codiscrete")


# --- the classifier Ξ ----------------------------------------------------------

XI = ReflexiveGraph(["*"], {LOOP: ("*", "*"), NON_LOOP: ("*", "*")}, name="Ξ")

# the single congruence on Δ₁(-,[1]) that is neither diagonal nor total
lsc.register_nicknames("delta1", {"e1@[1]": "loop@[1]"})


@lru_cache(maxsize=None)
def xi_anchor():
    """Match the hard-coded Ξ against the congruence construction on Δ₁.

    Returns ``{congruence: label}`` with labels ``loop``, ``non-loop`` and
    ``degenerate``; raises InternalInvariantError on any disagreement.
    """
    D = delta1()
    xi = lsc.build_xi(D)
    if len(xi.at("[0]")) != 1 or len(xi.at("[1]")) != 3:
        raise InternalInvariantError("Ξ over delta1 does not have 1 node and 3 edges")
    labels = {}
    for e in xi.at("[1]"):
        if e.is_total():
            labels[e] = DEGENERATE
        elif e.is_diagonal():
            labels[e] = NON_LOOP
        elif e.related("[0]", "d0", "d1"):
            labels[e] = LOOP
    if sorted(labels.values()) != sorted([DEGENERATE, LOOP, NON_LOOP]):
        raise InternalInvariantError("Ξ over delta1 is not the loop/non-loop graph")
    G, _ = from_presheaf(xi.presheaf)
    if len(G.nodes) != 1 or len(G.edges) != 2 or len(G.loops()) != 2:
        raise InternalInvariantError("Ξ over delta1 is not one node with two non-degenerate loops")
    for e, label in labels.items():
        if label == LOOP and xi.name(e) != "loop@[1]":
            raise InternalInvariantError(f"the loop congruence is named {xi.name(e)!r}")
    return labels


def xi_presheaf_map() -> GraphMap:
    """The identification of ``to_graph(Ξ)`` with the hard-coded graph."""
    labels = xi_anchor()
    xi = lsc.build_xi(delta1())
    G, names = from_presheaf(xi.presheaf)
    em = {names["[1]"][e]: lab for e, lab in labels.items() if lab != DEGENERATE}
    return GraphMap(G, XI, {G.nodes[0]: "*"}, em)


def sigma_fast(X: ReflexiveGraph) -> dict:
    """Label each non-degenerate edge ``loop`` or ``non-loop``."""
    return {e: LOOP if s == t else NON_LOOP for e, (s, t) in X.edges.items()}


def sigma_map(X: ReflexiveGraph) -> GraphMap:
    return GraphMap(X, XI, {n: "*" for n in X.nodes}, sigma_fast(X), check=False)


def sigma_via_presheaf(X: ReflexiveGraph) -> dict:
    """The same labelling computed from kernels of figures."""
    labels = xi_anchor()
    s = lsc.sigma(to_presheaf(X))
    return {e: labels[s("[1]", e)] for e in X.edges}


def edge_label(X: ReflexiveGraph, e) -> str:
    if X.is_degenerate(e):
        return DEGENERATE
    s, t = X.edges[e]
    return LOOP if s == t else NON_LOOP


def nonsingular_fast(f: GraphMap):
    """Loops must go to loops and non-loops to non-loops; ``(ok, witness edge)``."""
    for e in f.source.edges:
        if edge_label(f.source, e) != edge_label(f.target, f.edge_map[e]):
            return False, e
    return True, None


# --- cohesion ----------------------------------------------------------------

@dataclass
class Subgraph:
    graph: ReflexiveGraph
    nodes: frozenset
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        self.nodes = frozenset(self.nodes)
        self.edges = frozenset(self.edges)
        for e in self.edges:
            if e not in self.graph.edges:
                raise MalformedData(f"{e!r} is not a non-degenerate edge of the graph")
            s, t = self.graph.edges[e]
            if s not in self.nodes or t not in self.nodes:
                raise MalformedData(f"edge {e!r} needs both endpoints in the subgraph")
        if not self.nodes <= set(self.graph.nodes):
            raise MalformedData("subgraph nodes outside the graph")

    def as_graph(self) -> ReflexiveGraph:
        return ReflexiveGraph(
            [n for n in self.graph.nodes if n in self.nodes],
            {e: self.graph.edges[e] for e in self.edges},
        )

    def inclusion(self) -> GraphMap:
        G = self.as_graph()
        return GraphMap(G, self.graph, {n: n for n in G.nodes}, {e: e for e in G.edges}, check=False)

    def to_subpresheaf(self) -> ps.Subpresheaf:
        X = to_presheaf(self.graph)
        sel = {"[0]": list(self.nodes), "[1]": [degenerate_id(n) for n in self.nodes] + list(self.edges)}
        return ps.Subpresheaf(X, sel)

    def __eq__(self, other):
        return (
            isinstance(other, Subgraph)
            and self.graph == other.graph
            and self.nodes == other.nodes
            and self.edges == other.edges
        )

    __hash__ = None


def subgraph_from_subpresheaf(S: ps.Subpresheaf) -> Subgraph:
    G, names = from_presheaf(S.ambient)
    edges = [names["[1]"][e] for e in S.selected["[1]"] if names["[1]"][e] in G.edges]
    return Subgraph(G, S.selected["[0]"], edges)


def subgraphs(X: ReflexiveGraph):
    for k in range(len(X.nodes) + 1):
        for nodes in itertools.combinations(X.nodes, k):
            ns = set(nodes)
            allowed = [e for e, (s, t) in X.edges.items() if s in ns and t in ns]
            for r in range(len(allowed) + 1):
                for edges in itertools.combinations(allowed, r):
                    yield Subgraph(X, ns, edges)


def _components(X: ReflexiveGraph):
    parent = {n: n for n in X.nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s, t in X.edges.values():
        ra, rb = find(s), find(t)
        if ra != rb:
            parent[max(ra, rb, key=ps.sort_key)] = min(ra, rb, key=ps.sort_key)
    groups = {}
    for n in X.nodes:
        groups.setdefault(find(n), []).append(n)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: ps.sort_key(g[0]))


@dataclass
class CohesionData:
    points: tuple
    components: list
    leibniz_core: Subgraph

    @property
    def is_leibniz(self) -> bool:
        return len(self.points) == len(self.components)


def leibniz_core(X: ReflexiveGraph) -> Subgraph:
    """All nodes together with the loops."""
    return Subgraph(X, X.nodes, X.loops())


def cohesion(X: ReflexiveGraph) -> CohesionData:
    return CohesionData(X.nodes, _components(X), leibniz_core(X))


def leibniz_probe() -> lsc.Probe:
    """The probe ``{total, loop}`` whose skeleton is the Leibniz core."""
    labels = xi_anchor()
    D = delta1()
    keep = {e for e, lab in labels.items() if lab in (LOOP, DEGENERATE)}
    xi = lsc.build_xi(D)
    return lsc.Probe(D, {"[0]": list(xi.at("[0]")), "[1]": [e for e in xi.at("[1]") if e in keep]})


def discrete_probe() -> lsc.Probe:
    """The probe ``{total}`` whose skeleton is the discrete part (nodes only)."""
    D = delta1()
    xi = lsc.build_xi(D)
    return lsc.Probe(D, {c: [xi.top(c)] for c in D.objects})


# --- lightly dense subobjects ------------------------------------------------

def lightly_dense_defect(u: Subgraph):
    """``None`` if ``u`` is lightly dense, else ``("missing node", n)`` or ``("non-loop edge", e)``."""
    for n in u.graph.nodes:
        if n not in u.nodes:
            return ("missing node", n)
    for e in sorted(u.edges, key=ps.sort_key):
        s, t = u.graph.edges[e]
        if s != t:
            return ("non-loop edge", e)
    return None


def is_lightly_dense(u: Subgraph) -> bool:
    return lightly_dense_defect(u) is None


def has_discrete_fibers(f: GraphMap) -> bool:
    """No non-degenerate edge is sent to a degenerate one."""
    return all(not f.target.is_degenerate(f.edge_map[e]) for e in f.source.edges)


def pullback_subgraph(f: GraphMap, u: Subgraph) -> Subgraph:
    """The preimage of ``u`` along ``f``."""
    if u.graph != f.target:
        raise MalformedData("subgraph does not live over the map's target")
    nodes = [n for n in f.source.nodes if f.node_map[n] in u.nodes]
    keep = set(u.edges) | {degenerate_id(n) for n in u.nodes}
    edges = [e for e in f.source.edges if f.edge_map[e] in keep]
    return Subgraph(f.source, nodes, edges)


def xi_top() -> Subgraph:
    """The node of Ξ with its ``loop`` edge."""
    return Subgraph(XI, ["*"], [LOOP])


def classify_lightly_dense(u: Subgraph) -> GraphMap:
    """``χ_u``: loops of ``u`` to ``loop``, every other non-degenerate edge to ``non-loop``."""
    defect = lightly_dense_defect(u)
    if defect is not None:
        raise NotLightlyDense(f"{defect[0]} {defect[1]!r}", witness=defect)
    X = u.graph
    em = {e: LOOP if e in u.edges else NON_LOOP for e in X.edges}
    return GraphMap(X, XI, {n: "*" for n in X.nodes}, em, check=False)


def classifying_maps(u: Subgraph):
    """All discrete-fiber maps ``X -> Ξ`` pulling ``Ξ_⊤`` back to ``u`` (exhaustive)."""
    top = xi_top()
    return [
        chi
        for chi in graph_hom(u.graph, XI)
        if has_discrete_fibers(chi) and pullback_subgraph(chi, top) == u
    ]


def find_pullback_instability(max_nodes: int = 2, max_edges: int = 1):
    """Search for a lightly dense ``u ⊆ X`` and a discrete-fiber ``f: Y -> X``
    whose pullback of ``u`` is not lightly dense. Returns ``(f, u, f*u)`` or None."""
    graphs = enumerate_graphs(max_nodes, max_edges)
    for X in graphs:
        dense = [u for u in subgraphs(X) if is_lightly_dense(u)]
        if not dense:
            continue
        for Y in graphs:
            for f in graph_hom(Y, X):
                if not has_discrete_fibers(f):
                    continue
                for u in dense:
                    v = pullback_subgraph(f, u)
                    if not is_lightly_dense(v):
                        return f, u, v
    return None


# --- enumeration and random instances ----------------------------------------

def canonical_key(X: ReflexiveGraph):
    """Least edge multiset over all relabellings of the nodes by ``0..n-1``."""
    ends = list(X.edges.values())
    best = None
    for perm in itertools.permutations(range(len(X.nodes))):
        ren = dict(zip(X.nodes, perm))
        key = tuple(sorted((ren[s], ren[t]) for s, t in ends))
        if best is None or key < best:
            best = key
    return (len(X.nodes), best or ())


def is_isomorphic(X: ReflexiveGraph, Y: ReflexiveGraph) -> bool:
    return canonical_key(X) == canonical_key(Y)


def enumerate_graphs(max_nodes: int, max_edges: int, *, loops_only=False):
    """One graph per isomorphism class with at most the given numbers of nodes
    and non-degenerate edges; nodes are ``0..n-1``, edges ``e0, e1, …``."""
    limits.check(max_nodes, 6, "graph enumeration node bound")
    out = []
    for n in range(max_nodes + 1):
        nodes = list(range(n))
        pairs = [(a, a) for a in nodes] if loops_only else [(a, b) for a in nodes for b in nodes]
        seen = set()
        for k in range(max_edges + 1):
            if not pairs and k:
                break
            for combo in itertools.combinations_with_replacement(pairs, k):
                G = ReflexiveGraph(nodes, {f"e{i}": p for i, p in enumerate(combo)})
                key = canonical_key(G)
                if key in seen:
                    continue
                seen.add(key)
                out.append(G)
                limits.check(len(out), limits.ENUMERATION_LIMIT, "graph enumeration")
    return out


def random_graph(rng: random.Random, *, max_nodes: int = 6, max_edges: int = 8, loop_bias: float = 0.35) -> ReflexiveGraph:
    n = rng.randint(1, max_nodes)
    edges = {}
    for i in range(rng.randint(0, max_edges)):
        s = rng.randrange(n)
        t = s if rng.random() < loop_bias else rng.randrange(n)
        edges[f"e{i}"] = (s, t)
    return ReflexiveGraph(range(n), edges)


def random_map_into(Y: ReflexiveGraph, rng: random.Random, *, max_nodes: int = 6, max_edges: int = 8) -> GraphMap:
    """A random homomorphism with codomain ``Y`` and a freshly built domain."""
    nm = {}
    for i in range(rng.randint(1, max_nodes)):
        nm[i] = rng.choice(Y.nodes)
    pool = Y.all_edges()
    edges, em = {}, {}
    for i in range(rng.randint(0, max_edges)):
        img = rng.choice(pool)
        s, t = Y._ends(img)
        srcs = [n for n, v in nm.items() if v == s]
        tgts = [n for n, v in nm.items() if v == t]
        if not srcs or not tgts:
            continue
        edges[f"e{i}"] = (rng.choice(srcs), rng.choice(tgts))
        em[f"e{i}"] = img
    X = ReflexiveGraph(list(nm), edges)
    return GraphMap(X, Y, nm, em)


# --- the one-loop petit topos and the descent counterexample -----------------

@dataclass
class SierpinskiReport:
    bound: int
    edge_bound: int
    graphs: int = 0
    loop_only: int = 0
    hom_pairs: int = 0
    maps_compared: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _arrow_data_maps(X: ReflexiveGraph, Y: ReflexiveGraph):
    """Commuting pairs ``(nodes map, loops map)`` between the maps ``loops -> nodes``."""
    out = set()
    Xl = X.loops()
    for images in itertools.product(Y.nodes, repeat=len(X.nodes)):
        nm = dict(zip(X.nodes, images))
        choices = [[f for f in Y.loops() if Y.edges[f][0] == nm[X.edges[e][0]]] for e in Xl]
        for picked in itertools.product(*choices):
            out.add((tuple(images), tuple(picked)))
    return out


def sierpinski_check(bound: int = 4, *, edge_bound: int = 4, hom_bound: int = 3) -> SierpinskiReport:
    """Non-singular maps into ``L`` and maps over ``L`` on enumerated graphs.

    For every graph with at most ``bound`` nodes and ``edge_bound`` edges:
    a non-singular map to ``L`` exists iff every non-degenerate edge is a loop,
    and it is then unique. For loop-only graphs with at most ``hom_bound`` nodes
    and edges, maps over ``L`` coincide with the maps of the corresponding
    functions ``loops -> nodes`` (commuting pairs of functions).
    """
    report = SierpinskiReport(bound, edge_bound)
    L = loop_graph()
    PL = to_presheaf(L)
    for X in enumerate_graphs(bound, edge_bound):
        report.graphs += 1
        loops_only = not X.non_loops()
        report.loop_only += loops_only
        found = nonsing.petit_hom(to_presheaf(X), PL)
        if loops_only != (len(found) >= 1) or len(found) > 1:
            report.failures.append(("maps to L", X, len(found)))
    objects = enumerate_graphs(hom_bound, hom_bound, loops_only=True)
    to_L = {}
    for X in objects:
        (m,) = [f for f in graph_hom(X, L) if nonsingular_fast(f)[0]]
        to_L[X] = m
    for X in objects:
        for Y in objects:
            report.hom_pairs += 1
            over = set()
            for g in graph_hom(X, Y):
                if compose(to_L[Y], g) == to_L[X]:
                    over.add((tuple(g.node_map[n] for n in X.nodes), tuple(g.edge_map[e] for e in X.loops())))
            expected = _arrow_data_maps(X, Y)
            report.maps_compared += len(over)
            if over != expected:
                report.failures.append(("hom correspondence", X, Y, len(over), len(expected)))
    return report


@dataclass
class CalibrationReport:
    kernel_pair_sizes: dict
    kernel_pair_is_A_plus_1_plus_1: bool
    descent: nonsing.DescentReport

    @property
    def passed(self) -> bool:
        d = self.descent
        return (
            self.kernel_pair_is_A_plus_1_plus_1
            and d.right_epi
            and d.top_nonsingular
            and not d.bottom_nonsingular
            and not d.descent_holds
        )


def calibration_counterexample() -> CalibrationReport:
    """Kernel pair of ``q: A -> L`` and the failure of descent along ``q``."""
    q = map_to_nattrans(collapse())
    A = q.source
    K, p1, p2 = ps.kernel_pair(q)
    one = ps.terminal(delta1())
    expected, _ = ps.sum_of([A, one, one], delta1())
    report = nonsing.calibration_descent_check(p2, q, p1, q)
    return CalibrationReport(K.sizes(), ps.is_isomorphic(K, expected), report)


# --- DOT ---------------------------------------------------------------------

def to_dot(X: ReflexiveGraph, *, show_degenerate: bool = True, labels=None, name: str = "G") -> str:
    """DOT source; degenerate edges are dotted."""
    lines = [f"digraph {name} {{"]
    for n in X.nodes:
        lines.append(f'  "{n}";')
    if show_degenerate:
        for n in X.nodes:
            lines.append(f'  "{n}" -> "{n}" [style=dotted];')
    for e, (s, t) in X.edges.items():
        label = labels.get(e, e) if labels else e
        lines.append(f'  "{s}" -> "{t}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
