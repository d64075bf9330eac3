"""The twelve acceptance criteria, each with its time limit.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import random
import time

import pytest

from xilab import fincat, lsc, nonsing, shell
from xilab import presheaf as ps
from xilab import rgraph as rg

SEED = 0
RESULTS = {}


def timed(n, limit):
    def wrap(fn):
        def run():
            start = time.perf_counter()
            ok, detail = fn()
            seconds = time.perf_counter() - start
            ok = ok and seconds < limit
            RESULTS[n] = (ok, seconds, detail)
            return ok, seconds, detail

        run.limit = limit
        run.number = n
        return run

    return wrap


@timed(1, 1.0)
def criterion_1():
    D = fincat.catalog("delta1")
    lsc.build_xi.cache_clear()
    rg.xi_anchor.cache_clear()
    xi = lsc.build_xi(D)
    labels = rg.xi_anchor()
    G, names = rg.from_presheaf(xi.presheaf)
    edges = G.all_edges()
    named = sorted(labels[e] for e in xi.at("[1]") if names["[1]"][e] in G.edges)
    ok = (
        len(G.nodes) == 1
        and len(edges) == 3
        and len(G.edges) == 2
        and len(G.loops()) == 2
        and named == ["loop", "non-loop"]
        and rg.is_isomorphic(G, rg.XI)
    )
    return ok, f"{len(G.nodes)} node, {len(edges)} edges, non-degenerate: {named}"


@timed(2, 5.0)
def criterion_2():
    rng = random.Random(SEED)
    labels = rg.xi_anchor()
    bad = 0
    edges = 0
    for _ in range(50):
        G = rg.random_graph(rng, max_nodes=6)
        s = lsc.sigma(rg.to_presheaf(G))
        fast = rg.sigma_fast(G)
        for e in G.all_edges():
            lab = labels[s("[1]", e)]
            if G.is_degenerate(e):
                bad += lab != rg.DEGENERATE
                continue
            edges += 1
            src, tgt = G.edges[e]
            expected = rg.LOOP if src == tgt else rg.NON_LOOP
            bad += lab != expected or fast[e] != lab
    return bad == 0, f"50 graphs, {edges} non-degenerate edges, {bad} mismatches"


@timed(3, 1.0)
def criterion_3():
    n_delta = len(lsc.points(lsc.build_xi(fincat.catalog("delta1")).presheaf))
    n_pp = len(lsc.points(lsc.build_xi(fincat.catalog("parallel_pair")).presheaf))
    return (n_delta, n_pp) == (1, 2), f"delta1: {n_delta}, parallel_pair: {n_pp}"


@timed(4, 120.0)
def criterion_4():
    parts = []
    ok = True
    for name in fincat.CATALOG:
        r = shell.roundtrip_census(fincat.catalog(name), bound=3)
        failures = sum(not row.passed for row in r.rows)
        ok &= r.passed and r.bijection and failures == 0
        parts.append(f"{name} {r.probe_count}/{r.saturated_count}")
    return ok, "probes/saturated: " + ", ".join(parts)


@timed(5, 60.0)
def criterion_5():
    C = fincat.catalog("delta1")
    rng = random.Random(SEED)
    sample = [ps.random_presheaf(C, rng) for _ in range(20)]
    monos = [S.inclusion() for X in sample for S in ps.subpresheaves(X)]
    failures = 0
    for P in lsc.enumerate_probes(C):
        report = shell.check_shell_axioms(P, sample, monos)
        needed = ("counit_monic", "idempotent", "mono_cartesian") if lsc.is_saturated(P) else ("mono_cartesian",)
        failures += sum(not report.result(a).passed for a in needed)
    return failures == 0, f"20 presheaves, {len(monos)} monos, {failures} failures"


@timed(6, 60.0)
def criterion_6():
    rng = random.Random(SEED)
    failures = 0
    for i in range(200):
        C = fincat.catalog("delta1" if i % 2 == 0 else "parallel_pair")
        xi = lsc.build_xi(C)
        Y = ps.random_presheaf(C, rng)
        f = ps.random_map(Y, rng)
        X = f.source
        for h in C.morphisms:
            es = xi.at(h.dst)
            a, b = rng.choice(es), rng.choice(es)
            failures += lsc.restrict_congruence(lsc.meet(a, b), h.id) != lsc.meet(
                lsc.restrict_congruence(a, h.id), lsc.restrict_congruence(b, h.id)
            )
            failures += lsc.restrict_congruence(xi.top(h.dst), h.id) != xi.top(h.src)
        P, _, _ = ps.product(X, Y)
        sP, sX, sY = lsc.sigma(P), lsc.sigma(X), lsc.sigma(Y)
        failures += any(sP(c, (x, y)) != lsc.meet(sX(c, x), sY(c, y)) for c, (x, y) in P.elements())
        failures += any(not sX(c, x) <= sY(c, f(c, x)) for c, x in X.elements())
    return failures == 0, f"200 instances, {failures} failures"


def _small(C, rng):
    return ps.random_presheaf(C, rng, generators=2, merges=2)


@timed(7, 60.0)
def criterion_7():
    rng = random.Random(SEED)
    failures = 0
    composites = pullbacks = 0
    for i in range(100):
        C = fincat.catalog("delta1" if i % 2 == 0 else "parallel_pair")
        X, Y, Z = _small(C, rng), _small(C, rng), _small(C, rng)
        gs, fs = list(ps.hom(X, Y)), list(ps.hom(Y, Z))
        for g in gs:
            g_ok = nonsing.nonsingular(g)
            for f in fs:
                if nonsing.nonsingular(ps.compose(f, g)):
                    composites += 1
                    failures += not g_ok
        for f in ps.hom(X, Z):
            if not nonsing.nonsingular(f):
                continue
            for g in ps.hom(Y, Z):
                _, _, p2 = ps.pullback(f, g)
                pullbacks += 1
                failures += not nonsing.nonsingular(p2)
    C = fincat.catalog("delta1")
    saturated = [P for P in lsc.enumerate_probes(C) if lsc.is_saturated(P)]
    sampled = 0
    while sampled < 50:
        f = nonsing.coreflect(ps.random_map(ps.random_presheaf(C, rng), rng)).restricted
        if f.source.size == 0:
            continue
        sampled += 1
        failures += not nonsing.nonsingular(f)
        failures += sum(not nonsing.is_cartesian_wrt(P, f)[0] for P in saturated)
    ok = failures == 0 and composites > 0 and pullbacks > 0
    return ok, f"{composites} non-singular composites, {pullbacks} pullbacks, 50 cartesian maps, {failures} failures"


@timed(8, 120.0)
def criterion_8():
    C = fincat.catalog("delta1")
    rng = random.Random(SEED)
    domains = [rg.to_presheaf(G) for G in rg.enumerate_graphs(3, 3)]
    failures = 0
    factored = 0
    for _ in range(50):
        f = ps.random_map(ps.random_presheaf(C, rng), rng)
        core = nonsing.coreflect(f)
        cert = nonsing.certify_universal(f, domains, core)
        failures += (not core.certificate["restricted_nonsingular"]) + len(cert.failures)
        factored += cert.nonsingular_composites
    return failures == 0, f"50 maps, {len(domains)} domains, {factored} factorizations, {failures} failures"


@timed(9, 1.0)
def criterion_9():
    r = rg.calibration_counterexample()
    d = r.descent
    return r.passed, (
        f"kernel pair sizes {r.kernel_pair_sizes}, A+1+1: {r.kernel_pair_is_A_plus_1_plus_1}, "
        f"top non-singular: {d.top_nonsingular}, q non-singular: {d.bottom_nonsingular}, descent: {d.descent_holds}"
    )


@timed(10, 120.0)
def criterion_10():
    r = rg.sierpinski_check(4)
    return r.passed, f"{r.graphs} graphs ({r.loop_only} loop-only), {r.hom_pairs} hom pairs, {len(r.failures)} failures"


@timed(11, 120.0)
def criterion_11():
    rng = random.Random(SEED)
    probe = rg.leibniz_probe()
    failures = 0
    dense = 0
    for _ in range(30):
        G = rg.random_graph(rng, max_nodes=4, max_edges=5)
        X = rg.to_presheaf(G)
        core = shell.skeleton(probe, X)
        for u in rg.subgraphs(G):
            S = u.to_subpresheaf()
            expected = set(S.selected["[0]"]) == set(X.at("[0]")) and S <= core
            failures += rg.is_lightly_dense(u) != expected
            if not expected:
                continue
            dense += 1
            chi = rg.classify_lightly_dense(u)
            failures += rg.classifying_maps(u) != [chi]
            failures += rg.pullback_subgraph(chi, rg.xi_top()) != u
            failures += not nonsing.is_cartesian_wrt(rg.discrete_probe(), rg.map_to_nattrans(chi))[0]
        failures += rg.classify_lightly_dense(rg.leibniz_core(G)) != rg.sigma_map(G)
    witness = rg.find_pullback_instability()
    ok = failures == 0 and witness is not None
    return ok, f"30 graphs, {dense} lightly dense subgraphs, instability witness found: {witness is not None}, {failures} failures"


@timed(12, 1.0)
def criterion_12():
    agree = []
    for name in fincat.CATALOG:
        C = fincat.catalog(name)
        col = fincat.identity_colimit(C)
        agree.append(fincat.terminal_object(C) == (col[0] if col else None))
    return all(agree), f"{sum(agree)}/{len(agree)} sites agree"


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{c.number}" for c in CRITERIA])
def test_acceptance(criterion):
    ok, seconds, detail = criterion()
    assert seconds < criterion.limit, f"took {seconds:.2f}s, limit {criterion.limit}s"
    assert ok, detail


if __name__ == "__main__":
    for criterion in CRITERIA:
        ok, seconds, detail = criterion()
        print(f"criterion {criterion.number:2d}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}")
