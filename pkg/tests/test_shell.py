import random

import pytest
from hypothesis import given

from xilab import fincat, lsc, shell
from xilab import presheaf as ps
from xilab.errors import NotSaturated, OracleInconsistent

from strategies import presheaves, seeds


def probe(delta1, *names):
    return lsc.validate_probe({"[0]": ["total@[0]"], "[1]": list(names) + ["total@[1]"]}, delta1)


@given(presheaves(), seeds)
def test_skeleton_is_pullback_of_probe_along_sigma(X, seed):
    probes = lsc.enumerate_probes(X.site)
    P = random.Random(seed).choice(probes)
    expected = ps.preimage(lsc.sigma(X), lsc.probe_to_subpresheaf(P))
    assert shell.skeleton(P, X) == expected


def test_skeleton_of_A_and_L(delta1, A, L):
    loop = probe(delta1, "loop@[1]")
    SA = shell.skeleton(loop, A)
    assert SA.selected["[1]"] == {"const0", "const1"}
    assert shell.is_skeletal(loop, L)
    assert not shell.is_skeletal(loop, A)
    assert shell.is_skeletal(lsc.all_probe(delta1), A)


def test_unsaturated_probe_is_not_functorial(delta1, A, L, q):
    diag = probe(delta1, "diag@[1]")
    with pytest.raises(NotSaturated) as info:
        shell.skeleton_of_map(diag, q)
    c, x, y = info.value.witness
    assert (c, x, y) == ("[1]", "id[1]", q("[1]", "id[1]"))
    found = shell.find_functoriality_witness(diag, [A, L])
    assert found is not None


def test_saturation_is_required_on_request(delta1, A):
    diag = probe(delta1, "diag@[1]")
    with pytest.raises(NotSaturated):
        shell.skeleton_of_map(diag, ps.identity(A))
    assert shell.skeleton_of_map(diag, ps.identity(A), require_saturated=False) == ps.identity(A)


def _sample(C, seed, n=8):
    rng = random.Random(seed)
    return [ps.random_presheaf(C, rng) for _ in range(n)]


@pytest.mark.parametrize("name", ["delta1", "parallel_pair", "walking_idempotent"])
def test_shell_axioms_for_saturated_probes(name):
    C = fincat.catalog(name)
    sample = _sample(C, 7)
    monos = [S.inclusion() for X in sample for S in ps.subpresheaves(X)]
    small = ps.enumerate_presheaves(C, 2)
    maps = [f for X in small for Y in small for f in ps.hom(X, Y)]
    for P in lsc.enumerate_probes(C):
        report = shell.check_shell_axioms(P, sample, monos, maps)
        for name_ in ("counit_monic", "idempotent", "coalgebras_skeletal", "mono_cartesian"):
            assert report.result(name_).passed, (P, name_)
        if lsc.is_saturated(P):
            assert report.passed, P


def test_unsaturated_probe_fails_functoriality_in_the_report(delta1, A, L, q):
    diag = probe(delta1, "diag@[1]")
    report = shell.check_shell_axioms(diag, [A, L], [], [q])
    assert report.result("mono_cartesian").passed
    assert not report.result("functorial").passed


@given(presheaves(), seeds)
def test_coherent_families_of_probes(X, seed):
    C = X.site
    monos = [S.inclusion() for S in ps.subpresheaves(X)]
    for P in lsc.enumerate_probes(C):
        assert shell.CoherentFamilyOracle.from_probe(P).check_coherent(monos) == []


def test_incoherent_family_is_detected(delta1, L):
    # discrete part on one-node graphs, everything elsewhere: not stable along L -> L + 1
    def beta(X):
        if len(X.at("[0]")) == 1:
            nodes = X.at("[0]")
            return ps.Subpresheaf(X, {"[0]": nodes, "[1]": [X.act(n, "!") for n in nodes]})
        return ps.Subpresheaf.full(X)

    oracle = shell.CoherentFamilyOracle(delta1, beta)
    _, i1, _ = ps.coproduct(L, ps.terminal(delta1))
    assert oracle.check_coherent([i1]) == [i1]
    assert oracle.check_coherent([ps.identity(L)]) == []
    with pytest.raises(OracleInconsistent):
        lsc.probe_from_coherent(shell.CoherentFamilyOracle(delta1, lambda X: None), delta1)


@pytest.mark.parametrize("name", fincat.CATALOG)
def test_roundtrip_census(name):
    report = shell.roundtrip_census(fincat.catalog(name), bound=2)
    assert report.bijection
    assert report.passed
    assert report.probe_count == report.subpresheaf_count
    assert report.saturated_count == report.upper_closed_count


def test_census_flags_unsaturated_functoriality(delta1):
    report = shell.roundtrip_census(delta1, bound=3)
    rows = {r.probe: r for r in report.rows}
    assert not rows["{[0]: total@[0]; [1]: diag@[1],total@[1]}"].functorial
    assert all(r.functorial for r in report.rows if r.saturated)


def test_census_flags_only_the_empty_probe(delta1):
    rows = shell.roundtrip_census(delta1, bound=2).rows
    assert [r.probe for r in rows if r.empty_selection] == [lsc.empty_probe(delta1).name()]
