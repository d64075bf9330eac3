"""Brute-force reference computations used to check the library."""
import itertools

from xilab import presheaf as ps


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def congruences(C, c):
    """Every family of equivalence relations on Hom(-, c) that is stable under
    precomposition, found by filtering the full product of partitions."""
    objs = list(C.objects)
    per_object = [list(set_partitions(C.hom(d, c))) for d in objs]
    found = []
    for choice in itertools.product(*per_object):
        block_of = {}
        for d, part in zip(objs, choice):
            for i, block in enumerate(part):
                for t in block:
                    block_of[t] = (d, i)
        stable = True
        for d, part in zip(objs, choice):
            for block in part:
                for t1, t2 in itertools.combinations(block, 2):
                    for h in C.into(d):
                        if block_of[C.compose(t1, h)] != block_of[C.compose(t2, h)]:
                            stable = False
        if stable:
            found.append(
                frozenset(frozenset(frozenset(b) for b in part) for part in choice)
            )
    return found


def congruence_key(e):
    return frozenset(frozenset(frozenset(b) for b in e.blocks(d)) for d in e.site.objects)


def kernel_pairs(X, c, x):
    """Kernel of a figure as the set of pairs of arrows it identifies."""
    C = X.site
    return {
        (t1, t2)
        for d in C.objects
        for t1 in C.hom(d, c)
        for t2 in C.hom(d, c)
        if X.act(x, t1) == X.act(x, t2)
    }


def is_mono_by_cancellation(f, tests):
    """f is mono iff it can be cancelled on the left against maps from the test objects."""
    for W in tests:
        seen = {}
        for g in ps.hom(W, f.source):
            k = ps.compose(f, g).key()
            if k in seen and seen[k] != g.key():
                return False
            seen[k] = g.key()
    return True


def is_epi_by_cancellation(f, tests):
    for Z in tests:
        seen = {}
        for g in ps.hom(f.target, Z):
            k = ps.compose(g, f).key()
            if k in seen and seen[k] != g.key():
                return False
            seen[k] = g.key()
    return True


def largest_nonsingular_part(f, nonsingular):
    """Greatest subpresheaf on which the restriction of f is non-singular."""
    best = None
    for S in ps.subpresheaves(f.source):
        if nonsingular(ps.compose(f, S.inclusion())):
            if best is None or S.size > best.size:
                best = S
    return best


def classifying_maps(m, omega, true):
    """All maps X -> Ω pulling ``true`` back to the subobject m."""
    out = []
    for chi in ps.hom(m.ambient, omega):
        if ps.preimage(chi, true) == m:
            out.append(chi)
    return out


def edge_multisets(n, k):
    """All labelled reflexive graphs on nodes 0..n-1 with exactly k non-degenerate edges."""
    pairs = [(a, b) for a in range(n) for b in range(n)]
    return itertools.combinations_with_replacement(pairs, k)
