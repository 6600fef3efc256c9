import itertools
import random

import pytest

from graphprod.cosets import CONTAINS, EQUAL, NESTED, ORTHOGONAL, TRANSVERSE, CosetGeometry
from graphprod.errors import DomainError
from graphprod.graph import cycle, discrete, path
from graphprod.hyperplanes import enumerate_ball
from graphprod.words import IDENTITY, GraphProduct

from conftest import five_graphs
from oracles import GateOracle

P2 = CosetGeometry(GraphProduct(discrete(2)))
C4 = CosetGeometry(GraphProduct(cycle(4)))
P3 = CosetGeometry(GraphProduct(path(3)))


def el(geo, text):
    return geo.engine.parse(text)


def m(geo, names):
    return geo.graph.mask(list(names))


def test_gate_examples():
    assert P2.gate(IDENTITY, m(P2, "b"), el(P2, "a b a b")) == IDENTITY
    x = el(C4, "a b c")
    assert C4.gate(x, m(C4, "ab"), x) == x
    assert C4.gate(IDENTITY, m(C4, "a"), el(C4, "b a")) == el(C4, "a")


def test_distance_examples():
    E = P2.engine
    assert E.d_syl(IDENTITY, el(P2, "a b a b a b")) == 6
    x = el(C4, "a b c")
    assert C4.engine.d_syl(x, x) == 0
    full = C4.graph.full
    assert C4.d_subgraph(full, IDENTITY, el(C4, "a b c d")) == 2
    assert C4.d_subgraph(full, IDENTITY, el(C4, "a b")) == 1
    assert C4.d_subgraph(full, x, x) == 0
    with pytest.raises(DomainError):
        C4.d_subgraph(m(C4, "ab"), IDENTITY, el(C4, "c"))


def test_project_examples():
    a = P2.domain(IDENTITY, m(P2, "a"))
    assert P2.d_domain(a, IDENTITY, el(P2, "a b a b")) == 1
    whole = C4.domain(IDENTITY, C4.graph.full)
    assert C4.d_domain(whole, IDENTITY, el(C4, "a b c d")) == 2


def test_parallel_examples():
    a = m(C4, "a")
    assert C4.parallel(IDENTITY, el(C4, "b"), a)
    assert not C4.parallel(IDENTITY, el(C4, "c"), a)
    assert C4.parallel(el(C4, "c"), el(C4, "c"), a)


def test_common_representative_examples():
    g = el(C4, "a c")
    assert C4.common_representative_exists(g, m(C4, "a"), g, m(C4, "b"))
    assert C4.common_representative_exists(IDENTITY, m(C4, "a"), IDENTITY, m(C4, "ab"))
    assert not P2.common_representative_exists(IDENTITY, m(P2, "a"), el(P2, "b"), m(P2, "a"))


def test_relate_examples():
    d = C4.domain
    assert C4.relate(d(IDENTITY, m(C4, "a")), d(IDENTITY, m(C4, "ab"))) == NESTED
    assert C4.relate(d(IDENTITY, m(C4, "ab")), d(IDENTITY, m(C4, "a"))) == CONTAINS
    assert C4.relate(d(IDENTITY, m(C4, "a")), d(IDENTITY, m(C4, "b"))) == ORTHOGONAL
    assert C4.relate(d(IDENTITY, m(C4, "a")), d(el(C4, "b"), m(C4, "a"))) == EQUAL
    assert P2.relate(P2.domain(IDENTITY, m(P2, "a")), P2.domain(el(P2, "b"), m(P2, "a"))) == TRANSVERSE


def test_rel_projection_examples():
    a = m(P2, "a")
    rho = P2.rel_projection(P2.domain(el(P2, "b"), a), P2.domain(IDENTITY, a))
    assert rho.anchor == IDENTITY and rho.samples == {IDENTITY}
    rho = C4.rel_projection(C4.domain(IDENTITY, m(C4, "a")), C4.domain(IDENTITY, m(C4, "ab")), 3)
    assert all(C4.in_coset(IDENTITY, m(C4, "ab"), s) for s in rho.samples)
    assert C4.rho_diameter(rho) <= 2
    with pytest.raises(DomainError, match="undefined"):
        C4.rel_projection(C4.domain(IDENTITY, m(C4, "a")), C4.domain(IDENTITY, m(C4, "b")))


def test_container_candidate_examples():
    full = C4.graph.full
    assert C4.container_candidate(IDENTITY, full, IDENTITY, m(C4, "a")) == C4.domain(IDENTITY, m(C4, "bd"))
    assert P3.container_candidate(IDENTITY, P3.graph.full, IDENTITY, m(P3, "a")) == P3.domain(IDENTITY, m(P3, "b"))
    with pytest.raises(DomainError):
        P2.container_candidate(IDENTITY, P2.graph.full, IDENTITY, m(P2, "a"))


def test_partial_realize_examples():
    da, db = C4.domain(IDENTITY, m(C4, "a")), C4.domain(IDENTITY, m(C4, "b"))
    x = C4.partial_realize([da, db], [el(C4, "a"), el(C4, "b")])
    assert x == el(C4, "a b")
    assert C4.project(da, x) == el(C4, "a") and C4.project(db, x) == el(C4, "b")
    p = el(C4, "a")
    assert C4.project(da, C4.partial_realize([da], [p])) == p
    assert C4.partial_realize([], []) == IDENTITY
    dc = C4.domain(IDENTITY, m(C4, "c"))
    with pytest.raises(DomainError):
        C4.partial_realize([da, dc], [p, el(C4, "c")])


def test_domain_canonical_under_parallelism():
    for x in enumerate_ball(C4.engine, IDENTITY, 3).vertices:
        for lam in range(1, 16):
            for y in enumerate_ball(C4.engine, IDENTITY, 2).vertices:
                same = C4.domain(x, lam) == C4.domain(y, lam)
                assert same == C4.parallel(x, y, lam)


# -- gate uniqueness against the union-find oracle --------------------------------

@pytest.mark.parametrize("name", ["P2", "J2", "C4", "P3", "C5"])
def test_gate_is_unique_minimiser_radius3(name):
    g = five_graphs()[name]
    E = GraphProduct(g)
    geo = CosetGeometry(E)
    oracle = GateOracle(E, 6)
    ball = enumerate_ball(E, IDENTITY, 3).vertices
    for lam in range(1, 1 << len(g)):
        reps = {geo.coset(h, lam).rep for h in ball}
        for rep in reps:
            for x in ball:
                assert oracle.gate(rep, lam, x) == [geo.gate(rep, lam, x)]


# -- invariants over small balls -------------------------------------------------

def _pairs(ball, k, seed):
    rng = random.Random(seed)
    return [(rng.choice(ball), rng.choice(ball)) for _ in range(k)]


@pytest.mark.parametrize("name", ["P2", "C4", "P3", "C5"])
def test_gate_invariants(name):
    g = five_graphs()[name]
    E = GraphProduct(g)
    geo = CosetGeometry(E)
    ball = enumerate_ball(E, IDENTITY, 3).vertices
    for x, y in _pairs(ball, 300, 7):
        for lam in range(1, 1 << len(g)):
            for h in (IDENTITY, x):
                gx, gy = geo.gate(h, lam, x), geo.gate(h, lam, y)
                assert geo.in_coset(h, lam, gx)
                # syllable inheritance
                xs = set(E.between(x, y))
                assert set(E.between(gx, gy)) <= xs
                # Lipschitz with constants (1, 0)
                d = geo.d_subgraph(lam, gx, gy)
                assert d <= E.d_syl(x, y) and d <= E.d_word(x, y)
                # gate is idempotent and parallel cosets project isometrically
                assert geo.gate(h, lam, gx) == gx


def test_monotone_along_syllable_geodesics():
    E = C4.engine
    full = C4.graph.full
    ball = enumerate_ball(E, IDENTITY, 4).vertices
    for x, y in _pairs(ball, 200, 3):
        u = E.between(x, y)
        # every prefix of x^-1 y gives a vertex of some syllable geodesic
        for p in E.prefix_ideals(u):
            q = E.multiply(x, p)
            for lam in (full, m(C4, "ab"), m(C4, "abc")):
                gx, gq, gy = (C4.gate(IDENTITY, lam, z) for z in (x, q, y))
                assert C4.d_subgraph(lam, gx, gq) <= C4.d_subgraph(lam, gx, gy)


@pytest.mark.parametrize("name", ["C4", "P3", "C5"])
def test_d_subgraph_matches_exhaustive(name):
    g = five_graphs()[name]
    geo = CosetGeometry(GraphProduct(g))
    ball = enumerate_ball(geo.engine, IDENTITY, 5 if name != "C5" else 4).vertices
    for lam in range(1, 1 << len(g)):
        for x in ball:
            if geo.engine.support(x) & ~lam == 0:
                assert geo.d_subgraph(lam, IDENTITY, x) == geo.d_subgraph_exhaustive(lam, IDENTITY, x)


@pytest.mark.parametrize("name", ["P2", "C4", "P3"])
def test_relations_are_consistent(name):
    g = five_graphs()[name]
    geo = CosetGeometry(GraphProduct(g))
    ball = enumerate_ball(geo.engine, IDENTITY, 2).vertices
    doms = sorted({geo.domain(x, lam) for x in ball for lam in range(1, 1 << len(g))})
    flip = {EQUAL: EQUAL, NESTED: CONTAINS, CONTAINS: NESTED, ORTHOGONAL: ORTHOGONAL, TRANSVERSE: TRANSVERSE}
    rel = {(a, b): geo.relate(a, b) for a in doms for b in doms}
    for (a, b), r in rel.items():
        assert rel[b, a] == flip[r]
        assert (r == EQUAL) == (a == b)
    for a, b, c in itertools.product(doms, repeat=3):
        if rel[a, b] == NESTED and rel[b, c] == NESTED:
            assert rel[a, c] == NESTED
        if rel[a, b] == NESTED and rel[b, c] == ORTHOGONAL:
            assert rel[a, c] == ORTHOGONAL


@pytest.mark.parametrize("name", ["P2", "C4", "P3"])
def test_rel_projection_diameter(name):
    g = five_graphs()[name]
    geo = CosetGeometry(GraphProduct(g))
    ball = enumerate_ball(geo.engine, IDENTITY, 2).vertices
    doms = sorted({geo.domain(x, lam) for x in ball for lam in range(1, 1 << len(g))})
    for a, b in itertools.product(doms, repeat=2):
        if geo.relate(a, b) in (NESTED, TRANSVERSE):
            rho = geo.rel_projection(a, b, 2)
            assert geo.rho_diameter(rho) <= 2
