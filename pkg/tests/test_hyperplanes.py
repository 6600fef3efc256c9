import random
from collections import defaultdict

import pytest

from graphprod.errors import ResourceError
from graphprod.graph import complete, cycle, discrete, path, single
from graphprod.groups import Cyclic, InfiniteCyclic
from graphprod.hyperplanes import (ball_to_dot, edge, enumerate_ball, hyperplane_of, hyperplanes,
                                   separates, sides)
from graphprod.words import IDENTITY, GraphProduct

from conftest import five_graphs

P2 = GraphProduct(discrete(2))
J2 = GraphProduct(complete(2))


def test_enumerate_ball_examples():
    assert enumerate_ball(P2, IDENTITY, 0).vertices == [IDENTITY]
    b = enumerate_ball(P2, IDENTITY, 2)
    assert {P2.format(x) for x in b.vertices} == {"", "a", "b", "a b", "b a"}
    assert len(enumerate_ball(J2, IDENTITY, 2)) == 4


def test_enumerate_ball_budget():
    with pytest.raises(ResourceError) as exc:
        enumerate_ball(GraphProduct(cycle(5)), IDENTITY, 6, budget=100)
    assert exc.value.partial > 100


def test_capped_ball_is_flagged():
    z = GraphProduct(single("t", InfiniteCyclic()))
    b = enumerate_ball(z, IDENTITY, 1, cap=3)
    assert len(b) == 7 and b.capped


def test_hyperplane_count_examples():
    # four edges in the ball and no squares: each edge is its own hyperplane
    assert len(hyperplanes(enumerate_ball(P2, IDENTITY, 2))) == 4
    assert len(hyperplanes(enumerate_ball(J2, IDENTITY, 2))) == 2
    c = GraphProduct(single("s", Cyclic(4)))
    assert len(hyperplanes(enumerate_ball(c, IDENTITY, 1))) == 1


def test_separates_examples():
    ball = enumerate_ball(P2, IDENTITY, 4)
    hyps = hyperplanes(ball)
    a, b = P2.parse("a"), P2.parse("b")
    h = hyperplane_of(hyps, (IDENTITY, a))
    assert separates(h, ball, IDENTITY, a) is True
    assert separates(h, ball, a, a) is False
    ball = enumerate_ball(J2, IDENTITY, 2)
    hyps = hyperplanes(ball)
    h = hyperplane_of(hyps, (IDENTITY, J2.parse("a")))
    assert separates(h, ball, J2.parse("b"), J2.parse("a b"), margin=0) is True
    assert separates(h, ball, IDENTITY, J2.parse("b"), margin=0) is False
    # points outside the trusted interior give an indeterminate answer
    assert separates(h, ball, IDENTITY, J2.parse("a b")) is None


def _star_classes(ball):
    """Edge classes by label and star coset: x^-1 y supported in st(v)."""
    E = ball.engine
    g = E.graph
    groups = defaultdict(list)
    for e in ball.edges:
        v = ball.label(e)
        groups[v].append(e)
    classes = []
    for v, es in groups.items():
        star = g.star_mask(1 << v)
        reps = []
        for e in es:
            for r in reps:
                if E.support(E.between(r[0][0], e[0])) & ~star == 0:
                    r.append(e)
                    break
            else:
                reps.append([e])
        classes += [frozenset(r) for r in reps]
    return set(classes)


@pytest.mark.parametrize("name", ["P2", "J2", "C4", "P3", "C5"])
def test_hyperplanes_match_star_cosets(name):
    E = GraphProduct(five_graphs()[name])
    ball = enumerate_ball(E, IDENTITY, 3 if name != "C5" else 2)
    hyps = hyperplanes(ball)
    assert {h.dual_edges for h in hyps} == _star_classes(ball)
    for h in hyps:
        assert all(ball.label(e) == h.label for e in h.dual_edges)


@pytest.mark.parametrize("name", ["C4", "P3", "C5"])
def test_geodesics_cross_each_hyperplane_once(name):
    E = GraphProduct(five_graphs()[name])
    ball = enumerate_ball(E, IDENTITY, 4)
    hyps = hyperplanes(ball)
    which = {e: i for i, h in enumerate(hyps) for e in h.dual_edges}
    rng = random.Random(5)
    inner = ball.within(2)
    for _ in range(150):
        x, y = rng.choice(inner), rng.choice(inner)
        # a geodesic: the syllables of x^-1 y in a random linear extension
        cur = x
        crossed = []
        word = list(E.between(x, y))
        while word:
            # pick any syllable that can come first
            blocked, options = 0, []
            for i, (v, _) in enumerate(word):
                if (E.adj[v] & blocked) == blocked:
                    options.append(i)
                blocked |= 1 << v
            s = word.pop(rng.choice(options))
            nxt = E.multiply(cur, (s,))
            crossed.append(which[edge(cur, nxt)])
            cur = nxt
        assert cur == y
        assert len(crossed) == len(set(crossed)) == E.d_syl(x, y)
        # crossing hyperplanes separate the endpoints
        comp = {i: sides(hyps[i], ball) for i in set(crossed)}
        for i in crossed:
            assert comp[i][x] != comp[i][y]


@pytest.mark.parametrize("name", ["C4", "C5"])
def test_square_sides_share_hyperplanes(name):
    E = GraphProduct(five_graphs()[name])
    ball = enumerate_ball(E, IDENTITY, 3)
    hyps = hyperplanes(ball)
    which = {e: h for h in hyps for e in h.dual_edges}
    for x in ball.within(1):
        for s in E.syllables_of(E.graph.full, 2):
            for t in E.syllables_of(E.graph.full, 2):
                if s[0] != t[0] and E.graph.adjacent(s[0], t[0]):
                    # a square: both pairs of opposite sides are parallel
                    xs, xt = E.multiply(x, (s,)), E.multiply(x, (t,))
                    xst = E.multiply(xs, (t,))
                    assert which[edge(x, xs)] is which[edge(xt, xst)]
                    assert which[edge(x, xt)] is which[edge(xs, xst)]


def test_dot_export():
    ball = enumerate_ball(J2, IDENTITY, 2)
    dot = ball_to_dot(ball, hyperplanes(ball), extra_edges=[(IDENTITY, J2.parse("a b"))])
    assert dot.startswith("graph ball {") and dot.count(" -- ") == 5
    assert "dashed" in dot and 'color="red"' in dot
