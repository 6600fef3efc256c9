import random
import warnings

import pytest

from graphprod import electrification as el
from graphprod.cosets import CosetGeometry
from graphprod.electrification import (classify_boundedness, classify_quasiline, d_electrified,
                                       electrified_ball, electrified_dot, electrified_growth, growth_trend)
from graphprod.errors import DomainError
from graphprod.graph import complete, cycle, discrete, join, path, single
from graphprod.groups import Cyclic, InfiniteCyclic
from graphprod.words import IDENTITY, GraphProduct


def c4_join_k2():
    return join(cycle(4), complete(2, names=["x", "y"]))


def test_boundedness_examples():
    v = classify_boundedness(cycle(4))
    assert v.holds and v.reason == "minsquare"
    assert not classify_boundedness(discrete(2)).holds
    v = classify_boundedness(c4_join_k2())
    assert v.holds and v.reason == "join of minsquare and complete"
    assert v.witness == ("{a,b,c,d}", "{x,y}")
    v = classify_boundedness(complete(3))
    assert v.holds and v.reason == "complete"
    v = classify_boundedness(cycle(5))
    assert not v.holds and v.reason == "no minsquare subgraph and not complete"


def test_quasiline_examples():
    v = classify_quasiline(discrete(2))
    assert v.holds and v.reason == "infinite dihedral"
    assert not classify_quasiline(cycle(4)).holds
    assert not classify_quasiline(cycle(5)).holds
    v = classify_quasiline(complete(2))
    assert not v.holds and "finite" in v.reason


def test_infinite_vertex_groups_rejected():
    g = single("t", InfiniteCyclic())
    for fn in (classify_boundedness, classify_quasiline):
        with pytest.raises(DomainError):
            fn(g)
    with pytest.raises(DomainError):
        electrified_ball(GraphProduct(g), 1)


def test_growth_examples():
    assert electrified_growth(cycle(4), 4) == [1, 1, 1, 1]
    assert electrified_growth(discrete(2), 4) == [1, 2, 3, 4]
    seq = electrified_growth(complete(2), 4)
    assert max(seq) <= 2 and growth_trend(seq) == "stable"
    assert electrified_growth(c4_join_k2(), 4) == [1, 2, 3, 3]


def test_growth_trend():
    assert growth_trend([1]) == "short"
    assert growth_trend([1, 2]) == "increasing"
    assert growth_trend([1, 2, 2]) == "stable"


def test_growth_warns_on_disagreement(monkeypatch):
    from graphprod.graph import Verdict
    monkeypatch.setattr(el, "classify_boundedness", lambda g: Verdict(False, "forced", ()))
    with pytest.warns(RuntimeWarning, match="stabilised"):
        electrified_growth(cycle(4), 3)
    monkeypatch.setattr(el, "classify_boundedness", lambda g: Verdict(True, "forced", ()))
    with pytest.warns(RuntimeWarning, match="still growing"):
        electrified_growth(discrete(2), 4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        electrified_growth(discrete(2), 4, warn=False)


def test_growth_agrees_with_verdict_on_examples():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for g in (cycle(4), discrete(2), complete(3), cycle(5), path(3)):
            seq = electrified_growth(g, 4)
            bounded = classify_boundedness(g).holds
            assert (growth_trend(seq) == "stable") == bounded


@pytest.mark.parametrize("g", [discrete(2), cycle(4), path(3), cycle(5), path(4),
                               cycle(4, Cyclic(3))], ids=repr)
def test_distance_inequalities(g):
    E = GraphProduct(g)
    geo = CosetGeometry(E)
    eb = electrified_ball(E, 3)
    dist = eb.distances_from(IDENTITY)
    minsquare = g.full in g.minsquare_masks()
    for x in eb.ball.within(2):
        de = dist[x]
        assert de <= E.d_syl(IDENTITY, x) <= E.d_word(IDENTITY, x)
        if not minsquare:
            assert geo.d_subgraph(g.full, IDENTITY, x) <= de
    rng = random.Random(0)
    pts = eb.ball.within(1)
    for _ in range(8):
        x, y = rng.choice(pts), rng.choice(pts)
        de = d_electrified(E, x, y)
        # left invariance, and a larger ball can only shorten paths
        assert de == d_electrified(E, IDENTITY, E.between(x, y))
        assert d_electrified(E, x, y, slack=1) <= de


def test_electrified_ball_edges():
    E = GraphProduct(cycle(4))
    eb = electrified_ball(E, 2)
    n = len(eb.vertices)
    # the whole square graph is minsquare: every pair is joined
    assert len(eb.edges) == n * (n - 1) // 2
    assert set(eb.ball.edges) <= set(eb.edges)
    dot = electrified_dot(eb)
    assert dot.startswith("graph electrified {") and "dashed" in dot
    eb = electrified_ball(GraphProduct(discrete(2)), 3)
    assert eb.extra_edges == [] and eb.minsquares == ()
