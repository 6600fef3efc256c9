from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from graphprod.errors import DomainError
from graphprod.graph import DefiningGraph, bits, complete, cycle, discrete, from_edges, join, path, single
from graphprod.groups import Cyclic, InfiniteCyclic

from oracles import join_bruteforce, minsquare_bruteforce

NAMES = "abcdefgh"


@st.composite
def graphs(draw, max_n=7, infinite=False):
    n = draw(st.integers(1, max_n))
    names = NAMES[:n]
    pairs = list(combinations(names, 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    kinds = [Cyclic(2)] + ([InfiniteCyclic()] if infinite else [])
    groups = {v: draw(st.sampled_from(kinds)) for v in names}
    return DefiningGraph(list(names), [p for p, k in zip(pairs, keep) if k], groups)


def two_squares():
    return from_edges("abcdwxyz", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
                                   ("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")])


def test_link_star_examples():
    c4 = cycle(4)
    assert c4.link(["a"]) == {"b", "d"}
    assert c4.link([]) == {"a", "b", "c", "d"}
    assert discrete(2).link(["a"]) == frozenset()
    assert c4.star(["a"]) == {"a", "b", "d"}
    assert complete(3).star(["a"]) == {"a", "b", "c"}
    assert discrete(2).star(["a"]) == {"a"}


def test_unknown_vertex_is_domain_error():
    with pytest.raises(DomainError):
        cycle(4).link(["z"])


def test_join_decomposition_examples():
    c4 = cycle(4)
    assert sorted(map(sorted, c4.join_decomposition(c4.full))) == [["a", "c"], ["b", "d"]]
    c5 = cycle(5)
    assert c5.join_decomposition(c5.full) == [frozenset("abcde")]
    assert single("v").join_decomposition(["v"]) == [frozenset("v")]
    with pytest.raises(DomainError):
        c4.join_decomposition([])


def test_minsquare_examples():
    assert cycle(4).minsquare_subgraphs() == [frozenset("abcd")]
    assert cycle(5).minsquare_subgraphs() == []
    assert sorted(map(sorted, two_squares().minsquare_subgraphs())) == [list("abcd"), list("wxyz")]


def test_meier_examples():
    v = cycle(4).meier_hyperbolic()
    assert not v.holds and v.reason == "induced square of finite vertices"
    assert v.witness == ("a", "b", "c", "d")
    assert discrete(2).meier_hyperbolic().holds
    assert single("a", InfiniteCyclic()).meier_hyperbolic().holds


def test_meier_infinite_clauses():
    g = from_edges("ab", [("a", "b")], InfiniteCyclic())
    v = g.meier_hyperbolic()
    assert not v.holds and v.reason == "edge between infinite vertices"
    # infinite centre of a path whose ends are not adjacent
    g = DefiningGraph(["a", "b", "c"], [("a", "b"), ("b", "c")],
                      {"a": Cyclic(2), "b": InfiniteCyclic(), "c": Cyclic(2)})
    v = g.meier_hyperbolic()
    assert not v.holds and v.reason == "infinite vertex with incomplete link"


def test_virtually_cyclic_examples():
    v = discrete(2).is_virtually_cyclic()
    assert v.holds and v.reason == "infinite dihedral"
    assert not cycle(4).is_virtually_cyclic().holds
    assert single("a", Cyclic(5)).is_virtually_cyclic().reason == "finite"
    assert single("a", InfiniteCyclic()).is_virtually_cyclic().holds
    assert complete(3).is_virtually_cyclic().reason == "finite"
    # finite centre times infinite dihedral
    assert join(discrete(2), complete(1, names=["z"])).is_virtually_cyclic().holds


def test_builders_reject_bad_input():
    with pytest.raises(DomainError):
        from_edges("ab", [("a", "a")])
    with pytest.raises(DomainError):
        from_edges("aa", [])
    with pytest.raises(DomainError):
        join(cycle(4), complete(2))  # clashing names


def test_minsquare_join_split_on_join():
    g = join(cycle(4), complete(2, names=["x", "y"]))
    core, clique = g.minsquare_join_split()
    assert g.label(core) == "{a,b,c,d}" and g.label(clique) == "{x,y}"
    assert g.is_complete(clique)
    assert all(m & ~core == 0 for m in g.minsquare_masks())
    assert cycle(4).minsquare_join_split() is None  # minsquare is the whole graph


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_minsquare_matches_bruteforce(g):
    got = sorted(g.minsquare_subgraphs(), key=lambda m: (len(m), sorted(m)))
    want = [frozenset(g.vertices[i] for i in m) for m in minsquare_bruteforce(g)]
    assert got == want
    for m in g.minsquare_masks():
        assert g.is_square_complete(m) and g.contains_square(m)


@settings(max_examples=150, deadline=None)
@given(graphs(), st.data())
def test_join_detection_matches_bruteforce(g, data):
    sub = data.draw(st.lists(st.integers(0, len(g.vertices) - 1), min_size=1, unique=True))
    m = sum(1 << i for i in sub)
    assert g.is_join(m) == join_bruteforce(g, sub)
    parts = g.join_parts_mask(m)
    assert sum(parts) == m and all(p & q == 0 for p, q in combinations(parts, 2))
    for p, q in combinations(parts, 2):
        assert all(g.adjacent(u, v) for u in bits(p) for v in bits(q))


@settings(max_examples=150, deadline=None)
@given(graphs(), st.data())
def test_link_star_invariants(g, data):
    sub = data.draw(st.lists(st.integers(0, len(g.vertices) - 1), unique=True))
    m = sum(1 << i for i in sub)
    link = g.link_mask(m)
    assert g.link_mask(link) & m == m
    assert g.star_mask(m) == m | link
    for u in bits(m):
        for v in bits(link):
            assert g.adjacent(u, v)


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_join_split_property(g):
    split = g.minsquare_join_split()
    if split is None:
        return
    core, clique = split
    assert g.is_complete(clique)
    assert all(g.adjacent(u, v) for u in bits(core) for v in bits(clique))
    assert all(ms & ~core == 0 for ms in g.minsquare_masks())


@settings(max_examples=100, deadline=None)
@given(graphs(infinite=True))
def test_meier_verdict_witness(g):
    v = g.meier_hyperbolic()
    inf = g.infinite_mask()
    edge_inf = any(g.adjacent(u, w) for u in bits(inf) for w in bits(inf) if u < w)
    bad_link = any(not g.is_complete(g.link_mask(1 << u)) for u in bits(inf))
    fin = g.full & ~inf
    square_fin = any(g.square_mask(sq) & ~fin == 0 for sq in g.induced_squares())
    assert v.holds == (not edge_inf and not bad_link and not square_fin)
