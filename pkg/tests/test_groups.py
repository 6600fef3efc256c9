from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from graphprod.errors import DomainError
from graphprod.groups import Cyclic, InfiniteCyclic, TableGroup, cyclic_table, parse_spec


def s3():
    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    # transposition (0 1) and 3-cycle
    return TableGroup(table, [index[(1, 0, 2)], index[(1, 2, 0)]]), index


def test_compose_examples():
    assert Cyclic(2).compose(1, 1) == 0
    assert InfiniteCyclic().compose(3, -5) == -2
    g, index = s3()
    t = index[(1, 0, 2)]
    assert g.compose(t, t) == g.identity


def test_word_length_examples():
    assert Cyclic(5).word_length(3) == 2
    assert InfiniteCyclic().word_length(-4) == 4
    for g in (Cyclic(5), InfiniteCyclic(), s3()[0]):
        assert g.word_length(g.identity) == 0


def test_enumerate_nonidentity_examples():
    assert Cyclic(2).enumerate_nonidentity(5) == [1]
    assert Cyclic(4).enumerate_nonidentity(1) == [1, 2, 3]
    assert InfiniteCyclic().enumerate_nonidentity(2) == [-2, -1, 1, 2]


def test_flags():
    assert Cyclic(3).is_finite and Cyclic(3).is_hyperbolic
    assert not InfiniteCyclic().is_finite and InfiniteCyclic().is_hyperbolic
    assert s3()[0].order == 6


def test_table_word_length_is_bfs():
    g, index = s3()
    # generators act symmetrically, so the 3-cycle's inverse is one letter too
    assert g.word_length(index[(1, 0, 2)]) == 1
    assert g.word_length(index[(1, 2, 0)]) == 1
    assert g.word_length(index[(2, 0, 1)]) == 1
    assert g.word_length(index[(0, 2, 1)]) == 2
    assert g.word_length(index[(2, 1, 0)]) == 2


@pytest.mark.parametrize("rows", [
    [[0, 1], [1, 1]],            # no inverse for 1
    [[0, 1, 2], [1, 0, 2], [2, 2, 0]],  # not a latin square
    [[0, 1], [1]],               # ragged
])
def test_invalid_tables_rejected(rows):
    with pytest.raises(DomainError):
        TableGroup(rows, [1])


def test_non_generating_subset_rejected():
    with pytest.raises(DomainError):
        TableGroup(cyclic_table(4), [2])


def test_parse_spec():
    assert parse_spec("cyclic:3") == Cyclic(3)
    assert isinstance(parse_spec(" int "), InfiniteCyclic)
    t = parse_spec("table{0 1 2 / 1 2 0 / 2 0 1; gens 1}")
    assert t.order == 3 and t.word_length(2) == 1
    for bad in ("cyclic:1", "cyclic:x", "foo", "table{0 x}"):
        with pytest.raises(DomainError):
            parse_spec(bad)
    with pytest.raises(DomainError, match="at least 2"):
        parse_spec("cyclic:1")


FINITE = [Cyclic(2), Cyclic(3), Cyclic(6), s3()[0], TableGroup(cyclic_table(4), [1])]


@pytest.mark.parametrize("g", FINITE, ids=lambda g: g.describe())
def test_finite_group_axioms_exhaustive(g):
    els = range(g.order)
    e = g.identity
    for a, b, c in product(els, repeat=3):
        assert g.compose(g.compose(a, b), c) == g.compose(a, g.compose(b, c))
    for a in els:
        assert g.compose(e, a) == a == g.compose(a, e)
        assert g.compose(g.inverse(a), a) == e
    for a, b in product(els, repeat=2):
        assert g.word_length(g.compose(a, b)) <= g.word_length(a) + g.word_length(b)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_infinite_cyclic_axioms(a, b, c):
    g = InfiniteCyclic()
    assert g.compose(g.compose(a, b), c) == g.compose(a, g.compose(b, c))
    assert g.compose(g.inverse(a), a) == g.identity
    assert g.word_length(g.compose(a, b)) <= g.word_length(a) + g.word_length(b)


@given(st.integers(2, 40), st.data())
def test_cyclic_word_length_formula(n, data):
    k = data.draw(st.integers(0, n - 1))
    assert Cyclic(n).word_length(k) == min(k, n - k)
