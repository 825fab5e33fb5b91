import warnings
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from coturan import oracles
from coturan.families import tight_cycle, tight_cycle_minus
from coturan.hypergraph import Hypergraph, is_k_partite
from coturan.sufficient import (
    ConditionWitness, block_assignment, check, exact_transversals, paper_witness, validate, widen,
)


@st.composite
def small(draw, max_n=6):
    k = draw(st.integers(3, 4))
    n = draw(st.integers(k, max_n))
    subsets = list(combinations(range(n), k))
    return Hypergraph(k, n, frozenset(draw(st.lists(st.sampled_from(subsets), unique=True, max_size=5))))


@st.composite
def kpartite(draw):
    k = draw(st.integers(3, 4))
    sizes = draw(st.lists(st.integers(1, 2), min_size=k, max_size=k))
    parts, v = [], 0
    for sz in sizes:
        parts.append(list(range(v, v + sz)))
        v += sz
    cross = list(product(*parts))
    edges = draw(st.lists(st.sampled_from(cross), unique=True, min_size=1, max_size=6))
    return Hypergraph(k, v, frozenset(tuple(sorted(e)) for e in edges)), parts


def test_transversals_of_full_cycle_are_empty():
    assert exact_transversals(tight_cycle(3, 7)) == []


def test_transversals_contain_named_pair():
    assert (1, 4) in exact_transversals(tight_cycle_minus(3, 5))
    F, w = paper_witness(3, "2k-1")
    assert tuple(sorted(w.V1)) == (1, 4)


def test_transversals_single_edge():
    # 3 choices inside the edge times two sides for each of the 2 free vertices
    got = exact_transversals(Hypergraph(3, 5, frozenset([(0, 1, 2)])))
    assert len(got) == 12
    assert all(len(set(V1) & {0, 1, 2}) == 1 for V1 in got)


@given(small())
def test_transversals_match_brute_force(F):
    brute = [V for r in range(F.n + 1) for V in combinations(range(F.n), r)
             if all(len(set(V) & set(e)) == 1 for e in F.edges)]
    assert exact_transversals(F) == brute


@pytest.mark.parametrize("k,l", [(3, 5), (3, 7), (4, 7), (4, 9), (5, 9), (5, 11)])
def test_check_finds_cycle_witnesses(k, l):
    F = tight_cycle_minus(k, l)
    w = check(F)
    assert w is not None and validate(F, w)


def test_check_no_for_full_cycle():
    assert check(tight_cycle(3, 7)) is None


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("variant,t", [("2k-1", 2), ("2k+1", 4)])
def test_explicit_witnesses_validate(k, variant, t):
    F, w = paper_witness(k, variant)
    assert w.t == t
    assert F.n == (2 * k - 1 if variant == "2k-1" else 2 * k + 1)
    assert validate(F, w)
    assert validate(F, widen(w, t + 1))


def test_explicit_witness_rejects_small_k():
    with pytest.raises(ValueError):
        paper_witness(2, "2k-1")
    with pytest.raises(ValueError):
        paper_witness(3, "3k")


def test_validate_catches_tampering():
    F, w = paper_witness(3, "2k+1")
    v = w.V1[0]
    bad = dict(w.embeddings)
    bad[v] = tuple(reversed(bad[v]))
    assert not validate(F, ConditionWitness(w.V1, w.V2_order, w.t, bad))
    assert not validate(F, ConditionWitness(w.V1[:1], w.V2_order, w.t, {v: w.embeddings[v]}))
    assert not validate(F, ConditionWitness(w.V1, w.V2_order, 1, w.embeddings))


def test_witness_json_roundtrip():
    F, w = paper_witness(4, "2k-1")
    assert ConditionWitness.from_json(w.to_json()) == w


def test_block_assignment():
    assert block_assignment(Hypergraph(2, 4, frozenset([(0, 2), (1, 3)]))) == [0, 0, 1, 1]
    assert block_assignment(Hypergraph(2, 3, frozenset([(0, 1), (1, 2)]))) is None
    assert block_assignment(Hypergraph(2, 3, frozenset())) == [0, 0, 0]


@given(kpartite())
def test_kpartite_patterns_say_yes(data):
    F, parts = data
    w = check(F)
    assert w is not None and validate(F, w)


@settings(max_examples=40)
@given(small())
def test_check_agrees_with_naive_scan(F):
    w = check(F)
    naive = oracles.naive_condition(F)
    assert (w is None) == (naive is None)
    if w is not None:
        assert validate(F, w)


@settings(max_examples=30)
@given(small())
def test_witnesses_survive_wider_parts(F):
    w = check(F)
    if w is not None:
        for t in (w.t + 1, w.t + 3):
            assert validate(F, widen(w, t))


def test_small_t_scan_agrees_on_cycles():
    """The smallest working t for the explicit constructions is at most their stated t."""
    for k, l in [(3, 5), (3, 7), (4, 7)]:
        V1, order, t = oracles.naive_condition(tight_cycle_minus(k, l))
        assert t <= (2 if l == 2 * k - 1 else 4)


def test_large_patterns_warn():
    F = Hypergraph(3, 12, frozenset([(0, 1, 2)]))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        w = check(F)
    assert w is not None
    assert any("orderings" in str(r.message) for r in rec)
