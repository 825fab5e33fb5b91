from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from coturan import constructions as con
from coturan.embedding import (
    EmbeddingWitness, SearchTimeout, UniformityMismatch, count_all, find, search_order, verify,
)
from coturan.families import complete_kpartite, ordered_complete_kpartite, tight_cycle, tight_cycle_minus
from coturan.hypergraph import Hypergraph, OrderedHypergraph, complete, empty


@st.composite
def pairs(draw):
    k = draw(st.integers(2, 3))
    pn, hn = draw(st.integers(k, 6)), draw(st.integers(k, 9))
    ps, hs = list(combinations(range(pn), k)), list(combinations(range(hn), k))
    pe = draw(st.lists(st.sampled_from(ps), unique=True, max_size=6))
    he = draw(st.lists(st.sampled_from(hs), unique=True, max_size=len(hs)))
    return Hypergraph(k, pn, frozenset(pe)), Hypergraph(k, hn, frozenset(he))


# frozen counts from the label-order enumerator
@pytest.mark.parametrize("pattern,host,mode,count", [
    (tight_cycle_minus(3, 5), complete(3, 6), "inj", 720),
    (tight_cycle(3, 5), tight_cycle(3, 5), "inj", 10),
    (tight_cycle_minus(3, 8), tight_cycle_minus(3, 5), "hom", 8),
    (OrderedHypergraph.natural(complete_kpartite(2, 2)), ordered_complete_kpartite(2, 3), "ord", 9),
])
def test_frozen_counts(pattern, host, mode, count):
    assert count_all(pattern, host, mode) == count
    w = find(pattern, host, mode)
    assert w is not None and verify(pattern, host, w)


def test_none_cases():
    assert find(complete(3, 4), Hypergraph(3, 5, frozenset([(0, 1, 2)])), "inj") is None
    assert find(tight_cycle(3, 7), complete_kpartite(3, 3), "hom") is None
    assert find(complete(2, 3), complete(2, 2), "hom") is None


def test_reduction_homomorphism_found():
    w = find(tight_cycle_minus(3, 8), tight_cycle_minus(3, 5), "hom")
    assert w is not None and verify(tight_cycle_minus(3, 8), tight_cycle_minus(3, 5), w)


def test_uniformity_mismatch():
    with pytest.raises(UniformityMismatch):
        find(complete(2, 3), complete(3, 4))


def test_ordered_needs_orders():
    with pytest.raises(TypeError):
        find(complete(2, 3), complete(2, 4), "ord")


def test_empty_pattern():
    w = find(empty(3, 0), complete(3, 4))
    assert w == EmbeddingWitness("inj", ())


def test_verify_rejects_bad_maps():
    P, H = tight_cycle_minus(3, 5), complete(3, 5)
    assert verify(P, H, EmbeddingWitness("inj", (0, 1, 2, 3, 4)))
    assert not verify(P, H, EmbeddingWitness("inj", (0, 1, 2, 3, 3)))
    assert not verify(P, H, EmbeddingWitness("inj", (0, 1, 2, 3)))
    assert not verify(P, H, EmbeddingWitness("inj", (0, 1, 2, 3, 9)))
    assert not verify(P, tight_cycle_minus(3, 5), EmbeddingWitness("hom", (0, 0, 1, 2, 3)))


def test_witness_json_roundtrip():
    w = EmbeddingWitness("ord", (2, 0, 1))
    assert EmbeddingWitness.from_json(w.to_json()) == w
    assert EmbeddingWitness.from_json({"mode": "injective", "map": [1]}).mode == "inj"


def test_budget_exhaustion_raises():
    g = con.construction_for(5, 7, 5)
    with pytest.raises(SearchTimeout):
        find(tight_cycle_minus(5, 7), g.class_host(), "inj", budget_secs=0.2)


def test_class_host_rejects_hom():
    g = con.build_plain(2, 4, 4)
    with pytest.raises(ValueError):
        find(tight_cycle_minus(4, 6), g.class_host(), "hom")


def test_parallel_matches_serial():
    P, H = tight_cycle_minus(3, 7), Hypergraph(3, 9, frozenset(e for e in combinations(range(9), 3) if sum(e) % 3 == 1))
    assert find(P, H, "inj", jobs=2) == find(P, H, "inj", jobs=1)


def test_search_order_is_permutation():
    order = search_order(tight_cycle(4, 9))
    assert sorted(order) == list(range(9))


@given(pairs(), st.sampled_from(["hom", "inj"]))
def test_find_agrees_with_count(pair, mode):
    P, H = pair
    w = find(P, H, mode)
    assert (w is None) == (count_all(P, H, mode, limit=1) == 0)
    if w is not None:
        assert verify(P, H, w)


@given(pairs(), st.permutations(range(6)), st.permutations(range(9)))
def test_ordered_find_agrees_with_count(pair, po, ho):
    P, H = pair
    P = OrderedHypergraph(P, tuple(x for x in po if x < P.n))
    H = OrderedHypergraph(H, tuple(x for x in ho if x < H.n))
    w = find(P, H, "ord")
    assert (w is None) == (count_all(P, H, "ord", limit=1) == 0)
    if w is not None:
        assert verify(P, H, w)


@given(pairs())
def test_injective_implies_homomorphic(pair):
    P, H = pair
    if find(P, H, "inj") is not None:
        assert find(P, H, "hom") is not None


@pytest.mark.parametrize("k,l,m,N", [(4, 6, 2, 4), (4, 5, 2, 4), (3, 5, 3, 3), (3, 4, 2, 3), (3, 7, 2, 3)])
def test_class_level_matches_vertex_level(k, l, m, N):
    g = con.build_plain(m, N, k)
    P = tight_cycle_minus(k, l)
    vertex = find(P, g.to_hypergraph(), "inj")
    cls = find(P, g.class_host(), "inj")
    assert (vertex is None) == (cls is None)
    if cls is not None:
        assert verify(P, g, EmbeddingWitness("inj", g.lift(cls.map)))
