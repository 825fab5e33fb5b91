"""Generators for the named hypergraph families, with fixed canonical labels.

Tight cycles: vertex ``i`` is the (i+1)-th cycle vertex, edges are the
cyclic windows ``i, i+1, ..., i+k-1 (mod l)``. The minus-edge version drops
the window starting at ``l-1``, i.e. ``{l-1, 0, 1, ..., k-2}``.

Zycles: vertex ``(i-1)(k-1) + (j-1)`` is the j-th vertex of the i-th
(k-1)-set. ``zycle_minus`` drops the edge made of the last set plus the
first vertex of the first set. Every zycle edge is equivalent to every other
under relabelling, so which one is dropped does not matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .hypergraph import Hypergraph, OrderedHypergraph


class DegenerateParameters(ValueError):
    pass


def _cycle_windows(k: int, l: int) -> list[tuple[int, ...]]:
    return [tuple(sorted((i + j) % l for j in range(k))) for i in range(l)]


def tight_cycle(k: int, l: int) -> Hypergraph:
    if k < 2 or l < k + 1:
        raise DegenerateParameters(f"tight cycle needs k >= 2 and l >= k+1 (k={k}, l={l})")
    return Hypergraph(k, l, frozenset(_cycle_windows(k, l)))


def tight_cycle_minus(k: int, l: int) -> Hypergraph:
    if k < 2 or l < k + 1:
        raise DegenerateParameters(f"tight cycle needs k >= 2 and l >= k+1 (k={k}, l={l})")
    windows = _cycle_windows(k, l)
    return Hypergraph(k, l, frozenset(windows[:-1]))


def cycle_missing_edge(k: int, l: int) -> tuple[int, ...]:
    return tuple(sorted([l - 1] + list(range(k - 1))))


def _zycle_edges(k: int, l: int) -> list[tuple[int, ...]]:
    group = lambda i: [(i % l) * (k - 1) + j for j in range(k - 1)]
    edges = []
    for i in range(l):
        for v in group(i + 1):
            edges.append(tuple(sorted(group(i) + [v])))
    return edges


def _check_zycle(k: int, l: int) -> None:
    if k < 3 or l < 3:
        raise DegenerateParameters(f"zycle needs k >= 3 and l >= 3 (k={k}, l={l})")


def zycle(k: int, l: int) -> Hypergraph:
    _check_zycle(k, l)
    return Hypergraph(k, l * (k - 1), frozenset(_zycle_edges(k, l)))


def zycle_missing_edge(k: int, l: int) -> tuple[int, ...]:
    return tuple(sorted([0] + [(l - 1) * (k - 1) + j for j in range(k - 1)]))


def zycle_minus(k: int, l: int) -> Hypergraph:
    _check_zycle(k, l)
    missing = zycle_missing_edge(k, l)
    return Hypergraph(k, l * (k - 1), frozenset(e for e in _zycle_edges(k, l) if e != missing))


def complete_kpartite(k: int, t: int) -> Hypergraph:
    """K_{t,...,t}: parts are the consecutive blocks ``[it, (i+1)t)``."""
    if k < 1 or t < 1:
        raise DegenerateParameters(f"need k >= 1 and t >= 1 (k={k}, t={t})")
    blocks = [range(i * t, (i + 1) * t) for i in range(k)]
    return Hypergraph(k, k * t, frozenset(product(*blocks)))


def ordered_complete_kpartite(k: int, t: int) -> OrderedHypergraph:
    return OrderedHypergraph.natural(complete_kpartite(k, t))


def reduction_homomorphism(k: int, l: int) -> list[int]:
    """Vertex map from C_l^(k)- onto C_{l-k}^(k)-: go once around the first k
    vertices, then around the whole shorter cycle. Position i maps to i for
    i < k and to i-k afterwards; missing edge goes to missing edge."""
    if l < 3 * k - 1:
        raise DegenerateParameters(f"reduction needs l >= 3k-1 (k={k}, l={l})")
    return [i if i < k else i - k for i in range(l)]


FAMILIES = {
    "tight_cycle": tight_cycle,
    "tight_cycle_minus": tight_cycle_minus,
    "zycle": zycle,
    "zycle_minus": zycle_minus,
    "complete_kpartite": complete_kpartite,
    "ordered_complete_kpartite": ordered_complete_kpartite,
}


@dataclass(frozen=True)
class FamilySpec:
    family: str
    k: int
    size: int  # l for cycles and zycles, t for the k-partite families

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DegenerateParameters(f"unknown family {self.family!r}")

    def build(self):
        return FAMILIES[self.family](self.k, self.size)
