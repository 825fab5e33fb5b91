"""Checker for the partition-plus-ordered-link condition that forces zero codegree density.

A witness is a set V1 meeting every edge exactly once, an ordering of the
remaining vertices V2, a part size t, and for each v in V1 an order-preserving
embedding of the link L(v)[V2] into the ordered complete (k-1)-partite
(k-1)-graph with parts of size t.

With t = |V2| the embedding question reduces to a block assignment: sort
every link edge along the V2 order and send its j-th vertex to block j. The
ordering works iff these forced blocks never conflict and are weakly
increasing along the order; free vertices can then take the block of their
predecessor. A block assignment beta gives the embedding ``i -> beta(i) * t + i``,
which stays valid for every larger t, so t = |V2| loses nothing.

A NO answer only means this particular condition fails; it says nothing
about the codegree density of F.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

from . import embedding
from .embedding import EmbeddingWitness
from .families import ordered_complete_kpartite, tight_cycle_minus
from .hypergraph import Hypergraph, OrderedHypergraph

PERMUTATION_CAP = 10


@dataclass(frozen=True)
class ConditionWitness:
    V1: tuple[int, ...]
    V2_order: tuple[int, ...]
    t: int
    embeddings: dict  # v in V1 -> host index for each position of V2_order

    def to_json(self) -> dict:
        return {
            "V1": list(self.V1),
            "V2_order": list(self.V2_order),
            "t": self.t,
            "embeddings": {str(v): list(m) for v, m in sorted(self.embeddings.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConditionWitness":
        return cls(
            tuple(data["V1"]), tuple(data["V2_order"]), int(data["t"]),
            {int(v): tuple(m) for v, m in data["embeddings"].items()},
        )


def exact_transversals(F: Hypergraph) -> list[tuple[int, ...]]:
    """Every V1 with |e & V1| = 1 for all edges, by size then lexicographically."""
    edges = [set(e) for e in F.edges]
    out = []
    for r in range(F.n + 1):
        for V1 in combinations(range(F.n), r):
            S = set(V1)
            if all(len(e & S) == 1 for e in edges):
                out.append(V1)
    return out


def link_on(F: Hypergraph, v: int, V2_order: Sequence[int]) -> OrderedHypergraph:
    """L_F(v)[V2] relabelled so that V2_order[i] becomes vertex i (natural order)."""
    pos = {u: i for i, u in enumerate(V2_order)}
    rows = set()
    for e in F.edges:
        if v in e:
            rest = [u for u in e if u != v]
            if all(u in pos for u in rest):
                rows.add(tuple(sorted(pos[u] for u in rest)))
    return OrderedHypergraph.natural(Hypergraph(F.k - 1, len(V2_order), frozenset(rows)))


def block_assignment(L: Hypergraph) -> list[int] | None:
    """Weakly increasing blocks 0..k-2 for vertices 0..b-1 such that every
    edge of the (k-1)-graph L takes one vertex from each block."""
    forced: dict[int, int] = {}
    for e in L.edges:
        for j, u in enumerate(e):
            if forced.setdefault(u, j) != j:
                return None
    blocks, cur = [], 0
    for u in range(L.n):
        if u in forced:
            if forced[u] < cur:
                return None
            cur = forced[u]
        blocks.append(cur)
    return blocks


def blocks_to_embedding(blocks: Sequence[int], t: int) -> tuple[int, ...]:
    if t < len(blocks):
        raise ValueError(f"t = {t} is smaller than |V2| = {len(blocks)}")
    return tuple(b * t + i for i, b in enumerate(blocks))


def validate(F: Hypergraph, w: ConditionWitness) -> bool:
    """Re-check every clause of a witness, embeddings through :func:`embedding.verify`."""
    V1 = set(w.V1)
    if len(V1) != len(w.V1) or len(set(w.V2_order)) != len(w.V2_order):
        return False
    if V1 & set(w.V2_order) or V1 | set(w.V2_order) != set(range(F.n)):
        return False
    if any(len(V1.intersection(e)) != 1 for e in F.edges):
        return False
    if set(w.embeddings) != V1:
        return False
    host = ordered_complete_kpartite(F.k - 1, w.t)
    for v in w.V1:
        L = link_on(F, v, w.V2_order)
        if not embedding.verify(L, host, EmbeddingWitness("ord", tuple(w.embeddings[v]))):
            return False
    return True


def widen(w: ConditionWitness, t: int) -> ConditionWitness:
    """The same witness seen inside parts of size t >= w.t (block structure kept)."""
    new = {}
    for v, m in w.embeddings.items():
        new[v] = tuple((x // w.t) * t + (x % w.t) for x in m)
    return ConditionWitness(w.V1, w.V2_order, t, new)


def check(F: Hypergraph) -> ConditionWitness | None:
    if F.k < 2:
        raise ValueError("the condition needs k >= 2")
    for V1 in exact_transversals(F):
        V2 = [u for u in range(F.n) if u not in V1]
        if len(V2) > PERMUTATION_CAP:
            warnings.warn(f"|V2| = {len(V2)}: scanning {len(V2)}! orderings may not finish", RuntimeWarning)
        for order in permutations(V2):
            embeds = {}
            for v in V1:
                blocks = block_assignment(link_on(F, v, order).base)
                if blocks is None:
                    break
                embeds[v] = blocks_to_embedding(blocks, len(V2))
            else:
                return ConditionWitness(tuple(V1), tuple(order), len(V2), embeds)
    return None


def paper_witness(k: int, variant: str) -> tuple[Hypergraph, ConditionWitness]:
    """Explicit witnesses for C_{2k-1}^(k)- (t = 2) and C_{2k+1}^(k)- (t = 4).

    Both are written along a cycle order in which odd-indexed v's come
    first, then w, then even-indexed v's, then x; the canonical labels are a
    rotation of that order that puts the missing edge at {l-1, 0, ..., k-2}.
    """
    if k < 3:
        raise ValueError("explicit witnesses need k >= 3")
    if variant in ("2k-1", "minus"):
        l = 2 * k - 1
        seq = [("v", i) for i in range(1, 2 * k - 2, 2)] + ["w"] + [("v", i) for i in range(2, 2 * k - 3, 2)] + ["x"]
        shift = k - 1
        t = 2
        n_v = 2 * k - 3
        emb_w = {i: i - 1 for i in range(1, n_v + 1)}
        emb_x = {i: i for i in range(1, n_v + 1)}
    elif variant in ("2k+1", "plus"):
        l = 2 * k + 1
        seq = [("v", i) for i in range(1, 2 * k, 2)] + ["w"] + [("v", i) for i in range(2, 2 * k - 1, 2)] + ["x"]
        shift = -1
        t = 4
        n_v = 2 * k - 1
        # block j (1-based) is u'_j < u_{2j-1} < u_{2j} < u''_j
        u = lambda i: 4 * ((i + 1) // 2 - 1) + (1 if i % 2 else 2)
        emb_w = {i: u(i - 1) for i in range(2, n_v + 1)}
        emb_w[1] = 0
        emb_x = {i: u(i) for i in range(1, n_v)}
        emb_x[n_v] = 4 * (k - 2) + 3
    else:
        raise ValueError(f"unknown variant {variant!r}; use '2k-1' or '2k+1'")
    assert len(seq) == l
    label = {name: (pos + shift) % l for pos, name in enumerate(seq)}
    V2_order = tuple(label[("v", i)] for i in range(1, n_v + 1))
    w = ConditionWitness(
        V1=(label["w"], label["x"]),
        V2_order=V2_order,
        t=t,
        embeddings={
            label["w"]: tuple(emb_w[i] for i in range(1, n_v + 1)),
            label["x"]: tuple(emb_x[i] for i in range(1, n_v + 1)),
        },
    )
    return tight_cycle_minus(k, l), w
