"""k-uniform hypergraphs on dense integer vertices, plus codegree/link queries.

Vertices are ``0..n-1``. Edges are stored as sorted k-tuples. A host that
gets queried repeatedly builds an index from (k-1)-subsets to their
neighborhoods on first use.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence


class InvalidHypergraph(ValueError):
    """Raised for malformed hypergraphs, subsets, or text input."""


Edge = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Hypergraph:
    k: int
    n: int
    edges: frozenset[Edge]
    _index: dict = field(default=None, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidHypergraph(f"uniformity must be positive, got {self.k}")
        if self.n < 0:
            raise InvalidHypergraph(f"negative vertex count {self.n}")
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise InvalidHypergraph(f"edge {e} is not a {self.k}-set")
            if tuple(sorted(e)) != e:
                raise InvalidHypergraph(f"edge {e} is not sorted")
            if e[0] < 0 or e[-1] >= self.n:
                raise InvalidHypergraph(f"edge {e} has a vertex outside 0..{self.n - 1}")

    @classmethod
    def from_edges(cls, k: int, n: int, edges: Iterable[Iterable[int]], strict: bool = True) -> "Hypergraph":
        """Build from arbitrary vertex iterables. Duplicates raise unless ``strict=False``."""
        seen = set()
        for e in edges:
            t = tuple(sorted(e))
            if t in seen and strict:
                raise InvalidHypergraph(f"duplicate edge {t}")
            seen.add(t)
        return cls(k, n, frozenset(seen))

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.k, self.n, self.edges) == (other.k, other.n, other.edges)

    def __hash__(self):
        return hash((self.k, self.n, self.edges))

    def __repr__(self):
        return f"Hypergraph(k={self.k}, n={self.n}, |E|={len(self.edges)})"

    @property
    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, vertices: Sequence[int]) -> bool:
        return tuple(sorted(vertices)) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def _neighbor_index(self) -> dict[Edge, frozenset[int]]:
        if self._index is None:
            with self._lock:
                if self._index is None:
                    idx: dict[Edge, set[int]] = {}
                    for e in self.edges:
                        for i, v in enumerate(e):
                            idx.setdefault(e[:i] + e[i + 1:], set()).add(v)
                    object.__setattr__(self, "_index", {s: frozenset(vs) for s, vs in idx.items()})
        return self._index

    def neighbors_of(self, subset: Sequence[int]) -> frozenset[int]:
        """N(subset) without validation; repeated or unsorted input is handled."""
        return self._neighbor_index().get(tuple(sorted(subset)), frozenset())

    def __getstate__(self):
        return {"k": self.k, "n": self.n, "edges": self.edges}

    def __setstate__(self, state):
        object.__setattr__(self, "k", state["k"])
        object.__setattr__(self, "n", state["n"])
        object.__setattr__(self, "edges", state["edges"])
        object.__setattr__(self, "_index", None)
        object.__setattr__(self, "_lock", threading.Lock())


@dataclass(frozen=True)
class OrderedHypergraph:
    """A hypergraph with a total order; ``order[i]`` is the vertex of rank ``i``."""

    base: Hypergraph
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(self.base.n)):
            raise InvalidHypergraph("order is not a permutation of the vertex set")

    @classmethod
    def natural(cls, base: Hypergraph) -> "OrderedHypergraph":
        return cls(base, tuple(range(base.n)))

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n

    def ranks(self) -> list[int]:
        r = [0] * self.base.n
        for i, v in enumerate(self.order):
            r[v] = i
        return r


def _check_subset(G: Hypergraph, subset: Iterable[int], size: int | None = None) -> Edge:
    s = tuple(sorted(subset))
    if len(set(s)) != len(s):
        raise InvalidHypergraph(f"subset {s} has repeated vertices")
    if s and (s[0] < 0 or s[-1] >= G.n):
        raise InvalidHypergraph(f"subset {s} has a vertex outside 0..{G.n - 1}")
    if size is not None and len(s) != size:
        raise InvalidHypergraph(f"expected a {size}-subset, got {s}")
    return s


def complete(k: int, n: int) -> Hypergraph:
    return Hypergraph(k, n, frozenset(combinations(range(n), k)))


def empty(k: int, n: int) -> Hypergraph:
    return Hypergraph(k, n, frozenset())


def random_hypergraph(k: int, n: int, p: float, seed: int = 0) -> Hypergraph:
    """Each k-subset is an edge independently with probability p."""
    rng = random.Random(seed)
    return Hypergraph(k, n, frozenset(e for e in combinations(range(n), k) if rng.random() < p))


def neighborhood(G: Hypergraph, e: Iterable[int]) -> frozenset[int]:
    """N(e) = {v : e + v is an edge} for a (k-1)-subset e."""
    return G.neighbors_of(_check_subset(G, e, G.k - 1))


def min_codegree(G: Hypergraph) -> int:
    """Minimum degree over *all* (k-1)-subsets, including ones in no edge."""
    if G.n < G.k - 1:
        raise InvalidHypergraph(f"need n >= k-1 to have a (k-1)-subset (n={G.n}, k={G.k})")
    idx = G._neighbor_index()
    best = None
    for s in combinations(range(G.n), G.k - 1):
        d = len(idx.get(s, ()))
        if best is None or d < best:
            best = d
            if d == 0:
                break
    return best


def back_neighborhood(G: Hypergraph, S: Iterable[int]) -> set[Edge]:
    """(k-1)-sets e with e + v an edge for every v in S."""
    S = _check_subset(G, S)
    if not S:
        raise InvalidHypergraph("back neighborhood needs a nonempty vertex set")
    result = None
    for v in S:
        rows = {e[:i] + e[i + 1:] for e in G.edges for i, u in enumerate(e) if u == v}
        result = rows if result is None else result & rows
        if not result:
            break
    return result


def link_plus(G: Hypergraph, v: int) -> Hypergraph:
    """(k-1)-graph on all n vertices; v is kept as an isolated vertex."""
    _check_subset(G, [v])
    rows = (e[:i] + e[i + 1:] for e in G.edges for i, u in enumerate(e) if u == v)
    return Hypergraph(G.k - 1, G.n, frozenset(rows))


def link(G: Hypergraph, v: int) -> Hypergraph:
    """Link of v on V minus v, relabelled order-preservingly (w > v shifts down by one)."""
    lp = link_plus(G, v)
    relabel = lambda w: w if w < v else w - 1
    return Hypergraph(G.k - 1, G.n - 1, frozenset(tuple(relabel(w) for w in e) for e in lp.edges))


def induced(G: Hypergraph, vertices: Sequence[int]) -> Hypergraph:
    """Subgraph induced on ``vertices``, relabelled so vertices[i] becomes i."""
    pos = {v: i for i, v in enumerate(vertices)}
    if len(pos) != len(vertices):
        raise InvalidHypergraph("induced vertex list has repeats")
    edges = (tuple(sorted(pos[u] for u in e)) for e in G.edges if all(u in pos for u in e))
    return Hypergraph(G.k, len(vertices), frozenset(edges))


def is_k_partite(G: Hypergraph) -> list[int] | None:
    """A colouring with k colours in which every edge sees every colour, or None.

    Plain backtracking in vertex order; fine for pattern-sized graphs.
    """
    k, n = G.k, G.n
    incident: list[list[Edge]] = [[] for _ in range(n)]
    for e in G.edge_list:
        for v in e:
            incident[v].append(e)
    active = [v for v in range(n) if incident[v]]
    colour = [-1] * n

    def ok(v: int) -> bool:
        for e in incident[v]:
            seen = [colour[u] for u in e if colour[u] >= 0]
            if len(seen) != len(set(seen)):
                return False
        return True

    def solve(i: int, used: int) -> bool:
        if i == len(active):
            return True
        v = active[i]
        # a fresh colour is interchangeable with any other fresh one
        for c in range(min(k, used + 1)):
            colour[v] = c
            if ok(v) and solve(i + 1, max(used, c + 1)):
                return True
        colour[v] = -1
        return False

    if not solve(0, 0):
        return None
    free = 0
    for v in range(n):
        if colour[v] < 0:
            colour[v] = free % k
            free += 1
    return colour


# text format: "k n" header, one strictly increasing edge per line, '#' comments

def loads(text: str) -> Hypergraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InvalidHypergraph("missing 'k n' header")
    header = lines[0].split()
    if len(header) != 2:
        raise InvalidHypergraph(f"bad header {lines[0]!r}")
    try:
        k, n = int(header[0]), int(header[1])
    except ValueError:
        raise InvalidHypergraph(f"bad header {lines[0]!r}") from None
    edges = set()
    for ln in lines[1:]:
        try:
            e = tuple(int(x) for x in ln.split())
        except ValueError:
            raise InvalidHypergraph(f"bad edge line {ln!r}") from None
        if len(e) != k:
            raise InvalidHypergraph(f"edge line {ln!r} does not have {k} vertices")
        if any(a >= b for a, b in zip(e, e[1:])):
            raise InvalidHypergraph(f"edge line {ln!r} is not strictly increasing")
        if e in edges:
            raise InvalidHypergraph(f"duplicate edge {ln!r}")
        edges.add(e)
    return Hypergraph(k, n, frozenset(edges))


def dumps(G: Hypergraph) -> str:
    out = [f"{G.k} {G.n}"]
    out.extend(" ".join(map(str, e)) for e in G.edge_list)
    return "\n".join(out) + "\n"


def read(path: str | Path) -> Hypergraph:
    return loads(Path(path).read_text())


def write(G: Hypergraph, path: str | Path) -> None:
    Path(path).write_text(dumps(G))
