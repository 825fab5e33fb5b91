"""Backtracking search for homomorphisms, injective copies and ordered copies.

Three host kinds are accepted:

* :class:`Hypergraph` for ``hom`` and ``inj``;
* :class:`OrderedHypergraph` (pattern too) for ``ord``;
* a *class-level* host (anything implementing :class:`ClassLevelHost`) for
  ``inj``. Its vertices are vertex classes of a blow-up; each class can be
  used up to ``capacity`` times and edges are multisets of classes.

:func:`find` is the fast path, :func:`count_all` an independent slow
enumerator and :func:`verify` an independent checker. They share no pruning
code on purpose.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
import multiprocessing as mp
from dataclasses import dataclass
from typing import Sequence

from .hypergraph import Hypergraph, OrderedHypergraph

MODES = ("hom", "inj", "ord")
_ALIASES = {"homomorphism": "hom", "injective": "inj", "ordered": "ord"}


class UniformityMismatch(ValueError):
    pass


class SearchTimeout(RuntimeError):
    """The search budget ran out before the search space was exhausted."""


@dataclass(frozen=True)
class EmbeddingWitness:
    mode: str
    map: tuple[int, ...]

    def to_json(self) -> dict:
        return {"mode": self.mode, "map": list(self.map)}

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingWitness":
        return cls(normalise_mode(data["mode"]), tuple(int(x) for x in data["map"]))


class ClassLevelHost:
    """Interface for quotient hosts. Subclasses fill in the four members."""

    k: int
    n: int  # number of classes
    capacity: int

    def class_neighbors(self, classes: Sequence[int]) -> Sequence[int]:
        """Classes x such that ``classes + (x,)`` is an edge multiset, ascending."""
        raise NotImplementedError

    def is_class_edge(self, classes: Sequence[int]) -> bool:
        raise NotImplementedError


def normalise_mode(mode: str) -> str:
    mode = _ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


def _unpack(pattern, host, mode):
    mode = normalise_mode(mode)
    p_rank = h_rank = None
    if mode == "ord":
        if not (isinstance(pattern, OrderedHypergraph) and isinstance(host, OrderedHypergraph)):
            raise TypeError("ordered mode needs OrderedHypergraph pattern and host")
        p_rank, h_rank = pattern.ranks(), host.ranks()
        pattern, host = pattern.base, host.base
    else:
        if isinstance(pattern, OrderedHypergraph):
            pattern = pattern.base
        if isinstance(host, OrderedHypergraph):
            host = host.base
    if pattern.k != host.k:
        raise UniformityMismatch(f"pattern is {pattern.k}-uniform, host is {host.k}-uniform")
    if isinstance(host, ClassLevelHost) and mode != "inj":
        raise ValueError("class-level hosts only support injective search")
    return pattern, host, mode, p_rank, h_rank


def search_order(pattern: Hypergraph) -> list[int]:
    """Greedy variable order: next vertex completes the most pattern edges,
    then shares the most edges with placed vertices, then lowest label."""
    p = pattern.n
    incident = [[] for _ in range(p)]
    for e in pattern.edge_list:
        for v in e:
            incident[v].append(e)
    placed: set[int] = set()
    order: list[int] = []
    while len(order) < p:
        best, best_key = None, None
        for u in range(p):
            if u in placed:
                continue
            done = touch = 0
            for e in incident[u]:
                c = sum(1 for w in e if w in placed)
                if c == len(e) - 1:
                    done += 1
                touch += c
            key = (done, touch, len(incident[u]), -u)
            if best_key is None or key > best_key:
                best, best_key = u, key
        order.append(best)
        placed.add(best)
    return order


class _Search:
    """One search problem. Kept picklable so worker processes can rebuild it."""

    def __init__(self, pattern, host, mode, p_rank, h_rank, deadline=None):
        self.pattern, self.host, self.mode = pattern, host, mode
        self.p_rank, self.h_rank = p_rank, h_rank
        self.deadline = deadline
        self.class_level = isinstance(host, ClassLevelHost)
        self.nv = host.n
        if self.class_level:
            self.cap = host.capacity
            self.nbrs = self.nbr_set = host.class_neighbors
        else:
            self.cap = 1 if mode in ("inj", "ord") else None
            self.nbrs = lambda imgs: sorted(host.neighbors_of(imgs))
            self.nbr_set = host.neighbors_of
        self.order = search_order(pattern)
        pos = {u: i for i, u in enumerate(self.order)}
        # for each step: edges completed there (as the other vertices)
        self.completes: list[list[tuple[int, ...]]] = [[] for _ in self.order]
        adj: list[set[int]] = [set() for _ in self.order]
        for e in pattern.edge_list:
            last = max(e, key=lambda w: pos[w])
            self.completes[pos[last]].append(tuple(w for w in e if w != last))
            for u in e:
                for w in e:
                    if w != u and pos[w] < pos[u]:
                        adj[pos[u]].add(w)
        self.earlier_adj = [sorted(a) for a in adj]
        self.shadow = None
        if not self.class_level:
            sh = [set() for _ in range(self.nv)]
            for e in host.edges:
                for u in e:
                    sh[u].update(e)
            for u in range(self.nv):
                sh[u].discard(u)
            self.shadow = sh
        self.bounds = None
        self.h_by_rank = None
        if mode == "ord":
            self.h_by_rank = sorted(range(self.nv), key=lambda v: h_rank[v])
            self.bounds = []
            for i, u in enumerate(self.order):
                before = self.order[:i]
                lo = [w for w in before if p_rank[w] < p_rank[u]]
                hi = [w for w in before if p_rank[w] > p_rank[u]]
                lo_w = max(lo, key=lambda w: p_rank[w]) if lo else None
                hi_w = min(hi, key=lambda w: p_rank[w]) if hi else None
                self.bounds.append((lo_w, hi_w))
        self.nodes = 0

    def first_candidates(self) -> list[int]:
        return self._candidates(0, [None] * self.pattern.n)

    def _candidates(self, i, img):
        done = self.completes[i]
        if done:
            cands = self.nbrs(tuple(img[w] for w in done[0]))
        elif self.mode == "ord":
            cands = self.h_by_rank
        else:
            cands = range(self.nv)
        if self.mode == "ord":
            lo_w, hi_w = self.bounds[i]
            r = self.h_rank
            lo = r[img[lo_w]] if lo_w is not None else -1
            hi = r[img[hi_w]] if hi_w is not None else self.nv
            cands = [x for x in cands if lo < r[x] < hi]
            cands.sort(key=lambda x: r[x])
        return cands

    def run(self, fixed: int | None = None):
        p = self.pattern.n
        if p == 0:
            return ()
        img: list = [None] * p
        used = [0] * self.nv
        order, completes, nbrs, cap = self.order, self.completes, self.nbrs, self.cap
        nbr_set = self.nbr_set
        earlier_adj, shadow = self.earlier_adj, self.shadow
        deadline = self.deadline
        ordered = self.mode == "ord"
        everything = range(self.nv)
        get = img.__getitem__

        def dfs(i):
            self.nodes += 1
            if deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > deadline:
                raise SearchTimeout(f"budget exhausted after {self.nodes} nodes")
            u = order[i]
            done = completes[i]
            if i == 0 and fixed is not None:
                cands, rest = (fixed,), done
            elif ordered:
                cands, rest = self._candidates(i, img), done[1:]
            elif done:
                cands, rest = nbrs(tuple(map(get, done[0]))), done[1:]
            else:
                cands, rest = everything, done
            adj = earlier_adj[i]
            last = i + 1 == p
            for x in cands:
                if cap is not None and used[x] >= cap:
                    continue
                if shadow is not None and adj:
                    sx = shadow[x]
                    if any(img[w] not in sx for w in adj):
                        continue
                if rest and any(x not in nbr_set(tuple(map(get, oth))) for oth in rest):
                    continue
                img[u] = x
                if last:
                    return True
                used[x] += 1
                if dfs(i + 1):
                    return True
                used[x] -= 1
            img[u] = None
            return False

        return tuple(img) if dfs(0) else None


def _worker_init(problem):
    global _PROBLEM
    _PROBLEM = problem


def _worker_run(x):
    return _PROBLEM.run(fixed=x)


def find(pattern, host, mode: str = "inj", jobs: int = 1, budget_secs: float | None = None) -> EmbeddingWitness | None:
    """First witness in canonical branch order, or None after exhaustive search.

    Raises :class:`SearchTimeout` if ``budget_secs`` runs out.
    """
    pattern, host, mode, p_rank, h_rank = _unpack(pattern, host, mode)
    deadline = None if budget_secs is None else time.monotonic() + budget_secs
    problem = _Search(pattern, host, mode, p_rank, h_rank, deadline)
    if pattern.n == 0:
        return EmbeddingWitness(mode, ())
    if jobs <= 1:
        result = problem.run()
    else:
        branches = list(problem.first_candidates())
        result = None
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx, initializer=_worker_init, initargs=(problem,)) as ex:
            # map preserves submission order, so the earliest branch with a witness wins
            for res in ex.map(_worker_run, branches, chunksize=max(1, len(branches) // (4 * jobs))):
                if res is not None:
                    result = res
                    break
    return None if result is None else EmbeddingWitness(mode, result)


def verify(pattern, host, witness: EmbeddingWitness) -> bool:
    """Check a witness directly against the definitions."""
    mode = normalise_mode(witness.mode)
    p_rank = h_rank = None
    if mode == "ord":
        if not (isinstance(pattern, OrderedHypergraph) and isinstance(host, OrderedHypergraph)):
            return False
        p_rank, h_rank = pattern.ranks(), host.ranks()
    if isinstance(pattern, OrderedHypergraph):
        pattern = pattern.base
    if isinstance(host, OrderedHypergraph):
        host = host.base
    phi = witness.map
    if pattern.k != host.k or len(phi) != pattern.n:
        return False
    if any(not (0 <= x < host.n) for x in phi):
        return False
    if mode in ("inj", "ord") and len(set(phi)) != len(phi):
        return False
    if mode == "ord":
        for u in range(pattern.n):
            for v in range(pattern.n):
                if p_rank[u] < p_rank[v] and not h_rank[phi[u]] < h_rank[phi[v]]:
                    return False
    for e in pattern.edges:
        image = [phi[u] for u in e]
        if len(set(image)) != len(image) or not host.has_edge(image):
            return False
    return True


def count_all(pattern, host, mode: str = "inj", limit: int | None = None) -> int:
    """Count maps satisfying the mode, up to ``limit``.

    Assigns pattern vertices in label order and checks each edge once its
    largest vertex is placed. Materialised hosts only.
    """
    pattern, host, mode, p_rank, h_rank = _unpack(pattern, host, mode)
    if isinstance(host, ClassLevelHost):
        raise TypeError("count_all needs a materialised host")
    p, nv = pattern.n, host.n
    closing = [[] for _ in range(p)]
    for e in pattern.edges:
        closing[max(e)].append(e)
    img = [0] * p
    taken = [False] * nv
    count = 0

    def rec(u):
        nonlocal count
        if u == p:
            count += 1
            return limit is not None and count >= limit
        for x in range(nv):
            if mode != "hom" and taken[x]:
                continue
            if mode == "ord" and any((p_rank[w] < p_rank[u]) != (h_rank[img[w]] < h_rank[x]) for w in range(u)):
                continue
            img[u] = x
            if all(len(set(img[w] for w in e)) == len(e) and host.has_edge([img[w] for w in e]) for e in closing[u]):
                taken[x] = True
                stop = rec(u + 1)
                taken[x] = False
                if stop:
                    return True
        return False

    rec(0)
    return count


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)
