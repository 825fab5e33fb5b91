"""Slow, independent re-derivations used to cross-check the fast code paths.

Nothing here imports the routine it checks. Each oracle is written straight
from the definition, trading speed for obviousness.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from itertools import combinations, permutations

from .hypergraph import Hypergraph, OrderedHypergraph


# cycle residue classes


def propagate_dagger(k: int, l: int):
    """Union-find over Z/lZ joining i and i+k for every i other than 0 and -1.

    Returns (t, s, X, Y) with X the class of 0 and Y the class of -1, or
    None if the propagation does not leave exactly those two classes.
    """
    parent = list(range(l))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(l):
        if i in (0, l - 1):
            continue
        a, b = root(i), root((i + k) % l)
        if a != b:
            parent[a] = b
    groups: dict[int, list[int]] = {}
    for x in range(l):
        groups.setdefault(root(x), []).append(x)
    if len(groups) != 2 or root(0) == root(l - 1):
        return None
    X = tuple(sorted(groups[root(0)]))
    Y = tuple(sorted(groups[root(l - 1)]))
    t = sum(1 for i in range(1, k + 1) if i % l in X)
    return t, k - t, X, Y


# blow-ups


def plain_blowup_edges(m: int, N: int, k: int) -> set[tuple[int, ...]]:
    """Every k-subset of the mN vertices whose class labels sum to 1 mod m."""
    return {e for e in combinations(range(m * N), k) if sum(v // N for v in e) % m == 1}


def plain_degree_formula(m: int, N: int, e) -> int:
    """Degree of a (k-1)-set e in G_{m,N}: N minus the part of e inside class 1 - sum."""
    r = (1 - sum(v // N for v in e)) % m
    return N - sum(1 for v in e if v // N == r)


class ModifiedRule:
    """Edge rule of the modified graph written directly from the scheme table."""

    def __init__(self, scheme):
        self.m = scheme.m
        key = lambda c: tuple(sorted(c.elements()))
        self.gone, self.new = set(), set()
        t, s = scheme.t, scheme.s
        for (a, b), ent in scheme.table.items():
            self.gone.add(key(Counter({a: t, b: s})))
            self.new.add(key(_add(a, t - 1, b, s, ent.c)))
            self.new.add(key(_add(a, t, b, s - 1, ent.d)))

    def __call__(self, sig) -> bool:
        sig = tuple(sorted(sig))
        if sig in self.new:
            return True
        return sum(sig) % self.m == 1 and sig not in self.gone


def _add(a, ra, b, rb, x) -> Counter:
    c = Counter()
    c[a] += ra
    c[b] += rb
    c[x] += 1
    return +c


def modified_class_degree(rule: ModifiedRule, N: int, sig) -> int:
    """Codegree of a (k-1)-set with class multiset sig, by scanning every class."""
    cnt = Counter(sig)
    return sum(N - cnt[x] for x in range(rule.m) if cnt[x] < N and rule(tuple(sig) + (x,)))


# sufficient condition


def naive_condition(F: Hypergraph):
    """Scan every (V1, ordering of V2, t <= |V2|) and test each link with the engine.

    Returns (V1, order, t) for the first hit or None.
    """
    from . import embedding
    from .families import ordered_complete_kpartite

    n, k = F.n, F.k
    for mask in range(1 << n):
        V1 = [v for v in range(n) if mask >> v & 1]
        if any(sum(1 for v in e if mask >> v & 1) != 1 for e in F.edges):
            continue
        V2 = [v for v in range(n) if not mask >> v & 1]
        for order in permutations(V2):
            pos = {u: i for i, u in enumerate(order)}
            links = []
            for v in V1:
                rows = {tuple(sorted(pos[u] for u in e if u != v)) for e in F.edges if v in e}
                links.append(OrderedHypergraph.natural(Hypergraph(k - 1, len(order), frozenset(rows))))
            for t in range(1, max(1, len(V2)) + 1):
                host = ordered_complete_kpartite(k - 1, t)
                if all(embedding.find(L, host, "ord") is not None for L in links):
                    return tuple(V1), order, t
    return None


# good families


def random_good_family(n: int, mu: float, eta: float, rng: random.Random) -> list[frozenset]:
    """Random disjoint parts, each of size >= mu*n, leaving at most eta*n vertices uncovered."""
    lo = math.ceil(mu * n)
    t_max = max(1, int(1 / mu))
    covered = rng.randint(max(lo, math.ceil(n - eta * n)), n)
    t = rng.randint(1, min(t_max, covered // lo))
    # spread the spare vertices over the parts
    sizes = [lo] * t
    for _ in range(covered - lo * t):
        sizes[rng.randrange(t)] += 1
    verts = list(range(n))
    rng.shuffle(verts)
    parts, i = [], 0
    for sz in sizes:
        parts.append(frozenset(verts[i:i + sz]))
        i += sz
    return parts


def in_all_parts_families(families, e) -> bool:
    """e lies in the implied set of every family: inside a single part of each."""
    return all(any(set(e) <= p for p in fam) for fam in families)
