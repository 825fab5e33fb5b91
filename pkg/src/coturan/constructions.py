"""Residue blow-up constructions that avoid C_l^(k)- while keeping codegree linear.

``G_{m,N}`` has m classes of N vertices; vertex ``v`` sits in class
``v // N`` and a k-set is an edge iff its class labels sum to 1 mod m.
For gcd(k, l) = d > 1 this graph with m = k/d already has no copy of
C_l^(k)-. For gcd(k, l) = 1 the modified graph ``G^t_{m,N}`` replaces each
form ``a^t b^s`` (ta + sb = 1) by ``a^(t-1) b^s c`` and ``a^t b^(s-1) d``,
with (c, d) found by a brute-force scan over Z/mZ.

Large instances are never materialised; the engine searches the class-level
quotient instead, where a copy is a class assignment with each class used at
most N times.
"""

from __future__ import annotations

import logging
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Sequence

from . import embedding
from .embedding import ClassLevelHost, EmbeddingWitness, SearchTimeout
from .families import tight_cycle_minus
from .hypergraph import Hypergraph

log = logging.getLogger(__name__)

MATERIALISE_MAX_VERTICES = 400
MATERIALISE_MAX_KSETS = 10**7


class InvalidParameters(ValueError):
    pass


class ConstructionFailure(RuntimeError):
    """No (c, d) exists for some (a, b). This would contradict the existence argument."""


class WalkPreconditionError(ValueError):
    """The walk handed to :func:`claim3_check` is not a tight walk starting in form (I)."""


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def claim1_params(k: int, l: int) -> tuple[int, int, tuple[int, ...], tuple[int, ...]]:
    """Split Z/lZ into the two arcs forced by f(v_i) = f(v_{i+k}).

    Residues are placed around a circle in the order k, 2k, ..., lk. X is
    the arc after -1 up to and including 0, Y is the rest. Returns
    ``(t, s, X, Y)`` where t and s count how many of 1..k land in X and Y.
    """
    if k < 3 or l <= k:
        raise InvalidParameters(f"need k >= 3 and l > k (k={k}, l={l})")
    if math.gcd(k, l) != 1:
        raise InvalidParameters(f"gcd(k, l) = {math.gcd(k, l)} != 1")
    if l % k in (0, 1, k - 1):
        raise InvalidParameters(f"l = {l} is 0 or +-1 mod k = {k}")
    k_inv = pow(k, -1, l)
    # circle position of residue x is the j in 1..l with jk = x (mod l)
    position = lambda x: (x * k_inv) % l or l
    p_minus1 = position(l - 1)
    X = tuple(sorted(x for x in range(l) if position(x) > p_minus1))
    Y = tuple(sorted(x for x in range(l) if position(x) <= p_minus1))
    first = [i % l for i in range(1, k + 1)]
    t = sum(1 for x in first if x in X)
    s = k - t
    return t, s, X, Y


def dagger_pairs(k: int, l: int) -> list[tuple[int, int]]:
    """Label pairs (j, j+k mod l) forced into the same class in any copy of
    C_l^(k)- in G_{m,N}. Label j is the (j+1)-th cycle vertex, so the two
    excluded starts are the labels l-2 and l-1."""
    return [(j, (j + k) % l) for j in range(l) if j not in (l - 2, l - 1)]


def residue_pattern(k: int, l: int, a: int, b: int) -> tuple[int, ...]:
    """Class of each canonical label when X gets class a and Y gets class b."""
    _, _, X, _ = claim1_params(k, l)
    return tuple(a if (j + 1) % l in X else b for j in range(l))


def choose_m(k: int) -> int:
    """Smallest m = kp with p prime, p > k and m >= 52."""
    p = k + 1
    while not (_is_prime(p) and k * p >= 52):
        p += 1
    return k * p


@dataclass(frozen=True)
class SchemeEntry:
    c: int
    d: int
    a1: int  # a'
    b1: int  # b'
    a2: int  # a''
    b2: int  # b''


def primed_values(t: int, s: int, m: int, a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    a1 = (1 - ((t - 2) * a + s * b + c)) % m
    b1 = (1 - ((t - 1) * a + (s - 1) * b + c)) % m
    a2 = (1 - ((t - 1) * a + (s - 1) * b + d)) % m
    b2 = (1 - (t * a + (s - 2) * b + d)) % m
    return a1, b1, a2, b2


def _distinct(vals) -> bool:
    return len(set(vals)) == len(vals)


def _pairs_avoid_one(t, s, m, names, vals, skip) -> bool:
    """tx + sy != 1 over both orientations of every pair, except the skipped pairs."""
    for (n1, x), (n2, y) in combinations(zip(names, vals), 2):
        if frozenset((n1, n2)) in skip:
            continue
        if (t * x + s * y) % m == 1 or (t * y + s * x) % m == 1:
            return False
    return True


def _cond_c(t, s, m, a, b, c) -> tuple[bool, bool]:
    a1 = (1 - ((t - 2) * a + s * b + c)) % m
    b1 = (1 - ((t - 1) * a + (s - 1) * b + c)) % m
    vals = (a, b, c, a1, b1)
    names = ("a", "b", "c", "a'", "b'")
    skip = {frozenset(("a'", "b'")), frozenset(("a", "b"))}
    ok_i = _distinct(vals)
    ok_iii = _pairs_avoid_one(t, s, m, names, vals, skip) and (t * b + s * a) % m != 1
    return ok_i, ok_iii


def _cond_d(t, s, m, a, b, d) -> tuple[bool, bool]:
    a2 = (1 - ((t - 1) * a + (s - 1) * b + d)) % m
    b2 = (1 - (t * a + (s - 2) * b + d)) % m
    vals = (a, b, d, a2, b2)
    names = ("a", "b", "d", "a''", "b''")
    skip = {frozenset(("a''", "b''")), frozenset(("a", "b"))}
    ok_ii = _distinct(vals)
    ok_iv = _pairs_avoid_one(t, s, m, names, vals, skip) and (t * b + s * a) % m != 1
    return ok_ii, ok_iv


def check_congruences(t: int, s: int, m: int, a: int, b: int, c: int, d: int) -> dict[str, bool]:
    """Evaluate conditions (i)-(v) for one (a, b, c, d) literally."""
    ok_i, ok_iii = _cond_c(t, s, m, a, b, c)
    ok_ii, ok_iv = _cond_d(t, s, m, a, b, d)
    a1, b1, a2, b2 = primed_values(t, s, m, a, b, c, d)
    ok_v = c != d and c != a2 and d != b1
    return {"i": ok_i, "ii": ok_ii, "iii": ok_iii, "iv": ok_iv, "v": ok_v}


def solutions_ta_sb(t: int, s: int, m: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(m) for b in range(m) if (t * a + s * b) % m == 1]


def claim2_solve(k: int, t: int, s: int, m: int) -> dict[tuple[int, int], SchemeEntry]:
    """For each (a, b) with ta + sb = 1 take the smallest valid c, then the smallest valid d."""
    if t + s != k or t < 2 or s < 2:
        raise InvalidParameters(f"need t, s >= 2 and t + s = k (k={k}, t={t}, s={s})")
    table = {}
    for a, b in solutions_ta_sb(t, s, m):
        c = next((c for c in range(m) if all(_cond_c(t, s, m, a, b, c))), None)
        if c is None:
            raise ConstructionFailure(f"no c for (a, b) = ({a}, {b}) mod {m}")
        d = None
        for cand in range(m):
            if not all(_cond_d(t, s, m, a, b, cand)):
                continue
            _, b1, a2, _ = primed_values(t, s, m, a, b, c, cand)
            if cand != c and c != a2 and cand != b1:
                d = cand
                break
        if d is None:
            raise ConstructionFailure(f"no d for (a, b) = ({a}, {b}), c = {c} mod {m}")
        a1, b1, a2, b2 = primed_values(t, s, m, a, b, c, d)
        table[(a, b)] = SchemeEntry(c, d, a1, b1, a2, b2)
    return table


def exclusion_counts(t: int, s: int, m: int, a: int, b: int, c: int) -> dict[str, int]:
    """How many values of c (resp. d, given c) each condition rules out."""
    counts = Counter()
    for x in range(m):
        ok_i, ok_iii = _cond_c(t, s, m, a, b, x)
        ok_ii, ok_iv = _cond_d(t, s, m, a, b, x)
        _, b1, a2, _ = primed_values(t, s, m, a, b, c, x)
        counts["i"] += not ok_i
        counts["iii"] += not ok_iii
        counts["ii"] += not ok_ii
        counts["iv"] += not ok_iv
        counts["v"] += not (x != c and c != a2 and x != b1)
    return dict(counts)


def scan_moduli(k: int, t: int, s: int, ms) -> dict[int, bool]:
    """Experiment: which moduli admit a complete (c, d) table. Nothing relies on it."""
    out = {}
    for m in ms:
        try:
            claim2_solve(k, t, s, m)
            out[m] = True
        except ConstructionFailure:
            out[m] = False
    return out


@dataclass(frozen=True)
class ResidueScheme:
    k: int
    l: int
    m: int
    t: int
    s: int
    X: tuple[int, ...]
    Y: tuple[int, ...]
    table: dict

    @classmethod
    def for_cycle(cls, k: int, l: int, m: int | None = None) -> "ResidueScheme":
        t, s, X, Y = claim1_params(k, l)
        m = choose_m(k) if m is None else m
        return cls(k, l, m, t, s, X, Y, claim2_solve(k, t, s, m))

    def entries(self) -> list[tuple[int, int]]:
        return sorted(self.table)

    def to_json(self) -> dict:
        return {
            "k": self.k, "l": self.l, "m": self.m, "t": self.t, "s": self.s,
            "X": list(self.X), "Y": list(self.Y),
            "table": [
                {"a": a, "b": b, "c": e.c, "d": e.d, "a'": e.a1, "b'": e.b1, "a''": e.a2, "b''": e.b2}
                for (a, b), e in sorted(self.table.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ResidueScheme":
        table = {
            (r["a"], r["b"]): SchemeEntry(r["c"], r["d"], r["a'"], r["b'"], r["a''"], r["b''"])
            for r in data["table"]
        }
        return cls(data["k"], data["l"], data["m"], data["t"], data["s"], tuple(data["X"]), tuple(data["Y"]), table)


def _msig(classes) -> tuple[int, ...]:
    return tuple(sorted(classes))


@dataclass(eq=False)
class BlowupGraph:
    """G_{m,N} (``scheme is None``) or G^t_{m,N}; vertex v has class v // N."""

    m: int
    N: int
    k: int
    scheme: ResidueScheme | None = None
    removed: frozenset = field(init=False, repr=False)
    added: frozenset = field(init=False, repr=False)
    _completions: dict = field(init=False, repr=False)
    _nbr_cache: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        removed, added = set(), set()
        if self.scheme is not None:
            sc = self.scheme
            if (sc.m, sc.k) != (self.m, self.k):
                raise InvalidParameters("scheme does not match (m, k)")
            for (a, b), e in sc.table.items():
                removed.add(_msig([a] * sc.t + [b] * sc.s))
                added.add(_msig([a] * (sc.t - 1) + [b] * sc.s + [e.c]))
                added.add(_msig([a] * sc.t + [b] * (sc.s - 1) + [e.d]))
        self.removed, self.added = frozenset(removed), frozenset(added)
        comp: dict[tuple, set] = {}
        for sig in self.added:
            for i, x in enumerate(sig):
                comp.setdefault(sig[:i] + sig[i + 1:], set()).add(x)
        self._completions = comp

    @property
    def n(self) -> int:
        return self.m * self.N

    @property
    def modified(self) -> bool:
        return self.scheme is not None

    def class_of(self, v: int) -> int:
        return v // self.N

    def class_vertices(self, c: int) -> range:
        return range(c * self.N, (c + 1) * self.N)

    def is_class_edge(self, classes: Sequence[int]) -> bool:
        if len(classes) != self.k:
            return False
        sig = _msig(classes)
        if max(Counter(sig).values()) > self.N:
            return False
        if sig in self.added:
            return True
        return sum(sig) % self.m == 1 and sig not in self.removed

    def has_edge(self, vertices: Sequence[int]) -> bool:
        if len(set(vertices)) != self.k or any(not 0 <= v < self.n for v in vertices):
            return False
        return self.is_class_edge([v // self.N for v in vertices])

    def class_neighbors(self, classes: Sequence[int]) -> list[int]:
        sig = tuple(sorted(classes))
        hit = self._nbr_cache.get(sig)
        if hit is not None:
            return hit
        out = set(self._completions.get(sig, ()))
        r = (1 - sum(sig)) % self.m
        if _msig(sig + (r,)) not in self.removed:
            out.add(r)
        mult = Counter(sig)
        res = sorted(x for x in out if mult[x] < self.N)
        self._nbr_cache[sig] = res
        return res

    def class_degree(self, classes: Sequence[int]) -> int:
        """Degree of any vertex set whose classes are ``classes``."""
        mult = Counter(classes)
        return sum(self.N - mult[x] for x in self.class_neighbors(classes))

    def min_codegree_class_level(self) -> int:
        best = None
        for sig in combinations_with_replacement(range(self.m), self.k - 1):
            if max(Counter(sig).values()) > self.N:
                continue
            d = self.class_degree(sig)
            if best is None or d < best:
                best = d
        return best

    def materialisable(self) -> bool:
        return self.n <= MATERIALISE_MAX_VERTICES and math.comb(self.n, self.k) <= MATERIALISE_MAX_KSETS

    def to_hypergraph(self) -> Hypergraph:
        if not self.materialisable():
            raise InvalidParameters(f"{self.n} vertices is past the materialisation threshold")
        edges = set()
        for sig in combinations_with_replacement(range(self.m), self.k):
            if not self.is_class_edge(sig):
                continue
            mult = Counter(sig)
            choices = [combinations(self.class_vertices(c), r) for c, r in sorted(mult.items())]
            for parts in product(*choices):
                edges.add(tuple(sorted(v for part in parts for v in part)))
        return Hypergraph(self.k, self.n, frozenset(edges))

    def class_host(self) -> "BlowupClassHost":
        return BlowupClassHost(self)

    def lift(self, class_map: Sequence[int]) -> tuple[int, ...]:
        """Vertex-level injective map from a class map with usage <= N."""
        nxt = Counter()
        out = []
        for c in class_map:
            if nxt[c] >= self.N:
                raise InvalidParameters(f"class {c} used more than N = {self.N} times")
            out.append(c * self.N + nxt[c])
            nxt[c] += 1
        return tuple(out)


class BlowupClassHost(ClassLevelHost):
    def __init__(self, graph: BlowupGraph):
        self.graph = graph
        self.k = graph.k
        self.n = graph.m
        self.capacity = graph.N
        self.class_neighbors = graph.class_neighbors
        self.is_class_edge = graph.is_class_edge


def build_plain(m: int, N: int, k: int) -> BlowupGraph:
    if m < 2 or N < 1 or k < 3:
        raise InvalidParameters(f"need m >= 2, N >= 1, k >= 3 (m={m}, N={N}, k={k})")
    return BlowupGraph(m, N, k)


def build_modified(scheme: ResidueScheme, N: int) -> BlowupGraph:
    if N < scheme.k:
        raise InvalidParameters(f"need N >= k (N={N}, k={scheme.k})")
    return BlowupGraph(scheme.m, N, scheme.k, scheme)


def classify_form(e: Sequence[int], f) -> dict[int, int]:
    """Class multiplicities of a vertex set; ``f`` maps vertex -> class (callable or sequence)."""
    get = f if callable(f) else f.__getitem__
    return dict(sorted(Counter(get(v) for v in e).items()))


def is_removed_form(sig: dict[int, int], scheme: ResidueScheme) -> bool:
    if len(sig) != 2:
        return False
    for a, b in permutations_of_two(sig):
        if sig[a] == scheme.t and sig[b] == scheme.s and (a, b) in scheme.table:
            return True
    return False


def permutations_of_two(sig: dict[int, int]):
    x, y = sorted(sig)
    return ((x, y), (y, x))


def cycle_forms(scheme: ResidueScheme, a: int, b: int) -> dict[str, dict[int, int]]:
    """Forms (I), (II), (III) for one table entry."""
    e = scheme.table[(a, b)]
    t, s = scheme.t, scheme.s

    def form(pairs):
        out = Counter()
        for x, r in pairs:
            out[x] += r
        return {x: r for x, r in sorted(out.items()) if r}

    return {
        "I": form([(a, t - 1), (b, s), (e.c, 1)]),
        "II": form([(a, t - 2), (b, s), (e.c, 1), (e.a1, 1)]),
        "III": form([(a, t - 1), (b, s - 1), (e.c, 1), (e.b1, 1)]),
    }


def claim3_check(graph: BlowupGraph, a: int, b: int, classes: Sequence[int]) -> tuple[bool, list[str | None]]:
    """Track the form of every k-window of a class-level tight walk.

    Raises :class:`WalkPreconditionError` if a window is not an edge of the
    modified graph or the first window is not of form (I). Otherwise returns
    ``(all windows in forms I/II/III, per-window form names)``, with ``None``
    marking a window outside the three forms.
    """
    scheme = graph.scheme
    if scheme is None or (a, b) not in scheme.table:
        raise WalkPreconditionError("walk check needs a modified graph and one of its table entries")
    k = graph.k
    if len(classes) < k:
        raise WalkPreconditionError(f"walk has fewer than k = {k} vertices")
    forms = cycle_forms(scheme, a, b)
    trace = []
    for i in range(len(classes) - k + 1):
        window = classes[i:i + k]
        if not graph.is_class_edge(window):
            raise WalkPreconditionError(f"window {i} ({list(window)}) is not an edge")
        sig = classify_form(window, lambda x: x)
        name = next((nm for nm, fm in forms.items() if fm == sig), None)
        if i == 0 and name != "I":
            raise WalkPreconditionError(f"first window {list(window)} is not of form (I)")
        trace.append(name)
    return all(nm is not None for nm in trace), trace


def frak_f(scheme: ResidueScheme, a: int, b: int) -> list[int]:
    """Four-colouring of Z/mZ: {a, a'} -> 1, {b, b'} -> 2, c -> 3, else 4."""
    e = scheme.table[(a, b)]
    out = []
    for x in range(scheme.m):
        if x in (a, e.a1):
            out.append(1)
        elif x in (b, e.b1):
            out.append(2)
        elif x == e.c:
            out.append(3)
        else:
            out.append(4)
    return out


def random_form1_walk(graph: BlowupGraph, rng: random.Random, max_len: int = 30) -> tuple[tuple[int, int], list[int]]:
    """A random class-level tight walk whose first window has form (I)."""
    scheme = graph.scheme
    a, b = rng.choice(scheme.entries())
    e = scheme.table[(a, b)]
    walk = [a] * (scheme.t - 1) + [b] * scheme.s + [e.c]
    rng.shuffle(walk)
    target = rng.randint(graph.k, max_len)
    while len(walk) < target:
        nbrs = graph.class_neighbors(walk[-(graph.k - 1):])
        if not nbrs:
            break
        walk.append(rng.choice(nbrs))
    return (a, b), walk


@dataclass
class FreenessResult:
    verdict: str  # FREE, COPY-FOUND or INCONCLUSIVE
    level: str  # vertex or class
    witness: EmbeddingWitness | None = None
    class_map: tuple[int, ...] | None = None
    elapsed: float = 0.0


def find_cycle_copy(graph: BlowupGraph, l: int, level: str = "auto", jobs: int = 1, budget_secs: float | None = None):
    """Search for C_l^(k)- in ``graph``; returns (level, vertex witness, class map)."""
    pattern = tight_cycle_minus(graph.k, l)
    if level == "auto":
        level = "vertex" if graph.materialisable() else "class"
    if level == "vertex":
        w = embedding.find(pattern, graph.to_hypergraph(), "inj", jobs=jobs, budget_secs=budget_secs)
        if w is None:
            return level, None, None
        return level, w, tuple(v // graph.N for v in w.map)
    w = embedding.find(pattern, graph.class_host(), "inj", jobs=jobs, budget_secs=budget_secs)
    if w is None:
        return level, None, None
    return level, EmbeddingWitness("inj", graph.lift(w.map)), w.map


def verify_freeness(graph: BlowupGraph, l: int, level: str = "auto", jobs: int = 1,
                    budget_secs: float | None = None) -> FreenessResult:
    start = time.monotonic()
    if level == "auto":
        level = "vertex" if graph.materialisable() else "class"
    try:
        lvl, w, cmap = find_cycle_copy(graph, l, level, jobs, budget_secs)
    except SearchTimeout:
        return FreenessResult("INCONCLUSIVE", level, elapsed=time.monotonic() - start)
    elapsed = time.monotonic() - start
    if w is None:
        return FreenessResult("FREE", lvl, elapsed=elapsed)
    if not embedding.verify(tight_cycle_minus(graph.k, l), graph, w):
        raise AssertionError("engine returned a witness that does not verify")
    log.warning("copy of C_%d^(%d)- found in blow-up (m=%d, N=%d): %s", l, graph.k, graph.m, graph.N, w.map)
    return FreenessResult("COPY-FOUND", lvl, w, cmap, elapsed)


def construction_for(k: int, l: int, N: int, modified: bool | None = None, m: int | None = None) -> BlowupGraph:
    """The graph that should be C_l^(k)--free: plain G_{k/d, N} when d = gcd(k, l) > 1,
    else G^t_{m, N} with m from :func:`choose_m`."""
    d = math.gcd(k, l)
    if l % k in (0, 1, k - 1):
        raise InvalidParameters(f"l = {l} is 0 or +-1 mod k = {k}; no construction applies")
    if d > 1 and not modified:
        return build_plain(k // d, N, k)
    scheme = ResidueScheme.for_cycle(k, l, m)
    if modified is False:
        return build_plain(scheme.m, N, k)
    return build_modified(scheme, N)
