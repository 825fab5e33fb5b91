"""Constructive search for a homomorphic copy of Z_l^(k)- in a host with
large minimum codegree.

Pipeline stages, each of which can fail with a :class:`ZycleStageFailure`
naming the stage:

``precondition``  codegree and parameter checks
``back_cover``    greedy (k-2)-sets f_1..f_m whose back neighborhoods cover
                  all but fewer than C(eps n, k-1) of the (k-1)-sets
``link_partition``  for each f_i, a greedy partition witnessing that
                  N_i = union over w of N(f_i w)^(k-1) is a good set
``intersection``  tree reduction of the good families; e_1 is taken from a
                  final part and re-checked against every N_i
``chain``         e_2 .. e_{l-2}
``closing``       e_{l-1} and the closing pair (f_i, w)

The asymptotic estimates behind each stage are asserted at run time and a
violation raises :class:`ProofStepViolation`, which is a bug signal rather than
a desk-scale shortfall.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .hypergraph import Hypergraph, min_codegree

log = logging.getLogger(__name__)


class ZycleStageFailure(RuntimeError):
    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


class PreconditionError(ZycleStageFailure):
    def __init__(self, detail: str):
        super().__init__("precondition", detail)


class ThresholdNotMet(ZycleStageFailure):
    """The host is too small for the intersection to contain a (k-1)-set. Not a refutation."""

    def __init__(self, detail: str):
        super().__init__("intersection", detail)


class ProofStepViolation(AssertionError):
    pass


def real_binom(x: float, r: int) -> float:
    """C(x, r) for real x, as the falling factorial over r!."""
    out = 1.0
    for i in range(r):
        out *= (x - i)
    return out / math.factorial(r)


def intersection_eta(m: int) -> float:
    return 3.0 ** (-math.ceil(math.log2(m)) - 1) if m > 1 else 1 / 3


# good families


@dataclass(frozen=True)
class GoodFamily:
    parts: tuple[frozenset, ...]
    mu: float
    eta: float
    n: int

    @property
    def covered(self) -> frozenset:
        return frozenset().union(*self.parts)

    @property
    def uncovered(self) -> int:
        return self.n - len(self.covered)

    def shape_ok(self) -> bool:
        """Clauses (ii) and (iii) plus disjointness."""
        seen = 0
        for p in self.parts:
            seen += len(p)
            if len(p) < self.mu * self.n:
                return False
        if seen != len(self.covered):
            return False
        return self.uncovered <= self.eta * self.n


Membership = Callable[[tuple[int, ...]], bool]


def is_good(A, parts: Sequence[Iterable[int]], mu: float, eta: float, n: int, k: int,
            samples: int = 2000, seed: int = 0, max_exhaustive: int = 20000) -> bool:
    """Check the three good-set clauses for the (k-1)-set family A.

    A is either a materialised set of sorted (k-1)-tuples or a membership
    predicate. The containment clause is checked exhaustively when the parts
    span at most ``max_exhaustive`` subsets, otherwise on ``samples`` random
    subsets drawn part by part.
    """
    import random

    parts = [frozenset(p) for p in parts]
    if any(v < 0 or v >= n for p in parts for v in p):
        return False
    if not GoodFamily(tuple(parts), mu, eta, n).shape_ok():
        return False
    member = A.__contains__ if not callable(A) else A
    r = k - 1
    total = sum(math.comb(len(p), r) for p in parts)
    if total <= max_exhaustive:
        return all(member(s) for p in parts for s in combinations(sorted(p), r))
    rng = random.Random(seed)
    big = [sorted(p) for p in parts if len(p) >= r]
    weights = [math.comb(len(p), r) for p in big]
    for _ in range(samples):
        p = rng.choices(big, weights)[0]
        if not member(tuple(sorted(rng.sample(p, r)))):
            return False
    return True


def intersect_good(A: GoodFamily, B: GoodFamily, mu: float | None = None, eta: float | None = None) -> GoodFamily:
    """Parts A_i & B_j of size at least eta * mu^2 * |V|; (eta mu^2, 3 eta)-good."""
    if A.n != B.n:
        raise ValueError("families live on different vertex sets")
    mu = min(A.mu, B.mu) if mu is None else mu
    eta = max(A.eta, B.eta) if eta is None else eta
    mu2 = eta * mu * mu
    n = A.n
    out = []
    for a in A.parts:
        for b in B.parts:
            c = a & b
            # empty intersections pass the size test once mu2 * n < 1; drop them
            if c and len(c) >= mu2 * n:
                out.append(c)
    return GoodFamily(tuple(out), mu2, 3 * eta, n)


def intersect_many(families: Sequence[GoodFamily], mu: float | None = None, k: int | None = None) -> GoodFamily:
    """Pairwise tree reduction S_{2i-1} & S_{2i}; an odd family out is carried up.

    With ``k`` given, raises :class:`ThresholdNotMet` if no final part can
    hold a (k-1)-set.
    """
    if not families:
        raise ValueError("need at least one family")
    m = len(families)
    eta = intersection_eta(m)
    if mu is None:
        mu = min(f.mu for f in families)
    for f in families:
        if f.eta > eta + 1e-12:
            raise ValueError(f"family has eta {f.eta}, above {eta} for m = {m}")
    level = [GoodFamily(f.parts, mu, eta, f.n) for f in families]
    while len(level) > 1:
        nxt = [intersect_good(level[i], level[i + 1], mu, eta) for i in range(0, len(level) - 1, 2)]
        mu, eta = eta * mu * mu, 3 * eta
        if len(level) % 2:
            last = level[-1]
            nxt.append(GoodFamily(last.parts, mu, eta, last.n))
        level = nxt
    final = level[0]
    if not final.parts:
        raise ThresholdNotMet("final family has no parts")
    if k is not None and not any(len(p) >= k - 1 for p in final.parts):
        raise ThresholdNotMet(f"no final part has {k - 1} vertices (largest {max(len(p) for p in final.parts)})")
    return final


# bitset view of V^(k-1)


class _SubsetIndex:
    def __init__(self, G: Hypergraph):
        self.G = G
        r = G.k - 1
        self.subsets = list(combinations(range(G.n), r))
        self.pos = {s: i for i, s in enumerate(self.subsets)}
        rows: list[list[int]] = [[] for _ in range(G.n)]
        for e in G.edges:
            for i, v in enumerate(e):
                rows[v].append(self.pos[e[:i] + e[i + 1:]])
        self.link_bits = [self._pack(r_) for r_ in rows]
        self.full = (1 << len(self.subsets)) - 1

    def _pack(self, idx: list[int]) -> int:
        buf = bytearray((len(self.subsets) + 7) // 8)
        for i in idx:
            buf[i >> 3] |= 1 << (i & 7)
        return int.from_bytes(buf, "little")

    def back(self, f: Sequence[int]) -> int:
        bits = self.full
        for v in f:
            bits &= self.link_bits[v]
        return bits


@dataclass
class BackCover:
    fs: list[tuple[int, ...]]
    sizes: list[int]  # |S_0|, |S_1|, ..., |S_m|
    threshold: float
    c: float
    m_bound: int


def _check_codegree(G: Hypergraph, eps: float) -> int:
    if G.k < 3:
        raise PreconditionError(f"zycles need k >= 3, host is {G.k}-uniform")
    if not 0 < eps <= 1:
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    d = min_codegree(G)
    if d < eps * G.n:
        raise PreconditionError(f"min codegree {d} < eps*n = {eps * G.n:g}")
    return d


def greedy_back_cover(G: Hypergraph, eps: float, _index: _SubsetIndex | None = None, check: bool = True) -> BackCover:
    if check:
        _check_codegree(G, eps)
    k, n = G.k, G.n
    idx = _index or _SubsetIndex(G)
    c = eps ** (k - 2) / 2
    total = math.comb(n, k - 1)
    threshold = real_binom(eps * n, k - 1)
    m_bound = math.ceil(math.log(eps ** (k - 1) / 2) / math.log(1 - c)) if c < 1 else 1
    candidates = [(f, idx.back(f)) for f in combinations(range(n), k - 2)]
    S = idx.full
    sizes = [total]
    fs = []
    while sizes[-1] >= threshold:
        best, best_gain = None, -1
        for f, bits in candidates:
            g = (bits & S).bit_count()
            if g > best_gain:
                best, best_gain = (f, bits), g
        S &= ~best[1]
        fs.append(best[0])
        sizes.append(S.bit_count())
        a = len(fs)
        if not sizes[-1] < (1 - c) * sizes[-2]:
            raise ProofStepViolation(f"back cover step {a}: |S| went {sizes[-2]} -> {sizes[-1]}, not below factor {1 - c:g}")
        if not sizes[-1] < (1 - c) ** a * total:
            raise ProofStepViolation(f"back cover step {a}: |S| = {sizes[-1]} not below (1-c)^{a} C(n,k-1)")
    return BackCover(fs, sizes, threshold, c, m_bound)


@dataclass
class LinkPartition:
    f: tuple[int, ...]
    ws: list[int]
    family: GoodFamily
    sizes: list[int]  # |S_0| = n, |S_1|, ...


def greedy_link_partition(G: Hypergraph, f: Sequence[int], eps: float, eta: float, check: bool = True) -> LinkPartition:
    if check:
        _check_codegree(G, eps)
    n, k = G.n, G.k
    f = tuple(sorted(f))
    if len(f) != k - 2:
        raise ValueError(f"f must be a {k - 2}-set")
    c = eps / k
    fset = set(f)
    others = [w for w in range(n) if w not in fset]
    nbr = {w: G.neighbors_of(f + (w,)) for w in others}
    S = set(range(n))
    sizes = [n]
    ws, parts = [], []
    while not len(S) < eta * n:
        if S == fset:
            raise ZycleStageFailure(
                "link_partition",
                f"f = {list(f)}: uncovered set shrank to f itself ({len(f)} vertices) but eta*n = {eta * n:g}",
            )
        best = max(others, key=lambda w: (len(nbr[w] & S), -w))
        T = nbr[best] & S
        if not len(T) > c * len(S):
            raise ProofStepViolation(f"link partition for f = {list(f)}: |T| = {len(T)} not above c|S| = {c * len(S):g}")
        S -= T
        ws.append(best)
        parts.append(frozenset(T))
        sizes.append(len(S))
    fam = GoodFamily(tuple(parts), c * eta, eta, n)
    return LinkPartition(f, ws, fam, sizes)


def link_family_member(G: Hypergraph, f: Sequence[int]) -> Membership:
    """Predicate for N_f = union over w not in f of N(f w)^(k-1)."""
    f = tuple(sorted(f))
    nbrs = [G.neighbors_of(f + (w,)) for w in range(G.n) if w not in f]

    def member(e):
        return any(all(v in N for v in e) for N in nbrs)

    return member


# witnesses


@dataclass(frozen=True)
class ZycleWitness:
    chain: tuple[tuple[int, ...], ...]  # e_1 .. e_{l-1}
    f: tuple[int, ...]
    w: int

    @property
    def missing(self) -> tuple[int, ...]:
        return tuple(sorted(self.chain[-1] + (self.w,)))

    def vertex_map(self) -> list[int]:
        """Host image of each vertex of the canonical zycle_minus labelling."""
        out = [self.w] + list(self.f)
        for e in self.chain:
            out.extend(e)
        return out

    def to_json(self) -> dict:
        return {"chain": [list(e) for e in self.chain], "f": list(self.f), "w": self.w, "missing": list(self.missing)}

    @classmethod
    def from_json(cls, data: dict) -> "ZycleWitness":
        w = cls(tuple(tuple(int(x) for x in e) for e in data["chain"]), tuple(int(x) for x in data["f"]), int(data["w"]))
        if "missing" in data and list(data["missing"]) != list(w.missing):
            raise ValueError("missing edge does not match chain and w")
        return w


def verify_zycle_witness(G: Hypergraph, l: int, witness: ZycleWitness) -> bool:
    """Expand Z_l^(k) from scratch, push it through the witness and check every
    edge except the one made of the last group and the closing vertex w."""
    k = G.k
    if l < 3 or len(witness.chain) != l - 1 or len(witness.f) != k - 2:
        return False
    if any(len(e) != k - 1 or len(set(e)) != k - 1 for e in witness.chain):
        return False
    closing = (witness.w,) + tuple(witness.f)
    if len(set(closing)) != k - 1:
        return False
    groups = [closing] + [tuple(e) for e in witness.chain]
    if any(not 0 <= v < G.n for g in groups for v in g):
        return False
    last = l - 1
    for i in range(l):
        nxt = (i + 1) % l
        for j, v in enumerate(groups[nxt]):
            if i == last and nxt == 0 and j == 0:
                continue
            image = groups[i] + (v,)
            if len(set(image)) != k or not G.has_edge(image):
                return False
    return True


@dataclass
class PipelineRun:
    witness: ZycleWitness
    back_cover: BackCover
    partitions: list[LinkPartition]
    eta: float
    final: GoodFamily
    goodness: list[bool] = field(default_factory=list)


def run_pipeline(G: Hypergraph, l: int, eps: float) -> PipelineRun:
    if l < 3:
        raise PreconditionError(f"need l >= 3, got {l}")
    _check_codegree(G, eps)
    k, n = G.k, G.n
    idx = _SubsetIndex(G)
    cover = greedy_back_cover(G, eps, idx, check=False)
    m = len(cover.fs)
    eta = intersection_eta(m)
    log.info("back cover: m = %d, sizes %s, eta = %g", m, cover.sizes, eta)

    parts = [greedy_link_partition(G, f, eps, eta, check=False) for f in cover.fs]
    members = [link_family_member(G, f) for f in cover.fs]
    goodness = []
    for lp, mem in zip(parts, members):
        fam = lp.family
        ok = is_good(mem, fam.parts, fam.mu, fam.eta, n, k)
        if not ok:
            raise ProofStepViolation(f"N_f for f = {list(lp.f)} is not ({fam.mu:g}, {fam.eta:g})-good")
        goodness.append(ok)

    final = intersect_many([lp.family for lp in parts], k=k)
    e1 = None
    for part in final.parts:
        for s in combinations(sorted(part), k - 1):
            if all(mem(s) for mem in members):
                e1 = s
                break
        if e1 is not None:
            break
    if e1 is None:
        raise ThresholdNotMet("no (k-1)-subset of a final part lies in every N_i")

    chain = [e1]
    while len(chain) < l - 2:
        N = sorted(G.neighbors_of(chain[-1]))
        if len(N) < k - 1:
            raise ZycleStageFailure("chain", f"N({list(chain[-1])}) has only {len(N)} vertices")
        chain.append(tuple(N[: k - 1]))

    back_bits = [idx.back(f) for f in cover.fs]
    closing = None
    for s in combinations(sorted(G.neighbors_of(chain[-1])), k - 1):
        bit = 1 << idx.pos[s]
        for i, bits in enumerate(back_bits):
            if bits & bit:
                closing = (s, i)
                break
        if closing is not None:
            break
    if closing is None:
        raise ZycleStageFailure("closing", f"no (k-1)-subset of N(e_{l - 2}) is back-covered by any f_i")
    last, i = closing
    chain.append(last)
    f = cover.fs[i]
    w = next((w for w in range(n) if w not in f and set(e1) <= G.neighbors_of(f + (w,))), None)
    if w is None:
        raise ZycleStageFailure("closing", f"no w with f_{i + 1} w extending e_1")
    witness = ZycleWitness(tuple(chain), tuple(f), w)
    if not verify_zycle_witness(G, l, witness):
        raise ZycleStageFailure("closing", "assembled witness failed validation")
    return PipelineRun(witness, cover, parts, eta, final, goodness)


def find_zycle_minus(G: Hypergraph, l: int, eps: float) -> ZycleWitness:
    return run_pipeline(G, l, eps).witness
