"""The eleven acceptance checks, shared by ``coturan accept`` and the test suite.

Each check returns a :class:`CriterionResult`; it passes only if its
condition holds and it finished inside its time limit.
"""

from __future__ import annotations

import math
import random
import time
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Callable

from . import constructions as con
from . import embedding, families, oracles, sufficient, zycle
from .hypergraph import Hypergraph, OrderedHypergraph, min_codegree, random_hypergraph


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    limit: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.2f}s / {self.limit:g}s)"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed, "detail": self.detail,
                "limit_secs": self.limit}


class _Fail(Exception):
    pass


def _need(cond, msg):
    if not cond:
        raise _Fail(msg)


def c1_generators(ctx) -> str:
    for k in range(3, 7):
        for l in range(k + 1, 21):
            _need(families.tight_cycle(k, l).num_edges() == l, f"|E(C_{l}^({k}))| != {l}")
            _need(families.tight_cycle_minus(k, l).num_edges() == l - 1, f"|E(C_{l}^({k})-)| != {l - 1}")
        for l in range(3, 11):
            Z = families.zycle(k, l)
            _need(Z.n == Z.num_edges() == l * (k - 1), f"zycle Z_{l}^({k}) has {Z.n} vertices, {Z.num_edges()} edges")
    return "all tight cycles k=3..6, l<=20 and zycles l<=10 have the right counts"


def c2_codegree(ctx) -> str:
    for k, m, N in [(3, 6, 4), (4, 2, 5)]:
        g = con.build_plain(m, N, k)
        H = g.to_hypergraph()
        _need(H.edges == oracles.plain_blowup_edges(m, N, k), f"G_{{{m},{N}}} edges differ from brute force")
        d = min_codegree(H)
        _need(d >= N - k + 1, f"min codegree {d} < N-k+1 at (k,m,N)=({k},{m},{N})")
    g = con.build_plain(55, 2, 5)
    d = g.min_codegree_class_level()
    brute = None
    for sig in combinations_with_replacement(range(55), 4):
        cnt, tot = Counter(sig), sum(sig)
        if max(cnt.values()) > 2:
            continue
        deg = sum(2 - cnt[x] for x in range(55) if (tot + x) % 55 == 1 and cnt[x] < 2)
        brute = deg if brute is None else min(brute, deg)
    _need(d == brute, f"class-level min codegree {d} differs from direct count {brute}")
    _need(d >= 2 - 5 + 1, f"class-level min codegree {d} < N-k+1")
    H = con.build_plain(4, 3, 3).to_hypergraph()
    for e in combinations(range(12), 2):
        _need(len(H.neighbors_of(e)) == oracles.plain_degree_formula(4, 3, e), f"degree formula fails at {e}")
    return f"bounds hold at (3,6,4), (4,2,5), (5,55,2 class level, min {d}); degree formula exact at (3,4,3)"


def c3_residue_params(ctx) -> str:
    _need(con.claim1_params(5, 7)[:2] == (2, 3), f"claim1_params(5,7) = {con.claim1_params(5, 7)[:2]}")
    count = 0
    for k in range(3, 10):
        for l in range(k + 1, 31):
            r = l % k
            if math.gcd(k, l) != 1 or not 2 <= r <= k - 2:
                continue
            t, s, X, Y = con.claim1_params(k, l)
            _need(t + s == k and t >= 2 and s >= 2, f"(k,l)=({k},{l}) gives t={t}, s={s}")
            _need((t, s, X, Y) == oracles.propagate_dagger(k, l), f"(k,l)=({k},{l}) disagrees with propagation")
            count += 1
    return f"(t,s)=(2,3) at (5,7); {count} pairs agree with the propagation oracle"


def c4_congruences(ctx) -> str:
    k, m, t, s = 5, con.choose_m(5), 2, 3
    _need(m == 55, f"choose_m(5) = {m}")
    table = con.claim2_solve(k, t, s, m)
    sols = con.solutions_ta_sb(t, s, m)
    _need(sorted(table) == sorted(sols), "table does not cover every solution of 2a+3b=1")
    for (a, b), e in table.items():
        res = con.check_congruences(t, s, m, a, b, e.c, e.d)
        _need(all(res.values()), f"(a,b)=({a},{b}) fails {[k_ for k_, v in res.items() if not v]}")
        _need(a != b, f"a == b at ({a},{b})")
        _need((t * b + s * a) % m != 1, f"tb+sa = 1 at ({a},{b})")
        _need((e.a1, e.b1, e.a2, e.b2) == con.primed_values(t, s, m, a, b, e.c, e.d), "primed values drift")
    return f"{len(table)} entries, all satisfy (i)-(v), a != b and tb+sa != 1"


def c5_gcd_branch(ctx) -> str:
    out = []
    for N in (4, 6):
        g = con.construction_for(4, 6, N)
        _need((g.m, g.modified) == (2, False), "gcd branch should use plain G_{2,N}")
        r = con.verify_freeness(g, 6, level="vertex", jobs=ctx["jobs"], budget_secs=ctx["budget"])
        _need(r.verdict == "FREE", f"G_{{2,{N}}}: {r.verdict}")
        out.append(f"G_{{2,{N}}} FREE")
    return ", ".join(out)


def c6_modified(ctx) -> str:
    k, l, N = 5, 7, 5
    plain = con.construction_for(k, l, N, modified=False)
    pos = con.verify_freeness(plain, l, level="class", jobs=ctx["jobs"], budget_secs=ctx["budget"])
    _need(pos.verdict == "COPY-FOUND", f"positive control: {pos.verdict}")
    t, s, X, Y = con.claim1_params(k, l)
    cm = tuple(pos.class_map)
    # label j is the (j+1)-th cycle vertex
    a, b = cm[(X[0] - 1) % l], cm[(Y[0] - 1) % l]
    _need(cm == con.residue_pattern(k, l, a, b), f"copy {cm} does not follow the X/Y pattern")
    _need((t * a + s * b) % plain.m == 1, f"(a,b)=({a},{b}) does not solve ta+sb=1")
    for i, j in con.dagger_pairs(k, l):
        _need(cm[i] == cm[j], f"copy breaks the forced equality at labels {i}, {j}")
    mod = con.construction_for(k, l, N)
    r = con.verify_freeness(mod, l, level="class", jobs=ctx["jobs"], budget_secs=ctx["budget"])
    _need(r.verdict == "FREE", f"G^t_{{55,5}}: {r.verdict} after {r.elapsed:.0f}s")
    return f"G^t_{{55,5}} FREE ({r.elapsed:.0f}s); plain G_{{55,5}} copy {cm} with (a,b)=({a},{b})"


def c7_form_walks(ctx) -> str:
    graph = con.construction_for(5, 7, 5)
    rng = random.Random(ctx["seed"])
    seen = Counter()
    for i in range(10000):
        (a, b), walk = con.random_form1_walk(graph, rng, 30)
        ok, trace = con.claim3_check(graph, a, b, walk)
        if not ok:
            raise _Fail(f"walk {i} leaves forms I-III: classes {walk}, trace {trace}")
        seen.update(trace)
    return "10000 walks stay in forms I/II/III (window counts " + ", ".join(f"{k}={v}" for k, v in sorted(seen.items())) + ")"


def c8_theorem2(ctx) -> str:
    for k, l in [(3, 5), (3, 7), (4, 7), (4, 9), (5, 9)]:
        F = families.tight_cycle_minus(k, l)
        w = sufficient.check(F)
        _need(w is not None and sufficient.validate(F, w), f"check(C_{l}^({k})-) gave no valid witness")
    for k in (3, 4, 5):
        for variant in ("2k-1", "2k+1"):
            F, w = sufficient.paper_witness(k, variant)
            _need(sufficient.validate(F, w), f"explicit witness k={k} {variant} fails validation")
    F = families.tight_cycle(3, 7)
    _need(sufficient.exact_transversals(F) == [], "C_7^(3) has an exact transversal")
    _need(sufficient.check(F) is None, "check(C_7^(3)) returned a witness")
    return "5 YES with valid witnesses, 6 explicit witnesses validate, C_7^(3) is NO"


def c9_good_sets(ctx) -> str:
    rng = random.Random(ctx["seed"])
    n, k = 2000, 3
    for i in range(200):
        mu = rng.choice([0.1, 0.2, 0.25, 1 / 3])
        eta = rng.choice([1 / 27, 1 / 9, 0.05])
        A = oracles.random_good_family(n, mu, eta, rng)
        B = oracles.random_good_family(n, mu, eta, rng)
        fa, fb = zycle.GoodFamily(tuple(A), mu, eta, n), zycle.GoodFamily(tuple(B), mu, eta, n)
        _need(fa.shape_ok() and fb.shape_ok(), f"pair {i}: generator produced a bad family")
        _need(len(A) <= 1 / mu and len(B) <= 1 / mu, f"pair {i}: input has more than 1/mu parts")
        out = zycle.intersect_good(fa, fb)
        member = lambda e, A=A, B=B: oracles.in_all_parts_families([A, B], e)
        _need(zycle.is_good(member, out.parts, eta * mu * mu, 3 * eta, n, k, samples=300, seed=i),
              f"pair {i}: intersection not ({eta * mu * mu:g}, {3 * eta:g})-good")
        _need(len(out.parts) <= 1 / out.mu + 1e-9, f"pair {i}: output has more than 1/mu' parts")
    eta = zycle.intersection_eta(4)
    _need(abs(eta - 1 / 27) < 1e-15, f"halving eta for m=4 is {eta}")
    for j in range(20):
        fams = [oracles.random_good_family(n, 0.2, eta, rng) for _ in range(4)]
        final = zycle.intersect_many([zycle.GoodFamily(tuple(f), 0.2, eta, n) for f in fams], k=k)
        _need(final.parts, f"trial {j}: empty final family")
        for _ in range(200):
            p = rng.choice([p for p in final.parts if len(p) >= k - 1])
            e = tuple(sorted(rng.sample(sorted(p), k - 1)))
            _need(oracles.in_all_parts_families(fams, e), f"trial {j}: {e} missing from an input")
    return "200 intersections good with (eta mu^2, 3 eta); 20 four-way reductions nonempty and sound"


ZYCLE_HOSTS = [(3, 60, 0.8), (4, 50, 0.9)]
ZYCLE_EPS = 0.3


def c10_zycle(ctx) -> str:
    fails, notes = [], []
    for k, n, p in ZYCLE_HOSTS:
        G = random_hypergraph(k, n, p, ctx["seed"])
        d = min_codegree(G)
        _need(d >= ZYCLE_EPS * n, f"host (k={k}, n={n}) has min codegree {d} < {ZYCLE_EPS}n")
        for l in (3, 4, 5):
            try:
                run = zycle.run_pipeline(G, l, ZYCLE_EPS)
            except zycle.ProofStepViolation as exc:
                raise _Fail(f"k={k}, l={l}: proof-step assertion broke: {exc}")
            except zycle.ZycleStageFailure as exc:
                fails.append(f"k={k} n={n} l={l} failed at {exc.stage} ({exc.detail})")
                continue
            w = run.witness
            _need(zycle.verify_zycle_witness(G, l, w), f"k={k}, l={l}: witness rejected")
            hom = embedding.EmbeddingWitness("hom", tuple(w.vertex_map()))
            _need(embedding.verify(families.zycle_minus(k, l), G, hom), f"k={k}, l={l}: not a homomorphic copy")
            for a, b in zip(w.chain, w.chain[1:-1]):
                _need(set(b) <= G.neighbors_of(a), f"k={k}, l={l}: chain link broken")
            _need(all(run.goodness), f"k={k}, l={l}: a link family is not good")
            notes.append(f"k={k} l={l} m={len(run.back_cover.fs)}")
    if fails:
        raise _Fail("; ".join(fails))
    return "witnesses verified for " + ", ".join(notes)


def _random_pair(rng: random.Random):
    k = rng.choice([2, 3])
    pn = rng.randint(k, 7)
    hn = rng.randint(k, 12)
    mode = rng.choice(embedding.MODES)
    pe = [e for e in combinations(range(pn), k) if rng.random() < rng.choice([0.2, 0.4])]
    he = [e for e in combinations(range(hn), k) if rng.random() < rng.choice([0.3, 0.6, 0.9])]
    P, H = Hypergraph(k, pn, frozenset(pe)), Hypergraph(k, hn, frozenset(he))
    if mode == "ord":
        po, ho = list(range(pn)), list(range(hn))
        rng.shuffle(po)
        rng.shuffle(ho)
        return OrderedHypergraph(P, tuple(po)), OrderedHypergraph(H, tuple(ho)), mode
    return P, H, mode


def c11_oracle(ctx) -> str:
    rng = random.Random(ctx["seed"])
    tally = Counter()
    for i in range(500):
        P, H, mode = _random_pair(rng)
        w = embedding.find(P, H, mode)
        c = embedding.count_all(P, H, mode, limit=1)
        _need((w is None) == (c == 0), f"pair {i} ({mode}): find {'NONE' if w is None else 'hit'} but count {c}")
        if w is not None:
            _need(embedding.verify(P, H, w), f"pair {i} ({mode}): witness does not verify")
        tally[(mode, w is not None)] += 1
    return "500 pairs agree (" + ", ".join(f"{m} {'hit' if h else 'none'}={v}" for (m, h), v in sorted(tally.items())) + ")"


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "generator exactness", 1.0, c1_generators),
    (2, "blow-up codegree bound", 30.0, c2_codegree),
    (3, "residue class parameters", 10.0, c3_residue_params),
    (4, "congruence solver", 10.0, c4_congruences),
    (5, "freeness, gcd > 1", 60.0, c5_gcd_branch),
    (6, "freeness, gcd = 1", 1800.0, c6_modified),
    (7, "form propagation on walks", 60.0, c7_form_walks),
    (8, "sufficient-condition checker", 120.0, c8_theorem2),
    (9, "good-set algebra", 60.0, c9_good_sets),
    (10, "zycle pipeline", 120.0, c10_zycle),
    (11, "oracle equivalence", 120.0, c11_oracle),
]


def run_criterion(number: int, seed: int = 0, jobs: int = 1, budget_secs: float | None = None) -> CriterionResult:
    num, name, limit, fn = CRITERIA[number - 1]
    budget = limit if budget_secs is None else min(limit, budget_secs)
    ctx = {"seed": seed, "jobs": jobs, "budget": budget}
    start = time.monotonic()
    try:
        detail = fn(ctx)
        passed = True
    except _Fail as exc:
        detail, passed = str(exc), False
    elapsed = time.monotonic() - start
    if passed and elapsed > limit:
        passed = False
        detail += f"; over the {limit:g}s limit"
    return CriterionResult(num, name, passed, detail, elapsed, limit)


def run_all(seed: int = 0, jobs: int = 1, budget_secs: float | None = None, only=None):
    for num, *_ in CRITERIA:
        if only and num not in only:
            continue
        yield run_criterion(num, seed, jobs, budget_secs)
