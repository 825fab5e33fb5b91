"""Command-line front end.

Every subcommand prints one JSON run report on stdout (sorted keys); logs
and the acceptance table go to stderr.

Exit codes: 0 positive result (WITNESS, FREE, GENERATED, CONSTRUCTED, all
criteria pass), 1 negative or failed result (NONE, NO, COPY-FOUND, FAILED),
2 usage error, 3 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import acceptance, constructions, embedding, families, sufficient, zycle
from .hypergraph import InvalidHypergraph, OrderedHypergraph, read, write

EXIT = {"WITNESS": 0, "FREE": 0, "GENERATED": 0, "CONSTRUCTED": 0, "PASS": 0,
        "NONE": 1, "NO": 1, "COPY-FOUND": 1, "FAILED": 1, "INCONCLUSIVE": 3}


@dataclass
class RunReport:
    command: str
    argv: list
    parameters: dict
    verdict: str
    seed: int
    jobs: int
    witness_path: str | None = None
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def _write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")


def cmd_gen(a):
    spec = families.FamilySpec(a.family, a.k, a.l if a.l is not None else a.t)
    G = spec.build()
    if isinstance(G, OrderedHypergraph):
        G = G.base
    out = a.out or f"{a.family}_k{a.k}_{spec.size}.hg"
    write(G, out)
    return "GENERATED", None, {"out": out, "vertices": G.n, "edges": G.num_edges()}


def cmd_embed(a):
    P, H = read(a.pattern), read(a.host)
    mode = embedding.normalise_mode(a.mode)
    if mode == "ord":
        P, H = OrderedHypergraph.natural(P), OrderedHypergraph.natural(H)
    try:
        w = embedding.find(P, H, mode, jobs=a.jobs, budget_secs=a.budget_secs)
    except embedding.SearchTimeout as exc:
        return "INCONCLUSIVE", None, {"reason": str(exc)}
    if w is None:
        return "NONE", None, {"mode": mode}
    if not embedding.verify(P, H, w):
        raise AssertionError("engine produced a witness that does not verify")
    if a.witness_out:
        _write_json(a.witness_out, w.to_json())
    return "WITNESS", a.witness_out, {"mode": mode, "map": list(w.map)}


def cmd_theorem2(a):
    F = read(a.pattern)
    w = sufficient.check(F)
    if w is None:
        return "NO", None, {"exact_transversals": len(sufficient.exact_transversals(F))}
    if a.witness_out:
        _write_json(a.witness_out, w.to_json())
    return "WITNESS", a.witness_out, w.to_json()


def cmd_construct(a):
    g = constructions.construction_for(a.k, a.l, a.N, modified=a.modified, m=a.m)
    details = {"m": g.m, "N": g.N, "k": g.k, "modified": g.modified, "vertices": g.n,
               "min_codegree_class_level": g.min_codegree_class_level()}
    if a.scheme_out:
        if g.scheme is None:
            return "FAILED", None, dict(details, reason="plain construction has no residue scheme")
        _write_json(a.scheme_out, g.scheme.to_json())
        details["scheme_out"] = a.scheme_out
    if a.out:
        if not g.materialisable():
            return "FAILED", None, dict(details, reason=f"{g.n} vertices is too large to write edge by edge")
        H = g.to_hypergraph()
        write(H, a.out)
        details.update(out=a.out, edges=H.num_edges())
    return "CONSTRUCTED", None, details


def cmd_verify_free(a):
    g = constructions.construction_for(a.k, a.l, a.N, modified=a.modified)
    r = constructions.verify_freeness(g, a.l, level=a.level, jobs=a.jobs, budget_secs=a.budget_secs)
    details = {"m": g.m, "N": g.N, "modified": g.modified, "level": r.level}
    if r.verdict == "COPY-FOUND":
        details.update(map=list(r.witness.map), class_map=list(r.class_map))
        if a.witness_out:
            _write_json(a.witness_out, dict(r.witness.to_json(), class_map=list(r.class_map)))
            return r.verdict, a.witness_out, details
    return r.verdict, None, details


def cmd_zycle(a):
    G = read(a.host)
    try:
        run = zycle.run_pipeline(G, a.l, a.eps)
    except zycle.ZycleStageFailure as exc:
        return "FAILED", None, {"stage": exc.stage, "reason": exc.detail}
    w = run.witness
    if a.witness_out:
        _write_json(a.witness_out, w.to_json())
    return "WITNESS", a.witness_out, dict(w.to_json(), m=len(run.back_cover.fs), eta=run.eta)


def cmd_accept(a):
    only = {int(x) for x in a.only.split(",")} if a.only else None
    rows = []
    for res in acceptance.run_all(seed=a.seed, jobs=a.jobs, budget_secs=a.budget_secs, only=only):
        print(res.line(), file=sys.stderr, flush=True)
        rows.append(res)
    passed = all(r.passed for r in rows)
    return ("PASS" if passed else "FAILED"), None, {"criteria": [r.to_json() for r in rows]}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coturan", description=__doc__.splitlines()[0])
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--budget-secs", type=float, default=None)

    sp = sub.add_parser("gen", help="write a named family to a .hg file")
    sp.add_argument("--family", required=True, choices=sorted(families.FAMILIES))
    sp.add_argument("--k", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--l", type=int)
    g.add_argument("--t", type=int, help="part size for the complete k-partite families")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("embed", help="find a hom / injective / ordered copy")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--host", required=True)
    sp.add_argument("--mode", default="inj", choices=list(embedding.MODES) + ["homomorphism", "injective", "ordered"])
    sp.add_argument("--witness-out")
    common(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("theorem2", help="test the partition plus ordered-link condition")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--witness-out")
    common(sp)
    sp.set_defaults(func=cmd_theorem2)

    def blowup_args(sp):
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--l", type=int, required=True)
        sp.add_argument("--N", type=int, required=True)
        sp.add_argument("--modified", dest="modified", action="store_true", default=None)
        sp.add_argument("--plain", dest="modified", action="store_false")

    sp = sub.add_parser("construct", help="build the blow-up for C_l^(k)-")
    blowup_args(sp)
    sp.add_argument("--out")
    sp.add_argument("--scheme-out")
    sp.add_argument("--m", type=int, help="experiment: override the modulus (default: smallest kp >= 52)")
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify-free", help="exhaustively search the blow-up for C_l^(k)-")
    blowup_args(sp)
    sp.add_argument("--level", default="auto", choices=["auto", "vertex", "class"])
    sp.add_argument("--witness-out")
    common(sp)
    sp.set_defaults(func=cmd_verify_free)

    sp = sub.add_parser("zycle-find", help="build a homomorphic Z_l^(k)- in a dense host")
    sp.add_argument("--host", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--witness-out")
    common(sp)
    sp.set_defaults(func=cmd_zycle)

    sp = sub.add_parser("accept", help="run the acceptance suite")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    common(sp)
    sp.set_defaults(func=cmd_accept)
    return p


def run(argv=None) -> tuple[int, RunReport | None]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    logging.basicConfig(level=a.log_level.upper(), stream=sys.stderr)
    params = {k: v for k, v in sorted(vars(a).items()) if k not in ("func", "log_level")}
    start = time.monotonic()
    try:
        verdict, wpath, details = a.func(a)
    except (InvalidHypergraph, families.DegenerateParameters, constructions.InvalidParameters,
            constructions.ConstructionFailure, OSError, ValueError) as exc:
        print(f"coturan {a.command}: {exc}", file=sys.stderr)
        verdict, wpath, details = "FAILED", None, {"error": f"{type(exc).__name__}: {exc}"}
    report = RunReport(a.command, argv, params, verdict, a.seed, a.jobs, wpath, details,
                       round(time.monotonic() - start, 3))
    return EXIT[verdict], report


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        print(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
