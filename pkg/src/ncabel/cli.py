"""Command line front end.

Subcommands::

    ncabel verify --identity thm2 --n 4 --mode both
    ncabel expand --ring "central:c; free:X,x1" --expr "(X+x1)^2"
    ncabel fuzz   --ring "free:a,b" --lhs "a*b" --rhs "b*a"
    ncabel bench  --identity thm1 --n-max 6 --backend all

Exit status: 0 identity holds / expression expanded, 1 identity fails,
2 usage or parse error.  The default seed comes from ``NCABEL_SEED``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import kernel
from .errors import ContractViolation, ParseError
from .expr import parse_polynomial
from .freealg import RingSpec, serialize
from .identities import Identity, IdentityCase, Side, Setup, build_side
from .oracle import DEFAULT_DIM, DEFAULT_MODULUS, DEFAULT_TRIALS, OracleConfig, probabilistic_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

MAX_DIFF_TERMS = 200


class _UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("NCABEL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"NCABEL_SEED must be an integer, got {raw!r}") from None


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="oracle seed (default: $NCABEL_SEED or 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--warn-n", type=int, default=8, metavar="N",
                        help="warn when the ground-set size exceeds N (default 8)")
    common.add_argument("--no-timing", action="store_true",
                        help="omit wall-clock times so that reports are byte-reproducible")
    return common


def _oracle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ncabel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    ids = [i.value for i in Identity]

    v = sub.add_parser("verify", parents=[common], help="check a catalog identity")
    v.add_argument("--identity", required=True, choices=ids)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--m", type=int, default=None, help="exponent for polar2 (0 <= m < n)")
    v.add_argument("--mode", choices=("symbolic", "oracle", "both"), default="symbolic")
    v.add_argument("--rhs-identity", choices=ids, default=None,
                   help="compare against another identity's right-hand side (negative control)")
    _oracle_flags(v)

    e = sub.add_parser("expand", parents=[common], help="expand an expression to canonical form")
    e.add_argument("--ring", required=True, help='e.g. "central:c; free:X,x1"')
    e.add_argument("--expr", required=True, help='write --expr="-X + 1" when the expression starts with a minus')

    f = sub.add_parser("fuzz", parents=[common], help="test a candidate identity with the matrix oracle")
    f.add_argument("--ring", required=True)
    f.add_argument("--lhs", required=True)
    f.add_argument("--rhs", required=True)
    _oracle_flags(f)

    b = sub.add_parser("bench", parents=[common], help="time side construction over a range of n")
    b.add_argument("--identity", required=True, choices=ids)
    b.add_argument("--n-min", type=int, default=0)
    b.add_argument("--n-max", type=int, required=True)
    b.add_argument("--backend", choices=("active", "all", *kernel.available_backends()), default="active")
    return parser


def _oracle_cfg(args, seed: int) -> OracleConfig:
    try:
        return OracleConfig(args.dim, args.modulus, args.trials, seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _emit(args, payload: dict, text: str, out) -> None:
    if args.format == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _warn_n(args, n: int, err) -> None:
    if n > args.warn_n:
        err.write(f"warning: n={n} exceeds {args.warn_n}; term counts grow roughly like (n+1)^n\n")


def _cmd_verify(args, seed, out, err) -> int:
    case = IdentityCase(args.identity, args.n, args.m)
    rhs_case = None
    if args.rhs_identity:
        rhs_ident = Identity(args.rhs_identity)
        m = args.m if rhs_ident is Identity.POLAR2 else None
        rhs_case = IdentityCase(rhs_ident, args.n, m)
        if rhs_case.model is not case.model:
            raise _UsageError(f"{rhs_ident.value} lives in the {rhs_case.model.value} model, "
                              f"{case.identity.value} in {case.model.value}")
    _warn_n(args, args.n, err)
    start = time.perf_counter()
    setup = Setup(case.n, case.model)
    lhs = build_side(setup, case, Side.LHS)
    rhs = build_side(setup, rhs_case or case, Side.RHS)
    payload: dict = {
        "identity": case.identity.value,
        "n": case.n,
        "model": case.model.value,
        "lhs_terms": len(lhs),
        "rhs_terms": len(rhs),
    }
    if case.m is not None:
        payload["m"] = case.m
    if rhs_case is not None:
        payload["rhs_identity"] = rhs_case.identity.value
    lines = [f"identity: {case.label()}  model: {case.model.value}"]
    if rhs_case is not None:
        lines[0] += f"  (rhs from {rhs_case.label()})"
    lines.append(f"lhs terms: {len(lhs)}  rhs terms: {len(rhs)}")
    equal = True
    if args.mode in ("symbolic", "both"):
        diff = lhs - rhs
        equal = diff.is_zero()
        payload["diff"] = serialize(diff, MAX_DIFF_TERMS)
        lines.append(f"symbolic: {'EQUAL' if equal else 'NOT EQUAL'}  diff = {payload['diff']}")
    else:
        payload["diff"] = None
    if args.mode in ("oracle", "both"):
        cfg = _oracle_cfg(args, seed)
        verdict = probabilistic_verify(lhs, rhs, cfg)
        equal = equal and verdict.equal_whp
        payload["seed"] = seed
        payload["oracle"] = {
            "dim": cfg.dim, "modulus": cfg.modulus, "trials": cfg.trials,
            "verdict": verdict.verdict, "failure_bound": verdict.failure_bound,
            "witness_trial": verdict.witness_trial,
        }
        lines.append(f"oracle: {verdict.verdict}  (dim {cfg.dim}, p {cfg.modulus}, {cfg.trials} trials, "
                     f"seed {seed}, heuristic failure bound {verdict.failure_bound:.3g})")
        if not verdict.equal_whp:
            lines.append("witness:\n" + verdict.witness.to_text().rstrip())
    elapsed_ms = (time.perf_counter() - start) * 1000
    payload["equal"] = equal
    payload["elapsed_ms"] = None if args.no_timing else round(elapsed_ms, 3)
    if not args.no_timing:
        lines.append(f"elapsed: {elapsed_ms:.1f} ms")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK if equal else EXIT_FAILED


def _cmd_expand(args, seed, out, err) -> int:
    ring = _parse_ring(args.ring)
    p = parse_polynomial(args.expr, ring)
    text = serialize(p)
    _emit(args, {"ring": str(ring), "expr": args.expr, "result": text, "terms": len(p)}, text, out)
    return EXIT_OK


def _cmd_fuzz(args, seed, out, err) -> int:
    ring = _parse_ring(args.ring)
    lhs = parse_polynomial(args.lhs, ring)
    rhs = parse_polynomial(args.rhs, ring)
    cfg = _oracle_cfg(args, seed)
    verdict = probabilistic_verify(lhs, rhs, cfg)
    payload = {
        "lhs": args.lhs, "rhs": args.rhs, "ring": str(ring), "seed": seed,
        "oracle": {"dim": cfg.dim, "modulus": cfg.modulus, "trials": cfg.trials, "verdict": verdict.verdict,
                   "failure_bound": verdict.failure_bound, "witness_trial": verdict.witness_trial},
        "equal": verdict.equal_whp,
    }
    lines = [f"{verdict.verdict}  (dim {cfg.dim}, p {cfg.modulus}, {cfg.trials} trials, seed {seed})"]
    if not verdict.equal_whp:
        payload["witness"] = verdict.witness.to_text()
        lines.append(verdict.witness.to_text().rstrip())
    else:
        lines.append(f"heuristic failure bound {verdict.failure_bound:.3g}")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK if verdict.equal_whp else EXIT_FAILED


def _cmd_bench(args, seed, out, err) -> int:
    ident = Identity(args.identity)
    if ident is Identity.POLAR2:
        raise _UsageError("bench does not take polar2 (it needs an m per n); use polar1")
    if args.n_min < 0 or args.n_max < args.n_min:
        raise _UsageError(f"bad n range {args.n_min}..{args.n_max}")
    _warn_n(args, args.n_max, err)
    backends = {"active": [kernel.backend_name()], "all": kernel.available_backends()}.get(
        args.backend, [args.backend])
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        case = IdentityCase(ident, n)
        row: dict = {"n": n}
        for name in backends:
            with kernel.use_backend(name):
                start = time.perf_counter()
                setup = Setup(n, case.model)
                lhs = build_side(setup, case, Side.LHS)
                rhs = build_side(setup, case, Side.RHS)
                equal = (lhs - rhs).is_zero()
                elapsed = (time.perf_counter() - start) * 1000
            row.update(lhs_terms=len(lhs), rhs_terms=len(rhs), equal=equal)
            row[f"{name}_ms"] = None if args.no_timing else round(elapsed, 3)
        rows.append(row)
    header = ["n", "lhs_terms", "rhs_terms", "equal"] + [f"{b}_ms" for b in backends]
    widths = [max(len(h), 9) for h in header]
    lines = [f"identity: {ident.value}  model: {ident.model.value}",
             "  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for row in rows:
        cells = []
        for h in header:
            v = row[h]
            cells.append("-" if v is None else (f"{v:.1f}" if isinstance(v, float) else str(v)))
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
    _emit(args, {"identity": ident.value, "model": ident.model.value, "rows": rows}, "\n".join(lines), out)
    return EXIT_OK if all(r["equal"] for r in rows) else EXIT_FAILED


def _parse_ring(decl: str) -> RingSpec:
    try:
        return RingSpec.parse(decl)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


_COMMANDS = {"verify": _cmd_verify, "expand": _cmd_expand, "fuzz": _cmd_fuzz, "bench": _cmd_bench}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    """Parse ``argv`` and execute; returns the exit status instead of exiting."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        return _COMMANDS[args.command](args, seed, out, err)
    except ParseError as exc:
        err.write(f"parse error: {exc.message} at position {exc.position}\n")
        if exc.text:
            err.write(f"  {exc.text}\n  {' ' * exc.position}^\n")
        return EXIT_USAGE
    except (_UsageError, ContractViolation) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
