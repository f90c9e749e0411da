"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 pipeline or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import baker, families, oracle, reducer, solver
from .model import Solution, canonical_order, make_instance, verify_solution

EXIT_OK, EXIT_VERIFY, EXIT_ERROR = 0, 1, 2
MAX_X_N = 10


class PipelineError(Exception):
    pass


def _fmt(x: Fraction) -> str:
    return f"{float(x):.6e}"


def _check_range(x_n: int) -> None:
    if x_n < 3:
        raise PipelineError("x_n < 3 handled by solve (trivial cases)")
    if x_n > MAX_X_N:
        raise PipelineError(f"x_n must be <= {MAX_X_N}")


def _mode(args) -> str:
    return "paper" if args.paper_replay else "auto"


def cmd_bound(args) -> int:
    _check_range(args.x_n)
    inst = make_instance(args.x_n)
    digits = args.precision_digits or baker.DEFAULT_DIGITS
    t0 = time.monotonic()
    bb = baker.baker_bound(inst, digits)
    lo, hi = baker.matveev_constant(inst.k, 1, digits)
    report = {
        "x_n": inst.x_n,
        "k": inst.k,
        "primes": list(inst.primes),
        "matveev_constant": [str(lo), str(hi)] if lo != hi else str(lo),
        "B0": bb.B0,
        "rhs_at_B0": _fmt(bb.rhs_at_B0),
        "published_B0": bb.published,
        "within_published": bb.published is None or bb.B0 <= bb.published,
        "seconds": round(time.monotonic() - t0, 3),
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"x_n = {inst.x_n}, k = {inst.k}, primes = {list(inst.primes)}")
        print(f"C({inst.k},1) = {_fmt(hi)}")
        print(f"B0 = {bb.B0} ({_fmt(Fraction(bb.B0))})")
        print(f"published bound {bb.published:.1e}: {'ok' if report['within_published'] else 'EXCEEDED'}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    _check_range(args.x_n)
    inst = make_instance(args.x_n)
    mode = _mode(args)
    B0 = None
    if mode == "auto":
        B0 = baker.baker_bound(inst, args.precision_digits or baker.DEFAULT_DIGITS).B0
    bs = reducer.reduce_bounds(inst, B0, mode)
    if mode == "paper":
        expected = reducer.PAPER_FINAL[inst.k]
        got = (bs.total_bound, bs.per_prime)
        if got != expected:
            raise PipelineError(f"replay gave {got}, expected {expected}")
    if args.json:
        print(bs.to_json())
    else:
        for rec in bs.provenance:
            status = rec.new_bound if rec.precondition else "precondition failed"
            print(f"{rec.stage:>14}  C=1e{len(str(rec.C)) - 1}  X0={rec.X[0]:<18} -> {status}")
        per = ", ".join(f"b{j + 2}<={b}" for j, b in enumerate(bs.per_prime))
        print(f"mode={mode} total b<={bs.total_bound}" + (f"; {per}" if per else ""))
    return EXIT_OK


def _write_lines(path: Path | None, sols: list[Solution]) -> None:
    text = "".join(s.to_json() + "\n" for s in sols)
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def cmd_solve(args) -> int:
    if not 1 <= args.x_n <= MAX_X_N:
        raise PipelineError(f"x_n must be in [1, {MAX_X_N}]")
    if args.shards < 1:
        raise PipelineError("--shards must be >= 1")
    res = solver.solve(
        args.x_n,
        mode=_mode(args),
        shards=args.shards,
        checkpoint=args.checkpoint,
        backend=args.backend,
        order=args.order,
        digits=args.precision_digits,
    )
    out = Path(args.output) if args.output else None
    _write_lines(out, res.solutions)
    manifest_path = args.manifest or (f"{args.output}.manifest.json" if args.output else None)
    if manifest_path:
        Path(manifest_path).write_text(json.dumps(res.manifest, indent=2) + "\n")
    summary = f"x_n={res.x_n}: {len(res.solutions)} solutions, max n = {res.max_n()}, {res.manifest['wall_time_s']} s"
    if args.json and out is not None:
        print(json.dumps(res.manifest, indent=2))
    else:
        print(summary, file=sys.stderr if out is None else sys.stdout)
    return EXIT_OK


def _read_solutions(path: Path) -> tuple[list[Solution], list[str]]:
    sols, errors = [], []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            sol = Solution.from_json(line)
        except (ValueError, KeyError, TypeError) as exc:
            errors.append(f"line {lineno}: malformed: {exc}")
            continue
        if not verify_solution(sol):
            errors.append(f"line {lineno}: fails the equation: {list(sol.as_tuple())}")
            continue
        sols.append(sol)
    return sols, errors


def cmd_verify(args) -> int:
    path = Path(args.file)
    if not path.exists():
        raise PipelineError(f"no such file: {path}")
    sols, errors = _read_solutions(path)
    if args.oracle:
        errors.extend(_oracle_check(sols, args.n_max))
    for e in errors:
        print(e)
    status = "FAIL" if errors else "PASS"
    print(f"{status}: {len(sols)} verified, {len(errors)} problems")
    return EXIT_VERIFY if errors else EXIT_OK


def _oracle_check(sols: list[Solution], n_max: int) -> list[str]:
    """Compare against the multiset oracle for every ``x_n`` present in the file."""
    problems = []
    for x_n in sorted({s.x_n for s in sols}):
        if x_n > oracle.MAX_PART:
            problems.append(f"oracle: x_n={x_n} is beyond the oracle's range")
            continue
        mine = {s for s in sols if s.x_n == x_n and s.n <= n_max}
        ref = {s for s in oracle.brute_force_by_multiset(n_max, x_n) if s.x_n == x_n}
        for s in canonical_order(ref - mine):
            problems.append(f"oracle: missing {list(s.as_tuple())}")
        for s in canonical_order(mine - ref):
            problems.append(f"oracle: unexpected {list(s.as_tuple())}")
    return problems


def cmd_families(args) -> int:
    if args.witness is not None:
        found = families.g_upper_bound_witness(args.witness)
        if found is None:
            raise PipelineError("witnesses need n >= 2")
        sol, x_n = found
        print(json.dumps({"n": str(sol.n), "x_n": x_n, "solution": json.loads(sol.to_json())}))
        return EXIT_OK
    kinds = [families.FamilyKind(args.kind)] if args.kind else list(families.FamilyKind)
    for kind in kinds:
        for param in range(args.start, args.stop + 1):
            sol = families.family_solution(kind, param)
            row = {"family": kind.value, "parameter": param, "verified": verify_solution(sol)}
            row.update(json.loads(sol.to_json()))
            print(json.dumps(row, separators=(",", ":")))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erdos-last", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--precision-digits", type=int, default=None,
                        help="decimal digits for the Baker bound evaluation")

    def add_mode(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--paper-replay", action="store_true", help="pinned published reduction parameters")
        g.add_argument("--auto-C", action="store_true", help="choose the lattice scale automatically (default)")

    p = sub.add_parser("bound", parents=[common], help="initial Baker-type bound")
    p.add_argument("x_n", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("reduce", parents=[common], help="LLL reduction of the bounds")
    p.add_argument("x_n", type=int)
    add_mode(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", parents=[common], help="all solutions with a given largest part")
    p.add_argument("x_n", type=int)
    add_mode(p)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--checkpoint", default=None, help="resumable progress file")
    p.add_argument("-o", "--output", default=None, help="JSON-lines output (default stdout)")
    p.add_argument("--manifest", default=None, help="manifest path (default OUTPUT.manifest.json)")
    p.add_argument("--backend", choices=("auto", "numba", "python"), default="auto")
    p.add_argument("--order", choices=("weight", "paper"), default="weight")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="re-check a JSON-lines solution file")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true", help="also compare with the brute-force oracle")
    p.add_argument("--n-max", type=int, default=300)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("families", parents=[common], help="verified members of the explicit families")
    p.add_argument("--kind", choices=[k.value for k in families.FamilyKind])
    p.add_argument("--start", type=int, default=2)
    p.add_argument("--stop", type=int, default=10)
    p.add_argument("--witness", type=int, default=None, metavar="N", help="best family witness for g(N)")
    p.set_defaults(func=cmd_families)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (PipelineError, reducer.ReductionError, solver.CheckpointMismatch, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
