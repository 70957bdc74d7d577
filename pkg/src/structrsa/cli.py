"""Command-line front end.

Exit codes: 0 factored / success, 2 precondition or infeasible parameters,
3 exhausted or incomplete, 4 usage error. A failed bench sweep exits 1.
"""

import argparse
import json
import re
import sys
from typing import Optional

from structrsa import bench
from structrsa.attacks import DEFAULT_BUDGET, AttackOutcome, HintSet, Status, attack
from structrsa.keygen import (
    DEFAULT_E, InfeasibleParametersError, NotInvertibleError, assemble_rsa,
    gen_key, key_from_json, key_to_json)
from structrsa.oracle import fermat_factor, trial_division
from structrsa.shapes import KINDS, PQ, PSQ, ModulusShape

EXIT_OK = 0
EXIT_BENCH_FAILED = 1
EXIT_PRECONDITION = 2
EXIT_EXHAUSTED = 3
EXIT_USAGE = 4

_DECIMAL = re.compile(r"[0-9]+")
_BINARY = re.compile(r"0b[01]+")
_RANGE = re.compile(r"([0-9]+)\.\.([0-9]+)")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def decimal(text: str) -> int:
    if not _DECIMAL.fullmatch(text):
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")
    return int(text)


def hint(text: str) -> int:
    """Decimal, or binary with a 0b prefix (e.g. 0b11100 for 28)."""
    if _BINARY.fullmatch(text):
        return int(text, 2)
    return decimal(text)


def int_range(text: str) -> range:
    m = _RANGE.fullmatch(text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    return range(int(m.group(1)), int(m.group(2)) + 1)


def _make_shape(kind: str, s: Optional[int], l: Optional[int]) -> ModulusShape:
    try:
        if kind == PQ:
            return ModulusShape.pq()
        if s is None:
            raise UsageError(f"shape {kind} needs --s")
        if kind == PSQ:
            return ModulusShape.psq(s)
        if l is None:
            raise UsageError(f"shape {kind} needs --l")
        return ModulusShape.pslqs(s, l)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def outcome_record(out: AttackOutcome, shape: ModulusShape) -> dict:
    def dec(v):
        return None if v is None else str(v)

    rec = {
        "status": out.status.value,
        "p": dec(out.p),
        "q": dec(out.q),
        "k_hit": dec(out.k_hit),
        "iterations": out.iterations,
        "window_lo": dec(out.window.lo if out.window else None),
        "window_hi": dec(out.window.hi if out.window else None),
        "elapsed_ns": out.elapsed_ns,
        "shape": shape.kind,
        "s": shape.s,
        "l": shape.l,
    }
    if out.reason:
        rec["reason"] = out.reason
    return rec


def cmd_keygen(args) -> int:
    shape = _make_shape(args.shape, args.s, args.l)
    try:
        key = gen_key(shape, args.prime_bits, args.r_bits, args.seed,
                      rp_bits=args.rp_bits, rq_bits=args.rq_bits,
                      r_p=args.rp, r_q=args.rq, m1=args.m1, m2=args.m2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except InfeasibleParametersError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if not args.no_exponents:
        try:
            key = assemble_rsa(key, args.e)
        except NotInvertibleError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
    with open(args.out, "w") as fh:
        fh.write(key_to_json(key) + "\n")
    print(f"shape {shape}")
    print(f"n  = {key.n}")
    print(f"rp = {key.prime_p.r}")
    print(f"rq = {key.prime_q.r}")
    return EXIT_OK


def _print_outcome(out: AttackOutcome, shape: ModulusShape, as_json: bool) -> None:
    if as_json:
        print(json.dumps(outcome_record(out, shape), separators=(",", ":")))
        return
    print(f"shape {shape}: {out.status.value}")
    if out.factored:
        print(f"p = {out.p}")
        print(f"q = {out.q}")
        print(f"k_hit = {out.k_hit}")
    if out.window is not None:
        print(f"window = [{out.window.lo}, {out.window.hi}] ({out.window.width} candidates)")
    print(f"iterations = {out.iterations}")
    print(f"elapsed = {out.elapsed_ns / 1e6:.3f} ms")
    if out.reason:
        print(f"reason: {out.reason}")


_EXIT_FOR = {Status.FACTORED: EXIT_OK, Status.EXHAUSTED: EXIT_EXHAUSTED,
             Status.PRECONDITION: EXIT_PRECONDITION}


def cmd_attack(args) -> int:
    kind, s, l = args.shape, args.s, args.l
    rp, rq, n = args.rp, args.rq, args.n
    if args.key is not None:
        try:
            with open(args.key) as fh:
                key = key_from_json(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot load key {args.key}: {exc}") from exc
        n = key.n
        kind = kind or key.shape.kind
        s = s if s is not None else key.shape.s
        l = l if l is not None else key.shape.l
        rp = rp if rp is not None else key.prime_p.r
        rq = rq if rq is not None else key.prime_q.r
    if kind is None or n is None or rp is None or rq is None:
        raise UsageError("need --shape, --n, --rp and --rq (or --key)")
    if rp < 1 or rq < 1:
        raise UsageError("hints must be >= 1")

    if args.s_sweep is None:
        shape = _make_shape(kind, s, l)
        out = attack(n, HintSet(rp, rq, shape), args.budget)
        _print_outcome(out, shape, args.json)
        return _EXIT_FOR[out.status]

    if kind == PQ:
        raise UsageError("--s-sweep applies to psq and pslqs")
    tried = []
    for s_try in args.s_sweep:
        try:
            shape = _make_shape(kind, s_try, l)
        except UsageError:
            continue
        out = attack(n, HintSet(rp, rq, shape), args.budget)
        if not args.json:
            print(f"s={s_try}: {out.status.value}")
        tried.append((out, shape))
        if out.factored:
            break
    if not tried:
        raise UsageError("no valid s in the sweep range")
    hit = [t for t in tried if t[0].factored]
    out, shape = hit[0] if hit else tried[-1]
    if not hit and any(t[0].status is Status.EXHAUSTED for t in tried):
        out, shape = [t for t in tried if t[0].status is Status.EXHAUSTED][-1]
    _print_outcome(out, shape, args.json)
    return _EXIT_FOR[out.status]


def _format_factors(factors) -> str:
    return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in factors)


def cmd_oracle(args) -> int:
    if args.n < 2:
        raise UsageError("n must be >= 2")
    if args.mode == "trial":
        factors, cofactor = trial_division(args.n, args.bound)
        if cofactor == 1:
            print(_format_factors(factors))
            return EXIT_OK
        partial = _format_factors(factors)
        print(f"incomplete: {partial + ' * ' if partial else ''}[{cofactor}]")
        return EXIT_EXHAUSTED
    if args.n < 9 or args.n % 2 == 0:
        raise UsageError("fermat needs odd n >= 9")
    found = fermat_factor(args.n, args.steps)
    if found is None:
        print("incomplete")
        return EXIT_EXHAUSTED
    print(f"{found[0]} * {found[1]}")
    return EXIT_OK


def cmd_bench(args) -> int:
    l = args.l
    if l is None and args.l_range:
        l = args.l_range[0]
    shape = _make_shape(args.shape, args.s, l)
    try:
        records = bench.run_sweep(
            shape, args.prime_bits, args.r_bits, args.trials, args.seed, args.csv,
            l_values=args.l_range, r_p=args.rp, r_q=args.rq, budget=args.budget)
    except bench.BenchFailure as exc:
        print(f"bench failed: {exc}", file=sys.stderr)
        return EXIT_BENCH_FAILED
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except InfeasibleParametersError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(f"{len(records)} records, all factored")
    return EXIT_OK


def _budget(text: str) -> int:
    value = decimal(text)
    if value < 1:
        raise argparse.ArgumentTypeError("budget must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="structrsa",
                     description="Factoring attacks on moduli with structured primes a^m + r.")
    sub = parser.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate a vulnerable key")
    kg.add_argument("--shape", choices=KINDS, required=True)
    kg.add_argument("--prime-bits", type=decimal, required=True)
    kg.add_argument("--r-bits", type=decimal, default=12)
    kg.add_argument("--rp-bits", type=decimal)
    kg.add_argument("--rq-bits", type=decimal)
    kg.add_argument("--rp", type=hint, help="fix r_p instead of drawing it")
    kg.add_argument("--rq", type=hint, help="fix r_q instead of drawing it")
    kg.add_argument("--m1", type=decimal)
    kg.add_argument("--m2", type=decimal)
    kg.add_argument("--s", type=decimal)
    kg.add_argument("--l", type=decimal)
    kg.add_argument("--seed", type=decimal, default=0)
    kg.add_argument("--e", type=decimal, default=DEFAULT_E)
    kg.add_argument("--no-exponents", action="store_true", help="omit e and d")
    kg.add_argument("--out", required=True)
    kg.set_defaults(func=cmd_keygen)

    at = sub.add_parser("attack", help="factor N from its residue hints")
    at.add_argument("--shape", choices=KINDS)
    src = at.add_mutually_exclusive_group()
    src.add_argument("--n", type=decimal)
    src.add_argument("--key", help="key JSON file; supplies N and default hints")
    at.add_argument("--rp", type=hint)
    at.add_argument("--rq", type=hint)
    at.add_argument("--s", type=decimal)
    at.add_argument("--l", type=decimal)
    at.add_argument("--s-sweep", type=int_range, metavar="LO..HI",
                    help="try s = LO..HI in order (invalid s are skipped)")
    at.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
    at.add_argument("--json", action="store_true")
    at.set_defaults(func=cmd_attack)

    orc = sub.add_parser("oracle", help="reference factorization")
    orc.add_argument("mode", choices=("trial", "fermat"))
    orc.add_argument("--n", type=decimal, required=True)
    orc.add_argument("--bound", type=decimal, default=10 ** 6)
    orc.add_argument("--steps", type=decimal, default=10 ** 6)
    orc.set_defaults(func=cmd_oracle)

    bn = sub.add_parser("bench", help="sweep residue sizes and record window widths")
    bn.add_argument("--shape", choices=KINDS, required=True)
    bn.add_argument("--prime-bits", type=decimal, default=256)
    bn.add_argument("--r-bits", type=int_range, required=True, metavar="LO..HI")
    bn.add_argument("--trials", type=decimal, default=10)
    bn.add_argument("--s", type=decimal)
    bn.add_argument("--l", type=decimal)
    bn.add_argument("--l-range", type=int_range, metavar="LO..HI")
    bn.add_argument("--rp", type=hint)
    bn.add_argument("--rq", type=hint)
    bn.add_argument("--seed", type=decimal, default=0)
    bn.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
    bn.add_argument("--csv")
    bn.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"structrsa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
