"""Batch command line front end.

Subcommands: todd, ct, ehrhart, ilp, bench.  Runs are reproducible:
all randomness flows from an explicit seed with a fixed default, and
identical (input, seed, primes) triples print byte-identical output.
Rational numbers print as num/den.  Exit codes: 0 success, 2 validation,
3 math domain, 4 resource cap.
"""

import argparse
import json
import random
import statistics
import sys
import time

from fractions import Fraction

import numpy as np

from . import series
from .bsct import DEFAULT_K0, ILPInstance, bsct_solve
from .ctgtodd import GToddConstantTermProblem, ct_gtodd
from .errors import (DuplicatePrime, MathDomainError, ParseError,
                     ResourceError, ValidationError, DegreeOverflow)
from .modfield import crt_rational, make_field
from .mpa import (COMBINE_CAP, combine_rational, parse_shortsum, pick_gamma,
                  solve_basic)
from .regseries import monomials_upto
from .series import TruncSeries
from .toddgen import GToddSpec, MultiSetZ, TDescriptor, gtodd

DEFAULT_SEED = 20240821
DEFAULT_PRIMES = "469762049,167772161,754974721"
DEFAULT_ILP_PRIMES = "469762049,167772161"


# ---------------------------------------------------------------------------
# input parsing helpers
# ---------------------------------------------------------------------------


def _parse_primes(text: str):
    try:
        primes = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"bad prime list {text!r}")
    if not primes:
        raise ValidationError("need at least one prime")
    if len(set(primes)) != len(primes):
        raise DuplicatePrime(f"primes must be pairwise distinct: {text}")
    return primes


def _parse_seed(text: str) -> int:
    if text == "random":
        seed = random.SystemRandom().randrange(1 << 62)
        print(f"# seed {seed}", file=sys.stderr)
        return seed
    try:
        return int(text)
    except ValueError:
        raise ValidationError(
            f"seed must be an integer or 'random', got {text!r}")


def _parse_int_list(text: str, what: str):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"bad {what} list {text!r}")
    if not vals:
        raise ValidationError(f"{what} list is empty")
    return vals


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}")


def _load_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}")


def _as_fraction(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError(
            f"{where}: expected an integer or 'num/den' string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: bad rational {v!r}")


def _as_int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _as_multiset(v, where: str) -> MultiSetZ:
    if v is None:
        return MultiSetZ()
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list")
    return MultiSetZ([_as_fraction(e, where) for e in v])


def _as_tdescriptor(v, where: str) -> TDescriptor:
    if not isinstance(v, dict):
        raise ParseError(f"{where}: expected an object with kind and value")
    kind = v.get("kind")
    value = v.get("value")
    if kind == "numeric":
        value = _as_fraction(value, where + ".value")
    elif kind == "monomial":
        value = _as_int(value, where + ".value")
    return TDescriptor(kind, value)


def _as_pairs(v, where: str):
    if v is None:
        return []
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list")
    out = []
    for i, item in enumerate(v):
        w = f"{where}[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{w}: expected an object")
        out.append((_as_multiset(item.get("B"), w + ".B"),
                    _as_multiset(item.get("Bbar"), w + ".Bbar"),
                    _as_tdescriptor(item.get("t"), w + ".t")))
    return out


def _rational_column(residues, primes) -> str:
    return str(crt_rational(list(zip(residues, primes))))


def _b_text(b) -> str:
    return ",".join(str(v) for v in b) if b else "-"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_todd(args):
    primes = _parse_primes(args.primes)
    data = _load_json(args.spec)
    if not isinstance(data, dict):
        raise ParseError(f"{args.spec}: expected a JSON object")
    d = args.d if args.d is not None else data.get("d")
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValidationError("d must be a positive integer")
    for p in primes:
        if p <= d:
            raise ValidationError(f"prime {p} must exceed d = {d}")
    spec = GToddSpec(_as_fraction(data.get("a", 0), "a"),
                     _as_multiset(data.get("B0"), "B0"),
                     _as_multiset(data.get("B0bar"), "B0bar"),
                     _as_pairs(data.get("pairs"), "pairs"),
                     d)
    results = [gtodd(make_field(p), spec) for p in primes]
    r = spec.r
    rows = []
    for k in range(d):
        monos = monomials_upto(r, k)[0] if r else [()]
        for j, e in enumerate(monos):
            residues = [int(res.rows[k][j]) for res in results]
            row = {"k": k, "e": list(e), "residues": residues}
            if len(primes) >= 2:
                row["rational"] = _rational_column(residues, primes)
            rows.append(row)
    if args.json:
        print(json.dumps({"d": d, "r": r, "primes": primes, "rows": rows},
                         sort_keys=True))
        return
    for row in rows:
        label = f"gtd_{row['k']}"
        if r:
            label += "[" + ",".join(str(v) for v in row["e"]) + "]"
        cells = [label] + [str(v) for v in row["residues"]]
        if "rational" in row:
            cells.append(row["rational"])
        print("\t".join(cells))


def _ct_problem(data, where: str) -> GToddConstantTermProblem:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected a JSON object")
    raw_L = data.get("L")
    if not isinstance(raw_L, list) or not raw_L:
        raise ParseError(f"{where}: L must be a nonempty list of [c, e]")
    L = []
    for i, item in enumerate(raw_L):
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError(f"{where}: L[{i}] must be a [c, e] pair")
        L.append((_as_fraction(item[0], f"L[{i}].c"),
                  _as_fraction(item[1], f"L[{i}].e")))
    return GToddConstantTermProblem(
        L,
        _as_multiset(data.get("B0"), "B0"),
        _as_multiset(data.get("B0bar"), "B0bar"),
        _as_pairs(data.get("pairs"), "pairs"),
        t_shift=_as_int(data.get("t_shift", 0), "t_shift"))


def cmd_ct(args):
    primes = _parse_primes(args.primes)
    problem = _ct_problem(_load_json(args.problem), args.problem)
    results = [ct_gtodd(problem, p) for p in primes]
    if results[0].is_scalar:
        residues = [res.scalar for res in results]
        payload = {"kind": "scalar", "primes": primes, "residues": residues}
        if len(primes) >= 2:
            payload["rational"] = _rational_column(residues, primes)
        if args.json:
            print(json.dumps(payload, sort_keys=True))
            return
        cells = ["ct"] + [str(v) for v in residues]
        if "rational" in payload:
            cells.append(payload["rational"])
        print("\t".join(cells))
        return
    blocks = [{"prime": p,
               "terms": [[t.eps, t.a, list(t.b)] for t in res.terms]}
              for p, res in zip(primes, results)]
    if args.json:
        print(json.dumps({"kind": "terms", "primes": primes,
                          "blocks": blocks}, sort_keys=True))
        return
    for block in blocks:
        print(f"prime\t{block['prime']}")
        for eps, a, b in block["terms"]:
            print(f"term\t{eps}\t{a}\t{_b_text(b)}")


def cmd_ehrhart(args):
    primes = _parse_primes(args.primes)
    seed = _parse_seed(args.seed)
    shortsum = parse_shortsum(_read_text(args.shortsum))
    if shortsum.m != 1:
        raise ValidationError("series assembly needs one surviving variable")
    out = []
    for p in primes:
        ctx = make_field(p)
        gamma = pick_gamma(shortsum, ctx, seed)
        terms = solve_basic(shortsum, gamma, ctx)
        try:
            rf = combine_rational(terms, ctx, cap=args.cap)
        except DegreeOverflow:
            # past the cap the uncombined terms are still a full answer
            out.append({"prime": p,
                        "terms": [[t.eps, t.a, list(t.b)] for t in terms]})
            continue
        out.append({"prime": p, "text": str(rf),
                    "num": [int(v) for v in rf.num],
                    "den": [int(v) for v in rf.den],
                    "offset": rf.offset,
                    "den_factors": [[b, m] for b, m in rf.den_factors]})
    if args.json:
        print(json.dumps({"primes": primes, "results": out}, sort_keys=True))
        return
    for block in out:
        if "text" in block:
            print(f"{block['prime']}\t{block['text']}")
        else:
            print(f"{block['prime']}\toverflow")
            for eps, a, b in block["terms"]:
                print(f"{block['prime']}\tterm\t{eps}\t{a}\t{_b_text(b)}")


def cmd_ilp(args):
    primes = _parse_primes(args.primes)
    if len(primes) < 2:
        raise ValidationError("ilp needs at least two primes")
    seed = _parse_seed(args.seed)
    cost = _parse_int_list(args.cost, "cost") if args.cost else None
    if args.shortsum is not None:
        if args.weights is not None or args.rhs is not None:
            raise ValidationError(
                "give either --shortsum or --weights/--rhs, not both")
        if cost is None:
            raise ValidationError("--shortsum needs a --cost vector")
        problem = parse_shortsum(_read_text(args.shortsum))
    else:
        if args.weights is None or args.rhs is None:
            raise ValidationError("need --shortsum or --weights and --rhs")
        if cost is None:
            raise ValidationError("an instance needs a --cost vector")
        problem = ILPInstance(_parse_int_list(args.weights, "weights"),
                              args.rhs, cost, args.relation)
        cost = None
    ctxs = [make_field(p) for p in primes]
    value = bsct_solve(problem, ctxs, cost=cost, mode=args.mode, k0=args.k0,
                       seed=seed, exact=args.exact, ub=args.ub)
    if args.json:
        print(json.dumps({"mode": args.mode, "optimum": value},
                         sort_keys=True))
        return
    print(value)


_FAST_PATH = {"exp": series.exp, "log": series.log, "inv": series.inv}
_SCHOOLBOOK_PATH = {"exp": series.exp_schoolbook, "log": series.log_schoolbook,
                    "inv": series.inv_schoolbook}


def _bench_input(ctx, op: str, d: int) -> TruncSeries:
    rng = np.random.default_rng(12345)
    arr = rng.integers(0, ctx.p, size=d, dtype=np.int64)
    arr[0] = 0 if op == "exp" else 1
    return TruncSeries(ctx, arr)


def bench_rows(ctx, ops, ds, repeats: int):
    """Median wall seconds per (op, path, d); first call at the smallest
    d is run untimed to absorb one-time compilation."""
    rows = []
    for op in ops:
        if op not in _FAST_PATH:
            raise ValidationError(f"unknown bench op {op!r}")
    for d in ds:
        if d < 1:
            raise ValidationError("bench sizes must be positive")
        if d >= ctx.p:
            raise ValidationError(f"prime {ctx.p} must exceed d = {d}")
    for op in ops:
        for path, fn in (("fast", _FAST_PATH[op]),
                         ("schoolbook", _SCHOOLBOOK_PATH[op])):
            fn(_bench_input(ctx, op, min(ds)))
            for d in ds:
                f = _bench_input(ctx, op, d)
                times = []
                for _ in range(repeats):
                    t0 = time.perf_counter()
                    fn(f)
                    times.append(time.perf_counter() - t0)
                rows.append((op, path, d, statistics.median(times)))
    return rows


def cmd_bench(args):
    ops = [s for s in args.ops.split(",") if s.strip()]
    if not ops:
        raise ValidationError("ops list is empty")
    ds = _parse_int_list(args.ds, "ds")
    if args.repeats < 1:
        raise ValidationError("repeats must be positive")
    ctx = make_field(args.prime)
    print("op,path,d,seconds")
    for op, path, d, seconds in bench_rows(ctx, ops, ds, args.repeats):
        print(f"{op},{path},{d},{seconds:.6f}")


# ---------------------------------------------------------------------------
# argument parser and entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toddct",
        description="Todd coefficients, constant terms, Ehrhart series and "
                    "knapsack optima over prime fields")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("todd", help="generalized Todd coefficients")
    t.add_argument("--spec", required=True,
                   help="JSON file with a, d, B0, B0bar, pairs")
    t.add_argument("--d", type=int, default=None,
                   help="override the truncation order from the file")
    t.add_argument("--primes", default=DEFAULT_PRIMES,
                   help="comma separated primes")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_todd)

    c = sub.add_parser("ct", help="constant term of a generalized Todd type")
    c.add_argument("--problem", required=True,
                   help="JSON file with L, B0, B0bar, pairs, t_shift")
    c.add_argument("--primes", default=DEFAULT_PRIMES)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_ct)

    e = sub.add_parser("ehrhart",
                       help="rational generating function from a short sum")
    e.add_argument("--shortsum", required=True, help="short sum JSON file")
    e.add_argument("--primes", default=DEFAULT_PRIMES)
    e.add_argument("--seed", default=str(DEFAULT_SEED),
                   help="integer or 'random'")
    e.add_argument("--cap", type=int, default=COMBINE_CAP,
                   help="combined-degree cap before falling back to a "
                        "term list")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_ehrhart)

    i = sub.add_parser("ilp", help="optimize a cost over an encoded "
                                   "feasible set")
    i.add_argument("--shortsum", help="short sum JSON file (z variables)")
    i.add_argument("--cost", help="comma separated cost vector")
    i.add_argument("--weights", help="comma separated knapsack weights")
    i.add_argument("--rhs", type=int, default=None, help="right hand side")
    i.add_argument("--relation", choices=("eq", "le"), default="eq")
    i.add_argument("--mode", choices=("max", "min"), default="max")
    i.add_argument("--k0", type=int, default=DEFAULT_K0,
                   help="initial probe length")
    i.add_argument("--primes", default=DEFAULT_ILP_PRIMES,
                   help="two or more comma separated primes")
    i.add_argument("--seed", default=str(DEFAULT_SEED),
                   help="integer or 'random'")
    i.add_argument("--exact", action="store_true",
                   help="rational reconstruction instead of the two-prime "
                        "zero test")
    i.add_argument("--ub", type=int, default=None,
                   help="upper bound for the doubling phase")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_ilp)

    b = sub.add_parser("bench", help="CSV timing curves, fast vs schoolbook")
    b.add_argument("--ops", default="exp,log,inv")
    b.add_argument("--ds", default="4096,8192,16384,32768")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--prime", type=int, default=469762049)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as e:
        return _fail(e, 2)
    except MathDomainError as e:
        return _fail(e, 3)
    except ResourceError as e:
        return _fail(e, 4)
    return 0


def _fail(err, code: int) -> int:
    print(f"error: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
