"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 resource cap exceeded, 3 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time

from .enum20v import count_20v, count_20v_explicit, count_20v_oracle, enumerate_20v
from .enum6v import enumerate_m6v, record, weighted_count_m6v
from .exactalg import FormulaParams, eval_df_formula, eval_free_boundary_formula
from .gtpat import GTPattern, enumerate_gt, omega_fsa, parse_rows, weighted_count_gt
from .lattice import BoundarySpec, CapExceeded, PathFamily
from .probbij import RNG_NAME, FiberSampler, sample_m6v
from . import verify as V

EXIT_OK, EXIT_FAIL, EXIT_CAP, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k(s: str) -> BoundarySpec:
    try:
        return BoundarySpec.parse(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({key: json.dumps(v, separators=(",", ":")) if isinstance(v, list) else v
                    for key, v in r.items()})
    return buf.getvalue().rstrip("\n")


class Out:
    def __init__(self, path: str | None):
        self.fh = open(path, "w") if path else sys.stdout

    def line(self, s: str):
        self.fh.write(s + "\n")

    def close(self):
        if self.fh is not sys.stdout:
            self.fh.close()


def cmd_count(args, out: Out) -> int:
    t0 = time.perf_counter()
    if args.model == "20v":
        if args.k is None:
            raise UsageError("count 20v needs --k")
        method = args.method or "dp"
        if method == "dp":
            res = count_20v(args.k).to_json()
        elif method == "explicit":
            res = count_20v_explicit(args.k).to_json()
        elif method == "oracle":
            res = {"k": list(args.k.k), "count": str(count_20v_oracle(args.k)), "method": "oracle"}
        else:
            raise UsageError(f"unknown method {method!r} for 20v")
    elif args.model == "m6v":
        if args.k is None:
            raise UsageError("count m6v needs --k")
        res = {"k": list(args.k.k)}
        if args.weighted:
            method = args.method or "explicit"
            if method not in ("explicit", "dp"):
                raise UsageError(f"unknown method {method!r} for m6v")
            res["sum_2_ic"] = str(weighted_count_m6v(args.k, method))
        else:
            method = "explicit"
            res["count"] = str(sum(1 for _ in enumerate_m6v(args.k)))
        res["method"] = method
    else:
        bottom = args.bottom or args.k
        if bottom is None:
            raise UsageError("count gt needs --bottom")
        res = {"bottom": list(bottom.k)}
        if args.weighted:
            method = args.method or "explicit"
            if method == "explicit":
                total = sum(omega_fsa(p) for p in enumerate_gt(bottom.k))
            elif method == "dp":
                total = weighted_count_gt(bottom.k)
            else:
                raise UsageError(f"unknown method {method!r} for gt")
            res["sum_omega_fsa"] = str(total)
        else:
            method = "explicit"
            res["count"] = str(sum(1 for _ in enumerate_gt(bottom.k)))
        res["method"] = method
    if args.timing:
        res["seconds"] = round(time.perf_counter() - t0, 6)
    if args.format == "text":
        out.line(next(v for key, v in res.items() if key in ("count", "sum_2_ic", "sum_omega_fsa")))
    elif args.format == "csv":
        out.line(_csv([res]))
    else:
        out.line(_dump(res))
    return EXIT_OK


def cmd_enumerate(args, out: Out) -> int:
    if args.model == "20v":
        for x in enumerate_20v(args.k, args.limit):
            out.line(x.dumps())
    elif args.model == "m6v":
        for x in enumerate_m6v(args.k, args.limit):
            rec = record(x).to_json()
            rec["k"] = list(args.k.k)
            out.line(_dump(rec))
    else:
        for t, p in enumerate(enumerate_gt(args.k.k)):
            if args.limit is not None and t >= args.limit:
                raise CapExceeded("enumerated patterns", args.limit)
            d = p.to_json()
            d["omega_fsa"] = str(omega_fsa(p))
            out.line(_dump(d))
    return EXIT_OK


def _suite_kwargs(name: str, args) -> dict:
    kw = dict(V.QUICK.get(name, {})) if args.quick else {}
    if name in ("thm42", "prop54", "thm52", "thm11"):
        for key in ("nmax", "kmax"):
            if getattr(args, key) is not None:
                kw[key] = getattr(args, key)
    elif name == "thm12":
        if args.nmax is not None:
            kw["nmax"] = args.nmax
        if args.m_max is not None:
            kw["mmax"] = args.m_max
    elif name == "lemma510":
        if args.size is not None:
            kw["size"] = args.size
    elif name == "equidist":
        if args.nmax is not None:
            kw["nmax"] = args.nmax
    if name != "ybe":
        kw["threads"] = args.threads
    return kw


def cmd_verify(args, out: Out) -> int:
    if args.replay:
        with open(args.replay) as fh:
            cfg = PathFamily.from_json(json.load(fh))
        results = [V.replay(cfg)]
    else:
        names = V.SUITES if args.suite == "all" else (args.suite,)
        results = [V.RUNNERS[name](**_suite_kwargs(name, args)) for name in names]
    if args.format == "csv":
        out.line(_csv([{"suite": r.suite, "checked": r.checked, "failed": r.failed, "ok": r.ok}
                       for r in results]))
    for r in results:
        if args.format == "text":
            out.line(f"{r.suite}: {r.checked - r.failed}/{r.checked} {'pass' if r.ok else 'FAIL'}")
        elif args.format == "json":
            out.line(_dump(r.to_json()))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_sample(args, out: Out) -> int:
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    if args.pattern:
        try:
            Tp = GTPattern(parse_rows(args.pattern))
        except ValueError as e:
            raise UsageError(f"bad pattern: {e}") from None
        if not Tp.is_triple_free():
            raise UsageError("pattern is not triple-free")
        sampler = FiberSampler(Tp)
        rng = random.Random(args.seed)
        for _ in range(args.count):
            x, p = sampler.draw(rng)
            out.line(_dump({"seed": args.seed, "rng": RNG_NAME, "sample": x.to_json(), "prob": str(p)}))
    elif args.bottom:
        for Tp, x, p in sample_m6v(args.bottom.k, args.seed, args.count):
            out.line(_dump({"seed": args.seed, "rng": RNG_NAME, "pattern": Tp.to_json(),
                            "sample": x.to_json(), "prob": str(p)}))
    else:
        raise UsageError("sample needs --pattern or --bottom")
    return EXIT_OK


def cmd_formula(args, out: Out) -> int:
    try:
        if args.which == "df":
            v = eval_df_formula(args.n)
        else:
            if args.m is None:
                raise UsageError("formula free needs --m")
            v = eval_free_boundary_formula(FormulaParams(args.n, args.m))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from None
    if args.format == "json":
        out.line(_dump({"formula": args.which, "n": args.n, "m": args.m, "value": str(v)}))
    else:
        out.line(str(v))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="icegt", description=__doc__.splitlines()[0])
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="count configurations or weighted patterns")
    c.add_argument("model", choices=("20v", "m6v", "gt"))
    c.add_argument("--k", type=_k, help="comma-separated strictly increasing boundary, e.g. 1,2,3")
    c.add_argument("--bottom", type=_k, help="bottom row for gt (same as --k)")
    c.add_argument("--method", help="20v: dp|explicit|oracle; m6v/gt weighted: explicit|dp")
    c.add_argument("--weighted", action="store_true", help="m6v: sum of 2^ic; gt: sum of omega_FSA")
    c.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    c.add_argument("--format", choices=("json", "csv", "text"), default="json")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("enumerate", help="stream configurations or patterns as JSON lines")
    e.add_argument("model", choices=("20v", "m6v", "gt"))
    e.add_argument("--k", type=_k, required=True)
    e.add_argument("--limit", type=int, default=None)
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=V.SUITES + ("all",), nargs="?", default="all")
    v.add_argument("--nmax", type=int)
    v.add_argument("--kmax", type=int)
    v.add_argument("--m-max", type=int, dest="m_max")
    v.add_argument("--size", type=int)
    v.add_argument("--quick", action="store_true", help="small ranges")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--replay", help="JSON configuration to re-check")
    v.add_argument("--format", choices=("json", "csv", "text"), default="json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sample", help="exact sampling from psi-fibers")
    s.add_argument("--pattern", help="GT pattern rows apex first, e.g. 2/2,3/2,3,3/1,2,3,4")
    s.add_argument("--bottom", type=_k, help="sample a mixed 6V configuration on M_k with law 2^ic")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sample)

    f = sub.add_parser("formula", help="evaluate a product formula")
    f.add_argument("which", choices=("df", "free"))
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--m", type=int)
    f.add_argument("--format", choices=("json", "text"), default="text")
    f.set_defaults(func=cmd_formula)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Out(args.output)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"icegt: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as e:
        print(f"icegt: {e} (raise it with ICEGT_MAX_STATES / ICEGT_MAX_CONFIGS)", file=sys.stderr)
        return EXIT_CAP
    except ValueError as e:
        print(f"icegt: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
