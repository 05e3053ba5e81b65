"""Command-line entry point.

Machine-readable data goes to stdout; progress, resolved field specs, and
violation diagnostics go to stderr.  Exit codes: 0 success, 1 a verification
found a violated inequality (an implementation bug; the violating instance is
printed in replayable form), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .ffield import FieldError, field_from_spec, subfields
from .garaev import check_hypothesis, run_main_theorem, verify_certificate
from .report import aggregate, render_figures, render_tsv
from .search import (DEFAULT_BUDGET, BudgetExceeded, SearchConfig, StoreError,
                     exhaustive_min, merge_results, random_scan, read_cursor,
                     read_store, write_cursor)
from .setalg import (diffset, dilate, parse_eset, productset, quotientset,
                     ratio_of_differences, sumset, translate)
from .suites import SUITES, run_suite

EXHAUSTIVE_BLOCK = 65536


def _announce(ctx):
    print(f"# field {ctx.spec}", file=sys.stderr)


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default_jobs() -> int:
    return os.cpu_count() or 1


def cmd_field_info(args) -> int:
    ctx = field_from_spec(args.field)
    _announce(ctx)
    terms = []
    for i, c in enumerate(ctx.modulus):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            xs = "x" if i == 1 else f"x^{i}"
            terms.append(xs if c == 1 else f"{c}*{xs}")
    modulus_poly = "+".join(terms) if terms else "0"
    lines = [
        f"spec\t{ctx.spec}",
        f"p\t{ctx.p}",
        f"k\t{ctx.k}",
        f"q\t{ctx.q}",
        f"modulus\t{modulus_poly}",
        f"generator\t{ctx.generator if ctx.generator is not None else '-'}",
        "subfield_sizes\t" + ",".join(str(G.size) for G in subfields(ctx)),
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_setop(args) -> int:
    ctx = field_from_spec(args.field)
    _announce(ctx)
    op = args.op
    arity = 2 if op in ("sum", "diff", "product", "quotient") else 1
    if len(args.sets) != arity:
        raise ValueError(f"{op} takes exactly {arity} set argument(s), "
                         f"got {len(args.sets)}")
    A = parse_eset(ctx, args.sets[0])
    if op in ("sum", "diff", "product", "quotient"):
        B = parse_eset(ctx, args.sets[1])
        fn = {"sum": sumset, "diff": diffset,
              "product": productset, "quotient": quotientset}[op]
        result = fn(A, B)
    elif op == "dilate":
        if args.c is None:
            raise ValueError("dilate needs --c")
        result = dilate(args.c, A)
    elif op == "translate":
        if args.d is None:
            raise ValueError("translate needs --d")
        result = translate(A, args.d)
    elif op == "ratio":
        result = ratio_of_differences(A)
    else:
        raise ValueError(f"unknown set operation {op!r}")
    _emit(result.render() + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    ctx = field_from_spec(args.field)
    _announce(ctx)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    jobs = args.jobs if args.jobs else _default_jobs()
    all_lines: list[str] = []
    all_violations: list[str] = []
    for name in names:
        lines, violations = run_suite(ctx, name, args.trials, args.seed, jobs=jobs)
        all_lines.extend(lines)
        all_violations.extend(violations)
    _emit("\n".join(all_lines) + ("\n" if all_lines else ""), args.out)
    for v in all_violations:
        print(f"VIOLATION {v}", file=sys.stderr)
    if all_violations:
        return 1
    print(f"# verified {len(all_lines)} inequality instances, 0 violations",
          file=sys.stderr)
    return 0


def cmd_garaev_run(args) -> int:
    ctx = field_from_spec(args.field)
    _announce(ctx)
    A = parse_eset(ctx, args.set)
    cert = run_main_theorem(A)
    if not verify_certificate(cert, A):
        print(f"VIOLATION certificate replay failed: field={ctx.spec} "
              f"set={A.render()}", file=sys.stderr)
        return 1
    _emit(cert.to_text() + "\n", args.out)
    return 0


def cmd_hypothesis_check(args) -> int:
    ctx = field_from_spec(args.field)
    _announce(ctx)
    A = parse_eset(ctx, args.set)
    alpha = _parse_alpha(args.alpha)
    violations = check_hypothesis(A, alpha)
    _emit("".join(v.to_tsv() + "\n" for v in violations), args.out)
    print(f"# {len(violations)} hypothesis violations for |A|={A.card}",
          file=sys.stderr)
    return 0


def _parse_alpha(text: str) -> Fraction:
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def cmd_search(args) -> int:
    ctx = field_from_spec(args.field)
    _announce(ctx)
    jobs = args.jobs if args.jobs else _default_jobs()
    exclude_zero = not args.include_zero

    if args.mode == "random":
        config = SearchConfig("random", args.m, sample_count=args.trials,
                              seed=args.seed, exclude_zero=exclude_zero,
                              hypothesis_filter=args.hypothesis_filter,
                              classify=not args.no_classify)
        records = random_scan(ctx, config, jobs=jobs)
        if args.out:
            merged = merge_results(args.out, records, field_spec=ctx.spec)
            print(f"# merged {len(records)} records, store now holds "
                  f"{len(merged)}", file=sys.stderr)
        else:
            _emit("".join(r.to_tsv() + "\n" for r in records), None)
        return 0

    # exhaustive
    import math
    ground_n = ctx.q - 1 if exclude_zero else ctx.q
    total = math.comb(ground_n, args.m)
    if total > args.budget:
        raise BudgetExceeded(f"C({ground_n},{args.m}) = {total} exceeds "
                             f"budget {args.budget}")
    if args.out:
        start = 0
        if args.resume:
            cur = read_cursor(args.out)
            if cur is not None:
                start = cur
        pos = start
        while pos < total:
            hi = min(pos + EXHAUSTIVE_BLOCK, total)
            records = exhaustive_min(ctx, args.m, exclude_zero=exclude_zero,
                                     budget=args.budget, jobs=jobs,
                                     rank_range=(pos, hi))
            merge_results(args.out, records, field_spec=ctx.spec)
            write_cursor(args.out, hi)
            pos = hi
        print(f"# exhaustive scan complete: {total} subsets", file=sys.stderr)
        return 0
    records = exhaustive_min(ctx, args.m, exclude_zero=exclude_zero,
                             budget=args.budget, jobs=jobs)
    _emit("".join(r.to_tsv() + "\n" for r in records), None)
    return 0


def cmd_report(args) -> int:
    records = []
    for path in args.stores:
        _, recs = read_store(path)
        records.extend(recs)
    rows = aggregate(records)
    _emit(render_tsv(rows), args.out)
    if args.figures:
        written = render_figures(rows, args.figures)
        for path in written:
            print(f"# figure {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumset-forge",
        description="exact sumset/product-set growth verification and search "
                    "over finite fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="describe a field model")
    p.add_argument("field", help='field spec "p^k" or "p^k:c0,...,ck"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("setop", help="apply a set operation")
    p.add_argument("op", choices=["sum", "diff", "product", "quotient",
                                  "dilate", "translate", "ratio"])
    p.add_argument("field")
    p.add_argument("sets", nargs="+",
                   help='set literals "{1,2,3}" or "maskhex:<hex>"')
    p.add_argument("--c", type=int, help="dilation factor")
    p.add_argument("--d", type=int, help="translation offset")
    p.add_argument("--out")
    p.set_defaults(func=cmd_setop)

    p = sub.add_parser("verify", help="run randomized verification suites")
    p.add_argument("--field", required=True)
    p.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=0,
                   help="parallel workers (default: all cores)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("garaev-run", help="run the growth pipeline on a set")
    p.add_argument("--field", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_garaev_run)

    p = sub.add_parser("hypothesis-check",
                       help="list heavy subfield-image intersections")
    p.add_argument("--field", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--alpha", default="47/48",
                   help='exponent threshold as "num/den"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_hypothesis_check)

    p = sub.add_parser("search", help="search m-subsets for minimal growth")
    p.add_argument("--field", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "random"],
                   default="exhaustive")
    p.add_argument("--trials", type=int, default=1000,
                   help="sample count for random mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--include-zero", action="store_true")
    p.add_argument("--hypothesis-filter", action="store_true")
    p.add_argument("--no-classify", action="store_true",
                   help="skip per-record pipeline classification")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", help="store file to merge results into")
    p.add_argument("--resume", action="store_true",
                   help="continue an exhaustive scan from the cursor")
    p.add_argument("--jobs", type=int, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("report", help="aggregate stores into plot-ready TSV")
    p.add_argument("stores", nargs="+")
    p.add_argument("--out")
    p.add_argument("--figures", help="directory for rendered figures")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (FieldError, StoreError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
