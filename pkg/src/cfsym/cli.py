"""Command-line front end.

Digit strings are entered as comma-separated positive integers (3,1,4).
Exact values are always printed alongside floats: chi as an integer,
probabilities as log2(num/den) plus a decimal.  Exit codes: 0 success,
1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import families as families_mod
from . import measurelab
from . import symmetry as symmetry_mod
from . import verify as verify_mod
from .census import (census, estimated_evaluations, list_exceptional, ratio_series,
                     render_census_csv, render_census_jsonl)
from .core import DigitString, evaluate, fundamental_interval
from .errors import CfsymError, DomainError
from .gkmeasure import chi, pgk_exact, pgk_float
from .symmetry import symmetry_report


def _parse_digits(text: str) -> DigitString:
    return DigitString.parse(text)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise DomainError(f"cannot parse integer list from {text!r}") from exc


def _emit_rows(rows: list[dict], columns: list[str], fmt: str, out) -> None:
    if fmt == "csv":
        print(",".join(columns), file=out)
        for row in rows:
            print(",".join(str(row[c]) for c in columns), file=out)
    elif fmt == "json":
        for row in rows:
            print(json.dumps(row, sort_keys=True), file=out)
    else:
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in columns}
        print("  ".join(c.ljust(widths[c]) for c in columns), file=out)
        for row in rows:
            print("  ".join(str(row[c]).ljust(widths[c]) for c in columns), file=out)


def _interval_str(a: DigitString) -> str:
    iv = fundamental_interval(a)
    if iv.orientation > 0:
        return f"[{iv.included}, {iv.excluded})"
    return f"({iv.excluded}, {iv.included}]"


def _pgk_str(a: DigitString) -> str:
    return f"{pgk_exact(a)} = {pgk_float(a):.10g}"


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_eval(args, out):
    a = _parse_digits(args.digits)
    value = evaluate(a)
    print(f"[0;{a}] = {value} = {float(value):.15g}", file=out)
    return 0


def _cmd_interval(args, out):
    a = _parse_digits(args.digits)
    iv = fundamental_interval(a)
    print(f"I({a}) = {_interval_str(a)}", file=out)
    print(f"included={iv.included} excluded={iv.excluded} "
          f"orientation={iv.orientation:+d} width={iv.width}", file=out)
    return 0


def _cmd_chi(args, out):
    a = _parse_digits(args.digits)
    c = chi(a)
    print(f"chi({a}) = {c.value} (length {'odd' if c.odd_length else 'even'})", file=out)
    return 0


def _cmd_pgk(args, out):
    a = _parse_digits(args.digits)
    print(f"P({a}) = {_pgk_str(a)}", file=out)
    return 0


def _cmd_perms(args, out):
    a = _parse_digits(args.digits)
    rows = []
    for perm in symmetry_mod.distinct_permutations(a):
        p = DigitString(perm)
        rows.append({
            "string": str(p),
            "interval": _interval_str(p),
            "chi": chi(p).value,
            "pgk": str(pgk_exact(p)),
            "pgk_float": f"{pgk_float(p):.10g}",
        })
    _emit_rows(rows, ["string", "interval", "chi", "pgk", "pgk_float"], args.format, out)
    return 0


def _cmd_symmetries(args, out):
    a = _parse_digits(args.digits)
    report = symmetry_report(a, args.bound)
    print(f"subject       {report.subject}", file=out)
    print(f"exceptional   {report.is_exceptional}", file=out)
    if report.nu is not None:
        print(f"nu            {report.nu} (bound n!/2 = {report.half_factorial_bound})",
              file=out)
    if report.nontrivial_partners:
        for partner in report.nontrivial_partners:
            print(f"partner       {partner}   chi={chi(partner).value}", file=out)
    else:
        print("partner       none", file=out)
    return 0


def _cmd_nu(args, out):
    digits = _parse_int_list(args.digits)
    value = symmetry_mod.nu(digits, args.bound)
    half = math.factorial(len(digits)) // 2
    eps = symmetry_mod.epsilon_defect(digits, args.bound)
    print(f"nu({sorted(digits)}) = {value}", file=out)
    print(f"n!/2 = {half}  exceptional = {value < half}  epsilon = {eps}", file=out)
    return 0


def _cmd_census(args, out):
    report = _parse_int_list(args.report) if args.report else None

    def progress(done, total):
        print(f"census: {done}/{total} partitions", file=sys.stderr)

    # long runs report partition progress on stderr; stdout stays parseable
    long_run = estimated_evaluations(args.n, args.N) > 5 * 10 ** 7
    rows = census(
        n=args.n,
        n_max=args.N,
        report_points=report,
        workers=args.workers,
        force=args.force,
        checkpoint=args.checkpoint,
        progress=progress if (args.progress or long_run) else None,
    )
    include_elapsed = not args.no_elapsed
    if args.format == "json":
        out.write(render_census_jsonl(rows, include_elapsed))
    elif args.format == "csv":
        out.write(render_census_csv(rows, include_elapsed))
    else:
        table = [
            {
                "n": r.n, "N": r.N, "total": r.total, "f": r.f,
                "f/N": f"{r.f / r.N:.4f}",
                "delta": f"{float(r.delta):.6g}",
                "delta_exact": f"{r.f}/{r.total}",
                "elapsed": f"{r.elapsed:.3f}s" if include_elapsed else "",
            }
            for r in rows
        ]
        _emit_rows(table, ["n", "N", "total", "f", "f/N", "delta", "delta_exact", "elapsed"],
                   "table", out)
    return 0


def _cmd_exceptional(args, out):
    count = 0
    for rec in list_exceptional(args.n, args.N, force=args.force):
        count += 1
        if args.format == "json":
            print(json.dumps({
                "digits": list(rec.digits),
                "nu": rec.nu,
                "chi": rec.chi_value,
                "witness": [str(rec.witness[0]), str(rec.witness[1])],
            }, sort_keys=True), file=out)
        else:
            print(f"{{{','.join(map(str, rec.digits))}}}  nu={rec.nu}  "
                  f"witness: {rec.witness[0]} ~ {rec.witness[1]} (chi={rec.chi_value})",
                  file=out)
    print(f"total: {count} exceptional sets", file=sys.stderr)
    return 0


def _cmd_families(args, out):
    params = tuple(_parse_int_list(args.params))
    if not params:
        raise DomainError("at least one family parameter is required")
    if args.kind == "concluding":
        a, b = families_mod.concluding_family(params[0])
        print(f"pair: {a}  ~  {b}   chi={chi(a).value}", file=out)
        return 0
    if args.kind == "a_plus":
        base = families_mod.stable_family(
            families_mod.FamilySpec("stable", args.n - 2, params))
        plus, sigma = families_mod.a_plus(base)
        print(f"stable base: {base}", file=out)
        print(f"pair: {plus}  ~  {sigma}   chi={chi(plus).value}", file=out)
        return 0
    spec = families_mod.FamilySpec(args.kind, args.n, params, s=args.s)
    a = families_mod.stable_family(spec)
    kind = "stable" if args.kind == "stable" else f"{args.s}-stable"
    print(f"{kind}: {a}   (p = {'2' if args.s == 1 else args.s ** 2 + args.s}*q')",
          file=out)
    return 0


def _cmd_aplus(args, out):
    a = _parse_digits(args.digits)
    plus, sigma = families_mod.a_plus(a)
    print(f"a+      = {plus}", file=out)
    print(f"sigma   = {sigma}", file=out)
    print(f"chi     = {chi(plus).value} (both)", file=out)
    print(f"P       = {_pgk_str(plus)}", file=out)
    return 0


def _print_checks(results, out) -> int:
    failures = 0
    for res in results:
        status = "ok" if res.ok else "FAIL"
        detail = f"  {res.detail}" if res.detail else ""
        print(f"{status:4} {res.name} ({res.checked} cases){detail}", file=out)
        failures += 0 if res.ok else 1
    return 0 if failures == 0 else 1


def _cmd_verify(args, out):
    if args.what == "theorem3i":
        res = verify_mod.run_theorem3i(args.max_digit)
        if res.ok:
            print(f"no nontrivial symmetry found among all {args.max_digit}^3 "
                  f"length-3 strings with digits <= {args.max_digit} (0 exceptions)",
                  file=out)
            return 0
        return _print_checks([res], out)
    if args.what == "families":
        return _print_checks(
            verify_mod.run_families(args.param_max, args.concluding_max,
                                    args.s_max, args.s_param_max), out)
    return _print_checks(
        verify_mod.run_invariant_suites(args.count, args.seed, args.normalization_max),
        out)


def _cmd_measurelab(args, out):
    if args.what == "perturb":
        a0 = _parse_digits(args.a0)
        density = measurelab.perturbed_density(a0, args.epsilon)
        iv = fundamental_interval(a0)
        lo, hi = float(iv.lo), float(iv.hi)
        bump_measure = measurelab.measure_of(density, iv, tol=args.tol)
        gk_measure = measurelab.measure_of(measurelab.GAUSS_KUZMIN, iv, tol=args.tol,
                                           method="quadrature")
        print(f"a0={a0}  I(a0)=[{iv.lo}, {iv.hi}]  epsilon={args.epsilon} "
              f"(max {measurelab.epsilon_max(a0):.6g})", file=out)
        print(f"f(alpha)={density(lo):.12g}  f_gk(alpha)={measurelab.GAUSS_KUZMIN(lo):.12g}",
              file=out)
        print(f"f(beta) ={density(hi):.12g}  f_gk(beta) ={measurelab.GAUSS_KUZMIN(hi):.12g}",
              file=out)
        print(f"integral over I(a0): perturbed={bump_measure:.12g} gk={gk_measure:.12g}",
              file=out)
        print(f"total mass = {measurelab.total_mass(density, args.tol):.12g}", file=out)
        return 0
    if args.what == "defect":
        a0 = _parse_digits(args.a0)
        a = _parse_digits(args.string)
        density = measurelab.perturbed_density(a0, args.epsilon)
        defect = measurelab.symmetry_defect(density, a, tol=args.tol)
        print(f"defect mu(I({a})) - mu(I({a.reverse})) = {defect:.6e}", file=out)
        return 0
    a = _parse_digits(args.string)
    t_values = _parse_int_list(args.t)
    trace = measurelab.lemma5_trace(a, t_values)
    print(f"base {trace.base}: r = {trace.r}, limit 1/(1+r) = {trace.limit}", file=out)
    rows = [
        {
            "t": t,
            "delta": str(delta),
            "eps": str(eps),
            "ratio": str(ratio),
            "ratio_float": f"{float(ratio):.12g}",
        }
        for t, delta, eps, ratio in trace.samples
    ]
    _emit_rows(rows, ["t", "delta", "eps", "ratio", "ratio_float"], "table", out)
    return 0


def _cmd_montecarlo(args, out):
    result = measurelab.montecarlo_frequency(
        _parse_digits(args.target),
        sample_count=args.samples,
        digits_per_sample=args.digits,
        seed=args.seed,
        workers=args.workers,
    )
    print(f"target {result.target}: empirical {result.empirical:.7f} "
          f"expected {result.expected:.7f} "
          f"({result.occurrences}/{result.windows} windows, seed={result.seed})",
          file=out)
    return 0


def _cmd_plotdata(args, out):
    if args.figure != "fN4_ratio":
        raise DomainError(f"unknown figure {args.figure!r}")
    for N, ratio in ratio_series(args.N, n=4, workers=args.workers,
                                            force=args.force):
        print(f"{N},{float(ratio):.4f}", file=out)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfsym",
        description="Gauss-Kuzmin frequencies of continued-fraction digit "
                    "strings and their permutation symmetries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("eval", help="exact value of [0;a1,...,an]")
    p.add_argument("digits")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("interval", help="fundamental interval I(a)")
    p.add_argument("digits")
    p.set_defaults(handler=_cmd_interval)

    p = sub.add_parser("chi", help="characteristic number")
    p.add_argument("digits")
    p.set_defaults(handler=_cmd_chi)

    p = sub.add_parser("pgk", help="exact Gauss-Kuzmin probability")
    p.add_argument("digits")
    p.set_defaults(handler=_cmd_pgk)

    p = sub.add_parser("perms", help="all distinct permutations with chi and probability")
    p.add_argument("digits")
    add_format(p)
    p.set_defaults(handler=_cmd_perms)

    p = sub.add_parser("symmetries", help="nontrivial symmetry partners of a string")
    p.add_argument("digits")
    p.add_argument("--bound", type=int, default=None,
                   help="maximum string length (default 10)")
    p.set_defaults(handler=_cmd_symmetries)

    p = sub.add_parser("nu", help="distinct probabilities over orderings of a digit set")
    p.add_argument("digits")
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(handler=_cmd_nu)

    p = sub.add_parser("census", help="census of exceptional digit sets")
    p.add_argument("--n", type=int, required=True, help="string length")
    p.add_argument("--N", type=int, required=True, help="digit ceiling N_max")
    p.add_argument("--report", default=None,
                   help="comma-separated report points (default: standard grid)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--force", action="store_true",
                   help="run past the evaluation budget")
    p.add_argument("--checkpoint", default=None, help="JSON checkpoint file")
    p.add_argument("--no-elapsed", action="store_true",
                   help="blank the elapsed column for byte-stable output")
    p.add_argument("--progress", action="store_true",
                   help="print partition progress to stderr")
    add_format(p)
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser("exceptional", help="stream exceptional sets with witnesses")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--force", action="store_true")
    add_format(p)
    p.set_defaults(handler=_cmd_exceptional)

    p = sub.add_parser("families", help="build family members (stable, s-stable, ...)")
    p.add_argument("--kind", choices=("stable", "s_stable", "a_plus", "concluding"),
                   default="stable")
    p.add_argument("--n", type=int, default=4, help="string length")
    p.add_argument("--params", required=True, help="comma-separated parameters")
    p.add_argument("--s", type=int, default=1, help="s for s-stable")
    p.set_defaults(handler=_cmd_families)

    p = sub.add_parser("aplus", help="a+ pair of a stable string")
    p.add_argument("digits")
    p.set_defaults(handler=_cmd_aplus)

    p = sub.add_parser("verify", help="run verification suites")
    vsub = p.add_subparsers(dest="what", required=True)
    v = vsub.add_parser("theorem3i")
    v.add_argument("--max-digit", type=int, default=40)
    v.set_defaults(handler=_cmd_verify)
    v = vsub.add_parser("families")
    v.add_argument("--param-max", type=int, default=50)
    v.add_argument("--concluding-max", type=int, default=100)
    v.add_argument("--s-max", type=int, default=10)
    v.add_argument("--s-param-max", type=int, default=50)
    v.set_defaults(handler=_cmd_verify)
    v = vsub.add_parser("invariants")
    v.add_argument("--count", type=int, default=verify_mod.DEFAULT_COUNT)
    v.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)
    v.add_argument("--normalization-max", type=int, default=10_000)
    v.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("measurelab", help="density and quadrature experiments")
    msub = p.add_subparsers(dest="what", required=True)
    m = msub.add_parser("perturb")
    m.add_argument("--a0", required=True)
    m.add_argument("--epsilon", type=float, required=True)
    m.add_argument("--tol", type=float, default=measurelab.DEFAULT_TOL)
    m.set_defaults(handler=_cmd_measurelab)
    m = msub.add_parser("defect")
    m.add_argument("--a0", required=True)
    m.add_argument("--epsilon", type=float, required=True)
    m.add_argument("--string", required=True)
    m.add_argument("--tol", type=float, default=measurelab.DEFAULT_TOL)
    m.set_defaults(handler=_cmd_measurelab)
    m = msub.add_parser("lemma5")
    m.add_argument("--string", required=True)
    m.add_argument("--t", default="1,10,100,1000")
    m.set_defaults(handler=_cmd_measurelab)

    p = sub.add_parser("montecarlo", help="seeded frequency experiment")
    p.add_argument("--target", required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--digits", type=int, default=measurelab.MONTECARLO_MAX_DIGITS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=_cmd_montecarlo)

    p = sub.add_parser("plotdata", help="two-column series for external plotting")
    p.add_argument("figure", help="fN4_ratio")
    p.add_argument("--N", type=int, default=120)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_plotdata)

    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, out)
    except CfsymError as exc:
        print(f"cfsym: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
