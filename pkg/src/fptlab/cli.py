"""fptlab command line: ``nu``, ``ft``, ``ss-list``, ``deuring`` and ``verify``.

Records go to stdout, diagnostics and timings to stderr. Exit status is 0
when everything passes, 1 on a detected mismatch and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import deuring, elliptic, fpt
from .errors import CompositeModulus, DegenerateParameter, FptLabError, MismatchDetected, ResourceCap
from .ff import (
    extension_of,
    format_element,
    is_prime,
    make_prime_field,
    parse_element,
)

NU_COLUMNS = ("p", "a", "e", "nu", "witness", "ratio", "classification")


@dataclass(frozen=True)
class RunConfig:
    term_budget: int = fpt.DEFAULT_TERM_BUDGET
    output: str = "text"
    parallelism: int = 1

    def __post_init__(self):
        if self.term_budget < 1000:
            raise ValueError("term budget must be at least 1000")
        if self.output not in ("text", "json", "csv"):
            raise ValueError(f"unknown output format {self.output!r}")


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- reporting


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        return f"{value['num']}/{value['den']}"
    if isinstance(value, (list, tuple)):
        return ";".join(_cell(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def emit_report(records, fmt: str = "text", columns=None) -> bytes:
    """Serialize homogeneous records; json and csv output are byte-deterministic."""
    records = list(records)
    if columns is None:
        columns = tuple(records[0]) if records else NU_COLUMNS
    if fmt == "json":
        return (json.dumps(records, sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_cell(rec.get(c)) for c in columns])
        return buf.getvalue().encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [[_cell(rec.get(c)) for c in columns] for rec in records]
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)).rstrip())
    return ("\n".join(lines) + "\n").encode()


def _write(data: bytes):
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def _log(msg: str):
    print(msg, file=sys.stderr)


def _frac(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


# ------------------------------------------------------------------ parsing


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def _nonnegative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return n


def _add_common(sp):
    sp.add_argument("--output", choices=("text", "json", "csv"), default=None)
    sp.add_argument("--json", action="store_true", help="shorthand for --output json")
    sp.add_argument("--term-budget", type=int, default=fpt.DEFAULT_TERM_BUDGET)
    sp.add_argument("--workers", type=_positive, default=1, help="worker-count hint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fptlab",
        description="F-pure thresholds of Legendre cubics over finite fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("nu", help="nu(p^e): largest N with f^N outside m^[p^e]")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--a", required=True, help="c0 in F_p, or c0+c1t with --ext")
    sp.add_argument("--ext", action="store_true", help="read --a in F_{p^2}")
    sp.add_argument("--e", type=_positive, default=1)
    _add_common(sp)

    sp = sub.add_parser("ft", help="F-pure threshold of f_a")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--ext", action="store_true")
    sp.add_argument("--emax", type=_positive, default=2)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--closed", dest="mode", action="store_const", const="closed")
    mode.add_argument("--brute", dest="mode", action="store_const", const="brute")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    sp.set_defaults(mode="both")
    _add_common(sp)

    sp = sub.add_parser("ss-list", help="supersingular Legendre parameters")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--field", choices=("p", "p2"), default="p")
    _add_common(sp)

    sp = sub.add_parser("deuring", help="Deuring polynomial H{n} mod p")
    sp.add_argument("--n", type=_nonnegative, required=True)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--eval", dest="eval_at", default=None)
    sp.add_argument("--ext", action="store_true")
    sp.add_argument("--factor", action="store_true")
    _add_common(sp)

    sp = sub.add_parser("verify", help="run verification suites over a prime range")
    sp.add_argument("--p-min", type=_prime, required=True)
    sp.add_argument("--p-max", type=_prime, required=True)
    sp.add_argument("--suite", choices=("lemmas", "technical", "fpt", "all"), default="all")
    sp.add_argument("--emax", type=_positive, default=1, help="level for the fpt suite")
    sp.add_argument("--field", choices=("p", "p2"), default="p2", help="parameter field for the fpt suite")
    sp.add_argument("--n-max", type=_nonnegative, default=500, help="digit-factorization range")
    sp.add_argument("--pascal-max", type=_positive, default=60)
    sp.add_argument("--technical-max", type=_positive, default=10)
    _add_common(sp)
    return parser


def _config(args) -> RunConfig:
    output = "json" if args.json else (args.output or "text")
    try:
        return RunConfig(args.term_budget, output, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))


def _element(args):
    fld = extension_of(args.p) if args.ext else make_prime_field(args.p)
    try:
        return parse_element(args.a, fld)
    except ValueError as exc:
        raise UsageError(f"--a: {exc}")


def _curve(args):
    try:
        return elliptic.make_curve(args.p, _element(args))
    except DegenerateParameter as exc:
        raise UsageError(f"--a: {exc}")


# ----------------------------------------------------------------- commands


def cmd_nu(args, cfg: RunConfig) -> int:
    curve = _curve(args)
    t0 = time.perf_counter()
    rec = fpt.nu(curve, args.e, cfg.term_budget, cfg.parallelism)
    _log(f"nu computed in {time.perf_counter() - t0:.3f}s")
    tag = fpt._tag(curve)
    _write(emit_report([fpt.nu_json(curve, rec, tag)], cfg.output, NU_COLUMNS))
    return 0


def _ft_record(res: fpt.FtResult, upper=None) -> dict:
    curve = res.curve
    return {
        "p": curve.p,
        "a": format_element(curve.a),
        "ft": _frac(res.ft),
        "upper": _frac(upper) if upper is not None else None,
        "classification": str(res.classification),
        "method": res.method,
        "table": [fpt.nu_json(curve, r, res.classification) for r in res.table],
    }


def _print_table(curve, table, tag):
    recs = [fpt.nu_json(curve, r, tag) for r in table]
    return emit_report(recs, "text", ("e", "nu", "ratio", "witness"))


def cmd_ft(args, cfg: RunConfig) -> int:
    curve = _curve(args)
    t0 = time.perf_counter()
    if args.mode == "closed":
        res = fpt.ft_closed_form(curve)
        rec = _ft_record(res)
    elif args.mode == "brute":
        res = fpt.ft_estimate(curve, args.emax, cfg.term_budget, cfg.parallelism)
        rec = _ft_record(res, res.upper)
    else:
        try:
            report = fpt.cross_check(curve, args.emax, cfg.term_budget, cfg.parallelism)
        except MismatchDetected as exc:
            _log(f"MISMATCH ({exc.kind}): {exc}")
            _log(json.dumps(exc.state, sort_keys=True, default=str))
            return 1
        res = report.closed
        rec = _ft_record(res)
        rec["method"] = "cross-check"
        rec["table"] = [fpt.nu_json(curve, r, res.classification) for r in report.brute.table]
        rec["upper"] = None
        rec["passed"] = report.passed
    _log(f"ft computed in {time.perf_counter() - t0:.3f}s")
    if cfg.output == "text":
        ft = res.ft
        kind = "lower bound" if res.method == "brute-force" else "FT"
        lines = [
            f"p = {curve.p}, a = {format_element(curve.a)}, classification: {res.classification}",
            f"{kind} = {ft.numerator}/{ft.denominator}",
        ]
        if rec.get("upper"):
            lines.append(f"upper bound = {rec['upper']['num']}/{rec['upper']['den']}")
        out = ("\n".join(lines) + "\n").encode()
        if rec["table"]:
            table = report.brute.table if args.mode == "both" else res.table
            out += _print_table(curve, table, res.classification)
        _write(out)
    else:
        cols = ("p", "a", "ft", "upper", "classification", "method", "table")
        if cfg.output == "csv":
            rec = dict(rec, table=[f"{r['e']}:{r['nu']}" for r in rec["table"]])
        _write(emit_report([rec], cfg.output, cols))
    return 0


def cmd_ss_list(args, cfg: RunConfig) -> int:
    if args.p == 2:
        raise UsageError("ss-list needs an odd prime")
    values = elliptic.supersingular_values(args.p, "Fp2" if args.field == "p2" else "Fp")
    if cfg.output == "json":
        _write((json.dumps([v.to_json() for v in values], sort_keys=True, separators=(",", ":")) + "\n").encode())
    elif cfg.output == "csv":
        _write(emit_report([{"a": format_element(v)} for v in values], "csv", ("a",)))
    else:
        _write("".join(format_element(v) + "\n" for v in values).encode())
    return 0


def cmd_deuring(args, cfg: RunConfig) -> int:
    fp = make_prime_field(args.p)
    h = deuring.deuring_poly(args.n, fp)
    rec = {"n": args.n, "p": args.p, "coeffs": [int(c) for c in h.coeffs]}
    if args.eval_at is not None:
        fld = extension_of(args.p) if args.ext else fp
        try:
            at = parse_element(args.eval_at, fld)
        except ValueError as exc:
            raise UsageError(f"--eval: {exc}")
        rec["eval"] = {"at": format_element(at), "value": format_element(h(at))}
    if args.factor:
        rec["factor"] = [[b, w] for b, w in deuring.deuring_lucas_factorization(args.n, args.p)]
    if cfg.output == "text":
        lines = [f"H{{{args.n}}} mod {args.p} = {h!r}"]
        if "eval" in rec:
            lines.append(f"H{{{args.n}}}({rec['eval']['at']}) = {rec['eval']['value']}")
        if "factor" in rec:
            parts = [f"H{{{b}}}^{w}" for b, w in rec["factor"]]
            lines.append("factorization: " + " * ".join(parts))
        _write(("\n".join(lines) + "\n").encode())
    else:
        cols = tuple(rec)
        _write(emit_report([rec], cfg.output, cols))
    return 0


VERIFY_COLUMNS = ("suite", "check", "p", "passed")


def _primes(lo, hi):
    return [p for p in range(lo, hi + 1) if is_prime(p)]


def _run_check(records, suite, check, p, fn):
    t0 = time.perf_counter()
    try:
        ok = bool(fn())
    except FptLabError as exc:
        _log(f"{suite}/{check} p={p}: {type(exc).__name__}: {exc}")
        ok = False
    _log(f"{suite}/{check} p={p}: {'pass' if ok else 'FAIL'} ({time.perf_counter() - t0:.3f}s)")
    records.append({"suite": suite, "check": check, "p": p, "passed": ok})


def _lemma_suite(records, primes, args):
    _run_check(
        records, "lemmas", "pascal_connection", None,
        lambda: all(deuring.check_pascal_connection(n) for n in range(1, args.pascal_max + 1)),
    )
    for p in primes:
        _run_check(records, "lemmas", "p_minus_one", p, lambda: deuring.check_p_minus_one(p))
        _run_check(
            records, "lemmas", "lucas_factorization", p,
            lambda: all(deuring.deuring_lucas_factorization(n, p) for n in range(args.n_max + 1)),
        )
        if p == 2:
            continue
        _run_check(records, "lemmas", "ode", p, lambda: deuring.check_ode(p))
        _run_check(records, "lemmas", "no_repeated_roots", p, lambda: all(deuring.check_no_repeated_roots(p)))
        _run_check(records, "lemmas", "shared_roots", p, lambda: deuring.check_shared_roots(p))


def _technical_suite(records, primes, args):
    for p in primes:
        if p == 2:
            continue
        _run_check(
            records, "technical", "technical_lemma", p,
            lambda: elliptic.verify_technical_lemma(p, args.technical_max),
        )


def _fpt_suite(records, primes, args, cfg):
    for p in primes:
        if p != 2:
            _run_check(
                records, "fpt", "supersingular_count", p,
                lambda: len(elliptic.supersingular_values(p, "Fp2")) == (p - 1) // 2,
            )

        def grid():
            reports = list(fpt.cross_check_grid(p, args.emax, args.field, cfg.term_budget, cfg.parallelism))
            bad = [r for r in reports if not r.passed]
            for r in bad:
                _log(json.dumps(r.to_dict(), sort_keys=True, default=str))
            return not bad

        _run_check(records, "fpt", "cross_check", p, grid)


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.p_min > args.p_max:
        raise UsageError("--p-min exceeds --p-max")
    primes = _primes(args.p_min, args.p_max)
    records = []
    suites = ("lemmas", "technical", "fpt") if args.suite == "all" else (args.suite,)
    if "lemmas" in suites:
        _lemma_suite(records, primes, args)
    if "technical" in suites:
        _technical_suite(records, primes, args)
    if "fpt" in suites:
        _fpt_suite(records, primes, args, cfg)
    _write(emit_report(records, cfg.output, VERIFY_COLUMNS))
    return 0 if all(r["passed"] for r in records) else 1


COMMANDS = {
    "nu": cmd_nu,
    "ft": cmd_ft,
    "ss-list": cmd_ss_list,
    "deuring": cmd_deuring,
    "verify": cmd_verify,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, CompositeModulus) as exc:
        parser.print_usage(sys.stderr)
        _log(f"fptlab: error: {exc}")
        return 2
    except ResourceCap as exc:
        _log(f"fptlab: error: {exc} (raise --term-budget)")
        return 2
    except MismatchDetected as exc:
        _log(f"MISMATCH ({exc.kind}): {exc}")
        _log(json.dumps(exc.state, sort_keys=True, default=str))
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
