"""F-pure thresholds of Legendre cubics: nu search, closed form, and cross-checks.

nu(p^e) is the largest N with f^N outside m^[p^e]. Level 1 is searched
downward from p - 1; level e + 1 only inside [p*nu, p*nu + p - 1], the window
forced by raising to the p-th power in characteristic p. Every candidate
power is computed independently by truncated square-and-multiply.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import NamedTuple

from . import _dense
from .elliptic import (
    LegendreCurve,
    Tag,
    classify,
    critical_coefficient,
    critical_exponent,
    make_curve,
)
from .errors import MismatchDetected
from .ff import enumerate_elements, extension_of, format_element, make_prime_field
from .poly import MultiPoly

DEFAULT_TERM_BUDGET = _dense.DEFAULT_TERM_BUDGET


@dataclass(frozen=True)
class NuRecord:
    p: int
    e: int
    nu: int
    witness: tuple | None
    saturated: bool = False

    @property
    def bound(self) -> int:
        return self.p**self.e

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.nu, self.bound)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.nu + 1, self.bound)


@dataclass
class FtResult:
    curve: LegendreCurve
    ft: Fraction
    classification: Tag
    method: str
    table: list = field(default_factory=list)
    upper: Fraction | None = None

    @property
    def is_lower_bound(self) -> bool:
        return self.method == "brute-force"


class _Powers:
    """Truncated powers of one curve's cubic, one dense base grid per level."""

    def __init__(self, curve: LegendreCurve, term_budget: int | None):
        self.curve = curve
        self.term_budget = term_budget
        self._bases = {}

    def base(self, e):
        if e not in self._bases:
            q = self.curve.p**e
            self._bases[e] = _dense.DenseHomogeneous.from_multipoly(
                self.curve.f, q, self.term_budget
            )
        return self._bases[e]

    def power(self, n, e):
        return self.base(e).pow(n)


def _search_level(powers: _Powers, e: int, lo: int, hi: int, workers: int = 1):
    """Largest N in [lo, hi] with f^N outside m^[p^e], plus that power and f^(N+1)'s status."""
    p = powers.curve.p
    q = p**e
    hi = min(hi, q - 1)
    candidates = list(range(hi, lo - 1, -1))
    found = None
    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: powers.power(n, e), candidates))
        for n, pw in zip(candidates, results):
            if not pw.is_zero():
                found = (n, pw)
                break
    else:
        for n in candidates:
            pw = powers.power(n, e)
            if not pw.is_zero():
                found = (n, pw)
                break
    if found is None:
        raise MismatchDetected(
            f"no power f^N with N in [{lo}, {hi}] survives modulo m^[{q}]",
            kind="bounds-violated",
            state={"p": p, "e": e, "bracket": [lo, hi]},
        )
    nu, pw = found
    if nu == hi:
        # f^(nu+1) was not part of the scan
        nxt = powers.power(nu + 1, e)
        if not nxt.is_zero():
            raise MismatchDetected(
                f"f^{nu + 1} survives modulo m^[{q}] outside the bracket [{lo}, {hi}]",
                kind="bounds-violated",
                state={"p": p, "e": e, "bracket": [lo, hi], "nu": nu},
            )
    witness = pw.first_nonzero() if nu > 0 else None
    return NuRecord(p, e, nu, witness, saturated=(nu == q - 1)), pw


def _levels(curve, e_max, term_budget=None, workers=1):
    powers = _Powers(curve, term_budget)
    table, grids = [], []
    prev = None
    for e in range(1, e_max + 1):
        if prev is None:
            lo, hi = 0, curve.p - 1
        else:
            lo, hi = curve.p * prev.nu, curve.p * prev.nu + curve.p - 1
        rec, pw = _search_level(powers, e, lo, hi, workers)
        table.append(rec)
        grids.append(pw)
        prev = rec
    return table, grids


def nu(curve: LegendreCurve, e: int, term_budget: int | None = None, workers: int = 1) -> NuRecord:
    if e < 1:
        raise ValueError("level must be >= 1")
    table, _ = _levels(curve, e, term_budget, workers)
    return table[-1]


def _tag(curve):
    return Tag.CHAR2 if curve.p == 2 else classify(curve).tag


def ft_closed_form(curve: LegendreCurve) -> FtResult:
    p = curve.p
    if p == 2:
        return FtResult(curve, Fraction(1, 2), Tag.CHAR2, "closed-form")
    tag = classify(curve).tag
    ft = Fraction(1) if tag is Tag.ORDINARY else Fraction(p - 1, p)
    return FtResult(curve, ft, tag, "closed-form")


def _assert_monotone(table):
    for a, b in zip(table, table[1:]):
        if b.ratio < a.ratio:
            raise MismatchDetected(
                f"nu ratios decrease between e={a.e} and e={b.e}",
                kind="bounds-violated",
                state={"table": [(r.e, r.nu) for r in table]},
            )


def ft_estimate(
    curve: LegendreCurve, e_max: int, term_budget: int | None = None, workers: int = 1
) -> FtResult:
    """Lower bound nu/p^e and upper bound (nu+1)/p^e at the deepest level."""
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    table, _ = _levels(curve, e_max, term_budget, workers)
    _assert_monotone(table)
    last = table[-1]
    return FtResult(curve, last.ratio, _tag(curve), "brute-force", table, last.upper)


def expected_nu(p: int, e: int, tag: Tag) -> int:
    q = p**e
    if tag is Tag.ORDINARY:
        return q - 1
    if tag is Tag.SUPERSINGULAR:
        return q - p ** (e - 1) - 1
    return 2 ** (e - 1) - 1


def certificate_split(p: int, e: int, tag: Tag):
    """(n, m) whose critical term x^(2m) y^(2n) z^(n+m) certifies nu(p^e), or None."""
    if tag is Tag.ORDINARY:
        half = (p**e - 1) // 2
        return half, half
    if tag is Tag.SUPERSINGULAR:
        n = (p - 1) // 2 * p ** (e - 1)
        return n, n - 1
    if e < 2:
        return None
    n = 2 ** (e - 2)
    return n, n - 1


class BracketCheck(NamedTuple):
    e: int
    low: int
    high: int
    next_nu: int
    holds: bool


def bracket_checks(table) -> list[BracketCheck]:
    out = []
    for a, b in zip(table, table[1:]):
        p = a.p
        low, high = p * a.nu, p * a.nu + p - 1
        out.append(BracketCheck(a.e, low, high, b.nu, low <= b.nu <= high))
    return out


@dataclass
class CrossCheckReport:
    curve: LegendreCurve
    closed: FtResult
    brute: FtResult
    rows: list
    brackets: list
    passed: bool
    failure: str | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.curve.p,
            "a": format_element(self.curve.a),
            "classification": str(self.closed.classification),
            "ft": {"num": self.closed.ft.numerator, "den": self.closed.ft.denominator},
            "rows": self.rows,
            "brackets": [b._asdict() for b in self.brackets],
            "passed": self.passed,
            "failure": self.failure,
        }


def cross_check(
    curve: LegendreCurve,
    e_max: int,
    term_budget: int | None = None,
    workers: int = 1,
    strict: bool = True,
) -> CrossCheckReport:
    """Compare brute-force nu(p^e) with the closed form level by level.

    A row fails with ``bounds-violated`` when nu/p^e < FT <= (nu+1)/p^e is
    false, ``nu-pattern`` when the bounds hold but nu differs from the
    expected formula, and ``witness`` when the certificate term of f^nu is
    zero or disagrees with the critical-coefficient formula.
    """
    closed = ft_closed_form(curve)
    table, grids = _levels(curve, e_max, term_budget, workers)
    brute = FtResult(curve, table[-1].ratio, closed.classification, "brute-force", table, table[-1].upper)
    tag = closed.classification
    rows, failure = [], None
    for rec, grid in zip(table, grids):
        want = expected_nu(curve.p, rec.e, tag)
        bounds_ok = rec.ratio < closed.ft <= rec.upper
        row = {
            "e": rec.e,
            "nu": rec.nu,
            "expected": want,
            "witness": list(rec.witness) if rec.witness else None,
            "bounds_ok": bounds_ok,
            "nu_ok": rec.nu == want,
            "certificate": None,
            "certificate_ok": True,
        }
        split = certificate_split(curve.p, rec.e, tag)
        if row["nu_ok"] and split is not None:
            n, m = split
            k = critical_exponent(n, m)
            got = grid.coefficient(k)
            formula = critical_coefficient(curve.p, n + m, n, m, curve.a)
            row["certificate"] = list(k)
            row["certificate_ok"] = bool(got) and got == formula and max(k) < rec.bound
        rows.append(row)
        if failure is None:
            if not bounds_ok:
                failure = "bounds-violated"
            elif not row["nu_ok"]:
                failure = "nu-pattern"
            elif not row["certificate_ok"]:
                failure = "witness"
    brackets = bracket_checks(table)
    if failure is None and not all(b.holds for b in brackets):
        failure = "bounds-violated"
    if failure is None and any(b.ratio < a.ratio for a, b in zip(table, table[1:])):
        failure = "bounds-violated"
    report = CrossCheckReport(curve, closed, brute, rows, brackets, failure is None, failure)
    if strict and failure is not None:
        raise MismatchDetected(
            f"cross-check failed for p={curve.p}, a={format_element(curve.a)}: {failure}",
            kind=failure,
            state=report.to_dict(),
        )
    return report


def cross_check_grid(
    p: int,
    e_max: int,
    search_field: str = "p2",
    term_budget: int | None = None,
    workers: int = 1,
    strict: bool = False,
):
    """Cross-check every a outside {0, 1} of F_p or F_{p^2}; yields reports."""
    fld = extension_of(p) if search_field in ("p2", "Fp2") else make_prime_field(p)
    for a in enumerate_elements(fld):
        if a == 0 or a == 1:
            continue
        yield cross_check(make_curve(p, a), e_max, term_budget, workers, strict)


class BoundPredicates(NamedTuple):
    lower_bound_holds: bool
    upper_bound_holds: bool
    homogeneous_floor_holds: bool


def bound_predicates(f_power: MultiPoly, p: int, e: int, d: int = 3, t: int = 3) -> BoundPredicates:
    """Threshold bounds read off a computed power f^N of a degree-d form in t variables.

    ``lower_bound_holds``: some nonzero term has every exponent below p^e, so
    N/p^e < FT. ``upper_bound_holds`` is its negation, FT <= N/p^e. The floor
    check asserts max k >= ceil(N d / t) for every term, with equality only at
    the balanced exponent vector.
    """
    q = p**e
    terms = [k for k, c in f_power.items() if c]
    lower = any(max(k) < q for k in terms)
    floor_ok = True
    if terms:
        total = sum(terms[0])
        floor = ceil(total / t)
        for k in terms:
            if sum(k) != total or max(k) < floor:
                floor_ok = False
            elif max(k) * t == total and len(set(k)) != 1:
                floor_ok = False
    return BoundPredicates(lower, not lower, floor_ok)


def char2_expected_nu(e: int) -> int:
    return 2 ** (e - 1) - 1


def nu_json(curve: LegendreCurve, rec: NuRecord, tag: Tag) -> dict:
    return {
        "p": curve.p,
        "a": format_element(curve.a),
        "e": rec.e,
        "nu": rec.nu,
        "witness": list(rec.witness) if rec.witness else None,
        "ratio": {"num": rec.ratio.numerator, "den": rec.ratio.denominator},
        "classification": str(tag),
    }
