"""Legendre-form cubics, supersingularity, and the critical-coefficient formula."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .deuring import deuring_poly, hasse_index
from .errors import BadPartition, CharTwoUnsupported, DegenerateParameter
from .ff import FieldElement, enumerate_elements, extension_of, make_prime_field
from .lucas import binomial, binomial_mod_p
from .poly import MultiPoly, PolynomialRing, lam

Y2Z = (0, 2, 1)
X3 = (3, 0, 0)
X2Z = (2, 0, 1)
XZ2 = (1, 0, 2)


class Tag(str, enum.Enum):
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"
    CHAR2 = "char2"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LegendreCurve:
    p: int
    a: FieldElement
    f: MultiPoly = field(compare=False)

    @property
    def field(self):
        return self.a.field


@dataclass(frozen=True)
class Classification:
    tag: Tag
    hasse_value: FieldElement


def legendre_cubic(a, ring, p: int) -> MultiPoly:
    """y^2 z - x(x - z)(x - a z); for p = 2 the printed form y^2 z + x(x + z)(x + a z)."""
    sign = 1 if p == 2 else -1
    return MultiPoly(
        {Y2Z: 1, X3: sign, X2Z: 1 + a, XZ2: sign * a},
        ring,
    )


def make_curve(p: int, a) -> LegendreCurve:
    if not isinstance(a, FieldElement):
        a = make_prime_field(p)(a)
    if a.field.p != p:
        raise ValueError(f"parameter {a!r} is not in characteristic {p}")
    if a == 0 or a == 1:
        raise DegenerateParameter(f"a = {a} gives a singular cubic")
    return LegendreCurve(p, a, legendre_cubic(a, a.field, p))


def hasse_value(p: int, a):
    return deuring_poly(hasse_index(p), make_prime_field(p))(a)


def classify(curve: LegendreCurve) -> Classification:
    if curve.p == 2:
        raise CharTwoUnsupported("the Hasse-polynomial test needs p > 2")
    value = hasse_value(curve.p, curve.a)
    tag = Tag.ORDINARY if value else Tag.SUPERSINGULAR
    return Classification(tag, value)


def supersingular_values(p: int, search_field: str = "Fp", cap: int | None = None) -> list:
    """Every a outside {0, 1} in F_p (``"Fp"``) or F_{p^2} (``"Fp2"``) with H{n_1}(a) = 0."""
    if p == 2:
        raise CharTwoUnsupported("supersingular values are defined here for p > 2")
    fld = make_prime_field(p) if search_field.lower() == "fp" else extension_of(p)
    h = deuring_poly(hasse_index(p), make_prime_field(p))
    kwargs = {} if cap is None else {"cap": cap}
    return [a for a in enumerate_elements(fld, **kwargs) if a != 0 and a != 1 and not h(a)]


def critical_coefficient(p: int, N: int, n: int, m: int, a):
    """C(N, n) * H{m}(a) mod p: the coefficient of x^(2m) y^(2n) z^(n+m) in f_a^N."""
    if N != n + m or n < 0 or m < 0:
        raise BadPartition(f"{N} != {n} + {m}")
    fp = make_prime_field(p)
    if not isinstance(a, FieldElement):
        a = fp(a)
    return binomial_mod_p(N, n, p) * deuring_poly(m, fp)(a)


def critical_exponent(n: int, m: int) -> tuple[int, int, int]:
    return (2 * m, 2 * n, n + m)


def generic_cubic(p: int) -> MultiPoly:
    """f_lambda with coefficients in F_p[lambda]."""
    fp = make_prime_field(p)
    ring = PolynomialRing(fp)
    return legendre_cubic(lam(fp), ring, p)


def verify_technical_lemma(p: int, n_max: int, report: list | None = None) -> bool:
    """Expand f_lambda^N over F_p[lambda] for N <= n_max and compare every critical coefficient.

    The expected coefficient is exactly +C(N, n) H{m}(lambda): the (-1)^m from
    the cubic factor cancels the (-1)^m from pairing the two binomial sums.
    Mismatches are appended to ``report`` when given.
    """
    fp = make_prime_field(p)
    f = generic_cubic(p)
    power = MultiPoly.constant(1, f.ring)
    ok = True
    for N in range(1, n_max + 1):
        power = power * f
        for n in range(N + 1):
            m = N - n
            got = power.coefficient(critical_exponent(n, m))
            want = deuring_poly(m, fp) * binomial(N, n)
            if got != want:
                ok = False
                if report is not None:
                    report.append({"N": N, "n": n, "m": m, "got": repr(got), "want": repr(want)})
    return ok
