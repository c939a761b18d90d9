"""Deuring polynomials H{n}(lambda) = sum_i C(n, i)^2 lambda^i and their identities.

Every ``check_*`` function compares polynomials coefficient by coefficient;
nothing here is sampled.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import FactorizationMismatch
from .ff import make_prime_field
from .lucas import binomial, binomial_row, digits
from .poly import QQ, ZZ, UniPoly, lam, uni_gcd


def half_orders(p: int, e: int = 1) -> tuple[int, int]:
    """(N_e, n_e) = (p^e - 1, (p^e - 1) / 2)."""
    big = p**e - 1
    return big, big // 2


def hasse_index(p: int) -> int:
    """n_1 = (p - 1) / 2."""
    return (p - 1) // 2


def deuring_poly(n: int, ring=ZZ) -> UniPoly:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(ring, int):
        ring = make_prime_field(ring)
    if hasattr(ring, "p") and ring.degree == 1:
        p = ring.p
        return UniPoly._make([ring(c * c % p) for c in binomial_row(n)], ring)
    return UniPoly([c * c for c in binomial_row(n)], ring)


def _frobenius_twist(g: UniPoly, power: int) -> UniPoly:
    """g(lambda)^power for power a power of the characteristic (freshman's dream)."""
    ring = g.ring
    out = [ring.zero] * (g.degree * power + 1)
    for i, c in enumerate(g.coeffs):
        out[i * power] = c**power
    return UniPoly._make(out, ring)


def deuring_lucas_factorization(n: int, p: int) -> list[tuple[int, int]]:
    """Digits b_j of n with weights p^j, checked to satisfy H{n} = prod H{b_j}^(p^j) over F_p."""
    fp = make_prime_field(p)
    factors = [(b, p**j) for j, b in enumerate(digits(n, p))]
    product = UniPoly._make((fp.one,), fp)
    for b, w in factors:
        if b:
            product = product * _frobenius_twist(deuring_poly(b, fp), w)
    if product != deuring_poly(n, fp):
        raise FactorizationMismatch(f"digit factorization of H{{{n}}} mod {p} failed")
    return factors


def check_p_minus_one(p: int) -> bool:
    fp = make_prime_field(p)
    return deuring_poly(p - 1, fp) == (lam(fp) - 1) ** (p - 1)


def check_pascal_connection(n: int) -> bool:
    """(1 - lambda) H{n-1} + 2n F == H{n} over QQ, F the antiderivative of H{n-1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prev = deuring_poly(n - 1, QQ)
    antider = prev.antiderivative()
    return (1 - lam(QQ)) * prev + 2 * n * antider == deuring_poly(n, QQ)


def _antiderivative_of_previous(p: int) -> UniPoly:
    fp = make_prime_field(p)
    return deuring_poly(hasse_index(p) - 1, fp).antiderivative()


def check_ode(p: int) -> bool:
    """4 lambda (lambda - 1) F'' + 8 lambda F' + F == 0 over F_p."""
    fp = make_prime_field(p)
    F = _antiderivative_of_previous(p)
    x = lam(fp)
    d1 = F.derivative()
    lhs = 4 * x * (x - 1) * d1.derivative() + 8 * x * d1 + F
    return lhs.is_zero()


def picard_fuchs(h: UniPoly) -> UniPoly:
    """4 lambda (1 - lambda) h'' + 4 (1 - 2 lambda) h' - h."""
    x = lam(h.ring)
    d1 = h.derivative()
    return 4 * x * (1 - x) * d1.derivative() + 4 * (1 - 2 * x) * d1 - h


class RootSimplicity(NamedTuple):
    antiderivative_simple: bool
    hasse_simple: bool


def check_no_repeated_roots(p: int) -> RootSimplicity:
    """Squarefreeness of F and H{n_1} over F_p, with the endpoint facts the argument needs.

    The F flag also requires F'(1) = C(p-3, n_1-1) != 0; the H flag also
    requires H(0) = 1, H(1) = C(2 n_1, n_1) != 0 and that the Picard-Fuchs
    operator annihilates H{n_1}.
    """
    fp = make_prime_field(p)
    n1 = hasse_index(p)
    F = _antiderivative_of_previous(p)
    h = deuring_poly(n1, fp)
    prev_at_one = deuring_poly(n1 - 1, fp)(fp.one)

    f_ok = (
        uni_gcd(F, F.derivative()).degree == 0
        and prev_at_one == binomial(p - 3, n1 - 1)
        and bool(prev_at_one)
    )
    h_at_one = h(fp.one)
    h_ok = (
        uni_gcd(h, h.derivative()).degree == 0
        and h(fp.zero) == 1
        and h_at_one == binomial(2 * n1, n1)
        and bool(h_at_one)
        and picard_fuchs(h).is_zero()
    )
    return RootSimplicity(f_ok, h_ok)


def check_shared_roots(p: int) -> bool:
    """gcd(H{n_1}, H{n_1 - 1}) == 1 over F_p, cross-checked against gcd(F, F')."""
    fp = make_prime_field(p)
    n1 = hasse_index(p)
    g = uni_gcd(deuring_poly(n1, fp), deuring_poly(n1 - 1, fp))
    F = _antiderivative_of_previous(p)
    return g.degree == 0 and g == uni_gcd(F, F.derivative())
