"""Base-p digits and binomial/multinomial coefficients mod p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

from .errors import BadPartition


@dataclass(frozen=True)
class BasePDigits:
    p: int
    digits: tuple  # least significant first

    @property
    def value(self) -> int:
        return sum(d * self.p**j for j, d in enumerate(self.digits))

    def __len__(self):
        return len(self.digits)


def digits(n: int, p: int) -> list[int]:
    """Base-p expansion of n, least significant digit first; digits(0) == [0]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [0]
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def expansion(n: int, p: int) -> BasePDigits:
    return BasePDigits(p, tuple(digits(n, p)))


def binomial(n: int, k: int) -> int:
    """Exact C(n, k), zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


@lru_cache(maxsize=1024)
def binomial_row(n: int) -> tuple[int, ...]:
    """Exact row n of Pascal's triangle."""
    row = [1] * (n + 1)
    for i in range(1, n + 1):
        row[i] = row[i - 1] * (n - i + 1) // i
    return tuple(row)


def multinomial(k) -> int:
    """Exact (sum k)! / prod(k_i!)."""
    k = list(k)
    if any(x < 0 for x in k):
        return 0
    return factorial(sum(k)) // prod(factorial(x) for x in k)


def multinomial_mod_p(n: int, k, p: int) -> int:
    """Multinomial C(n; k) mod p, computed digit by digit."""
    k = list(k)
    if sum(k) != n or any(x < 0 for x in k):
        raise BadPartition(f"{k} is not a partition of {n}")
    result = 1
    rows = [digits(x, p) for x in k]
    width = len(digits(n, p))
    for j in range(width):
        col = [r[j] if j < len(r) else 0 for r in rows]
        s = sum(col)
        if s >= p:
            return 0
        result = result * (factorial(s) // prod(factorial(a) for a in col)) % p
    return result


def binomial_mod_p(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    return multinomial_mod_p(n, [k, n - k], p)


def no_carry(k, p: int) -> bool:
    """True iff the base-p digits of the k_i add without carrying."""
    rows = [digits(x, p) for x in k]
    width = max((len(r) for r in rows), default=0)
    return all(sum(r[j] for r in rows if j < len(r)) < p for j in range(width))
