"""Dense truncated arithmetic for homogeneous x,y,z polynomials over F_p / F_{p^2}.

A homogeneous polynomial of known total degree D is determined by its
(kx, ky) exponents, so modulo m^[q] it fits in a q x q grid; the grid cell
(i, j) stands for x^i y^j z^(D-i-j) and is live only while 0 <= D-i-j < q.
Extension-field coefficients are stored as a leading axis of length 2.

Products of two dense grids are exact integer convolutions done with
float64 FFTs. Each convolution entry is bounded by nnz * (p-1)^2; when that
bound leaves too little headroom the coefficients are split into base-h
limbs first, and every rounding is checked against a fixed tolerance.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np
from scipy import fft as sfft

from .errors import ResourceCap
from .ff import PrimeField, QuadExtField

DEFAULT_TERM_BUDGET = 20_000_000
SPARSE_LIMIT = 48
_EXACT_LIMIT = 2**40
_ROUNDING_TOLERANCE = 0.25


class DenseHomogeneous:
    __slots__ = ("field", "q", "degree", "data")

    def __init__(self, field, q: int, degree: int, data: np.ndarray):
        self.field = field
        self.q = q
        self.degree = degree
        self.data = data

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, field, q, degree):
        return cls(field, q, degree, np.zeros((field.degree, q, q), dtype=np.int64))

    @classmethod
    def one(cls, field, q):
        out = cls.zeros(field, q, 0)
        out.data[0, 0, 0] = 1
        return out

    @classmethod
    def from_multipoly(cls, f, q: int, term_budget: int | None = None):
        field = f.ring
        if not isinstance(field, (PrimeField, QuadExtField)):
            raise TypeError(f"dense grids need a finite field, got {field}")
        budget = DEFAULT_TERM_BUDGET if term_budget is None else term_budget
        if q * q * field.degree > budget:
            raise ResourceCap(
                f"{q}x{q} grid over {field} exceeds the term budget of {budget}"
            )
        degree = f.homogeneous_degree()
        if degree is None:
            if f:
                raise ValueError("dense grids need a homogeneous polynomial")
            degree = 0
        out = cls.zeros(field, q, degree)
        for (i, j, k), c in f.items():
            if i < q and j < q and k < q:
                out.data[:, i, j] = c.coeffs if hasattr(c, "coeffs") else (int(c) % field.p,)
        return out

    def to_multipoly(self):
        from .poly import MultiPoly

        terms = {}
        make = self._element
        for i, j in np.argwhere(self.data.any(axis=0)):
            i, j = int(i), int(j)
            terms[(i, j, self.degree - i - j)] = make(self.data[:, i, j])
        return MultiPoly._make(terms, self.field)

    def _element(self, vec):
        if self.field.degree == 1:
            return self.field(int(vec[0]))
        return self.field(int(vec[0]), int(vec[1]))

    # queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.data.any()

    def nnz(self) -> int:
        return int(np.count_nonzero(self.data.any(axis=0)))

    def first_nonzero(self):
        """Lexicographically smallest surviving exponent vector, or None."""
        idx = np.argwhere(self.data.any(axis=0))
        if not len(idx):
            return None
        i, j = int(idx[0][0]), int(idx[0][1])
        return (i, j, self.degree - i - j)

    def coefficient(self, k):
        kx, ky, kz = k
        q = self.q
        if kx + ky + kz != self.degree or max(k) >= q or min(k) < 0:
            return self.field.zero
        return self._element(self.data[:, kx, ky])

    # arithmetic ------------------------------------------------------------

    def _finish(self, data, degree):
        data %= self.field.p
        cut = degree - self.q
        if cut >= 0:
            data[:, _index_sum(self.q) <= cut] = 0
        return DenseHomogeneous(self.field, self.q, degree, data)

    def _scalar_times(self, vec, arr):
        """Field scalar (coefficient vector) times a coefficient array."""
        p = self.field.p
        if self.field.degree == 1:
            return (int(vec[0]) * arr) % p
        r0, r1 = self.field.reduction
        s0, s1 = int(vec[0]), int(vec[1])
        a0, a1 = arr[0], arr[1]
        hi = (s1 * a1) % p
        out = np.empty_like(arr)
        out[0] = (s0 * a0 + r0 * hi) % p
        out[1] = (s0 * a1 + s1 * a0 + r1 * hi) % p
        return out

    def _shift_mul(self, small, big):
        q = self.q
        out = np.zeros_like(big.data)
        for i, j in np.argwhere(small.data.any(axis=0)):
            i, j = int(i), int(j)
            out[:, i:, j:] += self._scalar_times(small.data[:, i, j], big.data[:, : q - i, : q - j])
            out[:, i:, j:] %= self.field.p
        return out

    def mul(self, other: "DenseHomogeneous") -> "DenseHomogeneous":
        if other.field != self.field or other.q != self.q:
            raise ValueError("dense operands live in different quotient rings")
        degree = self.degree + other.degree
        na, nb = self.nnz(), other.nnz()
        if na == 0 or nb == 0:
            return DenseHomogeneous.zeros(self.field, self.q, degree)
        if min(na, nb) <= SPARSE_LIMIT:
            small, big = (self, other) if na <= nb else (other, self)
            return self._finish(self._shift_mul(small, big), degree)
        return self._finish(self._fft_mul(other, min(na, nb)), degree)

    def square(self) -> "DenseHomogeneous":
        return self.mul(self)

    def pow(self, n: int) -> "DenseHomogeneous":
        if n < 0:
            raise ValueError("negative exponent")
        if n == 0:
            return DenseHomogeneous.one(self.field, self.q)
        result = self
        for bit in bin(n)[3:]:
            result = result.square()
            if bit == "1":
                result = result.mul(self)
            if result.is_zero():
                return DenseHomogeneous.zeros(self.field, self.q, self.degree * n)
        return result

    def _fft_mul(self, other, overlap):
        p, q = self.field.p, self.q
        a_parts = list(self.data)
        b_parts = a_parts if other is self else list(other.data)
        if self.field.degree == 1:
            outputs = [[(0, 0, 1)]]
        else:
            r0, r1 = self.field.reduction
            outputs = [
                [(0, 0, 1), (1, 1, r0)],
                [(0, 1, 1), (1, 0, 1), (1, 1, r1)],
            ]
        bound = overlap * (p - 1) ** 2
        if bound > _EXACT_LIMIT:
            h = isqrt(p - 1) + 1
            if overlap * (h - 1) ** 2 > _EXACT_LIMIT:
                raise ResourceCap("coefficients too large for exact FFT convolution")
            a_parts, b_parts, outputs = _split_limbs(a_parts, b_parts, outputs, h, p, other is self)
        return _convolve_combine(a_parts, b_parts, outputs, p, q)


@lru_cache(maxsize=16)
def _index_sum(q):
    s = np.add.outer(np.arange(q), np.arange(q))
    s.setflags(write=False)
    return s


def _split_limbs(a_parts, b_parts, outputs, h, p, same):
    def split(parts):
        out = []
        for x in parts:
            out.extend((x % h, x // h))
        return out

    a2 = split(a_parts)
    b2 = a2 if same else split(b_parts)
    limb_weights = ((0, 0, 1), (0, 1, h), (1, 0, h), (1, 1, h * h))
    new_outputs = []
    for terms in outputs:
        new_terms = []
        for i, j, w in terms:
            for di, dj, lw in limb_weights:
                new_terms.append((2 * i + di, 2 * j + dj, (w * lw) % p))
        new_outputs.append(new_terms)
    return a2, b2, new_outputs


def _convolve_combine(a_parts, b_parts, outputs, p, q):
    size = sfft.next_fast_len(2 * q - 1, real=True)
    shape = (size, size)
    spectra_a = {}
    spectra_b = spectra_a if a_parts is b_parts else {}

    def spec(cache, parts, i):
        if i not in cache:
            cache[i] = sfft.rfft2(parts[i].astype(np.float64), s=shape)
        return cache[i]

    result = np.zeros((len(outputs), q, q), dtype=np.int64)
    done = {}
    for slot, terms in enumerate(outputs):
        acc = result[slot]
        for i, j, w in terms:
            key = (min(i, j), max(i, j)) if a_parts is b_parts else (i, j)
            if key not in done:
                fa = spec(spectra_a, a_parts, i)
                fb = spec(spectra_b, b_parts, j)
                done[key] = _rounded(sfft.irfft2(fa * fb, s=shape)[:q, :q]) % p
            acc += w * done[key]
            acc %= p
    return result


def _rounded(x):
    r = np.rint(x)
    err = np.max(np.abs(x - r)) if x.size else 0.0
    if err > _ROUNDING_TOLERANCE:
        raise ArithmeticError(f"FFT rounding error {err:.3g} exceeds tolerance")
    return r.astype(np.int64)
