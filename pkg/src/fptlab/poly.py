"""Univariate and trivariate polynomials over exact coefficient rings.

A coefficient ring is any object exposing ``zero``, ``one``, ``is_field``,
``characteristic`` and a ``__call__`` that coerces a value into the ring.
:class:`~fptlab.ff.PrimeField`, :class:`~fptlab.ff.QuadExtField`, ``ZZ``,
``QQ`` and :class:`PolynomialRing` all qualify, so a :class:`MultiPoly`
can carry coefficients in F_p[lambda].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FieldTooLarge,
    NonInvertibleIndex,
    RingMismatch,
    RingNotField,
    ZeroPolynomial,
)
from .ff import (
    DEFAULT_ENUMERATION_CAP,
    FieldElement,
    PrimeField,
    QuadExtField,
    enumerate_elements,
)


class IntegerRing:
    is_field = False
    characteristic = 0
    zero = 0
    one = 1

    def __call__(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise RingMismatch(f"{value} is not an integer")
            return value.numerator
        if isinstance(value, int):
            return value
        raise RingMismatch(f"cannot coerce {value!r} into ZZ")

    def __repr__(self):
        return "ZZ"


class RationalField:
    is_field = True
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value):
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise RingMismatch(f"cannot coerce {value!r} into QQ")

    def __repr__(self):
        return "QQ"


ZZ = IntegerRing()
QQ = RationalField()


def ring_of(x):
    """The natural ring of a scalar."""
    if isinstance(x, FieldElement):
        return x.field
    if isinstance(x, bool):
        raise RingMismatch("booleans are not ring elements")
    if isinstance(x, int):
        return ZZ
    if isinstance(x, Fraction):
        return QQ
    if isinstance(x, UniPoly):
        return PolynomialRing(x.ring)
    raise RingMismatch(f"{x!r} is not a ring element")


def common_ring(r, s):
    if r == s:
        return r
    if r is ZZ:
        return s
    if s is ZZ:
        return r
    if isinstance(r, PrimeField) and isinstance(s, QuadExtField) and r.p == s.p:
        return s
    if isinstance(s, PrimeField) and isinstance(r, QuadExtField) and r.p == s.p:
        return r
    if isinstance(r, PolynomialRing) and isinstance(s, PolynomialRing):
        return PolynomialRing(common_ring(r.base, s.base))
    if isinstance(r, PolynomialRing):
        return PolynomialRing(common_ring(r.base, s))
    if isinstance(s, PolynomialRing):
        return PolynomialRing(common_ring(r, s.base))
    raise RingMismatch(f"no common ring for {r} and {s}")


class PolynomialRing:
    """R[lambda] for a coefficient ring R."""

    is_field = False

    def __init__(self, base):
        self.base = base
        self.characteristic = base.characteristic

    @property
    def zero(self):
        return UniPoly._make((), self.base)

    @property
    def one(self):
        return UniPoly._make((self.base.one,), self.base)

    @property
    def gen(self):
        return UniPoly._make((self.base.zero, self.base.one), self.base)

    def __call__(self, value):
        if isinstance(value, UniPoly):
            if value.ring == self.base:
                return value
            return UniPoly(value.coeffs, self.base)
        return UniPoly((value,), self.base)

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.base == self.base

    def __hash__(self):
        return hash(("poly", self.base))

    def __repr__(self):
        return f"{self.base}[lambda]"


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of lambda^i."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, coeffs, ring=ZZ):
        self.ring = ring
        self.coeffs = _trim([ring(c) for c in coeffs])

    @classmethod
    def _make(cls, coeffs, ring):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.coeffs = _trim(list(coeffs))
        return obj

    @classmethod
    def monomial(cls, degree: int, ring=ZZ, coeff=None):
        c = ring.one if coeff is None else ring(coeff)
        return cls._make([ring.zero] * degree + [c], ring)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def change_ring(self, ring) -> "UniPoly":
        return UniPoly(self.coeffs, ring)

    def _lift(self, other):
        """Bring ``other`` and self into a common coefficient ring."""
        if isinstance(other, UniPoly):
            ring = common_ring(self.ring, other.ring)
            a = self if self.ring == ring else self.change_ring(ring)
            b = other if other.ring == ring else other.change_ring(ring)
            return a, b
        ring = common_ring(self.ring, ring_of(other))
        a = self if self.ring == ring else self.change_ring(ring)
        return a, UniPoly._make((ring(other),), ring)

    def __add__(self, other):
        a, b = self._lift(other)
        x, y = a.coeffs, b.coeffs
        if len(x) < len(y):
            x, y = y, x
        out = list(x)
        for i, c in enumerate(y):
            out[i] = out[i] + c
        return UniPoly._make(out, a.ring)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._make([-c for c in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        x, y = a.coeffs, b.coeffs
        if not x or not y:
            return UniPoly._make((), a.ring)
        zero = a.ring.zero
        out = [zero] * (len(x) + len(y) - 1)
        ys = [(j, c) for j, c in enumerate(y) if c]
        for i, c in enumerate(x):
            if not c:
                continue
            for j, d in ys:
                out[i + j] = out[i + j] + c * d
        return UniPoly._make(out, a.ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = PolynomialRing(self.ring).one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            if len(self.coeffs) != len(other.coeffs):
                return False
            return all(a == b for a, b in zip(self.coeffs, other.coeffs))
        try:
            a, b = self._lift(other)
        except RingMismatch:
            return NotImplemented
        return a == b

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        return uni_eval(self, x)

    def derivative(self) -> "UniPoly":
        return UniPoly._make([c * i for i, c in enumerate(self.coeffs)][1:], self.ring)

    def antiderivative(self) -> "UniPoly":
        """Formal antiderivative with constant coefficient 0."""
        ring = QQ if self.ring is ZZ else self.ring
        if not ring.is_field:
            raise RingNotField(f"antiderivative needs a field, got {ring}")
        out = [ring.zero]
        for i, c in enumerate(self.coeffs):
            if not c:
                out.append(ring.zero)
                continue
            idx = ring(i + 1)
            if not idx:
                raise NonInvertibleIndex(
                    f"index {i + 1} vanishes in {ring}; cannot integrate lambda^{i}"
                )
            out.append(ring(c) / idx)
        return UniPoly._make(out, ring)

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        inv = self.ring.one / self.leading
        return UniPoly._make([c * inv for c in self.coeffs], self.ring)

    def __divmod__(self, other):
        a, b = self._lift(other)
        if not a.ring.is_field:
            raise RingNotField(f"division needs a field, got {a.ring}")
        if not b.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a.coeffs)
        db = b.degree
        inv = a.ring.one / b.leading
        quot = [a.ring.zero] * max(len(rem) - db, 0)
        for k in range(len(rem) - db - 1, -1, -1):
            c = rem[k + db] * inv
            quot[k] = c
            if c:
                for j, d in enumerate(b.coeffs):
                    rem[k + j] = rem[k + j] - c * d
        return UniPoly._make(quot, a.ring), UniPoly._make(rem[:db], a.ring)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("lambda" if i == 1 else f"lambda^{i}")
            if i and c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    def to_json(self) -> list:
        out = []
        for c in self.coeffs:
            if isinstance(c, FieldElement):
                out.append(c.to_json())
            elif isinstance(c, Fraction):
                out.append(str(c))
            else:
                out.append(c)
        return out


def lam(ring=ZZ) -> UniPoly:
    """The indeterminate lambda over ``ring``."""
    return PolynomialRing(ring).gen


def uni_eval(f: UniPoly, a):
    """Horner evaluation; ``a`` may live in any ring the coefficients embed in."""
    try:
        if isinstance(a, FieldElement) or isinstance(f.ring, (PrimeField, QuadExtField)):
            common_ring(f.ring, ring_of(a))
        acc = f.ring.zero if not f.coeffs else f.coeffs[-1]
        for c in reversed(f.coeffs[:-1]):
            acc = acc * a + c
    except TypeError as exc:
        raise RingMismatch(f"cannot evaluate a polynomial over {f.ring} at {a!r}") from exc
    if isinstance(a, FieldElement) and not isinstance(acc, FieldElement):
        acc = a.field(acc)
    elif isinstance(f.ring, (PrimeField, QuadExtField)) and isinstance(acc, int):
        acc = f.ring(acc)
    return acc


def uni_derivative(f: UniPoly) -> UniPoly:
    return f.derivative()


def uni_antiderivative(f: UniPoly) -> UniPoly:
    return f.antiderivative()


def uni_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = f._lift(g)
    if not a.ring.is_field:
        raise RingNotField(f"gcd needs a field, got {a.ring}")
    while b:
        a, b = b, a % b
    return a.monic()


def roots_exhaustive(f: UniPoly, field, cap: int = DEFAULT_ENUMERATION_CAP) -> dict:
    """All roots of ``f`` in ``field`` mapped to their multiplicities.

    Keys are ordered as :func:`~fptlab.ff.enumerate_elements` orders them.
    """
    if not f:
        raise ZeroPolynomial("the zero polynomial vanishes everywhere")
    if field.order > cap:
        raise FieldTooLarge(f"{field} has {field.order} elements (cap {cap})")
    g = f if f.ring == field else f.change_ring(field)
    roots = {}
    for r in enumerate_elements(field, cap):
        if uni_eval(g, r):
            continue
        mult, h = 0, g
        while h.degree >= 1:
            q, rem = _synthetic_division(h, r)
            if rem:
                break
            mult, h = mult + 1, q
        roots[r] = mult
    return roots


def _synthetic_division(h: UniPoly, r):
    """Divide by (lambda - r); returns quotient and remainder."""
    cs = h.coeffs
    acc = cs[-1]
    quot = [acc]
    for c in reversed(cs[:-1]):
        acc = acc * r + c
        quot.append(acc)
    rem = quot.pop()
    return UniPoly._make(quot[::-1], h.ring), rem


# ---------------------------------------------------------------- trivariate


@dataclass(frozen=True)
class FrobeniusIdeal:
    """m^[p^e] = (x^(p^e), y^(p^e), z^(p^e))."""

    p: int
    e: int

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("Frobenius level must be >= 1")

    @property
    def bound(self) -> int:
        return self.p**self.e

    def contains_monomial(self, k) -> bool:
        return max(k) >= self.bound


class MultiPoly:
    """Sparse polynomial in x, y, z keyed by exponent vectors (kx, ky, kz)."""

    __slots__ = ("ring", "terms")

    def __init__(self, terms=None, ring=ZZ):
        self.ring = ring
        self.terms = {}
        for k, c in (terms or {}).items():
            c = ring(c)
            if c:
                self.terms[tuple(int(e) for e in k)] = c

    @classmethod
    def _make(cls, terms: dict, ring):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, c, ring):
        return cls({(0, 0, 0): c}, ring)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def items(self):
        return self.terms.items()

    def coefficient(self, k):
        return self.terms.get(tuple(k), self.ring.zero)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None (also None for zero)."""
        degrees = {sum(k) for k in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def change_ring(self, ring) -> "MultiPoly":
        return MultiPoly(self.terms, ring)

    def _lift(self, other: "MultiPoly"):
        ring = common_ring(self.ring, other.ring)
        a = self if self.ring == ring else self.change_ring(ring)
        b = other if other.ring == ring else other.change_ring(ring)
        return a, b

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.ring)
        a, b = self._lift(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiPoly._make(out, a.ring)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._make({k: -c for k, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.ring)
        return _sparse_product(self, other, None)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MultiPoly.constant(1, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[k] for k, c in self.terms.items())

    def truncated(self, bound: int) -> "MultiPoly":
        """Drop every term with some exponent >= bound."""
        return MultiPoly._make(
            {k: c for k, c in self.terms.items() if max(k) < bound}, self.ring
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*x^{k[0]}*y^{k[1]}*z^{k[2]}" for k, c in sorted(self.terms.items()))

    def to_json(self) -> list:
        out = []
        for k in sorted(self.terms):
            c = self.terms[k]
            if isinstance(c, FieldElement):
                c = c.to_json()
            elif isinstance(c, UniPoly):
                c = c.to_json()
            elif isinstance(c, Fraction):
                c = str(c)
            out.append({"k": list(k), "c": c})
        return out


def monomial(k, coeff, ring) -> MultiPoly:
    return MultiPoly({tuple(k): coeff}, ring)


def _sparse_product(f: MultiPoly, g: MultiPoly, bound):
    a, b = f._lift(g)
    out = {}
    bterms = list(b.terms.items())
    for (i1, j1, k1), c in a.terms.items():
        if bound is not None and (i1 >= bound or j1 >= bound or k1 >= bound):
            continue
        for (i2, j2, k2), d in bterms:
            key = (i1 + i2, j1 + j2, k1 + k2)
            if bound is not None and (key[0] >= bound or key[1] >= bound or key[2] >= bound):
                continue
            s = out.get(key)
            out[key] = c * d if s is None else s + c * d
    return MultiPoly._make({k: c for k, c in out.items() if c}, a.ring)


def _dense_eligible(ring, *polys) -> bool:
    if not isinstance(ring, (PrimeField, QuadExtField)):
        return False
    return all(f and f.homogeneous_degree() is not None for f in polys)


def multi_mul_truncated(
    f: MultiPoly, g: MultiPoly, ideal: FrobeniusIdeal, backend: str = "auto"
) -> MultiPoly:
    """f*g modulo m^[p^e]: no stored term has an exponent >= p^e.

    ``backend`` selects ``"sparse"`` (dict convolution), ``"dense"`` (numpy
    grid keyed on (kx, ky), finite-field homogeneous inputs only) or
    ``"auto"``.
    """
    from . import _dense

    a, b = f._lift(g)
    q = ideal.bound
    if not a or not b:
        return MultiPoly({}, a.ring)
    if backend == "auto":
        use_dense = _dense_eligible(a.ring, a, b) and len(a) * len(b) > q * q
    else:
        use_dense = backend == "dense"
        if use_dense and not _dense_eligible(a.ring, a, b):
            raise RingMismatch("dense backend needs homogeneous finite-field polynomials")
    if not use_dense:
        return _sparse_product(a, b, q)
    da = _dense.DenseHomogeneous.from_multipoly(a, q)
    db = _dense.DenseHomogeneous.from_multipoly(b, q)
    return da.mul(db).to_multipoly()


def multi_pow_truncated(
    f: MultiPoly,
    n: int,
    ideal: FrobeniusIdeal,
    backend: str = "auto",
    term_budget: int | None = None,
) -> MultiPoly:
    """f^n modulo m^[p^e] by square-and-multiply, truncating after every product."""
    from . import _dense

    if n < 0:
        raise ValueError("negative exponent")
    q = ideal.bound
    if n == 0:
        return MultiPoly.constant(f.ring.one, f.ring)
    if not f:
        return MultiPoly({}, f.ring)
    use_dense = backend == "dense" or (backend == "auto" and _dense_eligible(f.ring, f))
    if use_dense:
        if not _dense_eligible(f.ring, f):
            raise RingMismatch("dense backend needs a homogeneous finite-field polynomial")
        base = _dense.DenseHomogeneous.from_multipoly(f, q, term_budget)
        return base.pow(n).to_multipoly()
    base = f.truncated(q)
    result = base
    for bit in bin(n)[3:]:
        result = _sparse_product(result, result, q)
        if bit == "1":
            result = _sparse_product(result, base, q)
        if not result:
            break
    return result


def coefficient_of(f: MultiPoly, k):
    return f.coefficient(k)


def is_in_frobenius_power(f: MultiPoly, ideal: FrobeniusIdeal):
    """(True, None) if every nonzero term of f lies in m^[p^e].

    Otherwise (False, k) with k the lexicographically smallest exponent
    vector of a nonzero term having all exponents below p^e.
    """
    q = ideal.bound
    outside = [k for k, c in f.terms.items() if c and max(k) < q]
    if not outside:
        return True, None
    return False, min(outside)
