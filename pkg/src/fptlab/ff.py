"""Exact arithmetic in prime fields F_p and quadratic extensions F_{p^2}.

Elements are immutable. An element of F_p mixes freely with an element of
F_{p^2} over the same prime (it is coerced into the extension); elements of
fields with different characteristic raise :class:`FieldMismatch`.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .errors import (
    CompositeModulus,
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    UnsupportedCharacteristic,
)

DEFAULT_ENUMERATION_CAP = 2**32

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldElement:
    """Common base for elements of :class:`PrimeField` and :class:`QuadExtField`."""

    __slots__ = ()

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self):
        return not self.is_zero()

    def frobenius(self):
        return self ** self.field.p

    def to_json(self) -> dict:
        return {"p": self.field.p, "deg": self.field.degree, "c": list(self.coeffs)}

    def __str__(self):
        return format_element(self)


class PrimeFieldElement(FieldElement):
    __slots__ = ("field", "value")

    def __init__(self, value: int, field: "PrimeField"):
        self.field = field
        self.value = value % field.p

    @property
    def coeffs(self):
        return (self.value,)

    def is_zero(self):
        return self.value == 0

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")
            return other
        if isinstance(other, int):
            return PrimeFieldElement(other, self.field)
        if isinstance(other, QuadExtElement):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"F_{self.field.p} vs {other.field}")
        return NotImplemented

    def __add__(self, other):
        if type(other) is PrimeFieldElement and other.field is self.field:
            return PrimeFieldElement(self.value + other.value, self.field)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.value + other.value, self.field)

    __radd__ = __add__

    def __mul__(self, other):
        if type(other) is PrimeFieldElement and other.field is self.field:
            return PrimeFieldElement(self.value * other.value, self.field)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.value * other.value, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.field)

    def __pow__(self, exponent: int):
        p = self.field.p
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return PrimeFieldElement(pow(self.value, exponent, p), self.field)

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse in {self.field}")
        return PrimeFieldElement(pow(self.value, -1, self.field.p), self.field)

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        if isinstance(other, QuadExtElement):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field}({self.value})"


class QuadExtElement(FieldElement):
    """c0 + c1*t in F_p[t]/(t^2 - r1*t - r0)."""

    __slots__ = ("field", "c0", "c1")

    def __init__(self, c0: int, c1: int, field: "QuadExtField"):
        self.field = field
        self.c0 = c0 % field.p
        self.c1 = c1 % field.p

    @property
    def coeffs(self):
        return (self.c0, self.c1)

    def is_zero(self):
        return self.c0 == 0 and self.c1 == 0

    def _coerce(self, other):
        if isinstance(other, QuadExtElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, PrimeFieldElement):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"{self.field} vs F_{other.field.p}")
            return QuadExtElement(other.value, 0, self.field)
        if isinstance(other, int):
            return QuadExtElement(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadExtElement(self.c0 + other.c0, self.c1 + other.c1, self.field)

    __radd__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        r0, r1 = self.field.reduction
        a0, a1, b0, b1 = self.c0, self.c1, other.c0, other.c1
        hi = a1 * b1
        return QuadExtElement(a0 * b0 + r0 * hi, a0 * b1 + a1 * b0 + r1 * hi, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadExtElement(-self.c0, -self.c1, self.field)

    def norm(self) -> int:
        r0, r1 = self.field.reduction
        return (self.c0 * self.c0 + self.c0 * self.c1 * r1 - self.c1 * self.c1 * r0) % self.field.p

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero(f"0 has no inverse in {self.field}")
        p = self.field.p
        inv_norm = pow(self.norm(), -1, p)
        # conjugate of t is r1 - t
        r1 = self.field.reduction[1]
        return QuadExtElement(
            (self.c0 + self.c1 * r1) * inv_norm, -self.c1 * inv_norm, self.field
        )

    def __eq__(self, other):
        if isinstance(other, QuadExtElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, PrimeFieldElement):
            return self.field.p == other.field.p and self.c1 == 0 and self.c0 == other.value
        if isinstance(other, int):
            return self.c1 == 0 and self.c0 == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash(self.c0) if self.c1 == 0 else hash((self.c0, self.c1))

    def in_prime_subfield(self) -> bool:
        return self.c1 == 0

    def __repr__(self):
        return f"{self.field}({self.c0}, {self.c1})"


class PrimeField:
    """The field F_p. Construct through :func:`make_prime_field`."""

    degree = 1
    is_field = True

    def __init__(self, p: int):
        if p < 2 or not is_prime(p):
            raise CompositeModulus(f"{p} is not prime")
        self.p = p
        self.order = p
        self.characteristic = p
        self.zero = PrimeFieldElement(0, self)
        self.one = PrimeFieldElement(1, self)

    @property
    def prime_field(self):
        return self

    def __call__(self, value) -> PrimeFieldElement:
        if isinstance(value, PrimeFieldElement):
            if value.field.p != self.p:
                raise FieldMismatch(f"cannot map {value!r} into {self}")
            return value if value.field is self else PrimeFieldElement(value.value, self)
        if isinstance(value, QuadExtElement):
            if value.field.p != self.p or value.c1 != 0:
                raise FieldMismatch(f"cannot map {value!r} into {self}")
            return PrimeFieldElement(value.c0, self)
        return PrimeFieldElement(int(value), self)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __iter__(self):
        return iter(enumerate_elements(self))


class QuadExtField:
    """F_p[t]/(t^2 - r1*t - r0), stored through the reduction rule t^2 = r0 + r1*t."""

    degree = 2
    is_field = True

    def __init__(self, p: int, reduction: tuple[int, int]):
        if p < 2 or not is_prime(p):
            raise CompositeModulus(f"{p} is not prime")
        r0, r1 = reduction[0] % p, reduction[1] % p
        # modulus t^2 - r1 t - r0 must have no root in F_p
        if any((x * x - r1 * x - r0) % p == 0 for x in range(p)):
            raise ValueError(f"t^2 - {r1}t - {r0} is reducible over F_{p}")
        self.p = p
        self.reduction = (r0, r1)
        self.order = p * p
        self.characteristic = p
        self.prime_field = make_prime_field(p)
        self.zero = QuadExtElement(0, 0, self)
        self.one = QuadExtElement(1, 0, self)
        self.gen = QuadExtElement(0, 1, self)

    @property
    def modulus(self) -> tuple[int, int, int]:
        """Coefficients (constant, linear, quadratic) of the monic modulus."""
        r0, r1 = self.reduction
        return ((-r0) % self.p, (-r1) % self.p, 1)

    def __call__(self, value, c1: int = 0) -> QuadExtElement:
        if isinstance(value, QuadExtElement):
            if value.field != self:
                raise FieldMismatch(f"cannot map {value!r} into {self}")
            return value
        if isinstance(value, PrimeFieldElement):
            if value.field.p != self.p:
                raise FieldMismatch(f"cannot map {value!r} into {self}")
            return QuadExtElement(value.value, 0, self)
        if isinstance(value, (tuple, list)):
            return QuadExtElement(int(value[0]), int(value[1]), self)
        return QuadExtElement(int(value), c1, self)

    def __eq__(self, other):
        return (
            isinstance(other, QuadExtField)
            and other.p == self.p
            and other.reduction == self.reduction
        )

    def __hash__(self):
        return hash(("F2", self.p, self.reduction))

    def __repr__(self):
        return f"GF({self.p}^2)"

    def __iter__(self):
        return iter(enumerate_elements(self))


@lru_cache(maxsize=None)
def make_prime_field(p: int) -> PrimeField:
    if p < 2:
        raise CompositeModulus(f"{p} is not prime")
    return PrimeField(p)


def least_nonresidue(p: int) -> int:
    squares = {x * x % p for x in range(p)}
    return next(d for d in range(2, p) if d not in squares)


@lru_cache(maxsize=None)
def make_quadratic_extension(p: int) -> QuadExtField:
    """F_{p^2} as F_p[t]/(t^2 - d), d the least quadratic non-residue mod p."""
    if p == 2:
        raise UnsupportedCharacteristic(
            "F_4 is built by make_char2_extension() with modulus t^2 + t + 1"
        )
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    return QuadExtField(p, (least_nonresidue(p), 0))


@lru_cache(maxsize=None)
def make_char2_extension() -> QuadExtField:
    """F_4 = F_2[t]/(t^2 + t + 1)."""
    return QuadExtField(2, (1, 1))


def extension_of(p: int) -> QuadExtField:
    return make_char2_extension() if p == 2 else make_quadratic_extension(p)


def enumerate_elements(field, cap: int = DEFAULT_ENUMERATION_CAP) -> list:
    """All elements in lexicographic order of their coefficient tuples."""
    if field.order > cap:
        raise FieldTooLarge(f"{field} has {field.order} elements (cap {cap})")
    p = field.p
    if field.degree == 1:
        return [PrimeFieldElement(v, field) for v in range(p)]
    return [QuadExtElement(c0, c1, field) for c0 in range(p) for c1 in range(p)]


def arith(a: FieldElement, b, op: str) -> FieldElement:
    """Dispatch helper: ``op`` is one of add, sub, mul, div, pow."""
    if op == "pow":
        return a ** int(b)
    if isinstance(b, FieldElement) and b.field.p != a.field.p:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def format_element(x: FieldElement) -> str:
    """Render in the ``c0`` / ``c0+c1t`` syntax accepted by :func:`parse_element`."""
    if x.field.degree == 1 or x.c1 == 0:
        return str(x.coeffs[0])
    c0, c1 = x.coeffs
    tail = "t" if c1 == 1 else f"{c1}t"
    return tail if c0 == 0 else f"{c0}+{tail}"


_ELEMENT_RE = re.compile(r"^\s*(?:(\d+)\s*(?:\+\s*(\d*)\s*t)?|(\d*)\s*t)\s*$")


def parse_element(text: str, field) -> FieldElement:
    """Parse ``c0`` or ``c0+c1t`` (also ``c1t`` and ``t``); digits must lie in [0, p)."""
    m = _ELEMENT_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse field element {text!r}")
    if m.group(3) is not None:
        c0, c1 = "0", m.group(3) or "1"
    else:
        c0 = m.group(1)
        c1 = None if m.group(2) is None and "t" not in text else (m.group(2) or "1")
    c0 = int(c0)
    c1 = int(c1) if c1 is not None else 0
    p = field.p
    if not (0 <= c0 < p and 0 <= c1 < p):
        raise ValueError(f"{text!r}: coefficients must lie in [0, {p})")
    if c1 and field.degree == 1:
        raise ValueError(f"{text!r} is not in {field}; use the quadratic extension")
    return field(c0) if field.degree == 1 else field(c0, c1)


def element_from_json(obj: dict) -> FieldElement:
    p, deg, c = int(obj["p"]), int(obj["deg"]), obj["c"]
    if deg == 1:
        return make_prime_field(p)(c[0])
    if deg == 2:
        return extension_of(p)(c[0], c[1])
    raise ValueError(f"unsupported degree {deg}")
