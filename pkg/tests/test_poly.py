from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fptlab import _dense
from fptlab.deuring import deuring_poly
from fptlab.elliptic import make_curve
from fptlab.errors import (
    FieldTooLarge,
    NonInvertibleIndex,
    RingMismatch,
    RingNotField,
    ResourceCap,
    ZeroPolynomial,
)
from fptlab.ff import enumerate_elements, extension_of, make_prime_field, make_quadratic_extension
from fptlab.poly import (
    QQ,
    ZZ,
    FrobeniusIdeal,
    MultiPoly,
    UniPoly,
    coefficient_of,
    is_in_frobenius_power,
    lam,
    monomial,
    multi_mul_truncated,
    multi_pow_truncated,
    roots_exhaustive,
    uni_antiderivative,
    uni_derivative,
    uni_eval,
    uni_gcd,
)

from oracles import curve_power, full_product_filtered, survivors

BACKENDS = ["sparse", "dense"]


# ------------------------------------------------------------ univariate


def test_uni_eval_examples():
    f5, f7 = make_prime_field(5), make_prime_field(7)
    assert uni_eval(deuring_poly(2, f5), f5(2)) == 3
    assert uni_eval(deuring_poly(3, f7), f7(6)) == 0
    f = UniPoly([4, 0, 9, 1], ZZ)
    assert uni_eval(f, 0) == 4
    # F_p coefficients evaluated at an F_{p^2} point
    f49 = make_quadratic_extension(7)
    assert uni_eval(deuring_poly(3, f7), f49(6, 0)) == 0


def test_uni_eval_ring_mismatch():
    f5, f7 = make_prime_field(5), make_prime_field(7)
    with pytest.raises(RingMismatch):
        uni_eval(deuring_poly(2, f5), f7(2))
    with pytest.raises(RingMismatch):
        uni_eval(deuring_poly(2, f5), Fraction(1, 2))


def test_uni_derivative_examples():
    x = lam(ZZ)
    assert uni_derivative(x**3) == 3 * x**2
    assert uni_derivative(UniPoly([5], ZZ)).is_zero()
    f7 = make_prime_field(7)
    assert uni_derivative(lam(f7) ** 7).is_zero()


def test_uni_antiderivative_examples():
    h1 = deuring_poly(1, QQ)
    assert uni_antiderivative(h1) == UniPoly([0, 1, Fraction(1, 2)], QQ)
    f7 = make_prime_field(7)
    with pytest.raises(NonInvertibleIndex):
        uni_antiderivative(lam(f7) ** 6)
    for p in (3, 5, 7, 11, 13):
        n1 = (p - 1) // 2
        F = uni_antiderivative(deuring_poly(n1 - 1, make_prime_field(p)))
        assert F.degree == n1
        assert F[0] == 0


@settings(max_examples=100)
@given(st.lists(st.fractions(max_denominator=50), max_size=12))
def test_derivative_inverts_antiderivative_over_q(coeffs):
    f = UniPoly(coeffs, QQ)
    assert uni_derivative(uni_antiderivative(f)) == f


@settings(max_examples=100)
@given(p=st.sampled_from([3, 5, 7, 11, 13]), data=st.data())
def test_derivative_inverts_antiderivative_over_fp(p, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), max_size=p - 1))
    f = UniPoly(coeffs, make_prime_field(p))
    assert uni_derivative(uni_antiderivative(f)) == f


def test_uni_gcd_examples():
    f7 = make_prime_field(7)
    x = lam(f7)
    assert uni_gcd(x**2 - 1, x - 1) == x - 1
    f = 3 * x**2 + 2
    assert uni_gcd(f, f7.zero * x) == f.monic()
    assert uni_gcd(UniPoly([], f7), UniPoly([], f7)).is_zero()
    with pytest.raises(RingNotField):
        uni_gcd(lam(ZZ) + 1, lam(ZZ))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_gcd_of_consecutive_deuring_against_root_comparison(p):
    fp = make_prime_field(p)
    n1 = (p - 1) // 2
    g = uni_gcd(deuring_poly(n1, fp), deuring_poly(n1 - 1, fp))
    assert g == UniPoly([1], fp)
    # oracle: no common root in F_{p^2}, where the roots of H{n1} live
    fp2 = extension_of(p)
    roots_h = set(roots_exhaustive(deuring_poly(n1, fp), fp2))
    prev = deuring_poly(n1 - 1, fp)
    if prev.degree >= 1:
        roots_prev = set(roots_exhaustive(prev, fp2))
        assert not roots_h & roots_prev


def test_roots_exhaustive_examples():
    f3, f5 = make_prime_field(3), make_prime_field(5)
    assert roots_exhaustive(deuring_poly(1, f3), f3) == {f3(2): 1}
    assert roots_exhaustive(deuring_poly(2, f5), f5) == {}
    x = lam(f5)
    assert roots_exhaustive((x - 1) ** 2, f5) == {f5(1): 2}
    assert roots_exhaustive(x**3 * (x - 4), f5) == {f5(0): 3, f5(4): 1}
    with pytest.raises(ZeroPolynomial):
        roots_exhaustive(UniPoly([], f5), f5)
    with pytest.raises(FieldTooLarge):
        roots_exhaustive(x, make_prime_field(2**31 - 1), cap=10**6)


def test_roots_of_h2_live_in_f25():
    f5 = make_prime_field(5)
    roots = roots_exhaustive(deuring_poly(2, f5), extension_of(5))
    assert len(roots) == 2 and all(m == 1 for m in roots.values())
    assert all(not r.in_prime_subfield() for r in roots)


# ------------------------------------------------------------ trivariate


def test_coefficient_of_legendre_form():
    f = make_curve(7, 3).f
    assert coefficient_of(f, [0, 2, 1]) == 1
    assert coefficient_of(f, [3, 0, 0]) == -1
    assert coefficient_of(f, [2, 1, 0]) == 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_mul_truncated_examples(backend):
    f3 = make_prime_field(3)
    ideal = FrobeniusIdeal(3, 1)
    x_top = monomial((2, 0, 0), 1, f3)
    x = monomial((1, 0, 0), 1, f3)
    assert multi_mul_truncated(x_top, x, ideal, backend).is_zero()
    f = make_curve(3, 2).f
    one = MultiPoly.constant(1, f3)
    assert multi_mul_truncated(f, one, ideal, backend) == f.truncated(3)
    assert multi_mul_truncated(f, f, ideal, backend).is_zero()


def test_f2_squared_over_f3_oracle():
    f3 = make_prime_field(3)
    full = curve_power(f3(2), 3, 2)
    assert survivors(full, 3) == []
    # the only candidate survivor x^2 y^2 z^2 has a vanishing coefficient
    assert (2, 2, 2) not in full


@pytest.mark.parametrize("backend", BACKENDS)
def test_pow_truncated_examples(backend):
    f7 = make_prime_field(7)
    f = make_curve(7, 6).f
    ideal = FrobeniusIdeal(7, 1)
    assert multi_pow_truncated(f, 0, ideal, backend) == MultiPoly.constant(1, f7)
    p5 = multi_pow_truncated(f, 5, ideal, backend)
    oracle = curve_power(f7(6), 7, 5)
    assert dict(p5.items()) == {k: oracle[k] for k in survivors(oracle, 7)}
    assert multi_pow_truncated(f, 6, ideal, backend).is_zero()


def test_is_in_frobenius_power_examples():
    f7 = make_prime_field(7)
    ideal = FrobeniusIdeal(7, 1)
    assert is_in_frobenius_power(MultiPoly({}, f7), ideal) == (True, None)
    assert is_in_frobenius_power(monomial((7, 1, 0), 3, f7), ideal) == (True, None)
    power = multi_pow_truncated(make_curve(7, 6).f, 5, ideal)
    member, witness = is_in_frobenius_power(power, ideal)
    assert not member
    assert witness == survivors(curve_power(f7(6), 7, 5), 7)[0] == (4, 6, 5)
    # unreduced input is accepted too
    full = make_curve(7, 6).f ** 5
    assert is_in_frobenius_power(full, ideal) == (False, (4, 6, 5))


def homogeneous_polys(field, max_degree=12):
    @st.composite
    def build(draw):
        d = draw(st.integers(0, max_degree))
        keys = [(i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)]
        chosen = draw(st.lists(st.sampled_from(keys), max_size=min(len(keys), 40), unique=True))
        p, m = field.p, field.degree
        terms = {}
        for k in chosen:
            c = draw(st.tuples(*[st.integers(0, p - 1)] * m))
            terms[k] = field(c[0]) if m == 1 else field(*c)
        return MultiPoly(terms, field)

    return build()


F5 = make_prime_field(5)
F49 = make_quadratic_extension(7)


@settings(max_examples=60, deadline=None)
@given(f=homogeneous_polys(F5), g=homogeneous_polys(F5), e=st.sampled_from([1, 2]), backend=st.sampled_from(BACKENDS))
def test_truncation_soundness(f, g, e, backend):
    ideal = FrobeniusIdeal(5, e)
    got = multi_mul_truncated(f, g, ideal, backend if f and g else "sparse")
    want = full_product_filtered(f.terms, g.terms, ideal.bound, F5.zero)
    assert dict(got.items()) == want
    assert all(max(k) < ideal.bound for k, _ in got.items())


@settings(max_examples=30, deadline=None)
@given(f=homogeneous_polys(F49, 8), g=homogeneous_polys(F49, 8), backend=st.sampled_from(BACKENDS))
def test_truncation_soundness_extension_field(f, g, backend):
    ideal = FrobeniusIdeal(7, 1)
    got = multi_mul_truncated(f, g, ideal, backend if f and g else "sparse")
    assert dict(got.items()) == full_product_filtered(f.terms, g.terms, 7, F49.zero)


@settings(max_examples=40, deadline=None)
@given(f=homogeneous_polys(F5), g=homogeneous_polys(F5))
def test_homogeneity_preserved(f, g):
    ideal = FrobeniusIdeal(5, 2)
    prod = multi_mul_truncated(f, g, ideal)
    if prod:
        assert prod.homogeneous_degree() == f.homogeneous_degree() + g.homogeneous_degree()


@pytest.mark.parametrize("p, a", [(3, 2), (5, 2), (5, 3), (7, 6)])
def test_frobenius_compatibility(p, a):
    f = make_curve(p, a).f
    lower, upper = FrobeniusIdeal(p, 1), FrobeniusIdeal(p, 2)
    checked = 0
    for n in range(1, 2 * p):
        if multi_pow_truncated(f, n, lower).is_zero():
            assert multi_pow_truncated(f, n * p, upper).is_zero()
            checked += 1
    assert checked


def test_dense_fft_path_with_forced_limb_split(monkeypatch):
    field = make_quadratic_extension(13)
    f = make_curve(13, field(3, 5)).f
    ideal = FrobeniusIdeal(13, 1)
    oracle = multi_pow_truncated(f, 11, ideal, backend="sparse")
    monkeypatch.setattr(_dense, "SPARSE_LIMIT", 0)
    assert multi_pow_truncated(f, 11, ideal, backend="dense") == oracle
    monkeypatch.setattr(_dense, "_EXACT_LIMIT", 1000)
    assert multi_pow_truncated(f, 11, ideal, backend="dense") == oracle


def test_dense_term_budget():
    f = make_curve(13, 2).f
    with pytest.raises(ResourceCap):
        multi_pow_truncated(f, 5, FrobeniusIdeal(13, 2), backend="dense", term_budget=1000)


def test_dense_rejects_non_homogeneous():
    f5 = make_prime_field(5)
    f = MultiPoly({(1, 0, 0): 1, (0, 0, 0): 1}, f5)
    with pytest.raises(RingMismatch):
        multi_mul_truncated(f, f, FrobeniusIdeal(5, 1), backend="dense")
    # auto falls back to the sparse path
    got = multi_mul_truncated(f, f, FrobeniusIdeal(5, 1))
    assert dict(got.items()) == {(2, 0, 0): 1, (1, 0, 0): 2, (0, 0, 0): 1}


def test_multipoly_json_sorted():
    f = make_curve(7, 6).f
    data = f.to_json()
    assert [d["k"] for d in data] == sorted(d["k"] for d in data)
    assert data[0] == {"k": [0, 2, 1], "c": {"p": 7, "deg": 1, "c": [1]}}


def test_multipoly_over_polynomial_ring():
    from fptlab.elliptic import generic_cubic

    f = generic_cubic(5)
    x = lam(make_prime_field(5))
    assert f.coefficient((2, 0, 1)) == 1 + x
    assert f.coefficient((1, 0, 2)) == -x


@pytest.mark.parametrize("backend", ["auto", *BACKENDS])
def test_zero_factor_gives_zero(backend):
    f5 = make_prime_field(5)
    zero = MultiPoly({}, f5)
    f = make_curve(5, 2).f
    assert multi_mul_truncated(zero, f, FrobeniusIdeal(5, 1), backend).is_zero()
    assert multi_pow_truncated(zero, 3, FrobeniusIdeal(5, 1), backend).is_zero()
