from fractions import Fraction

import pytest

from fptlab import fpt
from fptlab.elliptic import Classification, Tag, critical_exponent, make_curve
from fptlab.errors import MismatchDetected, ResourceCap
from fptlab.ff import enumerate_elements, extension_of, make_char2_extension, make_prime_field
from fptlab.fpt import (
    bound_predicates,
    bracket_checks,
    certificate_split,
    cross_check,
    cross_check_grid,
    expected_nu,
    ft_closed_form,
    ft_estimate,
    nu,
    nu_json,
)
from fptlab.poly import FrobeniusIdeal, MultiPoly, multi_pow_truncated

from oracles import curve_power, exhaustive_nu, survivors


def test_nu_examples():
    assert nu(make_curve(3, 2), 1).nu == 1
    assert nu(make_curve(5, 2), 1).nu == 4
    rec = nu(make_curve(7, 6), 2)
    assert rec.nu == 41 == 7**2 - 7 - 1
    assert rec.ratio == Fraction(41, 49)
    with pytest.raises(ValueError):
        nu(make_curve(7, 6), 0)


def test_nu_witness_is_smallest_survivor():
    f7 = make_prime_field(7)
    rec = nu(make_curve(7, 6), 1)
    assert rec.nu == 5
    assert rec.witness == (4, 6, 5) == survivors(curve_power(f7(6), 7, 5), 7)[0]
    assert not rec.saturated


def test_ordinary_witness_and_saturation():
    rec = nu(make_curve(5, 2), 2)
    assert rec.nu == 24 and rec.saturated
    # the only survivor of f^(p^e - 1) for an ordinary curve is the balanced term
    assert rec.witness == (24, 24, 24)
    f5 = make_prime_field(5)
    assert survivors(curve_power(f5(2), 5, 4), 5) == [(4, 4, 4)]


def test_char2_nu_zero_has_no_witness():
    t = make_char2_extension().gen
    rec = nu(make_curve(2, t), 1)
    assert rec.nu == 0 and rec.witness is None and rec.ratio == 0


def test_char2_pattern():
    f4 = make_char2_extension()
    for a in (f4.gen, f4.gen + 1):
        curve = make_curve(2, a)
        res = ft_estimate(curve, 6)
        assert [r.nu for r in res.table] == [2 ** (e - 1) - 1 for e in range(1, 7)]
        assert ft_closed_form(curve).ft == Fraction(1, 2)


def test_char2_against_oracle():
    t = make_char2_extension().gen
    for e in (1, 2, 3):
        assert nu(make_curve(2, t), e).nu == exhaustive_nu(t, 2, e)


def test_ft_closed_form_examples():
    assert ft_closed_form(make_curve(7, 6)).ft == Fraction(6, 7)
    assert ft_closed_form(make_curve(5, 2)).ft == 1
    res = ft_closed_form(make_curve(2, make_char2_extension().gen))
    assert res.ft == Fraction(1, 2) and res.classification is Tag.CHAR2
    assert not res.is_lower_bound


def test_ft_estimate_examples():
    res = ft_estimate(make_curve(7, 6), 2)
    assert [(r.e, r.nu) for r in res.table] == [(1, 5), (2, 41)]
    assert res.ft == Fraction(41, 49) and res.upper == Fraction(6, 7)
    assert res.is_lower_bound
    res = ft_estimate(make_curve(5, 2), 2)
    assert [r.ratio for r in res.table] == [Fraction(4, 5), Fraction(24, 25)]
    res = ft_estimate(make_curve(2, make_char2_extension().gen), 3)
    assert [r.nu for r in res.table] == [0, 1, 3]
    with pytest.raises(ValueError):
        ft_estimate(make_curve(5, 2), 0)


@pytest.mark.parametrize(
    "p, a, e_max, table",
    [(3, 2, 3, [1, 5, 17]), (5, 2, 2, [4, 24]), (7, 6, 2, [5, 41])],
)
def test_cross_check_examples(p, a, e_max, table):
    report = cross_check(make_curve(p, a), e_max)
    assert report.passed and report.failure is None
    assert [row["nu"] for row in report.rows] == table
    assert all(row["certificate_ok"] for row in report.rows)
    assert all(b.holds for b in report.brackets)


def test_certificate_split():
    assert certificate_split(5, 2, Tag.ORDINARY) == (12, 12)
    n, m = certificate_split(7, 2, Tag.SUPERSINGULAR)
    assert (n, m) == (21, 20) and m == (3 - 1) * 7 + 7 - 1
    assert certificate_split(2, 1, Tag.CHAR2) is None
    assert certificate_split(2, 3, Tag.CHAR2) == (2, 1)
    # the certificate exponent of the supersingular case stays below p^e
    assert max(critical_exponent(n, m)) < 49
    assert sum(critical_exponent(n, m)) == 3 * expected_nu(7, 2, Tag.SUPERSINGULAR)


@pytest.mark.parametrize("p", [3, 5])
def test_bracketing_against_exhaustive_search(p):
    for a in enumerate_elements(extension_of(p)):
        if a == 0 or a == 1:
            continue
        table = ft_estimate(make_curve(p, a), 2).table
        assert [r.nu for r in table] == [exhaustive_nu(a, p, e) for e in (1, 2)]
        assert all(b.holds for b in bracket_checks(table))


def test_workers_give_identical_results():
    curve = make_curve(7, extension_of(7)(2, 3))
    serial = ft_estimate(curve, 2).table
    parallel = ft_estimate(curve, 2, workers=4).table
    assert serial == parallel


def test_resource_cap():
    with pytest.raises(ResourceCap):
        nu(make_curve(13, 2), 2, term_budget=1000)


def test_mismatch_on_wrong_classification(monkeypatch):
    curve = make_curve(5, 2)  # ordinary
    wrong = Classification(Tag.SUPERSINGULAR, make_prime_field(5).zero)
    monkeypatch.setattr(fpt, "classify", lambda c: wrong)
    with pytest.raises(MismatchDetected) as info:
        cross_check(curve, 1)
    assert info.value.kind == "bounds-violated"
    assert info.value.state["p"] == 5
    report = cross_check(curve, 1, strict=False)
    assert not report.passed and not report.rows[0]["bounds_ok"]


def test_mismatch_kinds_are_distinct(monkeypatch):
    curve = make_curve(7, 6)
    monkeypatch.setattr(fpt, "expected_nu", lambda p, e, tag: 0)
    with pytest.raises(MismatchDetected) as info:
        cross_check(curve, 1)
    assert info.value.kind == "nu-pattern"
    monkeypatch.undo()
    monkeypatch.setattr(fpt, "critical_coefficient", lambda *args: make_prime_field(7)(123))
    with pytest.raises(MismatchDetected) as info:
        cross_check(curve, 1)
    assert info.value.kind == "witness"


def test_cross_check_grid_small():
    reports = list(cross_check_grid(3, 2, "p2"))
    assert len(reports) == 7 and all(r.passed for r in reports)
    assert sum(r.closed.classification is Tag.SUPERSINGULAR for r in reports) == 1


def test_bound_predicates_examples():
    f3, f7 = make_prime_field(3), make_prime_field(7)
    sq = multi_pow_truncated(make_curve(3, 2).f, 2, FrobeniusIdeal(3, 1))
    pred = bound_predicates(sq, 3, 1)
    assert not pred.lower_bound_holds and pred.upper_bound_holds
    unreduced = make_curve(3, 2).f ** 2
    assert not bound_predicates(unreduced, 3, 1).lower_bound_holds
    p5 = make_curve(7, 6).f ** 5
    assert bound_predicates(p5, 7, 1).lower_bound_holds


@pytest.mark.parametrize("p, a", [(5, 2), (7, 6), (7, 3), (11, 5)])
def test_homogeneous_floor_clause(p, a):
    f = make_curve(p, a).f
    for N in range(1, 9):
        power = f**N
        assert bound_predicates(power, p, 1).homogeneous_floor_holds
        # oracle: every term has max k >= N, equal only at (N, N, N)
        for k in curve_power(make_prime_field(p)(a), p, N):
            assert max(k) >= N
            assert max(k) > N or k == (N, N, N)


def test_floor_clause_detects_violations():
    f5 = make_prime_field(5)
    lopsided = MultiPoly({(2, 2, 2): 1, (3, 2, 1): 1, (3, 3, 0): 1}, f5)
    assert bound_predicates(lopsided, 5, 1).homogeneous_floor_holds
    bad = MultiPoly({(2, 2, 2): 1, (1, 1, 1): 1}, f5)
    assert not bound_predicates(bad, 5, 1).homogeneous_floor_holds


def test_nu_json_keys():
    curve = make_curve(7, 6)
    rec = nu(curve, 2)
    data = nu_json(curve, rec, Tag.SUPERSINGULAR)
    assert set(data) == {"p", "a", "e", "nu", "witness", "ratio", "classification"}
    assert data["ratio"] == {"num": 41, "den": 49}
    assert data["classification"] == "supersingular"
