import math
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qlambda.algebra import IntPolynomial
from qlambda.qpoly import (
    StarBasis,
    closure_levels,
    enumerate_level,
    from_star_basis,
    level_cardinality,
    membership,
    search_members,
    star_x,
    threshold_level,
    threshold_poly,
    to_star_basis,
)

X = sympy.Symbol("x")

polys = st.lists(st.integers(-9, 9), min_size=1, max_size=7).map(IntPolynomial)


def maps_into_open_interval(f: IntPolynomial) -> bool:
    """Oracle via sympy real roots: f(0), f(1) in {0,1}, no root of f or f-1 inside (0,1), f(1/2) in (0,1)."""
    if f.coeffs in ((), (1,)):
        return True
    if f(0) not in (0, 1) or f(1) not in (0, 1):
        return False
    p = sympy.Poly(list(reversed(f.coeffs)), X)
    for q in (p, p - 1):
        if q.is_zero:
            return False
        if any(0 < r < 1 for r in q.real_roots()):
            return False
    return 0 < p.eval(sympy.Rational(1, 2)) < 1


class TestStarBasis:
    @given(polys, st.integers(0, 4))
    def test_round_trip(self, f, extra):
        n = max(f.degree, 0) + extra
        assert from_star_basis(to_star_basis(f, n)) == f

    @given(polys, st.integers(0, 3))
    def test_pascal_lift(self, f, extra):
        n = max(f.degree, 0) + extra
        assert to_star_basis(f, n).lift() == to_star_basis(f, n + 1)

    def test_level_below_degree(self):
        with pytest.raises(ValueError):
            to_star_basis(IntPolynomial([0, 0, 1]), 1)

    def test_bernstein_identity(self):
        # x = sum_k (k/n) C(n,k) x^k (1-x)^(n-k): star basis of x at level n is k C(n, k)/n = C(n-1, k-1)
        sb = to_star_basis(IntPolynomial([0, 1]), 5)
        assert sb.coeffs == tuple(comb(4, k - 1) if k else 0 for k in range(6))
        assert sb.within_bounds()


class TestMembership:
    @pytest.mark.parametrize("coeffs,member,level", [
        ((0,), True, 0),
        ((1,), True, 0),
        ((0, 1), True, 1),
        ((1, -1), True, 1),
        ((0, 2, -2), True, 2),          # 2x(1-x)
        ((0, 0, 1), True, 2),
        ((0, 4, -4), False, None),      # reaches 1 at x = 1/2
        ((0, 3, -3), True, 3),          # peaks at 3/4
        ((0, 5, -5), False, None),      # peaks at 5/4
        ((2, -1), False, None),
        ((0, 1, -1), True, 2),          # x(1-x)
    ])
    def test_examples(self, coeffs, member, level):
        f = IntPolynomial(coeffs)
        v = membership(f)
        assert v.member == member == maps_into_open_interval(f)
        if member and level is not None:
            assert v.witness_level == level

    @given(polys)
    def test_matches_root_oracle(self, f):
        assert membership(f).member == maps_into_open_interval(f)

    @given(polys)
    def test_witness_level_is_least(self, f):
        v = membership(f)
        if not v.member or f.coeffs in ((), (1,)):
            return
        n = v.witness_level
        assert to_star_basis(f, n).within_bounds()
        if n > max(f.degree, 0):
            assert not to_star_basis(f, n - 1).within_bounds()

    def test_non_member_witness_is_rational_or_isolated(self):
        v = membership(IntPolynomial([0, 4, -4]))
        assert not v.member and v.witness_point is not None
        doc = v.to_json()
        assert set(doc) == {"member", "witness_point", "witness_value", "reason"}

    def test_tangent_touch_is_not_member(self):
        # 4x(1-x) touches 1 at x = 1/2; (2x - 1)^2 touches 0 there
        assert not membership(IntPolynomial([1, -4, 4])).member


class TestLevels:
    @pytest.mark.parametrize("n", range(5))
    def test_cardinality(self, n):
        assert len(enumerate_level(n)) == level_cardinality(n)

    def test_level_four(self):
        assert level_cardinality(4) == 700

    def test_level_six(self):
        assert level_cardinality(6) == 1053696

    def test_brute_force_agrees(self):
        brute = closure_levels(3)
        for n in range(4):
            assert brute[n] == enumerate_level(n)

    def test_members_of_level_pass_membership(self):
        for f in enumerate_level(3):
            assert membership(f).member

    def test_budget(self):
        with pytest.raises(OverflowError):
            enumerate_level(8, max_count=1000)

    def test_star_x(self):
        s, t = IntPolynomial([0]), IntPolynomial([1])
        assert star_x(s, t) == IntPolynomial([0, 1])


class TestCensus:
    def test_low_degrees(self):
        rep = search_members(2, 6)
        counts = rep.counts()
        assert counts[0] + counts[1] == 4
        assert counts[2] == 10
        for f in rep.members[2]:
            assert maps_into_open_interval(f)

    def test_cubic_count_depends_on_bound(self):
        assert search_members(3, 6).counts()[3] == 80


class TestThreshold:
    @pytest.mark.parametrize("eps,n", [(Fraction(1, 2), 2), (Fraction(1, 4), 12), (Fraction(1, 10), 116)])
    def test_level(self, eps, n):
        assert threshold_level(eps) == n
        assert n == math.ceil(-math.log(float(eps)) / (2 * float(eps) ** 2))

    def test_poly_is_member(self):
        f = threshold_poly(Fraction(1, 2), Fraction(1, 4))
        assert f.degree <= 12
        assert membership(f).member

    def test_poly_star_basis(self):
        f = threshold_poly(Fraction(1, 3), Fraction(1, 4))
        sb = to_star_basis(f, 12)
        assert sb == StarBasis(12, tuple(comb(12, i) if i <= 4 else 0 for i in range(13)))

    @pytest.mark.parametrize("bad", [0, 1, Fraction(3, 2)])
    def test_bad_eps(self, bad):
        with pytest.raises(ValueError):
            threshold_level(bad)
