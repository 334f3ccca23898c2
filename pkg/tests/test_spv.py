import math

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qlambda.algebra import IntPolynomial, make_context, norm
from qlambda.spv import (
    COMPLEX_PLANE,
    NOT_SPV,
    REAL_LINE,
    SPV_NONTRIVIAL,
    SPV_TRIVIAL,
    UNIT_INTERVAL,
    CubicParams,
    classify_spv,
    cubic_spv_check,
    fundamental_unit,
    odd_window_test,
    polygon_lambda,
    polygon_lambda_is_integral,
    quadratic_from_mn,
)

X = sympy.Symbol("x")


def numeric_spv(coeffs, hint) -> bool:
    """Oracle: numpy roots, drop lambda and its conjugate, the rest in (0, 1)."""
    roots = list(np.roots(list(reversed(coeffs))))
    lam = min(roots, key=lambda z: abs(z - hint))
    rest = [z for z in roots if abs(z - lam) > 1e-9 and abs(z - np.conj(lam)) > 1e-9]
    return all(abs(z.imag) < 1e-9 and 1e-12 < z.real < 1 - 1e-12 for z in rest)


class TestClassify:
    @pytest.mark.parametrize("m,n,value", [
        (1, 1, -(1 + math.sqrt(5)) / 2),
        (2, 1, -1 - math.sqrt(2)),
        (2, 2, -1 - math.sqrt(3)),
        (3, 1, -(3 + math.sqrt(13)) / 2),
    ])
    def test_quadratic_table(self, m, n, value):
        ctx = quadratic_from_mn(m, n)
        assert ctx.minpoly.coeffs == (-n, m, 1)
        assert abs(ctx.lam().shadow().real - value) < 1e-12
        rep = classify_spv(ctx)
        assert rep.verdict == SPV_NONTRIVIAL
        assert rep.unit_interval_conjugate_count == 1

    @given(st.integers(1, 30), st.integers(1, 30))
    def test_quadratic_family_is_spv(self, m, n):
        if n > m:
            with pytest.raises(ValueError):
                quadratic_from_mn(m, n)
            return
        ctx = quadratic_from_mn(m, n)
        assert classify_spv(ctx).is_spv
        assert numeric_spv(ctx.minpoly.coeffs, ctx.lam().shadow())

    @pytest.mark.parametrize("coeffs,hint,verdict,region", [
        ((-2, 1), 2.0, SPV_TRIVIAL, REAL_LINE),
        ((1, -3, 1), 2.618, SPV_NONTRIVIAL, REAL_LINE),
        ((1, -3, 1), 0.382, NOT_SPV, UNIT_INTERVAL),
        ((1, -1, 1), complex(0.5, 0.866), SPV_TRIVIAL, COMPLEX_PLANE),
        ((-1, 0, 1, 1), complex(-0.877, 0.745), SPV_NONTRIVIAL, COMPLEX_PLANE),
        ((-2, 0, 1), 1.414, NOT_SPV, REAL_LINE),
    ])
    def test_verdicts(self, coeffs, hint, verdict, region):
        rep = classify_spv(make_context(IntPolynomial(coeffs), hint))
        assert rep.verdict == verdict
        assert rep.convexity_region == region

    def test_report_json_keys(self, c13):
        doc = classify_spv(c13).to_json()
        assert set(doc) == {"is_algebraic_integer", "degree", "k", "verdict", "convexity_region", "discreteness"}
        assert doc["k"] == 1 and doc["degree"] == 2

    def test_non_spv_discreteness_unknown(self):
        rep = classify_spv(make_context(IntPolynomial([-2, 0, 1]), 1.414))
        assert rep.discreteness == "discreteness unknown"


class TestCubics:
    @pytest.mark.parametrize("a,b,c", [(1, 0, -1), (0, 1, -1), (2, 1, -1), (1, 1, -1)])
    def test_nonreal_sufficient_condition(self, a, b, c):
        v = cubic_spv_check(CubicParams(a, b, c), "nonreal")
        assert v.holds
        assert classify_spv(v.context).is_spv
        assert numeric_spv((c, b, a, 1), v.context.lam().shadow())

    @pytest.mark.parametrize("a,b,c", [(3, -4, 1), (4, -5, 1), (5, -7, 2), (6, -9, 3)])
    def test_real_mode(self, a, b, c):
        v = cubic_spv_check(CubicParams(a, b, c), "real")
        assert v.holds and v.discriminant > 0
        assert classify_spv(v.context).verdict == SPV_NONTRIVIAL
        assert numeric_spv((c, b, a, 1), v.context.lam().shadow())

    def test_condition_fails(self):
        assert not cubic_spv_check(CubicParams(0, 0, 1), "nonreal").holds


def sympy_lambda_minpoly(n):
    val = 1 / (2 - 2 * sympy.cos(sympy.pi / n))
    p = sympy.Poly(sympy.minimal_polynomial(val, X), X)
    return tuple(int(c) for c in p.all_coeffs()[::-1])


class TestPolygonLambda:
    @pytest.mark.parametrize("n,coeffs", [
        (3, (-1, 1)),
        (4, (1, -4, 2)),
        (5, (1, -3, 1)),
        (6, (1, -4, 1)),
        (7, (-1, 5, -6, 1)),
        (9, (-1, 6, -9, 1)),
        (15, (1, -9, 26, -24, 1)),
    ])
    def test_table(self, n, coeffs):
        pl = polygon_lambda(n)
        assert pl.minpoly == coeffs
        assert pl.minpoly == sympy_lambda_minpoly(n)
        assert abs(pl.value - 1 / (2 - 2 * math.cos(math.pi / n))) < 1e-12

    @pytest.mark.parametrize("n", [8, 10, 11, 12, 13, 14, 16, 20])
    def test_minpoly_oracle(self, n):
        assert polygon_lambda(n, with_context=False).minpoly == sympy_lambda_minpoly(n)

    def test_spv_set_over_odd_n(self):
        spv = [n for n in range(3, 100, 2) if polygon_lambda(n, with_context=False, with_minpoly=False).spv]
        assert spv == [3, 5, 7, 9, 15]

    @pytest.mark.parametrize("n", range(3, 100, 2))
    def test_window_criterion_matches_conjugates(self, n):
        # independent numeric route over the conjugates 1/(2 - 2cos(j pi/n)), j coprime to 2n
        others = [1 / (2 - 2 * math.cos(j * math.pi / n)) for j in range(2, n) if math.gcd(j, 2 * n) == 1]
        assert odd_window_test(n) == all(v < 1 for v in others)

    @pytest.mark.parametrize("n", range(3, 40))
    def test_integrality(self, n):
        # lambda_n is integral iff Phi_2n(1) = +-1, i.e. 2n is not a prime power
        two_n = 2 * n
        prime_power = len(sympy.factorint(two_n)) == 1
        assert polygon_lambda_is_integral(n) == (not prime_power)


class TestFundamentalUnit:
    @staticmethod
    def brute_unit(ctx):
        best = None
        for b in range(-40, 41):
            for a in range(-400, 401):
                x = ctx.element([a, b])
                v = x.shadow().real
                if v > 1 + 1e-12 and abs(norm(x)) == 1 and (best is None or v < best[0]):
                    best = (v, x)
        return best[1]

    @pytest.mark.parametrize("coeffs,hint", [
        ((-1, 1, 1), -1.618), ((-1, 3, 1), -3.3), ((-2, 3, 1), -3.56), ((-1, 2, 1), -2.414), ((-3, 3, 1), -3.79),
    ])
    def test_matches_brute_force(self, coeffs, hint):
        ctx = make_context(IntPolynomial(coeffs), hint)
        assert fundamental_unit(ctx) == self.brute_unit(ctx)

    def test_sqrt17_unit_and_square(self, c17):
        eps = fundamental_unit(c17)
        assert eps.coords == (1, -2)
        assert (eps * eps).coords == (9, -16)
        assert fundamental_unit(c17, require_window=True).coords == (9, -16)
