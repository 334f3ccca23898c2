import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlambda.algebra import IntPolynomial, make_context
from qlambda.modelset import (
    ModelSet,
    ModelSetSpec,
    Window,
    ap_intersection,
    build_scheme,
    companion_matrix,
    enumerate_radius,
    integer_superset_member,
    member,
    window_from_seed,
)

mpmath.mp.dps = 60


def mp_conjugates(coeffs):
    """All roots of the polynomial at 60 digits (low-first coefficients)."""
    return mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=200)


def brute_quadratic(coeffs, lam_hint, radius, span=80):
    """Oracle: scan a box of coordinates, decide |x| and the window with 60-digit arithmetic."""
    roots = sorted(mp_conjugates(coeffs), key=lambda r: abs(r - lam_hint))
    lam, mu = mpmath.re(roots[0]), mpmath.re(roots[1])
    out = set()
    for b in range(-span, span + 1):
        for a in range(-span, span + 1):
            if abs(a + b * lam) <= radius and 0 <= a + b * mu <= 1:
                out.add((a, b))
    return out


def brute_cubic(coeffs, lam_hint, radius, span=25):
    roots = mp_conjugates(coeffs)
    lam = min(roots, key=lambda r: abs(r - lam_hint))
    mu = next(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -40)
    out = set()
    for c in range(-span, span + 1):
        for b in range(-span, span + 1):
            for a in range(-span, span + 1):
                if 0 <= a + b * mu + c * mu * mu <= 1 and abs(a + b * lam + c * lam * lam) <= radius:
                    out.add((a, b, c))
    return out


class TestEnumeration:
    def test_golden_radius_6_has_seven_points(self, golden):
        pts = enumerate_radius(ModelSetSpec.unit(golden), 6)
        assert len(pts) == 7
        assert pts.coord_set == brute_quadratic((1, -3, 1), 2.618, 6)

    @pytest.mark.parametrize("coeffs,hint,radius", [
        ((1, -3, 1), 2.618, 25), ((-1, 3, 1), -3.3, 25), ((-2, 3, 1), -3.56, 30), ((2, -4, 1), 3.414, 20),
    ])
    def test_quadratic_matches_brute_force(self, coeffs, hint, radius):
        ctx = make_context(IntPolynomial(coeffs), hint)
        got = enumerate_radius(ModelSetSpec.unit(ctx), radius)
        assert got.coord_set == brute_quadratic(coeffs, hint, radius)

    @pytest.mark.parametrize("method", ["quadratic", "lattice"])
    def test_methods_agree_quadratic(self, c13, method):
        spec = ModelSetSpec.unit(c13)
        assert enumerate_radius(spec, 40, method=method).coord_set == enumerate_radius(spec, 40).coord_set

    def test_cubic_matches_brute_force(self, cubic):
        spec = ModelSetSpec.unit(cubic)
        got = enumerate_radius(spec, 5)
        assert got.coord_set == brute_cubic((-1, 0, 1, 1), complex(-0.877, 0.745), 5)
        assert enumerate_radius(spec, 5, method="lattice").coord_set == got.coord_set

    def test_integer_parameter(self):
        ctx = make_context(IntPolynomial([-3, 1]), 3)
        pts = enumerate_radius(ModelSetSpec.unit(ctx), 10)
        assert {e.coords[0] for e in pts} == set(range(-10, 11))

    def test_unknown_method(self, golden):
        with pytest.raises(ValueError):
            enumerate_radius(ModelSetSpec.unit(golden), 3, method="bogus")

    @given(st.integers(1, 30))
    def test_monotone_in_radius(self, golden, r):
        spec = ModelSetSpec.unit(golden)
        assert enumerate_radius(spec, r).coord_set <= enumerate_radius(spec, r + 1).coord_set


class TestWindows:
    def test_window_from_seed_bounds(self, c13):
        lam = c13.lam()
        win = window_from_seed(c13, [c13.zero(), c13.one(), lam])
        j = c13.window_indices[0]
        images = sorted(x.shadow(j).real for x in (c13.zero(), c13.one(), lam))
        assert win.lo[0].shadow(j).real == pytest.approx(images[0])
        assert win.hi[0].shadow(j).real == pytest.approx(images[-1])

    def test_empty_seed_rejected(self, golden):
        with pytest.raises(ValueError):
            window_from_seed(golden, [])

    def test_unit_window_endpoints_are_members(self, golden):
        spec = ModelSetSpec.unit(golden)
        assert member(spec, golden.zero()) and member(spec, golden.one())
        assert member(spec, golden.lam())
        assert not member(spec, golden.from_int(2))
        assert not member(spec, -golden.lam())

    @given(st.integers(-40, 40), st.integers(-20, 20))
    def test_member_matches_high_precision(self, golden, a, b):
        mu = (3 - mpmath.sqrt(5)) / 2
        assert member(ModelSetSpec.unit(golden), golden.element([a, b])) == (0 <= a + b * mu <= 1)


class TestProgressions:
    @given(st.integers(-8, 8), st.integers(-4, 4), st.integers(-5, 5), st.integers(-5, 5))
    def test_hits_are_exactly_the_members(self, golden, a, b, c, d):
        if c == 0 and d == 0:
            return
        spec = ModelSetSpec.unit(golden)
        x, dd = golden.element([a, b]), golden.element([c, d])
        hits = ap_intersection(spec, x, dd)
        window = range(-400, 401)
        assert hits == [k for k in window if member(spec, x + dd * k)]

    def test_zero_direction_rejected(self, golden):
        spec = ModelSetSpec.unit(golden)
        with pytest.raises(ValueError):
            ap_intersection(spec, golden.one(), golden.zero())


class TestScheme:
    @pytest.mark.parametrize("coeffs,hint", [
        ((1, -3, 1), 2.618), ((-1, 0, 1, 1), complex(-0.877, 0.745)), ((1, -9, 26, -24, 1), 20.84),
    ])
    def test_identity_and_injectivity(self, coeffs, hint):
        ctx = make_context(IntPolynomial(coeffs), hint)
        sch = build_scheme(ctx, samples=100)
        assert sch.identity_holds and sch.injective_on_sample
        # numpy route: V L = D V with floating roots
        lmat = np.array(companion_matrix(ctx), dtype=float)
        for r in sch.vandermonde_roots:
            mu = complex(ctx.roots[r].approx())
            v = np.array([mu ** i for i in range(ctx.degree)])
            assert np.allclose(v @ lmat, mu * v, atol=1e-8 * max(1, abs(mu)) ** ctx.degree)

    def test_companion_shape(self, golden):
        assert companion_matrix(golden) == [[0, -1], [1, 3]]


class TestIntegerScreen:
    @pytest.mark.parametrize("lam", [2, 3, 4, 6])
    def test_closure_inside_screen(self, lam):
        from qlambda.starset import closure_rank
        ctx = make_context(IntPolynomial([-lam, 1]), lam)
        assert all(integer_superset_member(lam, e.coords[0]) for e in closure_rank([0, 1], 3, ctx=ctx))

    @given(st.integers(2, 30), st.integers(-1000, 1000))
    def test_screen_definition(self, lam, n):
        want = n % lam in (0, 1) and n % (lam - 1) in (0, 1)
        assert integer_superset_member(lam, n) == want

    def test_rejects_small_lambda(self):
        with pytest.raises(ValueError):
            integer_superset_member(1, 5)


class TestEstimator:
    def test_fit_predict(self, golden):
        ms = ModelSet(golden).fit([0, 1])
        pts = enumerate_radius(ModelSetSpec.unit(golden), 6)
        assert ms.predict(list(pts)).all()
        assert ms.predict([golden.lam(), (2, 0)]).tolist() == [True, False]

    def test_predict_before_fit(self, golden):
        with pytest.raises(RuntimeError):
            ModelSet(golden).predict([golden.one()])

    def test_params_round_trip(self, golden, c13):
        ms = ModelSet(golden).fit([0, 1])
        assert ms.get_params() == {"ctx": golden}
        ms.set_params(ctx=c13)
        assert ms.window_ is None and ms.ctx is c13
        with pytest.raises(ValueError):
            ms.set_params(alpha=1)

    def test_window_from_larger_seed(self, c13):
        seed = [c13.zero(), c13.one(), c13.lam()]
        ms = ModelSet(c13).fit(seed)
        assert isinstance(ms.window_, Window)
        assert ms.predict(seed).all()
