import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull, Delaunay
from scipy.spatial.distance import pdist

from qlambda.algebra import ContextError
from qlambda.shapes import (
    CyclotomicContext,
    HullWindow,
    axis_projection_check,
    distance_stats,
    hexagon_parity_check,
    lambda_n_element,
    planar_closure,
    polygon_context,
    polygon_vertices,
    reflect,
    rotate,
    symmetry_check,
    to_svg,
    window_embeddings,
)
from qlambda.spv import polygon_lambda


@pytest.fixture(scope="module")
def cyc5():
    return CyclotomicContext.of(5)


@pytest.fixture(scope="module")
def pentagon_closure(cyc5):
    seed = polygon_vertices(5, cyc5)
    return seed, planar_closure(seed, lambda_n_element(5, cyc5), radius=10)


class TestRing:
    @pytest.mark.parametrize("m,order,k", [(5, 5, 1), (5, 10, 3), (8, 8, 3), (12, 4, 1), (12, 6, 5), (3, 6, 1)])
    def test_roots_match_numeric(self, m, order, k):
        cyc = CyclotomicContext.of(m)
        assert abs(complex(cyc.root(order, k).shadow()) - cmath.exp(2j * math.pi * k / order)) < 1e-12

    def test_root_not_in_ring(self):
        with pytest.raises(ContextError):
            CyclotomicContext.of(5).root(4)

    @given(st.lists(st.integers(-5, 5), min_size=4, max_size=4), st.sampled_from([1, 3, 5, 7]))
    def test_automorphism_is_ring_map(self, c, j):
        cyc = CyclotomicContext.of(8)
        x = cyc.ctx.element(c)
        y = x * x + 3
        assert cyc.automorphism(y, j) == cyc.automorphism(x, j) ** 2 + 3

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_lambda_n_non_integral_rejected(self, n):
        with pytest.raises(ContextError):
            lambda_n_element(n)

    @pytest.mark.parametrize("n", [3, 5, 6, 7, 9, 12])
    def test_lambda_n_value(self, n):
        lam = lambda_n_element(n)
        assert abs(complex(lam.shadow()) - 1 / (2 - 2 * math.cos(math.pi / n))) < 1e-9
        assert lam.conj() == lam

    def test_lambda_n_matches_minpoly(self):
        for n in (5, 7, 9, 15):
            lam = lambda_n_element(n)
            coeffs = polygon_lambda(n, with_context=False).minpoly
            acc = lam.ctx.zero()
            for c in reversed(coeffs):
                acc = acc * lam + c
            assert acc.is_zero()

    def test_polygon_context_order(self):
        assert polygon_context(5, 5).m == 5
        assert polygon_context(4, 8).m == 8
        assert polygon_context(6, 12).m == 12


class TestPolygon:
    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 12])
    def test_vertices_numeric(self, n):
        verts = polygon_vertices(n)
        got = sorted((round(z.real, 9), round(z.imag, 9)) for z in verts.shadows())
        w = cmath.exp(2j * math.pi / n)
        want = sorted((round(s.real, 9), round(s.imag, 9))
                      for s in (sum(w ** k for k in range(l)) for l in range(n)))
        assert got == want
        assert all(z.imag >= -1e-12 for z in verts.shadows())

    def test_too_few_vertices(self):
        with pytest.raises(ValueError):
            polygon_vertices(2)

    @pytest.mark.parametrize("n", [5, 8])
    def test_seed_symmetric(self, n):
        assert symmetry_check(polygon_vertices(n)) == {"rotation": True, "reflection": True}

    def test_rotate_and_reflect_fix_center(self, cyc5):
        seed = polygon_vertices(5, cyc5)
        v = seed.elements[2]
        assert rotate(seed, v) in seed and reflect(v) in seed


class TestHullWindow:
    def test_window_embeddings_pentagon(self, cyc5):
        idx = window_embeddings(cyc5, lambda_n_element(5, cyc5))
        assert len(idx) == 1
        lam_img = lambda_n_element(5, cyc5).shadow(idx[0]).real
        assert 0 < lam_img < 1

    def test_non_real_param_has_no_window(self, cyc5):
        assert window_embeddings(cyc5, cyc5.root(5)) == ()

    @given(st.lists(st.integers(-6, 6), min_size=4, max_size=4))
    def test_contains_matches_float(self, cyc5, c):
        seed = list(polygon_vertices(5, cyc5).elements)
        lam = lambda_n_element(5, cyc5)
        hw = HullWindow(cyc5, seed, lam)
        x = cyc5.ctx.element(c)
        (i,) = hw.indices
        pts = np.array([[complex(s.shadow(i)).real, complex(s.shadow(i)).imag] for s in seed])
        z = complex(x.shadow(i))
        # float oracle with a margin: points clearly inside or clearly outside
        tri = Delaunay(pts)
        inside = tri.find_simplex([[z.real, z.imag]])[0] >= 0
        assert hw.contains(x) == inside or _near_boundary(pts, z)


def _near_boundary(pts, z, tol=1e-9):
    hull = ConvexHull(pts)
    return any(abs(eq[0] * z.real + eq[1] * z.imag + eq[2]) < tol for eq in hull.equations)


class TestClosure:
    def test_closure_inside_windows(self, pentagon_closure, cyc5):
        seed, ps = pentagon_closure
        hw = HullWindow(cyc5, list(seed.elements), lambda_n_element(5, cyc5))
        assert all(hw.contains(x) for x in ps)

    def test_symmetric(self, pentagon_closure):
        _, ps = pentagon_closure
        assert symmetry_check(ps)["reflection"]

    def test_rank_matches_radius_subset(self, cyc5):
        seed = polygon_vertices(5, cyc5)
        lam = lambda_n_element(5, cyc5)
        r1 = planar_closure(seed, lam, rank=1)
        big = planar_closure(seed, lam, radius=40)
        near = {x.coords for x in r1 if abs(complex(x.shadow()) - complex(1 / (1 - cyc5.root(5).shadow()))) <= 20}
        assert near <= big.points.coord_set

    def test_needs_rank_or_radius(self, cyc5):
        with pytest.raises(ValueError):
            planar_closure(polygon_vertices(5, cyc5), lambda_n_element(5, cyc5))

    def test_projection_check(self, pentagon_closure, cyc5):
        seed, ps = pentagon_closure
        rep = axis_projection_check(ps, cyc5.ctx.one(), seed=seed, param=lambda_n_element(5, cyc5))
        assert rep.passed and rep.checked == len(ps)


class TestDistances:
    def test_pentagon_unit_min(self, pentagon_closure):
        _, ps = pentagon_closure
        ds = distance_stats(ps)
        z = ps.shadows()
        brute = pdist(np.column_stack([z.real, z.imag])).min()
        assert ds.min_distance == pytest.approx(brute, abs=1e-12)
        assert ds.min_at_least(1) and not ds.min_at_least(1.0001)
        assert ds.min_distance_sq.coords == ps.cyc.ctx.one().coords

    def test_pairs_are_all_attaining(self, pentagon_closure):
        _, ps = pentagon_closure
        ds = distance_stats(ps)
        z = ps.shadows()
        d = np.abs(z[:, None] - z[None, :])
        n_brute = int(((d < 1 + 1e-9) & (d > 0)).sum() // 2)
        assert len(ds.pairs) == n_brute

    def test_needs_two_points(self, cyc5):
        with pytest.raises(ValueError):
            distance_stats([cyc5.ctx.one()])


class TestHexagon:
    @staticmethod
    def brute(radius):
        """Oracle in plain integer pairs (a, b) = a + b eta: star by 2 is 2y - x."""
        eta = cmath.exp(2j * math.pi / 3)
        w6 = cmath.exp(1j * math.pi / 3)
        verts = {(0, 0)}
        acc, power = 0, 1
        for _ in range(5):
            acc += power
            power *= w6
            verts.add(_to_ab(acc, eta))
        center = 1 / (1 - w6)
        cur = set(verts)
        while True:
            new = {(2 * y[0] - x[0], 2 * y[1] - x[1]) for x in cur for y in cur}
            new = {p for p in new if abs(p[0] + p[1] * eta - center) <= radius + 1e-9} | cur
            if new == cur:
                return cur
            cur = new

    def test_matches_brute_force(self):
        res = hexagon_parity_check(radius=8)
        assert {x.coords for x in res["set"]} == self.brute(8)
        assert not res["violations"]
        assert not res["contains_1_plus_eta"]


def _to_ab(z, eta):
    b = round(z.imag / eta.imag)
    a = round(z.real - b * eta.real)
    return (a, b)


class TestSvg:
    def test_deterministic(self, pentagon_closure):
        _, ps = pentagon_closure
        assert to_svg(ps) == to_svg(list(reversed(ps.elements)))
        assert to_svg(ps).startswith("<svg") and to_svg(ps).count("<circle") == len(ps)
