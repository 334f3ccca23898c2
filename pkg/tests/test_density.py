import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlambda.algebra import IntPolynomial, make_context
from qlambda.density import (
    CoverError,
    CoverSet,
    cover_condition,
    cover_gaps,
    cover_set_greedy,
    cover_set_quadratic,
    is_minimal_cover,
    reduce_to_seed,
    reduction_steps,
    replication_family,
    replication_reduce,
    seed_plan,
    unit_membership,
)
from qlambda.modelset import ModelSetSpec, enumerate_radius
from qlambda.starset import SearchBudget, replay_derivation


def interval_cover_oracle(images, beta):
    """Float oracle: the intervals [(1-beta)x, (1-beta)x + beta] cover [0, 1]."""
    ivs = sorted(((1 - beta) * x, (1 - beta) * x + beta) for x in images)
    reach = 0.0
    for lo, hi in ivs:
        if lo > reach + 1e-12:
            return False
        reach = max(reach, hi)
    return reach >= 1 - 1e-12


class TestCoverGaps:
    def test_c13_four_points(self, c13):
        lam = c13.lam()
        X = (c13.zero(), c13.one(), lam, 2 * lam)
        j = c13.window_indices[0]
        assert cover_gaps(X, lam, j) is not None
        assert cover_gaps(X[:3], lam, j) is None
        beta = lam.shadow(j).real
        assert interval_cover_oracle([x.shadow(j).real for x in X], beta)
        assert not interval_cover_oracle([x.shadow(j).real for x in X[:3]], beta)

    @given(st.lists(st.integers(0, 6), min_size=1, max_size=6))
    def test_matches_float_oracle(self, golden, ks):
        # points k * lambda - floor(k mu) have window images {k mu} in [0, 1)
        j = golden.window_indices[0]
        mu = golden.lam().shadow(j).real
        lam = golden.lam()
        pts = {golden.one()} | {lam * k - math.floor(k * mu) for k in ks}
        alpha = lam
        got = cover_gaps(sorted(pts), alpha, j) is not None
        assert got == interval_cover_oracle([p.shadow(j).real for p in pts], mu)


class TestQuadraticCover:
    def test_sqrt17_unit_square(self, c17):
        alpha = c17.element([9, -16])
        cov = cover_set_quadratic(c17, alpha)
        assert cov.cf.period == (1, 1, 3)
        assert (cov.k, cov.n, cov.m) == (7, 72, -36)
        assert cov.cf.pq(7)[1] == 73
        assert not cover_condition(cov.cf, c17, alpha, cov.window_index, 6)
        assert is_minimal_cover(cov)
        assert len(cov.X) == 74

    def test_sqrt17_largest_point(self, c17):
        cov = cover_set_quadratic(c17, c17.element([9, -16]))
        # independent: brute maximum of |ceil(b mu) - b lambda| over the range
        lam = -(3 + mpmath.sqrt(17)) / 2
        mu = -(3 - mpmath.sqrt(17)) / 2
        vals = [abs(mpmath.ceil(b * mu) - b * lam) for b in range(-36, 37)]
        assert float(max(vals)) == pytest.approx(abs(cov.max_abs.shadow()), rel=1e-12)
        assert cov.max_abs.coords == (21, -36)
        assert abs(cov.max_abs.shadow()) == pytest.approx(149.2159, abs=1e-4)

    def test_large_beta_needs_no_gap(self, c17):
        # the window image of lambda is about 0.56 >= 1/2, so {0, 1} already covers
        cov = cover_set_quadratic(c17, c17.lam())
        assert cov.k is None and {x.coords for x in cov.X} == {(0, 0), (1, 0)}

    def test_alpha_image_outside_unit_interval(self, golden):
        with pytest.raises(CoverError):
            cover_set_quadratic(golden, golden.lam() - 1)

    def test_requires_real_quadratic(self, cubic):
        with pytest.raises(ValueError):
            cover_set_quadratic(cubic, cubic.lam())


class TestSeedPlans:
    def test_c13_plan(self, c13):
        lam = c13.lam()
        X = (c13.zero(), c13.one(), lam, 2 * lam)
        j = c13.window_indices[0]
        cover = CoverSet(c13, j, X, lam, cover_gaps(X, lam, j), max_abs=2 * lam)
        plan = seed_plan(cover)
        assert plan.exact_M == (Fraction(4, 3), Fraction(-10, 3))
        # |lambda - 1| / (|lambda| - 1) * |2 lambda|, in floats
        v = -(3 + math.sqrt(13)) / 2
        assert plan.M_approx == pytest.approx(abs(v - 1) / (abs(v) - 1) * abs(2 * v))
        assert len(plan.Y) == 8

    @pytest.mark.parametrize("coeffs,hint,target", [
        ((-1, 0, 1, 1), complex(-0.877, 0.745), 13.379361),
        ((-1, 1, 0, 1), complex(-0.341, 1.162), 8.424341),
    ])
    def test_cubic_plans(self, coeffs, hint, target):
        ctx = make_context(IntPolynomial(coeffs), hint)
        spec = ModelSetSpec.unit(ctx)
        cov = cover_set_greedy(spec, ctx.lam(), 3)
        plan = seed_plan(cov, spec)
        assert plan.M_approx == pytest.approx(target, abs=1e-6)
        lam = complex(ctx.lam().shadow())
        top = max(abs(complex(x.shadow())) for x in cov.X)
        assert plan.M_approx == pytest.approx(abs(lam - 1) / (abs(lam) - 1) * top, rel=1e-9)
        assert enumerate_radius(spec, plan.M, method="lattice").coord_set == plan.Y.coord_set

    def test_greedy_pool_too_small(self, cubic):
        with pytest.raises(CoverError):
            cover_set_greedy(ModelSetSpec.unit(cubic), cubic.lam(), 0.5)


@pytest.fixture(scope="module")
def c13_plan(c13):
    lam = c13.lam()
    X = (c13.zero(), c13.one(), lam, 2 * lam)
    j = c13.window_indices[0]
    cover = CoverSet(c13, j, X, lam, cover_gaps(X, lam, j), max_abs=2 * lam)
    return cover, seed_plan(cover)


class TestReduction:

    def test_every_point_reduces(self, c13, c13_plan):
        cover, plan = c13_plan
        for z in enumerate_radius(ModelSetSpec.unit(c13), 200):
            d = reduce_to_seed(z, plan, cover)
            assert replay_derivation(d) == z

    def test_outside_window_rejected(self, c13, c13_plan):
        cover, plan = c13_plan
        with pytest.raises(ValueError):
            reduce_to_seed(c13.from_int(5), plan, cover)

    @pytest.mark.parametrize("coeffs,hint", [((1, -3, 1), 2.618), ((2, -4, 1), 3.414), ((1, -4, 1), 3.732)])
    def test_replication(self, coeffs, hint):
        ctx = make_context(IntPolynomial(coeffs), hint)
        replication_family(ctx)
        for z in enumerate_radius(ModelSetSpec.unit(ctx), 40):
            assert replay_derivation(replication_reduce(z), seed=[0, 1]) == z

    def test_replication_steps_grow_logarithmically(self, golden):
        big = max(enumerate_radius(ModelSetSpec.unit(golden), 500), key=lambda e: abs(e.shadow()))
        assert reduction_steps(replication_reduce(big)) <= 4 * math.ceil(math.log(500) / math.log(2.618)) + 4

    def test_unsupported_family(self, c17):
        with pytest.raises(ValueError):
            replication_family(c17)


class TestUnitMembership:
    def test_derived(self, c17):
        res = unit_membership(c17, c17.element([9, -16]))
        assert res["status"] == "derived"

    def test_unresolved_is_not_a_no(self, golden):
        res = unit_membership(golden, golden.lam() ** 6, budget=SearchBudget(max_points=50))
        assert res["status"] == "unresolved" and res["derivation"] is None
