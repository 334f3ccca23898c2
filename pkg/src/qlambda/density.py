"""Finite seeds that generate whole model sets.

A unit alpha whose window image beta lies in (0,1) contracts the window.
If the intervals [(1 - beta) x', (1 - beta) x' + beta] for x in a finite X
cover [0,1], every model set point z can be written z = x *_alpha y with
y in the model set and |y| < |z| as soon as |z| exceeds a bound M.  So the
model set is generated from the finitely many points Y with |y| <= M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    FieldElement,
    NumberFieldContext,
    RationalInterval,
    abs_compare,
    compare,
    exact_div,
    inverse_rational,
    sign_against,
)
from .algebra.contfrac import PeriodicContinuedFraction, surd_continued_fraction
from .algebra.field import MAX_LEVEL, abs2_interval, ceil_image
from .modelset import (
    ElementRadius,
    IntervalRadius,
    ModelSetSpec,
    Radius,
    enumerate_radius,
    member,
)
from .starset import Derivation, DerivationStep, PointSet, SearchBudget, _derivation_from_parents, derivation_search


class CoverError(ArithmeticError):
    """A cover certificate or a reduction step failed."""


# ---------------------------------------------------------------------------
# covering sets


@dataclass(frozen=True)
class CoverSet:
    """X with its unit alpha and an exact certificate that X covers the window.

    ``gaps`` lists consecutive pairs of X sorted by window image; each pair
    was checked to satisfy (1 - beta)(x'_{i+1} - x'_i) <= beta exactly.
    """

    ctx: NumberFieldContext
    window_index: int
    X: tuple[FieldElement, ...]
    alpha: FieldElement
    gaps: tuple[tuple[FieldElement, FieldElement], ...]
    k: int | None = None
    n: int | None = None
    m: int | None = None
    max_abs: FieldElement | None = None
    cf: PeriodicContinuedFraction | None = field(default=None, repr=False)

    @property
    def beta(self) -> float:
        return self.alpha.shadow(self.window_index).real

    def to_json(self) -> dict:
        return {
            "alpha": list(self.alpha.coords),
            "beta": self.beta,
            "X": [list(x.coords) for x in self.X],
            "k": self.k, "n": self.n, "m": self.m,
            "max_abs": None if self.max_abs is None else {
                "coords": list(self.max_abs.coords), "approx": abs(self.max_abs.shadow())},
        }


def _check_beta(alpha: FieldElement, j: int) -> None:
    if not (sign_against(alpha, 0, j) > 0 and sign_against(alpha, 1, j) < 0):
        raise CoverError("the window image of alpha must lie strictly inside (0,1)")


def _sorted_by_image(points: Sequence[FieldElement], j: int) -> list[FieldElement]:
    import functools
    return sorted(points, key=functools.cmp_to_key(lambda a, b: compare(a, b, j) or (a.coords > b.coords) - (a.coords < b.coords)))


def cover_gaps(points: Sequence[FieldElement], alpha: FieldElement, j: int):
    """Exact cover check; returns the certified consecutive pairs or None."""
    pts = _sorted_by_image(points, j)
    if not pts:
        return None
    one_minus = 1 - alpha
    # covering 0 needs an image <= 0; covering 1 needs an image >= 1 (all images lie in [0,1])
    if sign_against(pts[0], 0, j) > 0 or sign_against(pts[-1], 1, j) < 0:
        return None
    gaps = []
    for a, b in zip(pts, pts[1:]):
        if sign_against(one_minus * (b - a) - alpha, 0, j) > 0:
            return None
        gaps.append((a, b))
    return tuple(gaps)


def _window_index(ctx: NumberFieldContext) -> int:
    idx = ctx.window_indices
    if len(idx) != 1:
        raise ValueError("covering sets are implemented for exactly one window conjugate")
    return idx[0]


def _mu_surd(ctx: NumberFieldContext, j: int) -> PeriodicContinuedFraction:
    c0, c1, _ = ctx.minpoly.coeffs
    disc = c1 * c1 - 4 * c0
    mu = ctx.roots[j].approx().real
    # the two roots differ by sqrt(disc) >= 1, so the float choice is safe
    plus = (-c1 + math.sqrt(disc)) / 2
    if abs(plus - mu) < abs((-c1 - math.sqrt(disc)) / 2 - mu):
        return surd_continued_fraction(-c1, disc, 2)
    return surd_continued_fraction(c1, disc, -2)


def eta_element(cf: PeriodicContinuedFraction, ctx: NumberFieldContext, k: int) -> FieldElement:
    """eta_k = (-1)^k (q_k mu - p_k) written in Z[lambda] (lambda standing in for mu)."""
    c0, c1 = cf.eta(k)
    return ctx.element([c0, c1])


def cover_condition(cf, ctx: NumberFieldContext, alpha: FieldElement, j: int, k: int) -> bool:
    """eta_k + eta_{k-1} <= beta / (1 - beta), decided exactly at the window conjugate."""
    s = eta_element(cf, ctx, k) + eta_element(cf, ctx, k - 1)
    return sign_against(s * (1 - alpha) - alpha, 0, j) <= 0


def cover_set_quadratic(ctx: NumberFieldContext, alpha: FieldElement, max_k: int = 200) -> CoverSet:
    """Three-gap cover {1} U {ceil(b mu) - b lambda : m <= b <= m + n}.

    k is the least index with eta_k + eta_{k-1} <= beta/(1-beta), n = q_k - 1
    and m centers the range (ceil(-n/2) for lambda > 0, floor(-n/2) for
    lambda < 0).  When beta/(1-beta) >= 1 no gap needs closing and X = {0, 1}.
    """
    if ctx.degree != 2 or not ctx.lambda_is_real:
        raise ValueError("cover_set_quadratic needs a real quadratic parameter")
    j = _window_index(ctx)
    _check_beta(alpha, j)
    cf = _mu_surd(ctx, j)
    lam = ctx.lam()
    if sign_against(alpha * 2 - 1, 0, j) >= 0:
        k, n = None, 0
    else:
        k = next((t for t in range(max_k) if cover_condition(cf, ctx, alpha, j, t)), None)
        if k is None:
            raise CoverError("no index satisfies the gap condition within the search range")
        n = cf.pq(k)[1] - 1
    lam_pos = sign_against(lam, 0, ctx.lambda_index) > 0
    m = -(n // 2) if lam_pos else -((n + 1) // 2)
    pts = {ctx.one()}
    for b in range(m, m + n + 1):
        pts.add(ctx.from_int(ceil_image(lam * b, j)) - lam * b)
    X = tuple(sorted(pts))
    gaps = cover_gaps(X, alpha, j)
    if gaps is None:
        raise CoverError("constructed set fails the exact cover check")
    big = X[0]
    for x in X[1:]:
        if abs_compare(x, big) > 0:
            big = x
    return CoverSet(ctx, j, X, alpha, gaps, k, n, m, big, cf)


def is_minimal_cover(cover: CoverSet) -> bool:
    """True when dropping any single point breaks the cover.

    Covering is monotone in X, so this shows no proper subset covers.
    """
    for i in range(len(cover.X)):
        rest = cover.X[:i] + cover.X[i + 1:]
        if cover_gaps(rest, cover.alpha, cover.window_index) is not None:
            return False
    return True


def cover_set_greedy(spec: ModelSetSpec, alpha: FieldElement, radius) -> CoverSet:
    """Greedy interval cover of [0,1] drawn from model set points within ``radius``."""
    ctx = spec.ctx
    j = _window_index(ctx)
    _check_beta(alpha, j)
    pool = list(enumerate_radius(spec, radius))
    one_minus = 1 - alpha
    chosen = [ctx.zero()]
    reach = alpha  # right end of the interval of 0, as an element read at j
    while sign_against(reach, 1, j) < 0:
        best = None
        for p in pool:
            start = one_minus * p
            if compare(start, reach, j) > 0:
                continue
            end = start + alpha
            if best is None or compare(end, best[1], j) > 0 or (
                    compare(end, best[1], j) == 0 and abs_compare(p, best[0]) < 0):
                best = (p, end)
        if best is None or compare(best[1], reach, j) <= 0:
            raise CoverError("the enumerated pool cannot cover the window; enlarge the radius")
        chosen.append(best[0])
        reach = best[1]
    if ctx.one() not in chosen:
        chosen.append(ctx.one())
    X = tuple(sorted(set(chosen)))
    gaps = cover_gaps(X, alpha, j)
    if gaps is None:
        raise CoverError("greedy selection fails the exact cover check")
    big = X[0]
    for x in X[1:]:
        if abs_compare(x, big) > 0:
            big = x
    return CoverSet(ctx, j, X, alpha, gaps, max_abs=big)


# ---------------------------------------------------------------------------
# seed plans


@dataclass(frozen=True)
class SeedPlan:
    """M = |alpha - 1| / (|alpha| - 1) * max |x| and Y = model set points with |y| <= M."""

    M: Radius
    Y: PointSet
    exact_M: tuple[Fraction, ...] | None = None

    @property
    def M_approx(self) -> float:
        return self.M.approx()

    def to_json(self) -> dict:
        return {
            "M": {"approx": self.M_approx,
                  "exact": None if self.exact_M is None else [str(c) for c in self.exact_M]},
            "Y": [list(y.coords) for y in self.Y],
        }


def _real_abs(x: FieldElement) -> FieldElement:
    return x if sign_against(x, 0, x.ctx.lambda_index) >= 0 else -x


def seed_bound(cover: CoverSet) -> Radius:
    ctx = cover.ctx
    alpha = cover.alpha
    top = cover.max_abs if cover.max_abs is not None else max(cover.X, key=lambda x: abs(x.shadow()))
    if ctx.lambda_is_real:
        a_abs = _real_abs(alpha)
        if sign_against(a_abs, 1, ctx.lambda_index) <= 0:
            raise CoverError("need |alpha| > 1")
        num = _real_abs(alpha - 1) * _real_abs(top)
        inv = inverse_rational(a_abs - 1)
        prod = [Fraction(0)] * ctx.degree
        # num * inv as rational coordinates: multiply through the mult matrix of num
        mat = ctx.mult_matrix(num.coords)
        for i in range(ctx.degree):
            prod[i] = sum(Fraction(mat[i][t]) * inv[t] for t in range(ctx.degree))
        den = math.lcm(*(c.denominator for c in prod))
        return ElementRadius(ctx.element([int(c * den) for c in prod]), den)

    def enclose_sq(level: int) -> RationalInterval:
        a1 = abs2_interval(alpha - 1, level)
        a = abs2_interval(alpha, level).sqrt(64 + 8 * level)
        t = abs2_interval(top, level)
        denom = RationalInterval(a.lo - 1, a.hi - 1)
        if denom.lo <= 0:
            raise CoverError("need |alpha| > 1")
        d2 = denom.square()
        q = a1 * t
        return RationalInterval(q.lo / d2.hi, q.hi / d2.lo)

    est = abs(complex(alpha.shadow()) - 1) / (abs(complex(alpha.shadow())) - 1) * abs(complex(top.shadow()))
    if est <= 0 or abs(complex(alpha.shadow())) <= 1:
        raise CoverError("need |alpha| > 1")
    return IntervalRadius(enclose_sq, est)


def seed_plan(cover: CoverSet, spec: ModelSetSpec | None = None) -> SeedPlan:
    spec = spec or ModelSetSpec.unit(cover.ctx)
    M = seed_bound(cover)
    Y = enumerate_radius(spec, M)
    for x in cover.X:
        if x not in Y:
            raise CoverError(f"cover point {x.human()} is missing from Y")
    exact = None
    if isinstance(M, ElementRadius):
        exact = tuple(Fraction(c, M.den) for c in M.num.coords)
    return SeedPlan(M, Y, exact)


# ---------------------------------------------------------------------------
# reductions


def _pick_cover_point(z: FieldElement, cover: CoverSet) -> FieldElement:
    j = cover.window_index
    one_minus = 1 - cover.alpha
    best = None
    for x in cover.X:
        lo = one_minus * x
        if compare(lo, z, j) <= 0 and compare(z, lo + cover.alpha, j) <= 0:
            if best is None or abs_compare(x, best) < 0 or (abs_compare(x, best) == 0 and x.coords < best.coords):
                best = x
    if best is None:
        raise CoverError(f"no cover point covers the image of {z.human()}")
    return best


def reduce_to_seed(z: FieldElement, plan: SeedPlan, cover: CoverSet, max_steps: int = 10_000) -> Derivation:
    """Write z as iterated x *_alpha y steps ending in Y (star parameter alpha)."""
    ctx = z.ctx
    spec = ModelSetSpec.unit(ctx)
    if not member(spec, z):
        raise ValueError(f"{z.human()} is not in the model set")
    inv = inverse_rational(cover.alpha)
    if any(c.denominator != 1 for c in inv):
        raise CoverError("alpha is not a unit")
    alpha_inv = ctx.element([int(c) for c in inv])
    parents = {}
    cur = z
    steps = 0
    while cur not in plan.Y:
        if steps >= max_steps:
            raise CoverError("reduction did not terminate within the step budget")
        x = _pick_cover_point(cur, cover)
        y = x + alpha_inv * (cur - x)
        if not member(spec, y):
            raise CoverError("reduced point left the window")
        if abs_compare(y, cur) >= 0:
            raise CoverError("norm failed to decrease")
        parents[cur.coords] = (x.coords, y.coords)
        cur = y
        steps += 1
    return _derivation_from_parents(ctx, z.coords, parents, tuple(plan.Y), cover.alpha)


def reduction_steps(d: Derivation) -> int:
    return sum(1 for s in d.steps if s.op == "star")


@dataclass(frozen=True)
class _Family:
    name: str
    minpoly: tuple[int, ...]  # of the normalized parameter nu
    extra_base: bool


_FAMILIES = (
    _Family("1+phi", (1, -3, 1), True),
    _Family("2+sqrt2", (2, -4, 1), False),
    _Family("-1-sqrt3", (-2, 2, 1), False),
)


def replication_family(ctx: NumberFieldContext) -> tuple[_Family, bool]:
    """Identify the family; the flag says whether nu = lambda (else nu = 1 - lambda)."""
    coeffs = ctx.minpoly.coeffs
    # minimal polynomial of 1 - lambda is p(1 - x) up to sign
    from .algebra import IntPolynomial
    refl = IntPolynomial(coeffs).compose(IntPolynomial([1, -1]))
    refl = refl if refl.leading > 0 else -refl
    for fam in _FAMILIES:
        if coeffs == fam.minpoly:
            nu_is_lam = True
        elif refl.coeffs == fam.minpoly:
            nu_is_lam = False
        else:
            continue
        # nu must be the large root (its conjugate lies in the window)
        nu = ctx.lam() if nu_is_lam else 1 - ctx.lam()
        if sign_against(nu, 1, ctx.lambda_index) > 0 or sign_against(nu, 0, ctx.lambda_index) < 0:
            return fam, nu_is_lam
    raise ValueError("parameter is outside the supported replication families")


def replication_base(ctx: NumberFieldContext) -> dict[tuple, tuple[tuple, tuple]]:
    """Base points with their one-step derivations from {0, 1} (under lambda)."""
    fam, nu_is_lam = replication_family(ctx)
    nu = ctx.lam() if nu_is_lam else 1 - ctx.lam()
    zero, one = ctx.zero(), ctx.one()
    out = {}

    def add(value, left, right):
        # value = left *_nu right; under lambda that is right *_lambda left when nu = 1 - lambda
        pair = (left.coords, right.coords) if nu_is_lam else (right.coords, left.coords)
        out[value.coords] = pair

    add(nu, zero, one)
    add(1 - nu, one, zero)
    if fam.extra_base:
        add(1 - 2 * nu, nu, zero)
    return out


def replication_reduce(z: FieldElement, ctx: NumberFieldContext | None = None, max_steps: int = 1000) -> Derivation:
    """Reduce a model set point to the base by undoing extrapolations by 0 and 1.

    With nu the normalized parameter and mu its window image: images in
    [0, 1 - mu] come from y *_nu 0, images in [mu, 1] from y *_nu 1, and
    images in the middle band from 0 *_nu y or 1 *_nu y according to the
    residue of z modulo nu.  The derivation replays under lambda from {0, 1}.
    """
    ctx = z.ctx if ctx is None else ctx
    fam, nu_is_lam = replication_family(ctx)
    nu = ctx.lam() if nu_is_lam else 1 - ctx.lam()
    j = _window_index(ctx)
    spec = ModelSetSpec.unit(ctx)
    if not member(spec, z):
        raise ValueError(f"{z.human()} is not in the model set")
    base = replication_base(ctx)
    zero, one = ctx.zero(), ctx.one()
    one_minus = 1 - nu
    parents: dict[tuple, tuple[tuple, tuple]] = {}
    cur = z
    for _ in range(max_steps):
        if cur.coords in base or cur.coords in (zero.coords, one.coords):
            break
        if sign_against(cur - one_minus, 0, j) <= 0:  # z' <= 1 - mu
            y = exact_div(cur, one_minus)
            left, right = y, zero
        elif compare(cur, nu, j) >= 0:  # z' >= mu
            y = exact_div(cur - nu, one_minus)
            left, right = y, one
        else:
            y = exact_div(cur, nu)
            if y is not None:
                left, right = zero, y
            else:
                y = exact_div(cur - one_minus, nu)
                left, right = one, y
        if y is None:
            raise CoverError(f"{cur.human()} has no admissible preimage")
        if not member(spec, y):
            raise CoverError("preimage left the window")
        parents[cur.coords] = (left.coords, right.coords) if nu_is_lam else (right.coords, left.coords)
        cur = y
    else:
        raise CoverError("replication reduction did not terminate")
    parents.update({k: v for k, v in base.items() if k not in parents})
    return _derivation_from_parents(ctx, z.coords, parents, (zero, one), None)


def unit_membership(ctx: NumberFieldContext, alpha: FieldElement, budget: SearchBudget | None = None) -> dict:
    """Search a derivation of alpha from {0, 1}; an unsuccessful search leaves the question open."""
    res = derivation_search(alpha, budget=budget or SearchBudget(max_points=20_000))
    return {
        "alpha": alpha.human(),
        "status": "derived" if res.found else "unresolved",
        "derivation": res.derivation.to_json() if res.found else None,
        "explored": res.explored,
    }
