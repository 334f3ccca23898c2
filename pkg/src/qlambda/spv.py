"""Strong PV classification, low-degree sPV families, polygon constants and units."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .algebra import (
    FieldElement,
    IntPolynomial,
    NumberFieldContext,
    make_context,
    norm,
    sign_against,
    surd_continued_fraction,
)
from .algebra.field import ContextError, embed_interval
from .algebra.interval import RationalInterval

SPV_TRIVIAL = "sPV-trivial"
SPV_NONTRIVIAL = "sPV-nontrivial"
NOT_SPV = "not-sPV"

UNIT_INTERVAL = "unit-interval"
REAL_LINE = "real-line"
COMPLEX_PLANE = "complex-plane"


@dataclass(frozen=True)
class SpvReport:
    is_algebraic_integer: bool
    degree: int
    unit_interval_conjugate_count: int
    verdict: str
    convexity_region: str
    discreteness: str

    @property
    def is_spv(self) -> bool:
        return self.verdict != NOT_SPV

    def to_json(self) -> dict:
        return {
            "is_algebraic_integer": self.is_algebraic_integer,
            "degree": self.degree,
            "k": self.unit_interval_conjugate_count,
            "verdict": self.verdict,
            "convexity_region": self.convexity_region,
            "discreteness": self.discreteness,
        }


def convexity_region(ctx: NumberFieldContext) -> str:
    """Smallest of [0,1], R, C containing lambda, decided exactly."""
    if not ctx.lambda_is_real:
        return COMPLEX_PLANE
    lam = ctx.lam()
    i = ctx.lambda_index
    if sign_against(lam, 0, i) >= 0 and sign_against(lam, 1, i) <= 0:
        return UNIT_INTERVAL
    return REAL_LINE


def classify_spv(ctx: NumberFieldContext) -> SpvReport:
    """Decide whether lambda is strong PV.

    Every conjugate other than lambda and its complex conjugate must be real
    and lie strictly inside (0, 1); ``k`` counts those conjugates.
    """
    skip = {ctx.lambda_index}
    if not ctx.lambda_is_real:
        skip.add(ctx.conjugate_root_index())
    others = [i for i in range(ctx.degree) if i not in skip]
    inside = set(ctx.real_unit_interval_indices)
    k = sum(1 for i in others if i in inside)
    spv = k == len(others)
    if spv:
        verdict = SPV_TRIVIAL if k == 0 else SPV_NONTRIVIAL
        disc = "uniformly discrete"
    else:
        verdict = NOT_SPV
        disc = "discreteness unknown"
    return SpvReport(True, ctx.degree, k, verdict, convexity_region(ctx), disc)


# ---------------------------------------------------------------------------
# quadratic and cubic families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticParams:
    m: int
    n: int

    @property
    def produces_spv(self) -> bool:
        return 0 < self.n <= self.m

    @property
    def minpoly(self) -> IntPolynomial:
        return IntPolynomial([-self.n, self.m, 1])


def quadratic_from_mn(m: int, n: int) -> NumberFieldContext:
    """Context for x^2 + m x - n with lambda its negative root."""
    params = QuadraticParams(m, n)
    if not params.produces_spv:
        raise ValueError(f"need 0 < n <= m, got m={m}, n={n}")
    neg_root = (-m - math.sqrt(m * m + 4 * n)) / 2
    return make_context(params.minpoly, neg_root)


@dataclass(frozen=True)
class CubicParams:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        a, b, c = self.a, self.b, self.c
        return a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c

    @property
    def minpoly(self) -> IntPolynomial:
        return IntPolynomial([self.c, self.b, self.a, 1])


@dataclass(frozen=True)
class CubicVerdict:
    holds: bool
    discriminant: int
    context: NumberFieldContext | None


def cubic_spv_check(params: CubicParams, mode: str) -> CubicVerdict:
    """Sufficient sPV conditions for x^3 + a x^2 + b x + c.

    ``nonreal``: c < 0, a + b + c >= 0 and negative discriminant; the
    designated root is the non-real one in the upper half-plane.
    ``real``: c > 0, a + b + c >= 0, -2a - 3 < b < 0 and positive
    discriminant; the designated root is the least real root.
    """
    a, b, c = params.a, params.b, params.c
    disc = params.discriminant
    if mode == "nonreal":
        holds = c < 0 and a + b + c >= 0 and disc < 0
    elif mode == "real":
        holds = c > 0 and a + b + c >= 0 and -2 * a - 3 < b < 0 and disc > 0
    else:
        raise ValueError("mode must be 'nonreal' or 'real'")
    if not holds:
        return CubicVerdict(False, disc, None)
    import numpy as np

    roots = np.roots([1, a, b, c])
    if mode == "nonreal":
        hint = max(roots, key=lambda z: z.imag)
    else:
        hint = min(roots, key=lambda z: z.real)
    return CubicVerdict(True, disc, make_context(params.minpoly, complex(hint)))


# ---------------------------------------------------------------------------
# polygon constants lambda_n
# ---------------------------------------------------------------------------

def _totatives(n: int) -> list[int]:
    return [j for j in range(1, n) if gcd(j, n) == 1]


def _cyclo_rational(coeff: list[int], phi: tuple[int, ...]) -> int:
    """Reduce sum c_e zeta^e modulo the monic integer Phi and require a constant."""
    rem = list(coeff)
    d = len(phi) - 1
    for k in range(len(rem) - 1, d - 1, -1):
        c = rem[k]
        if c:
            base = k - d
            for i, f in enumerate(phi):
                rem[base + i] -= c * f
    if any(rem[1:d]):
        raise ArithmeticError("symmetric function is not rational")
    return rem[0]


def polygon_theta_poly(n: int) -> list[int]:
    """Integer coefficients (low first) of prod (x - theta_j).

    theta_j = 2 - w^j - w^-j with w = e^(i pi/n) and j over the totatives of
    2n below n.  Coefficients live in Z[zeta_2n]; each is stored as a length
    2n integer vector over zeta^e (exponents mod 2n), so multiplying by a
    linear factor is a pair of rotations.  The final coefficients are
    symmetric functions of a full conjugate orbit and reduce to integers.
    """
    from .algebra.polynomial import cyclotomic

    N = 2 * n
    js = [j for j in _totatives(N) if j < n]
    zero = [0] * N
    poly: list[list[int]] = [[1] + [0] * (N - 1)]
    for j in js:
        nxt = [list(zero) for _ in range(len(poly) + 1)]
        for k, c in enumerate(poly):
            up = nxt[k + 1]
            for e in range(N):
                up[e] += c[e]
            low = nxt[k]
            for e, v in enumerate(c):
                if v:
                    low[e] -= 2 * v
                    low[(e + j) % N] += v
                    low[(e - j) % N] += v
        poly = nxt
    phi = cyclotomic(N).coeffs
    return [_cyclo_rational(c, phi) for c in poly]


def polygon_lambda_minpoly(n: int) -> tuple[list[Fraction], bool]:
    """Minimal polynomial of lambda_n = 1 / (2 - 2 cos(pi/n)), exactly.

    The conjugates of lambda_n are the reciprocals 1/theta_j, so the minimal
    polynomial is the reversal of prod (x - theta_j).  Returns monic rational
    coefficients (low first) and an integrality flag.
    """
    theta_poly = polygon_theta_poly(n)
    rev = [Fraction(c) for c in reversed(theta_poly)]
    lead = rev[-1]
    monic_rev = [c / lead for c in rev]
    integral = all(c.denominator == 1 for c in monic_rev)
    return monic_rev, integral


def polygon_lambda_is_integral(n: int) -> bool:
    """lambda_n is integral iff prod theta_j = +-1; that product has absolute
    value |Phi_2n(1)|, which is 1 unless 2n is a prime power."""
    from .algebra.polynomial import cyclotomic

    return abs(cyclotomic(2 * n)(1)) == 1


@dataclass(frozen=True)
class PolygonLambda:
    n: int
    minpoly: tuple[int, ...] | None
    monic_minpoly: tuple[Fraction, ...] | None
    value: float
    is_algebraic_integer: bool
    spv: bool
    spv_by_window: bool
    context: NumberFieldContext | None

    def minpoly_human(self) -> str:
        if self.minpoly is None:
            return "?"
        return IntPolynomial(self.minpoly).human()


def odd_window_test(n: int) -> bool:
    """Coprimality window criterion for odd n: sPV iff no j coprime to n with
    n/3 <= j <= 2n/3 other than (n +- 1)/2."""
    if n % 2 == 0:
        raise ValueError("criterion applies to odd n")
    exempt = {(n - 1) // 2, (n + 1) // 2}
    for j in _totatives(n):
        if 3 * j >= n and 3 * j <= 2 * n and j not in exempt:
            return False
    return True


def _conjugate_test(n: int) -> bool:
    """Independent route: every other conjugate 1/(2 - 2cos(j pi/n)) is < 1,
    i.e. j > n/3, for j coprime to 2n in (1, n)."""
    return all(3 * j > n for j in _totatives(2 * n) if 1 < j < n)


def polygon_lambda(n: int, with_context: bool = True, with_minpoly: bool = True) -> PolygonLambda:
    """lambda_n with its minimal polynomial and sPV verdict.

    Integrality is decided from |Phi_2n(1)|; when the minimal polynomial is
    computed it must agree.  The sPV verdict comes from the conjugate
    positions (every other conjugate below 1 iff j > n/3), cross-checked
    against the coprimality window criterion for odd n and, when a context
    is built, against :func:`classify_spv`.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    integral = polygon_lambda_is_integral(n)
    monic = ints = None
    if with_minpoly:
        monic, integral_mp = polygon_lambda_minpoly(n)
        if integral_mp != integral:
            raise ArithmeticError(f"integrality routes disagree for n={n}")
        den = 1
        for c in monic:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in monic]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = tuple(c // g for c in ints)
        monic = tuple(monic)
    value = 1 / (2 - 2 * math.cos(math.pi / n))
    ctx = None
    spv_ctx = None
    if integral and with_context and monic is not None and len(monic) - 1 <= 8:
        ctx = make_context(IntPolynomial(int(c) for c in monic), value)
        spv_ctx = classify_spv(ctx).is_spv
    spv_route = integral and _conjugate_test(n)
    if spv_ctx is not None and spv_ctx != spv_route:
        raise ArithmeticError(f"sPV routes disagree for n={n}")
    by_window = odd_window_test(n) if n % 2 == 1 else spv_route
    if n % 2 == 1 and by_window != spv_route:
        raise ArithmeticError(f"window criterion disagrees for n={n}")
    return PolygonLambda(n, ints, monic, value, integral, spv_route, by_window, ctx)


# ---------------------------------------------------------------------------
# units of real quadratic rings
# ---------------------------------------------------------------------------

def _quadratic_data(ctx: NumberFieldContext) -> tuple[int, int, int, int]:
    """(u, v, disc, sign) with minpoly x^2 + u x + v and lambda = (-u + sign sqrt(disc))/2."""
    if ctx.degree != 2 or not ctx.lambda_is_real:
        raise ValueError("context must be real quadratic")
    v, u, _ = ctx.minpoly.coeffs
    disc = u * u - 4 * v
    other = 1 - ctx.lambda_index
    sign = 1 if ctx.roots[ctx.lambda_index].approx().real > ctx.roots[other].approx().real else -1
    return u, v, disc, sign


def _unit_from_ts(ctx: NumberFieldContext, t: int, s: int) -> FieldElement:
    """(t + s sqrt(disc)) / 2 in lambda-coordinates."""
    u, v, disc, sign = _quadratic_data(ctx)
    # sqrt(disc) = sign * (2 lambda + u)
    c0 = t + s * sign * u
    c1 = 2 * s * sign
    if c0 % 2 or c1 % 2:
        raise ArithmeticError("element not in Z[lambda]")
    return FieldElement(ctx, [c0 // 2, c1 // 2])


def _greater_than_one(x: FieldElement) -> bool:
    return sign_against(x, 1, x.ctx.lambda_index) > 0


def _normalize_unit(x: FieldElement) -> FieldElement:
    """Among +-x, +-1/x return the one > 1."""
    ctx = x.ctx
    n = norm(x)
    inv = FieldElement(ctx, [n * c for c in _conj_coords(x)])  # 1/x = conj(x)/N
    for cand in (x, -x, inv, -inv):
        if _greater_than_one(cand):
            return cand
    raise ArithmeticError("unit of modulus 1")


def _conj_coords(x: FieldElement) -> list[int]:
    u = x.ctx.minpoly.coeffs[1]
    a, b = x.coords
    # conj(lambda) = -u - lambda
    return [a - b * u, -b]


def fundamental_unit(ctx: NumberFieldContext, require_window: bool = False) -> FieldElement:
    """Smallest unit > 1 of Z[lambda] for a real quadratic context.

    A Pell solution t^2 - disc s^2 = +-4 (or +-1) is read off the convergents
    of sqrt(disc); smaller units that the convergents can miss are then ruled
    in or out by scanning the lambda-coefficient below the candidate's.
    With ``require_window`` the result is the smallest unit > 1 whose
    conjugate lies in (0, 1), which is the fundamental unit or its square.
    """
    u, v, disc, sign = _quadratic_data(ctx)
    cf = surd_continued_fraction(0, disc, 1)
    candidate = None
    count = 2 * (len(cf.preperiod) + len(cf.period)) + 2
    for p, q in cf.convergents(count):
        val = p * p - disc * q * q
        if val in (1, -1):
            candidate = _unit_from_ts(ctx, 2 * p, 2 * q)
            break
        if val in (4, -4):
            candidate = _unit_from_ts(ctx, p, q)
            break
    if candidate is None:
        raise ArithmeticError("no Pell solution found within two periods")
    best = _normalize_unit(candidate)
    b_limit = abs(best.coords[1])
    for s in range(1, b_limit + 1):
        for pm in (4, -4):
            t2 = disc * s * s + pm
            if t2 < 0:
                continue
            t = isqrt(t2)
            if t * t != t2:
                continue
            for tt in {t, -t}:
                try:
                    unit = _normalize_unit(_unit_from_ts(ctx, tt, s))
                except ArithmeticError:
                    continue
                if sign_against(unit - best, 0, ctx.lambda_index) < 0:
                    best = unit
        if abs(best.coords[1]) < s:
            break
    if require_window:
        w = [i for i in range(2) if i != ctx.lambda_index][0]
        if not (sign_against(best, 0, w) > 0 and sign_against(best, 1, w) < 0):
            best = best * best
    return best
