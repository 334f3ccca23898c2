"""Integer polynomials generated from 0 and 1 by S, T -> (1 - x) S + x T.

A polynomial f belongs to the generated set exactly when f maps (0,1) into
(0,1) (or f is the constant 0 or 1).  Level-n members are the polynomials
sum b_k x^k (1-x)^(n-k) with integers 0 <= b_k <= C(n, k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

import mpmath

from .algebra import IntPolynomial
from .algebra import ratpoly

ONE_MINUS_X = IntPolynomial([1, -1])
X = IntPolynomial([0, 1])


def star_x(s: IntPolynomial, t: IntPolynomial) -> IntPolynomial:
    return ONE_MINUS_X * s + X * t


@dataclass(frozen=True)
class StarBasis:
    """Coefficients of f in the basis x^k (1 - x)^(n - k), k = 0..n."""

    n: int
    coeffs: tuple

    def within_bounds(self) -> bool:
        return all(0 <= c <= comb(self.n, k) for k, c in enumerate(self.coeffs))

    def lift(self) -> "StarBasis":
        """The same polynomial at level n + 1 (Pascal recurrence)."""
        c = self.coeffs
        out = [c[0]] + [c[k] + c[k - 1] for k in range(1, self.n + 1)] + [c[self.n]]
        return StarBasis(self.n + 1, tuple(out))


def to_star_basis(f: IntPolynomial, n: int) -> StarBasis:
    """f_k = sum_{i <= k} a_i C(n - i, k - i), from x^i = x^i (x + (1 - x))^(n - i)."""
    if n < f.degree:
        raise ValueError("level must be at least the degree")
    a = [f.coeff(i) for i in range(n + 1)]
    return StarBasis(n, tuple(sum(a[i] * comb(n - i, k - i) for i in range(k + 1)) for k in range(n + 1)))


def from_star_basis(sb: StarBasis) -> IntPolynomial:
    out = IntPolynomial()
    for k, c in enumerate(sb.coeffs):
        if c:
            out = out + (X ** k) * (ONE_MINUS_X ** (sb.n - k)) * c
    return out


# ---------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class MembershipVerdict:
    """``member`` with the least witness level, or a witness against membership.

    ``witness_point`` is a rational string, or for an irrational critical
    point a dict with its defining polynomial and isolating interval.
    """

    member: bool
    witness_level: int | None = None
    witness_point: object = None
    witness_value: str | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"member": self.member}
        if self.member:
            out["witness_level"] = self.witness_level
        else:
            out["witness_point"] = self.witness_point
            out["witness_value"] = self.witness_value
            out["reason"] = self.reason
        return out


def _eval_interval(p, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of p over [lo, hi] by interval Horner (0 <= lo)."""
    a = b = Fraction(0)
    for c in reversed(p):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    return a, b


def _has_root_in(g, lo: Fraction, hi: Fraction) -> bool:
    if len(g) <= 1:
        return False
    return bool(ratpoly.isolate_real_roots(g, lo, hi))


def _critical_verdict(fr, lo: Fraction, hi: Fraction) -> MembershipVerdict | None:
    """Check f at the unique critical point in [lo, hi]; None when it lies in (0,1)."""
    if lo == hi:
        v = ratpoly.evaluate(fr, lo)
        if 0 < v < 1:
            return None
        return MembershipVerdict(False, witness_point=str(lo), witness_value=str(v),
                                 reason="critical value outside (0,1)")
    dfr = ratpoly.derivative(fr)
    g0 = ratpoly.gcd(fr, dfr)
    g1 = ratpoly.gcd(ratpoly.sub(fr, [1]), dfr)
    for g, val in ((g0, 0), (g1, 1)):
        if _has_root_in(g, lo, hi):
            # the critical point is an irrational root of f or of f - 1
            return MembershipVerdict(False, witness_point={
                "polynomial": [str(c) for c in ratpoly.monic(g)], "interval": [str(lo), str(hi)]},
                witness_value=str(val), reason="critical value equals an endpoint of (0,1)")
    while True:
        a, b = _eval_interval(fr, lo, hi)
        if a > 0 and b < 1:
            return None
        mid = (lo + hi) / 2
        v = ratpoly.evaluate(fr, mid)
        if v <= 0 or v >= 1:
            return MembershipVerdict(False, witness_point=str(mid), witness_value=str(v),
                                     reason="value outside (0,1)")
        sub = ratpoly.isolate_real_roots(dfr, lo, mid)
        if sub:
            lo, hi = sub[0]
            if lo == hi:
                return _critical_verdict(fr, lo, hi)
        else:
            lo = mid


def _endpoint_verdict(fr, g: IntPolynomial, end: int) -> MembershipVerdict | None:
    """Does f leave (0,1) right next to an endpoint?  g(t) = f(t) or f(1 - t)."""
    h = g if g(0) == 0 else -(g - IntPolynomial([1]))
    lead = next((c for c in h.coeffs if c), 0)
    if lead > 0:
        return None
    t = Fraction(1, 2)
    while True:
        x = t if end == 0 else 1 - t
        v = ratpoly.evaluate(fr, x)
        if not 0 < v < 1:
            return MembershipVerdict(False, witness_point=str(x), witness_value=str(v),
                                     reason="f leaves (0,1) near an endpoint")
        t /= 2


def membership(f: IntPolynomial, max_level: int = 100_000) -> MembershipVerdict:
    if f.coeffs in ((), (1,)):
        return MembershipVerdict(True, witness_level=0)
    f0, f1 = f(0), f(1)
    if f0 not in (0, 1):
        return MembershipVerdict(False, witness_point="0", witness_value=str(f0), reason="f(0) not in {0,1}")
    if f1 not in (0, 1):
        return MembershipVerdict(False, witness_point="1", witness_value=str(f1), reason="f(1) not in {0,1}")
    fr = f.as_fractions()
    for end, g in ((0, f), (1, f.compose(ONE_MINUS_X))):
        v = _endpoint_verdict(fr, g, end)
        if v is not None:
            return v
    df = ratpoly.derivative(fr)
    if any(df):
        for lo, hi in ratpoly.isolate_real_roots(df, Fraction(0), Fraction(1)):
            if hi <= 0 or lo >= 1:
                continue  # critical point at an endpoint
            lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
            if lo == 0 or hi == 1:
                # shrink away from the endpoints (the root is interior)
                sub = ratpoly.isolate_real_roots(df, lo, hi, max_width=(hi - lo) / 4)
                sub = [(a, b) for a, b in sub if 0 < b and a < 1]
                lo, hi = sub[0]
                if lo == 0 or hi == 1:
                    continue
            v = _critical_verdict(fr, lo, hi)
            if v is not None:
                return v
    # f maps (0,1) into (0,1): find the least level with coefficients inside the bounds
    sb = to_star_basis(f, f.degree)
    while not sb.within_bounds():
        if sb.n >= max_level:
            raise ArithmeticError("witness level exceeds the search limit")
        sb = sb.lift()
    return MembershipVerdict(True, witness_level=sb.n)


# ---------------------------------------------------------------------------
# level sets


def level_cardinality(n: int) -> int:
    return prod(1 + comb(n, k) for k in range(n + 1))


def enumerate_level(n: int, max_count: int = 2_000_000) -> set[IntPolynomial]:
    """All level-n members, from bounded star-basis coefficient vectors."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if level_cardinality(n) > max_count:
        raise OverflowError(f"level {n} has {level_cardinality(n)} members, above the budget")
    basis = [(X ** k) * (ONE_MINUS_X ** (n - k)) for k in range(n + 1)]
    out = set()
    for b in itertools.product(*(range(comb(n, k) + 1) for k in range(n + 1))):
        poly = IntPolynomial()
        for c, p in zip(b, basis):
            if c:
                poly = poly + p * c
        out.add(poly)
    return out


def closure_levels(n: int) -> list[set[IntPolynomial]]:
    """Brute-force levels 0..n by iterating star_x over all pairs."""
    cur = {IntPolynomial([0]), IntPolynomial([1])}
    levels = [set(cur)]
    for _ in range(n):
        cur = {star_x(s, t) for s in cur for t in cur}
        levels.append(set(cur))
    return levels


@dataclass(frozen=True)
class SearchReport:
    max_degree: int
    coeff_bound: int
    members: dict  # degree -> sorted list of polynomials

    def counts(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.members.items()}


def search_members(max_degree: int, coeff_bound: int) -> SearchReport:
    """Members among integer polynomials of degree <= max_degree with |coefficients| <= coeff_bound.

    The counts depend on the bound; they are lower bounds for the census.
    """
    found: dict[int, list] = {d: [] for d in range(max_degree + 1)}
    rng = range(-coeff_bound, coeff_bound + 1)
    for c0 in (0, 1):
        for rest in itertools.product(rng, repeat=max_degree):
            f = IntPolynomial((c0,) + rest)
            if f(1) not in (0, 1):
                continue
            if membership(f).member:
                found[f.degree].append(f)
    return SearchReport(max_degree, coeff_bound,
                        {d: sorted(v, key=lambda p: p.coeffs) for d, v in found.items()})


# ---------------------------------------------------------------------------
# threshold polynomials


def threshold_level(eps) -> int:
    """n = ceil(-ln(eps) / (2 eps^2)), evaluated with 50-digit precision."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    with mpmath.workdps(50):
        e = mpmath.mpf(eps.numerator) / eps.denominator
        val = -mpmath.log(e) / (2 * e * e)
        n = int(mpmath.ceil(val))
        if abs(val - mpmath.nint(val)) < mpmath.mpf(10) ** -40:
            raise ArithmeticError("ceiling too close to an integer to decide at this precision")
    return n


def threshold_poly(gamma, eps) -> IntPolynomial:
    """sum_{i <= floor(gamma n)} C(n, i) x^i (1 - x)^(n - i)."""
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0,1)")
    n = threshold_level(eps)
    top = (gamma * n).numerator // (gamma * n).denominator
    return from_star_basis(StarBasis(n, tuple(comb(n, i) if i <= top else 0 for i in range(n + 1))))
