"""Certified isolation of all complex roots of a squarefree integer polynomial.

Approximations come from mpmath's Durand-Kerner solver.  They are never
trusted directly: for approximations ``z_1..z_d`` of a monic polynomial ``p``
the Weierstrass corrections ``W_i = p(z_i) / prod_{j != i}(z_i - z_j)`` give a
matrix ``diag(z) - W 1^T`` whose characteristic polynomial is exactly ``p``.
Its Gerschgorin discs ``D(z_i - W_i, (d-1)|W_i|)`` are computed in exact
rational arithmetic; when they are pairwise disjoint each one holds exactly
one root.  Approximations are kept exactly conjugate-symmetric, so a disc
centred on the real axis holds a real root and a disc missing the real axis
holds a non-real one.

Real roots are then refined by exact bisection; non-real roots by
re-certifying at higher precision and intersecting with the previous box, so
successive enclosures are always nested.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, floor

import mpmath

from . import ratpoly
from .interval import ComplexBox, RationalInterval, sqrt_upper
from .polynomial import IntPolynomial

Complex = tuple  # (Fraction, Fraction)


def _cmul(a: Complex, b: Complex) -> Complex:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _csub(a: Complex, b: Complex) -> Complex:
    return (a[0] - b[0], a[1] - b[1])


def _cdiv(a: Complex, b: Complex) -> Complex:
    den = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / den, (a[1] * b[0] - a[0] * b[1]) / den)


def _ceval(coeffs, z: Complex) -> Complex:
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _to_dyadic(x, bits: int) -> Fraction:
    """Round an mpf to the nearest multiple of 2^-bits, exactly."""
    sign, man, exp, _ = x._mpf_
    exact = Fraction(-int(man) if sign else int(man)) * (Fraction(2) ** int(exp))
    return Fraction(round(exact * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class RootDisk:
    center: Complex
    radius: Fraction
    is_real: bool

    def box(self) -> ComplexBox:
        if self.is_real:
            return ComplexBox(RationalInterval(self.center[0] - self.radius, self.center[0] + self.radius),
                              RationalInterval.point(0))
        return ComplexBox.from_disk(self.center, self.radius)


def _approximate(coeffs: list[Fraction], bits: int) -> list[tuple]:
    with mpmath.workprec(bits + 20):
        high_first = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        steps = 100
        while True:
            try:
                found = mpmath.polyroots(high_first, maxsteps=steps, extraprec=bits + 20)
                break
            except mpmath.libmp.libhyper.NoConvergence:
                steps *= 4
                if steps > 20000:
                    raise
        out = []
        for z in found:
            z = mpmath.mpc(z)
            out.append((z.real, z.imag))
        return out


def _symmetrize(approx: list[tuple], bits: int) -> list[Complex] | None:
    """Round to dyadics and force exact conjugate symmetry."""
    tol = mpmath.mpf(2) ** (-(bits // 2))
    reals, upper, lower = [], [], []
    for re, im in approx:
        scale = max(1, abs(re), abs(im))
        if abs(im) <= tol * scale:
            reals.append((_to_dyadic(re, bits), Fraction(0)))
        elif im > 0:
            upper.append((_to_dyadic(re, bits), _to_dyadic(im, bits)))
        else:
            lower.append((_to_dyadic(re, bits), _to_dyadic(im, bits)))
    if len(upper) != len(lower):
        return None
    pts = reals + upper + [(re, -im) for re, im in upper]
    if len(set(pts)) != len(pts):
        return None
    return pts


def certify(coeffs: list[Fraction], bits: int) -> list[RootDisk] | None:
    """Certified disjoint discs for a monic squarefree rational polynomial, or None."""
    d = len(coeffs) - 1
    if d == 1:
        return [RootDisk((-coeffs[0], Fraction(0)), Fraction(0), True)]
    pts = _symmetrize(_approximate(coeffs, bits), bits)
    if pts is None:
        return None
    disks = []
    for i, z in enumerate(pts):
        den = (Fraction(1), Fraction(0))
        for j, w in enumerate(pts):
            if j != i:
                den = _cmul(den, _csub(z, w))
        w_i = _cdiv(_ceval(coeffs, z), den)
        center = _csub(z, w_i)
        radius = (d - 1) * sqrt_upper(w_i[0] * w_i[0] + w_i[1] * w_i[1], bits + 8)
        if center[1] == 0:
            is_real = True
        elif abs(center[1]) > radius:
            is_real = False
        else:
            return None
        disks.append(RootDisk(center, radius, is_real))
    for a, b in combinations(disks, 2):
        dist2 = (a.center[0] - b.center[0]) ** 2 + (a.center[1] - b.center[1]) ** 2
        if (a.radius + b.radius) ** 2 >= dist2:
            return None
    return disks


def certify_roots(coeffs: list[Fraction], start_bits: int = 64) -> tuple[list[RootDisk], int]:
    bits = start_bits
    while True:
        disks = certify(coeffs, bits)
        if disks is not None:
            return disks, bits
        bits *= 2
        if bits > 1 << 16:
            raise ArithmeticError("root certification failed; polynomial may not be squarefree")


def _overlap(a: ComplexBox, b: ComplexBox) -> bool:
    return not (a.re.hi < b.re.lo or b.re.hi < a.re.lo or a.im.hi < b.im.lo or b.im.hi < a.im.lo)


def _level_bits(level: int) -> int:
    return 32 << level


class RootChain:
    """A single isolated root with lazily refined, nested enclosures.

    The object caches refinements behind a lock; the cached data only ever
    gets more precise, so sharing one instance between threads is safe and
    observably immutable.
    """

    def __init__(self, coeffs: list[Fraction], disk: RootDisk, all_chains_ref: list, index: int):
        self._coeffs = coeffs
        self.is_real = disk.is_real
        self._boxes: list[ComplexBox] = [disk.box()]
        self._all = all_chains_ref
        self.index = index
        self._lock = threading.RLock()
        self._fixed: dict[int, tuple] = {}

    @property
    def coarse(self) -> ComplexBox:
        return self._boxes[0]

    def box(self, level: int) -> ComplexBox:
        """Enclosure of width at most 2^-(32 * 2^level), nested across levels."""
        with self._lock:
            while len(self._boxes) <= level:
                self._refine_next()
            return self._boxes[level]

    def _refine_next(self) -> None:
        prev = self._boxes[-1]
        target = Fraction(1, 1 << _level_bits(len(self._boxes) - 1))
        if prev.width <= target:
            self._boxes.append(prev)
        elif self.is_real:
            self._boxes.append(self._bisect(prev, target))
        else:
            self._boxes.append(self._recertify(prev, target))

    def _bisect(self, prev: ComplexBox, target: Fraction) -> ComplexBox:
        lo, hi = prev.re.lo, prev.re.hi
        p = self._coeffs
        f_lo = ratpoly.evaluate(p, lo)
        if f_lo == 0:
            return ComplexBox.point(lo)
        if ratpoly.evaluate(p, hi) == 0:
            return ComplexBox.point(hi)
        s_lo = f_lo > 0
        while hi - lo > target:
            mid = (lo + hi) / 2
            f_mid = ratpoly.evaluate(p, mid)
            if f_mid == 0:
                return ComplexBox.point(mid)
            if (f_mid > 0) == s_lo:
                lo = mid
            else:
                hi = mid
        return ComplexBox(RationalInterval(lo, hi), RationalInterval.point(0))

    def _recertify(self, prev: ComplexBox, target: Fraction) -> ComplexBox:
        bits = _level_bits(len(self._boxes) - 1) + 16
        while True:
            disks = certify(self._coeffs, bits)
            if disks is not None:
                mine = [d.box() for d in disks if not d.is_real and _overlap(prev, d.box())]
                if len(mine) == 1:
                    new = mine[0]
                    re = RationalInterval(max(prev.re.lo, new.re.lo), min(prev.re.hi, new.re.hi))
                    im = RationalInterval(max(prev.im.lo, new.im.lo), min(prev.im.hi, new.im.hi))
                    box = ComplexBox(re, im)
                    if box.width <= target:
                        return box
            bits *= 2
            if bits > 1 << 18:
                raise ArithmeticError("complex root refinement failed")

    def fixed_powers(self, level: int, count: int) -> tuple[int, list[tuple[int, int]], list[tuple[int, int]]]:
        """Fixed-point enclosures of the powers mu^0..mu^(count-1).

        Returns ``(B, re, im)`` where ``re[j] = (lo, hi)`` are integers with
        ``lo / 2^B <= Re(mu^j) <= hi / 2^B`` (likewise ``im``).
        """
        with self._lock:
            key = (level, count)
            if key not in self._fixed:
                box = self.box(level)
                shift = _level_bits(level) + 24
                scale = 1 << shift
                re_b, im_b = [], []
                pw = ComplexBox.point(1)
                for j in range(count):
                    re_b.append((floor(pw.re.lo * scale), ceil(pw.re.hi * scale)))
                    im_b.append((floor(pw.im.lo * scale), ceil(pw.im.hi * scale)))
                    pw = pw * box if not self.is_real else ComplexBox(pw.re * box.re, RationalInterval.point(0))
                self._fixed[key] = (shift, re_b, im_b)
            return self._fixed[key]

    def approx(self) -> complex:
        return complex(self.box(1))


def isolate(poly: IntPolynomial) -> list[RootChain]:
    """Isolate every root of a monic squarefree integer polynomial.

    Roots are ordered by real part, then imaginary part, of their first
    enclosure's centre.
    """
    coeffs = poly.as_fractions()
    if coeffs[-1] != 1:
        raise ValueError("polynomial must be monic")
    disks, _ = certify_roots(coeffs)
    disks.sort(key=lambda dk: (float(dk.center[0]), float(dk.center[1])))
    chains: list[RootChain] = []
    for i, dk in enumerate(disks):
        chains.append(RootChain(coeffs, dk, chains, i))
    return chains


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, int(n ** 0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def find_factor(poly: IntPolynomial) -> IntPolynomial | None:
    """Return a proper monic integer factor of a monic polynomial, or None.

    Steps: squarefree test via gcd with the derivative; integer-root
    exclusion over divisors of the constant term; then every subset of at
    most d/2 certified roots is tested, since any monic integer factor is a
    product of linear factors over its roots.  A subset survives only while
    each coefficient enclosure of its product contains an integer; the
    integer candidate is then confirmed or refuted by exact division.
    """
    if not poly.is_monic():
        raise ValueError("polynomial must be monic")
    d = poly.degree
    if d <= 1:
        return None
    fr = poly.as_fractions()
    g = ratpoly.gcd(fr, ratpoly.derivative(fr))
    if len(g) > 1:
        # gcd of a monic integer polynomial and its derivative is monic integral (Gauss)
        return IntPolynomial(int(c) for c in g)
    c0 = poly.coeff(0)
    if c0 == 0:
        return IntPolynomial((0, 1))
    for r in _divisors(c0):
        for cand in (r, -r):
            if poly(cand) == 0:
                return IntPolynomial((-cand, 1))
    chains = isolate(poly)
    for size in range(2, d // 2 + 1):
        for subset in combinations(range(d), size):
            level = 0
            while True:
                prod = [ComplexBox.point(1)]
                for i in subset:
                    root = chains[i].box(level)
                    nxt = [ComplexBox.point(0)] * (len(prod) + 1)
                    for k, c in enumerate(prod):
                        nxt[k + 1] = nxt[k + 1] + c
                        nxt[k] = nxt[k] - c * root
                    prod = nxt
                if any(not (b.re.contains_integer() and b.im.contains(0)) for b in prod):
                    break
                cand = IntPolynomial(round(b.re.mid) for b in prod)
                if all(b.re.width < Fraction(1, 2) for b in prod):
                    q, r = poly.divmod_monic(cand)
                    if r.is_zero():
                        return cand
                level += 1
                if level > 8:
                    raise ArithmeticError("factor search did not converge")
    return None


def is_irreducible(poly: IntPolynomial) -> bool:
    return find_factor(poly) is None
