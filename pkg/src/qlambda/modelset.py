"""Model sets: windows on the (0,1) conjugates, membership, enumeration.

For an sPV parameter every conjugate other than lambda (and its complex
conjugate) is real and lies in (0,1).  A window assigns a closed interval to
each such conjugate; the model set is the set of ring elements whose
conjugate images all land in their intervals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    FieldElement,
    NumberFieldContext,
    RationalInterval,
    abs2_element,
    compare,
    sign_against,
)
from .algebra.field import MAX_LEVEL, abs2_interval, ceil_image, embed_interval, floor_image
from .starset import PointSet, _as_array


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class Window:
    """Closed intervals [lo_j, hi_j] for each window conjugate index j.

    Endpoints are field elements read at conjugate j, so irrational endpoints
    (images of seed points) stay exact.  ``outer(j)`` gives a rational
    enclosure when one is needed for display or bounds.
    """

    ctx: NumberFieldContext
    indices: tuple[int, ...]
    lo: tuple[FieldElement, ...]
    hi: tuple[FieldElement, ...]

    @classmethod
    def unit(cls, ctx: NumberFieldContext) -> "Window":
        idx = ctx.window_indices
        return cls(ctx, idx, tuple(ctx.zero() for _ in idx), tuple(ctx.one() for _ in idx))

    def contains(self, x: FieldElement) -> bool:
        for j, lo, hi in zip(self.indices, self.lo, self.hi):
            if sign_against(x - lo, 0, j) < 0 or sign_against(hi - x, 0, j) < 0:
                return False
        return True

    def float_bounds(self, k: int) -> tuple[float, float]:
        j = self.indices[k]
        return self.lo[k].shadow(j).real, self.hi[k].shadow(j).real

    def maybe_coords(self, coords: np.ndarray) -> np.ndarray:
        """Float prefilter on coordinate rows; keeps every true member."""
        mask = np.ones(len(coords), dtype=bool)
        if not len(coords):
            return mask
        arr = coords.astype(float)
        for k, j in enumerate(self.indices):
            vals = (arr @ self.ctx.power_shadows(j)).real
            lo, hi = self.float_bounds(k)
            tol = 1e-9 * (1 + np.abs(arr).sum(axis=1))
            mask &= (vals >= lo - tol) & (vals <= hi + tol)
        return mask

    def outer(self, k: int, level: int = 6) -> RationalInterval:
        j = self.indices[k]
        a = embed_interval(self.lo[k], j, level=level)
        b = embed_interval(self.hi[k], j, level=level)
        return RationalInterval(a.lo, b.hi)

    def width_bound(self) -> float:
        """max over indices of max(|lo|, |hi|), as a float."""
        out = 0.0
        for k in range(len(self.indices)):
            lo, hi = self.float_bounds(k)
            out = max(out, abs(lo), abs(hi))
        return out

    def to_json(self) -> list[dict]:
        out = []
        for k, j in enumerate(self.indices):
            lo, hi = self.float_bounds(k)
            iv = self.outer(k)
            out.append({
                "root_index": j,
                "lo": {"coords": list(self.lo[k].coords), "approx": lo},
                "hi": {"coords": list(self.hi[k].coords), "approx": hi},
                "outer": [str(iv.lo), str(iv.hi)],
            })
        return out


def window_from_seed(ctx: NumberFieldContext, seed: Iterable) -> Window:
    """Exact [min, max] of the seed images at every window conjugate."""
    pts = [s if isinstance(s, FieldElement) else ctx.from_int(int(s)) for s in seed]
    if not pts:
        raise ValueError("window of an empty seed")
    idx = ctx.window_indices
    lo, hi = [], []
    for j in idx:
        a = b = pts[0]
        for p in pts[1:]:
            if compare(p, a, j) < 0:
                a = p
            if compare(p, b, j) > 0:
                b = p
        lo.append(a)
        hi.append(b)
    return Window(ctx, idx, tuple(lo), tuple(hi))


@dataclass(frozen=True)
class ModelSetSpec:
    ctx: NumberFieldContext
    window: Window

    @classmethod
    def unit(cls, ctx: NumberFieldContext) -> "ModelSetSpec":
        return cls(ctx, Window.unit(ctx))

    @classmethod
    def from_seed(cls, ctx: NumberFieldContext, seed) -> "ModelSetSpec":
        return cls(ctx, window_from_seed(ctx, seed))


def member(spec: ModelSetSpec, x: FieldElement) -> bool:
    if x.ctx != spec.ctx:
        raise ValueError("element from a different context")
    return spec.window.contains(x)


# ---------------------------------------------------------------------------
# radius bounds


class Radius:
    """An upper bound on |x| with an exact (or rigorously interval) test."""

    def approx(self) -> float:
        raise NotImplementedError

    def admits(self, x: FieldElement) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class RationalRadius(Radius):
    value: Fraction

    def approx(self) -> float:
        return float(self.value)

    def admits(self, x: FieldElement) -> bool:
        return _abs_le_rational(x, self.value)


@dataclass(frozen=True)
class ElementRadius(Radius):
    """The real number num / den read at real lambda."""

    num: FieldElement
    den: int = 1

    def approx(self) -> float:
        return self.num.shadow().real / self.den

    def admits(self, x: FieldElement) -> bool:
        i = x.ctx.lambda_index
        return (sign_against(self.num - x * self.den, 0, i) >= 0
                and sign_against(self.num + x * self.den, 0, i) >= 0)


@dataclass(frozen=True)
class IntervalRadius(Radius):
    """A bound known through rational enclosures ``enclose(level)`` of its square."""

    enclose_sq: object  # callable level -> RationalInterval
    estimate: float

    def approx(self) -> float:
        return self.estimate

    def admits(self, x: FieldElement) -> bool:
        for level in range(MAX_LEVEL):
            a = abs2_interval(x, level)
            m = self.enclose_sq(level)
            if a.hi <= m.lo:
                return True
            if a.lo > m.hi:
                return False
        raise ArithmeticError("|x| is too close to the radius to decide")


def as_radius(r) -> Radius:
    if isinstance(r, Radius):
        return r
    if isinstance(r, FieldElement):
        return ElementRadius(r)
    value = Fraction(r) if not isinstance(r, str) else Fraction(r)
    if value <= 0:
        raise ValueError("radius must be positive")
    return RationalRadius(value)


def _abs_le_rational(x: FieldElement, r: Fraction) -> bool:
    ctx = x.ctx
    if ctx.lambda_is_real:
        i = ctx.lambda_index
        return sign_against(x, r, i) <= 0 and sign_against(x, -r, i) >= 0
    a2 = abs2_element(x)
    if a2 is not None:
        return sign_against(a2, r * r, ctx.lambda_index) <= 0
    r2 = r * r
    for level in range(MAX_LEVEL):
        a = abs2_interval(x, level)
        if a.hi <= r2:
            return True
        if a.lo > r2:
            return False
    raise ArithmeticError("|x| is too close to the radius to decide")


# ---------------------------------------------------------------------------
# enumeration


def _finish(spec: ModelSetSpec, cands: Iterable[tuple], rad: Radius, method: str) -> PointSet:
    ctx = spec.ctx
    keep = []
    for c in set(cands):
        x = FieldElement(ctx, c)
        if member(spec, x) and rad.admits(x):
            keep.append(c)
    return PointSet.build(ctx, keep, region=f"model set, |x| <= {rad.approx():.6g} ({method})")


def enumerate_radius(spec: ModelSetSpec, radius, method: str = "auto") -> PointSet:
    """All model set points x with |x| <= radius.

    ``method`` is "quadratic" (scan of the lambda coordinate with exact
    ranges for the constant coordinate), "cubic" (trailing-coordinate bounds
    for a non-real cubic), "lattice" (generic bounding box through the
    inverse embedding matrix) or "auto".
    """
    rad = as_radius(radius)
    ctx = spec.ctx
    d = ctx.degree
    if not ctx.window_indices and d > 1:
        raise ValueError("enumeration needs at least one window conjugate (or degree 1)")
    if d == 1:
        return _enumerate_integers(spec, rad)
    if method == "auto":
        if d == 2 and ctx.lambda_is_real:
            method = "quadratic"
        elif d == 3 and not ctx.lambda_is_real:
            method = "cubic"
        else:
            method = "lattice"
    if method == "quadratic":
        return _enumerate_quadratic(spec, rad)
    if method == "cubic":
        return _enumerate_cubic(spec, rad)
    if method == "lattice":
        return _enumerate_lattice(spec, rad)
    raise ValueError(f"unknown method {method!r}")


def _enumerate_integers(spec: ModelSetSpec, rad: Radius) -> PointSet:
    top = math.floor(rad.approx()) + 1
    return _finish(spec, ((n,) for n in range(-top, top + 1)), rad, "integers")


def _enumerate_quadratic(spec: ModelSetSpec, rad: Radius) -> PointSet:
    ctx = spec.ctx
    if ctx.degree != 2 or len(spec.window.indices) != 1:
        raise ValueError("quadratic path needs a real quadratic with one window conjugate")
    j = spec.window.indices[0]
    lo, hi = spec.window.lo[0], spec.window.hi[0]
    lam, mu = ctx.roots[ctx.lambda_index].approx().real, ctx.roots[j].approx().real
    # x - x' = b (lambda - mu), so |b| <= (R + max|window|) / |lambda - mu|
    bmax = math.floor((rad.approx() + spec.window.width_bound()) / abs(lam - mu)) + 2
    lamel = ctx.lam()
    cands = []
    for b in range(-bmax, bmax + 1):
        shift = lamel * b
        a_lo = ceil_image(lo - shift, j)
        a_hi = floor_image(hi - shift, j)
        for a in range(a_lo, a_hi + 1):
            cands.append((a, b))
    return _finish(spec, cands, rad, "quadratic")


def cubic_trailing_bounds(spec: ModelSetSpec, radius) -> tuple[float, float]:
    """Bounds on |b| and |c| for x = a + b l + c l^2 with |x| <= R in the model set.

    With mu the window conjugate, |x - x'| = |mu - l| |b + c (mu + l)| and
    |x - x'| <= R + w where w bounds the window.  Minimizing over the other
    coordinate gives |b| <= r (R + w) / (y |mu - l|) and
    |c| <= (R + w) / (y |mu - l|), with r = |mu + l|, y = Im(l).
    """
    ctx = spec.ctx
    if ctx.degree != 3 or ctx.lambda_is_real or len(spec.window.indices) != 1:
        raise ValueError("trailing bounds need a non-real cubic with one window conjugate")
    lam = ctx.roots[ctx.lambda_index].approx()
    mu = ctx.roots[spec.window.indices[0]].approx().real
    y = abs(lam.imag)
    r = abs(mu + lam)
    top = as_radius(radius).approx() + spec.window.width_bound()
    return r * top / (y * abs(mu - lam)), top / (y * abs(mu - lam))


def _enumerate_cubic(spec: ModelSetSpec, rad: Radius) -> PointSet:
    ctx = spec.ctx
    bb, cb = cubic_trailing_bounds(spec, rad)
    j = spec.window.indices[0]
    lo, hi = spec.window.lo[0], spec.window.hi[0]
    lam1, lam2 = ctx.lam(), ctx.lam() * ctx.lam()
    cands = []
    for b in range(-math.floor(bb) - 1, math.floor(bb) + 2):
        for c in range(-math.floor(cb) - 1, math.floor(cb) + 2):
            shift = lam1 * b + lam2 * c
            for a in range(ceil_image(lo - shift, j), floor_image(hi - shift, j) + 1):
                cands.append((a, b, c))
    return _finish(spec, cands, rad, "cubic")


def _embedding_matrix(ctx: NumberFieldContext, indices: Sequence[int]) -> np.ndarray:
    """Rows map coordinates to real embedding data: Re/Im of lambda, then window images."""
    d = ctx.degree
    lam = ctx.power_shadows()
    rows = [lam.real]
    if not ctx.lambda_is_real:
        rows.append(lam.imag)
    for j in indices:
        rows.append(ctx.power_shadows(j).real)
    m = np.array(rows, dtype=float)
    if m.shape != (d, d):
        raise ValueError("lambda is not sPV for this window: embedding is not square")
    return m


def _enumerate_lattice(spec: ModelSetSpec, rad: Radius) -> PointSet:
    ctx = spec.ctx
    d = ctx.degree
    win = spec.window
    m = _embedding_matrix(ctx, win.indices)
    inv = np.linalg.inv(m)
    r = rad.approx()
    lows = [-r] * (1 if ctx.lambda_is_real else 2)
    highs = [r] * len(lows)
    for k in range(len(win.indices)):
        lo, hi = win.float_bounds(k)
        lows.append(lo)
        highs.append(hi)
    lows, highs = np.array(lows), np.array(highs)
    center, half = (lows + highs) / 2, (highs - lows) / 2
    mid = inv @ center
    spread = np.abs(inv) @ half
    cbox = [(math.floor(mid[i] - spread[i] - 1e-6) - 1, math.ceil(mid[i] + spread[i] + 1e-6) + 1)
            for i in range(d)]
    j0 = win.indices[0]
    mu0 = ctx.power_shadows(j0).real
    lo0, hi0 = win.float_bounds(0)
    trailing = [np.arange(a, b + 1) for a, b in cbox[1:]]
    cands = []
    for combo in itertools.product(*trailing):
        t = float(np.dot(combo, mu0[1:]))
        a_lo = max(cbox[0][0], math.floor(lo0 - t) - 1)
        a_hi = min(cbox[0][1], math.ceil(hi0 - t) + 1)
        tail = tuple(int(v) for v in combo)
        for a in range(a_lo, a_hi + 1):
            cands.append((a,) + tail)
    if cands:
        arr = _as_array(cands, d)
        keep = win.maybe_coords(arr)
        sh = np.abs(arr.astype(float) @ ctx.power_shadows())
        keep &= sh <= r * (1 + 1e-9) + 1e-9
        cands = [tuple(row) for row in arr[keep].tolist()]
    return _finish(spec, cands, rad, "lattice")


# ---------------------------------------------------------------------------
# arithmetic progressions


def ap_intersection(spec: ModelSetSpec, x: FieldElement, d: FieldElement) -> list[int]:
    """All integers j with x + j d in the model set (a finite contiguous range).

    Each window image of x + j d is affine in j; the admissible j form an
    interval per conjugate.  The float estimate is widened and every
    candidate is confirmed exactly, and the two integers just outside the
    returned range are confirmed to fail.
    """
    if d.is_zero():
        raise ValueError("the direction d must be nonzero")
    win = spec.window
    if not win.indices:
        raise ValueError("no window conjugates: the progression is unbounded")
    lo_j, hi_j = -math.inf, math.inf
    bounded = False
    for k, j in enumerate(win.indices):
        dj = sign_against(d, 0, j)
        if dj == 0:
            continue
        bounded = True
        xv, dv = x.shadow(j).real, d.shadow(j).real
        lo, hi = win.float_bounds(k)
        a, b = (lo - xv) / dv, (hi - xv) / dv
        lo_j, hi_j = max(lo_j, min(a, b)), min(hi_j, max(a, b))
    if not bounded:
        raise ArithmeticError("every window image of d vanishes: internal inconsistency for an sPV context")
    start, stop = math.floor(lo_j) - 2, math.ceil(hi_j) + 2
    hits = [j for j in range(start, stop + 1) if member(spec, x + d * j)]
    if hits:
        if hits != list(range(hits[0], hits[-1] + 1)):
            raise ArithmeticError("progression hits are not contiguous")
        for j in (hits[0] - 1, hits[-1] + 1):
            if member(spec, x + d * j):
                raise ArithmeticError("progression window is wider than estimated")
    return hits


# ---------------------------------------------------------------------------
# cut-and-project scheme


@dataclass(frozen=True)
class SchemeMatrices:
    companion: tuple[tuple[int, ...], ...]
    vandermonde_roots: tuple[int, ...]
    identity_holds: bool
    injective_on_sample: bool
    sample_size: int

    def to_json(self) -> dict:
        return {
            "companion": [list(r) for r in self.companion],
            "roots": list(self.vandermonde_roots),
            "identity_holds": self.identity_holds,
            "injective_on_sample": self.injective_on_sample,
            "sample_size": self.sample_size,
        }


def companion_matrix(ctx: NumberFieldContext) -> list[list[int]]:
    """Ones on the subdiagonal and -c_0, ..., -c_{d-1} in the last column."""
    d = ctx.degree
    c = ctx.minpoly.coeffs
    out = [[0] * d for _ in range(d)]
    for i in range(1, d):
        out[i][i - 1] = 1
    for i in range(d):
        out[i][d - 1] = -c[i]
    return out


def build_scheme(ctx: NumberFieldContext, samples: int = 200, seed: int = 0) -> SchemeMatrices:
    """Build the companion matrix and check V L = D V entry by entry.

    Row r of V is (1, mu, ..., mu^(d-1)) for a window conjugate mu or for
    lambda.  Entry (r, k) of V L - D V is a polynomial in mu with integer
    coefficients; it is formed as a field element and checked to be exactly
    zero, and its interval enclosure at mu must contain 0.  Injectivity of
    the projection to the lambda coordinate is spot-checked on random
    lattice vectors.
    """
    d = ctx.degree
    lmat = companion_matrix(ctx)
    roots = tuple(ctx.window_indices) + (ctx.lambda_index,)
    lam = ctx.lam()
    powers = [ctx.one()]
    for _ in range(d):
        powers.append(powers[-1] * lam)
    ok = True
    for r in roots:
        for k in range(d):
            # (V L)[r,k] = sum_i mu^i L[i][k];  (D V)[r,k] = mu * mu^k
            lhs = ctx.zero()
            for i in range(d):
                if lmat[i][k]:
                    lhs = lhs + powers[i] * lmat[i][k]
            diff = lhs - powers[k + 1]
            if not diff.is_zero():
                ok = False
                continue
            box = embed_interval(diff, r, level=2)
            if not (box.contains(0) if isinstance(box, RationalInterval) else box.contains(0, 0)):
                ok = False
    rng = np.random.default_rng(seed)
    seen: dict[complex, tuple] = {}
    injective = True
    for _ in range(samples):
        v = tuple(int(t) for t in rng.integers(-50, 51, size=d))
        z = complex(np.round(ctx.shadow(v), 9))
        if z in seen and seen[z] != v:
            injective = False
        seen[z] = v
    return SchemeMatrices(tuple(tuple(r) for r in lmat), roots, ok, injective, samples)


# ---------------------------------------------------------------------------
# integer parameters


def integer_superset_member(lambda_int: int, n: int) -> bool:
    """Congruence screen for integer lambda >= 2: n = 0 or 1 modulo lambda and modulo lambda - 1."""
    if lambda_int < 2:
        raise ValueError("lambda must be an integer >= 2")
    return n % lambda_int in (0, 1) and n % (lambda_int - 1) in (0, 1)


# ---------------------------------------------------------------------------
# estimator-style wrapper


@dataclass
class ModelSet:
    """Fit a window from a seed, then predict model set membership.

    >>> ms = ModelSet(ctx).fit([0, 1])
    >>> ms.predict([ctx.lam()])
    array([False])
    """

    ctx: NumberFieldContext
    window_: Window | None = field(default=None, init=False, repr=False)
    spec_: ModelSetSpec | None = field(default=None, init=False, repr=False)

    def fit(self, seed) -> "ModelSet":
        self.window_ = window_from_seed(self.ctx, seed)
        self.spec_ = ModelSetSpec(self.ctx, self.window_)
        return self

    def predict(self, X) -> np.ndarray:
        if self.spec_ is None:
            raise RuntimeError("call fit before predict")
        out = []
        for x in X:
            el = x if isinstance(x, FieldElement) else FieldElement(self.ctx, x)
            out.append(member(self.spec_, el))
        return np.array(out, dtype=bool)

    def get_params(self, deep: bool = True) -> dict:
        return {"ctx": self.ctx}

    def set_params(self, **params) -> "ModelSet":
        for k, v in params.items():
            if k != "ctx":
                raise ValueError(f"unknown parameter {k!r}")
            self.ctx = v
            self.window_ = self.spec_ = None
        return self
