"""Exact arithmetic in Z[lambda] with certified embeddings of every conjugate."""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Sequence

import numpy as np

from . import ratpoly
from .interval import ComplexBox, RationalInterval
from .polynomial import IntPolynomial, as_int_polynomial
from .roots import RootChain, find_factor, isolate

MAX_DEGREE = 8
MAX_LEVEL = 12
DEFAULT_HINT_WIDTH = Fraction(1, 10**9)

NEGATIVE, ZERO, POSITIVE = -1, 0, 1


class ContextError(ValueError):
    """Invalid minimal polynomial or root selection."""


class NumberFieldContext:
    """A monic irreducible integer polynomial with one designated root.

    ``roots[i]`` is a :class:`RootChain` holding nested enclosures of the
    i-th conjugate; ``lambda_index`` picks out lambda.  Elements of Z[lambda]
    are coordinate vectors in the power basis 1, lambda, ..., lambda^(d-1).
    """

    def __init__(self, minpoly: IntPolynomial, roots: Sequence[RootChain], lambda_index: int):
        self.minpoly = minpoly
        self.degree = minpoly.degree
        self.roots = tuple(roots)
        self.lambda_index = lambda_index
        d = self.degree
        # lambda^k for k = d .. 2d-2 as coordinate rows
        low = [-c for c in minpoly.coeffs[:d]]
        table = [tuple(low)]
        for _ in range(d, 2 * d - 2):
            prev = table[-1]
            shifted = [0] + list(prev[:-1])
            top = prev[-1]
            table.append(tuple(s + top * c for s, c in zip(shifted, low)))
        self._reduce = table
        self.real_unit_interval_indices = tuple(
            i for i, r in enumerate(self.roots) if r.is_real and _in_open_unit(r)
        )
        self._lock = threading.RLock()
        self._cache: dict = {}

    # -- identity -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, NumberFieldContext):
            return NotImplemented
        return self.minpoly == other.minpoly and self.lambda_index == other.lambda_index

    def __hash__(self) -> int:
        return hash((self.minpoly, self.lambda_index))

    def __repr__(self) -> str:
        lam = self.roots[self.lambda_index].approx()
        return f"NumberFieldContext({self.minpoly.human()}, lambda~{lam:.6g})"

    # -- convenience --------------------------------------------------
    @property
    def lambda_is_real(self) -> bool:
        return self.roots[self.lambda_index].is_real

    @property
    def window_indices(self) -> tuple[int, ...]:
        """Real conjugates in (0,1) other than lambda itself."""
        return tuple(i for i in self.real_unit_interval_indices if i != self.lambda_index)

    def conjugate_root_index(self) -> int:
        """Index of the complex conjugate of lambda (lambda itself when real)."""
        if self.lambda_is_real:
            return self.lambda_index
        target = self.roots[self.lambda_index].approx().conjugate()
        return min((i for i, r in enumerate(self.roots) if i != self.lambda_index and not r.is_real),
                   key=lambda i: abs(self.roots[i].approx() - target))

    def element(self, coords: Iterable) -> "FieldElement":
        return FieldElement(self, coords)

    def from_int(self, n: int) -> "FieldElement":
        return FieldElement(self, [n] + [0] * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self.from_int(0)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def lam(self) -> "FieldElement":
        if self.degree == 1:
            root = self.roots[0].coarse.re.lo
            return self.from_int(int(root))
        return FieldElement(self, [0, 1] + [0] * (self.degree - 2))

    def reduce(self, full: Sequence[int]) -> tuple[int, ...]:
        """Reduce a coefficient list of length up to 2d-1 modulo the minimal polynomial."""
        d = self.degree
        out = list(full[:d]) + [0] * max(0, d - len(full))
        for k in range(d, len(full)):
            c = full[k]
            if c:
                row = self._reduce[k - d]
                for j in range(d):
                    out[j] += c * row[j]
        return tuple(out)

    def mul_coords(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        full = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        full[i + j] += x * y
        return self.reduce(full)

    def mult_matrix(self, coords: Sequence[int]) -> list[list[int]]:
        """Integer matrix of multiplication by ``coords``; column j is x * lambda^j."""
        d = self.degree
        cols = []
        cur = tuple(coords)
        lam = tuple([0, 1] + [0] * (d - 2)) if d > 1 else None
        for j in range(d):
            cols.append(cur)
            if j + 1 < d:
                cur = self.mul_coords(cur, lam)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    # -- numeric shadows ----------------------------------------------
    def power_shadows(self, index: int | None = None) -> np.ndarray:
        """Complex float powers mu^0..mu^(d-1) for root ``index`` (default lambda)."""
        index = self.lambda_index if index is None else index
        key = ("pow", index)
        with self._lock:
            if key not in self._cache:
                z = self.roots[index].approx()
                self._cache[key] = np.array([z ** j for j in range(self.degree)], dtype=complex)
            return self._cache[key]

    def shadow(self, coords: Sequence[int], index: int | None = None) -> complex:
        return complex(np.dot(np.asarray(coords, dtype=float), self.power_shadows(index)))

    # -- conjugation --------------------------------------------------
    def conjugation(self) -> tuple[int, ...] | None:
        """Coordinates of an element g with g(lambda) = conj(lambda), if one is found.

        When it exists, complex conjugation restricted to Q(lambda) is the
        field automorphism lambda -> g, so |x|^2 = x * conj(x) becomes an
        exact element of Z[lambda].  Candidates: c - lambda (when 2 Re lambda
        is an integer c) and lambda^(m-1) for cyclotomic minimal polynomials.
        Each candidate is verified exactly (minpoly(g) = 0) and its embedding
        is checked to land on the conjugate root.
        """
        with self._lock:
            if "conj" in self._cache:
                return self._cache["conj"]
            result = None
            if self.lambda_is_real:
                result = tuple(self.lam().coords)
            else:
                for cand in self._conj_candidates():
                    if self._is_conj_map(cand):
                        result = cand
                        break
            self._cache["conj"] = result
            return result

    def _conj_candidates(self) -> list[tuple[int, ...]]:
        d = self.degree
        out = []
        two_re = 2 * self.roots[self.lambda_index].approx().real
        c = round(two_re)
        if abs(two_re - c) < 1e-6:
            out.append(tuple([c, -1] + [0] * (d - 2)))
        lam = self.roots[self.lambda_index].approx()
        if abs(abs(lam) - 1) < 1e-9:
            import cmath
            m = round(2 * cmath.pi / abs(cmath.phase(lam))) if cmath.phase(lam) != 0 else 0
            for order in {m, 2 * m}:
                if order >= 3:
                    out.append(self.power_coords(order - 1))
        return out

    def power_coords(self, k: int) -> tuple[int, ...]:
        result = self.one().coords
        base = self.lam().coords
        while k:
            if k & 1:
                result = self.mul_coords(result, base)
            base = self.mul_coords(base, base)
            k >>= 1
        return result

    def _is_conj_map(self, g: Sequence[int]) -> bool:
        acc = self.zero().coords
        for c in reversed(self.minpoly.coeffs):
            acc = self.mul_coords(acc, g)
            acc = (acc[0] + c,) + tuple(acc[1:])
        if any(acc):
            return False
        target = self.conjugate_root_index()
        tbox = self.roots[target].coarse
        for level in range(0, 6):
            box = embed_interval(FieldElement(self, g), self.lambda_index, None, level=level)
            if tbox.contains_box(box):
                return True
            if box.re.hi < tbox.re.lo or box.re.lo > tbox.re.hi or box.im.hi < tbox.im.lo or box.im.lo > tbox.im.hi:
                return False
        return False


def _in_open_unit(root: RootChain) -> bool:
    for level in range(MAX_LEVEL):
        iv = root.box(level).re
        if iv.lo > 0 and iv.hi < 1:
            return True
        if iv.hi <= 0 or iv.lo >= 1:
            return False
    raise ArithmeticError("could not decide whether a root lies in (0,1)")


class FieldElement:
    """Element of Z[lambda] in power-basis coordinates."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: NumberFieldContext, coords: Iterable):
        coords = tuple(_int(c) for c in coords)
        if len(coords) != ctx.degree:
            raise ValueError(f"expected {ctx.degree} coordinates, got {len(coords)}")
        self.ctx = ctx
        self.coords = coords

    def _check(self, other: "FieldElement") -> None:
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise ContextError("elements belong to different contexts")

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        if isinstance(other, Integral):
            return self.ctx.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return FieldElement(self.ctx, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, Integral):
            return FieldElement(self.ctx, [int(other) * a for a in self.coords])
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx.mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "FieldElement":
        out = self.ctx.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.coords == other.coords and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, Integral):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def __lt__(self, other: "FieldElement") -> bool:
        return self.coords < other.coords

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def shadow(self, index: int | None = None) -> complex:
        return self.ctx.shadow(self.coords, index)

    def conj(self) -> "FieldElement":
        """Complex conjugate, when the context carries an exact conjugation map."""
        g = self.ctx.conjugation()
        if g is None:
            raise ArithmeticError("no exact conjugation map for this context")
        return evaluate_poly_at(self.coords, FieldElement(self.ctx, g))

    def __repr__(self) -> str:
        return f"FieldElement({self.human()})"

    def human(self, var: str = "lambda") -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            if k == 0:
                mono = ""
            elif k == 1:
                mono = var
            else:
                mono = f"{var}^{k}"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            text += f" {s} {b}"
        return text


def _int(c) -> int:
    if isinstance(c, bool) or not isinstance(c, Integral):
        if isinstance(c, Fraction) and c.denominator == 1:
            return int(c)
        if isinstance(c, np.integer):
            return int(c)
        raise TypeError(f"coordinate {c!r} is not an integer")
    return int(c)


def evaluate_poly_at(coeffs: Sequence[int], x: FieldElement) -> FieldElement:
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def parse_root_hint(hint) -> complex:
    if isinstance(hint, (int, float, complex, Fraction)):
        return complex(hint)
    if isinstance(hint, (tuple, list)) and len(hint) == 2:
        return complex(float(hint[0]), float(hint[1]))
    if isinstance(hint, str):
        text = hint.strip().strip("()[] ")
        parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse root hint {hint!r}")


def _box_dist2_bounds(box: ComplexBox, h: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    def axis(iv: RationalInterval, x: Fraction) -> tuple[Fraction, Fraction]:
        near = Fraction(0) if iv.lo <= x <= iv.hi else min(abs(iv.lo - x), abs(iv.hi - x))
        far = max(abs(iv.lo - x), abs(iv.hi - x))
        return near, far

    n1, f1 = axis(box.re, h[0])
    n2, f2 = axis(box.im, h[1])
    return n1 * n1 + n2 * n2, f1 * f1 + f2 * f2


_CONTEXT_CACHE: dict = {}
_CONTEXT_LOCK = threading.Lock()


def make_context(minpoly, root_hint, min_width: Fraction = DEFAULT_HINT_WIDTH) -> NumberFieldContext:
    """Build a context for ``minpoly`` with lambda the root nearest ``root_hint``.

    The hint selects the root whose refined enclosure is closest to it.  The
    choice is rejected as ambiguous when, with every enclosure narrowed to
    ``min_width``, the nearest root cannot be separated from the runner-up.
    """
    poly = as_int_polynomial(minpoly)
    if poly.is_zero() or poly.degree < 1:
        raise ContextError("minimal polynomial must have degree at least 1")
    if not poly.is_monic():
        raise ContextError("minimal polynomial must be monic")
    if poly.degree > MAX_DEGREE:
        raise ContextError(f"degree {poly.degree} exceeds the supported maximum {MAX_DEGREE}")
    hint = parse_root_hint(root_hint)
    h = (Fraction(hint.real), Fraction(hint.imag))
    key = (poly, h, Fraction(min_width))
    with _CONTEXT_LOCK:
        if key in _CONTEXT_CACHE:
            return _CONTEXT_CACHE[key]
    factor = find_factor(poly)
    if factor is not None:
        raise ContextError(f"{poly.human()} is reducible (factor {factor.human()})")
    chains = isolate(poly)
    level = 0
    while True:
        boxes = [c.box(level) for c in chains]
        if max(b.width for b in boxes) <= min_width or level >= MAX_LEVEL:
            break
        level += 1
    bounds = [_box_dist2_bounds(b, h) for b in boxes]
    best = min(range(len(bounds)), key=lambda i: (bounds[i][1], i))
    for j, (near, _) in enumerate(bounds):
        if j != best and near <= bounds[best][1]:
            raise ContextError(f"root hint {hint} is ambiguous between two roots")
    ctx = NumberFieldContext(poly, chains, best)
    with _CONTEXT_LOCK:
        _CONTEXT_CACHE[key] = ctx
    return ctx


def context_for_root(minpoly, index: int) -> NumberFieldContext:
    """Context whose lambda is the ``index``-th isolated root (isolation order)."""
    poly = as_int_polynomial(minpoly)
    factor = find_factor(poly)
    if factor is not None:
        raise ContextError(f"{poly.human()} is reducible")
    chains = isolate(poly)
    return NumberFieldContext(poly, chains, index)


def with_lambda_index(ctx: NumberFieldContext, index: int) -> NumberFieldContext:
    """Same field, different designated root (shares root enclosures)."""
    if index == ctx.lambda_index:
        return ctx
    return NumberFieldContext(ctx.minpoly, ctx.roots, index)


# ---------------------------------------------------------------------------
# arithmetic entry points
# ---------------------------------------------------------------------------

def ring_arith(a: FieldElement, b: FieldElement | int | None, op: str) -> FieldElement:
    """Exact ring operation: ``add``, ``sub``, ``mul``, ``neg`` or ``scalar_mul``."""
    if op == "neg":
        return -a
    if op == "scalar_mul":
        if not isinstance(b, Integral):
            raise TypeError("scalar_mul expects an integer scalar")
        return a * int(b)
    if not isinstance(b, FieldElement):
        raise TypeError(f"{op} expects two field elements")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _fixed_eval(coords: Sequence[int], chain: RootChain, level: int):
    shift, re_b, im_b = chain.fixed_powers(level, len(coords))
    lo_re = hi_re = lo_im = hi_im = 0
    for c, (rl, rh), (il, ih) in zip(coords, re_b, im_b):
        if c >= 0:
            lo_re += c * rl
            hi_re += c * rh
            lo_im += c * il
            hi_im += c * ih
        else:
            lo_re += c * rh
            hi_re += c * rl
            lo_im += c * ih
            hi_im += c * il
    return shift, lo_re, hi_re, lo_im, hi_im


def embed_interval(a: FieldElement, root_index: int, max_width=None, level: int | None = None):
    """Enclosure of the image of ``a`` under lambda -> mu_{root_index}.

    Returns a :class:`RationalInterval` for real roots and a
    :class:`ComplexBox` otherwise.  Either ``max_width`` (the loop refines
    until the enclosure is at most that wide) or an explicit refinement
    ``level`` may be given.
    """
    ctx = a.ctx
    if not 0 <= root_index < ctx.degree:
        raise IndexError("root index out of range")
    chain = ctx.roots[root_index]
    if a.is_rational():
        c = Fraction(a.coords[0])
        return RationalInterval.point(c) if chain.is_real else ComplexBox.point(c)
    levels = [level] if level is not None else range(MAX_LEVEL + 1)
    target = None if max_width is None else Fraction(max_width)
    for lv in levels:
        shift, lr, hr, li, hi_ = _fixed_eval(a.coords, chain, lv)
        den = 1 << shift
        re = RationalInterval(Fraction(lr, den), Fraction(hr, den))
        if chain.is_real:
            if target is None or re.width <= target:
                return re
        else:
            box = ComplexBox(re, RationalInterval(Fraction(li, den), Fraction(hi_, den)))
            if target is None or box.width <= target:
                return box
    raise ArithmeticError("enclosure did not reach the requested width")


def _check_rational(q) -> Fraction:
    if isinstance(q, bool) or not isinstance(q, Rational):
        raise TypeError(f"{q!r} is not an exact rational")
    return Fraction(q)


def sign_against(a: FieldElement, q, root_index: int) -> int:
    """Exact sign of (image of ``a`` at ``root_index``) minus rational ``q``.

    Equality is settled algebraically: the image can only equal a rational
    when every non-constant coordinate vanishes.  Otherwise enclosures are
    refined until they separate from ``q``.  For a non-real root the image
    must be real; an enclosure whose imaginary part excludes 0 raises.
    """
    q = _check_rational(q)
    if not 0 <= root_index < a.ctx.degree:
        raise IndexError("root index out of range")
    if a.is_rational():
        diff = a.coords[0] - q
        return (diff > 0) - (diff < 0)
    chain = a.ctx.roots[root_index]
    for lv in range(MAX_LEVEL + 1):
        shift, lr, hr, li, hi_ = _fixed_eval(a.coords, chain, lv)
        if not chain.is_real and (li > 0 or hi_ < 0):
            raise ValueError("image at a non-real root is not real")
        qn = q.numerator << shift
        qd = q.denominator
        if lr * qd > qn:
            return POSITIVE
        if hr * qd < qn:
            return NEGATIVE
    raise ArithmeticError("sign could not be separated")


def compare(a: FieldElement, b: FieldElement, root_index: int) -> int:
    """Sign of image(a) - image(b) at a real root (or real-valued images)."""
    return sign_against(a - b, 0, root_index)


# ---------------------------------------------------------------------------
# absolute values at lambda
# ---------------------------------------------------------------------------

def abs2_element(x: FieldElement) -> FieldElement | None:
    """|x|^2 at lambda as an exact element, when an exact conjugation exists."""
    ctx = x.ctx
    if ctx.lambda_is_real:
        return x * x
    g = ctx.conjugation()
    if g is None:
        return None
    return x * x.conj()


def abs2_interval(x: FieldElement, level: int) -> RationalInterval:
    enc = embed_interval(x, x.ctx.lambda_index, level=level)
    if isinstance(enc, RationalInterval):
        return enc.square()
    return enc.abs2()


def abs2_sign(x: FieldElement, q) -> int:
    """Sign of |x|^2 - q at lambda, for rational q."""
    q = _check_rational(q)
    a2 = abs2_element(x)
    if a2 is not None:
        return sign_against(a2, q, x.ctx.lambda_index)
    for lv in range(MAX_LEVEL + 1):
        iv = abs2_interval(x, lv)
        if iv.lo > q:
            return POSITIVE
        if iv.hi < q:
            return NEGATIVE
    raise ArithmeticError("|x|^2 could not be separated from the bound")


def abs_compare(x: FieldElement, y: FieldElement) -> int:
    """Sign of |x| - |y| at lambda."""
    x._check(y)
    ax, ay = abs2_element(x), abs2_element(y)
    if ax is not None and ay is not None:
        return sign_against(ax - ay, 0, x.ctx.lambda_index)
    for lv in range(MAX_LEVEL + 1):
        d = abs2_interval(x, lv) - abs2_interval(y, lv)
        if d.lo > 0:
            return POSITIVE
        if d.hi < 0:
            return NEGATIVE
    raise ArithmeticError("absolute values could not be separated")


# ---------------------------------------------------------------------------
# linear algebra over Q: inverses, norms, characteristic polynomials
# ---------------------------------------------------------------------------

def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def inverse_rational(x: FieldElement) -> list[Fraction]:
    """Rational power-basis coordinates of 1/x."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero")
    m = x.ctx.mult_matrix(x.coords)
    return _solve(m, [1] + [0] * (x.ctx.degree - 1))


def exact_div(a: FieldElement, b: FieldElement) -> FieldElement | None:
    """a / b if it lies in Z[lambda], else None."""
    a._check(b)
    m = b.ctx.mult_matrix(b.coords)
    sol = _solve(m, list(a.coords))
    if any(v.denominator != 1 for v in sol):
        return None
    return FieldElement(a.ctx, [int(v) for v in sol])


def norm(x: FieldElement) -> int:
    """Field norm: determinant of the multiplication matrix (Bareiss, exact)."""
    m = [row[:] for row in x.ctx.mult_matrix(x.coords)]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def charpoly(x: FieldElement) -> IntPolynomial:
    """Characteristic polynomial of multiplication by x (Faddeev-LeVerrier)."""
    a = [[Fraction(v) for v in row] for row in x.ctx.mult_matrix(x.coords)]
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[n - k + 1]
        mk = prod
        am = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    return IntPolynomial(int(c) for c in coeffs)


def minimal_polynomial(x: FieldElement) -> IntPolynomial:
    """Minimal polynomial of x over Q (squarefree part of its characteristic polynomial)."""
    cp = charpoly(x)
    sf = ratpoly.squarefree_part(cp.as_fractions())
    return IntPolynomial(int(c) for c in sf)


def context_of_element(x: FieldElement) -> NumberFieldContext:
    """Context whose lambda is the value of x (at x's own lambda embedding)."""
    mp = minimal_polynomial(x)
    return make_context(mp, x.shadow(), min_width=Fraction(1, 10**12))


def floor_image(a: FieldElement, root_index: int) -> int:
    """Exact floor of the (real) image of ``a`` at ``root_index``."""
    if a.is_rational():
        return a.coords[0]
    guess = math.floor(a.shadow(root_index).real)
    while sign_against(a, guess, root_index) < 0:
        guess -= 1
    while sign_against(a, guess + 1, root_index) >= 0:
        guess += 1
    return guess


def ceil_image(a: FieldElement, root_index: int) -> int:
    return -floor_image(-a, root_index)
