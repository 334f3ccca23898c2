"""Regular polygons in cyclotomic rings and their planar star closures.

Everything lives in Z[w] with w = exp(2 pi i / M).  A polygon P_m has its
base on [0, 1] and lies in the upper half plane; its vertices are the
partial sums 1 + w_m + ... + w_m^(l-1).  For a real parameter whose other
conjugates fall in [0, 1], each such embedding maps a star to a convex
combination, so the closure stays inside the convex hull of the seed's
image there.  Those hulls are the windows used for pruning and checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .algebra import (
    ContextError,
    FieldElement,
    NumberFieldContext,
    abs2_element,
    compare,
    cyclotomic,
    embed_interval,
    inverse_rational,
    make_context,
    sign_against,
)
from .algebra.field import MAX_LEVEL
from .starset import PointSet, SearchBudget, closure_rank, saturate_region

SVG_MARKER_RADIUS = 0.18
SVG_PADDING = 0.05


# ---------------------------------------------------------------------------
# contexts


@dataclass(frozen=True)
class CyclotomicContext:
    """Z[w] for w the primitive M-th root exp(2 pi i / M), as a number field context."""

    m: int
    ctx: NumberFieldContext = field(repr=False, compare=False)

    @classmethod
    def of(cls, m: int) -> "CyclotomicContext":
        if m < 3:
            raise ValueError("root order must be at least 3")
        phi = cyclotomic(m)
        ctx = make_context(phi, cmath.exp(2j * math.pi / m))
        return cls(m, ctx)

    @property
    def degree(self) -> int:
        return self.ctx.degree

    @property
    def minpoly(self):
        return self.ctx.minpoly

    def root(self, order: int, k: int = 1) -> FieldElement:
        """exp(2 pi i k / order), for order dividing M (or M/order half-integral with odd order)."""
        if self.m % order == 0:
            e = (self.m // order) * k % self.m
            return FieldElement(self.ctx, self.ctx.power_coords(e))
        if order % 2 == 0 and (order // 2) % 2 == 1 and self.m % (order // 2) == 0:
            # exp(2 pi i / 2q) = -exp(2 pi i (q + 1) / 2 / q) for odd q
            q = order // 2
            base = -self.root(q, (q + 1) // 2)
            return base ** (k % order)
        raise ContextError(f"exp(2 pi i / {order}) is not in Z[w_{self.m}]")

    def automorphism(self, x: FieldElement, j: int) -> FieldElement:
        """The Galois image of x under w -> w^j (j coprime to M)."""
        if math.gcd(j, self.m) != 1:
            raise ValueError("j must be coprime to the root order")
        g = self.ctx.power_coords(j % self.m)
        acc = self.ctx.zero()
        wj = FieldElement(self.ctx, g)
        for c in reversed(x.coords):
            acc = acc * wj + c
        return acc


@dataclass(frozen=True)
class PlanarSet:
    """Points of Z[w] with their derivation data; ``center`` is an optional (u, w) pair meaning u/w."""

    cyc: CyclotomicContext
    points: PointSet
    center: tuple[FieldElement, FieldElement] | None = None
    order: int | None = None  # polygon order, when the set is generated from a polygon

    @property
    def elements(self) -> tuple[FieldElement, ...]:
        return self.points.elements

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        return x in self.points

    def shadows(self) -> np.ndarray:
        return self.points.shadows()


def polygon_vertices(n: int, cyc: CyclotomicContext | None = None) -> PlanarSet:
    """The regular n-gon with base [0, 1] in the upper half plane."""
    if n < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    cyc = cyc or CyclotomicContext.of(n)
    w = cyc.root(n)
    ctx = cyc.ctx
    verts = [ctx.zero()]
    acc, power = ctx.zero(), ctx.one()
    for _ in range(n - 1):
        acc = acc + power
        power = power * w
        verts.append(acc)
    ps = PointSet.build(ctx, [v.coords for v in verts], seed=tuple(sorted(verts)), rank=0)
    return PlanarSet(cyc, ps, center=(ctx.one(), ctx.one() - w), order=n)


def polygon_context(n: int, m: int) -> CyclotomicContext:
    """Smallest context holding lambda_n and P_m: order lcm(2n, m), halved when that is 2 * odd."""
    order = math.lcm(2 * n, m)
    if order % 4 == 2:
        order //= 2
    return CyclotomicContext.of(max(order, 3))


def lambda_n_element(n: int, cyc: CyclotomicContext | None = None) -> FieldElement:
    """lambda_n = 1 / (2 - z - 1/z) with z = exp(i pi / n), exactly in the ring."""
    if n < 3:
        raise ValueError("n must be at least 3")
    cyc = cyc or polygon_context(n, n)
    z = cyc.root(2 * n)
    zinv = cyc.root(2 * n, 2 * n - 1)
    t = 2 - z - zinv
    inv = inverse_rational(t)
    if any(c.denominator != 1 for c in inv):
        raise ContextError(f"lambda_{n} is not an algebraic integer")
    return cyc.ctx.element([int(c) for c in inv])


# ---------------------------------------------------------------------------
# exact signs of real and imaginary parts at an embedding


def _part_sign(w: FieldElement, root_index: int, imag: bool) -> int:
    # complex conjugation commutes with every embedding of an abelian field,
    # so a vanishing part is detected once, in the ring
    c = w.conj()
    if (w == c) if imag else (w == -c):
        return 0
    for level in range(MAX_LEVEL + 1):
        box = embed_interval(w, root_index, level=level)
        iv = box.im if imag else box.re
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
    raise ArithmeticError("sign could not be separated")


def _root_exponent(cyc: CyclotomicContext, index: int) -> int:
    z = cyc.ctx.roots[index].approx()
    k = round(cmath.phase(z) / (2 * math.pi) * cyc.m) % cyc.m
    return k


def window_embeddings(cyc: CyclotomicContext, param: FieldElement) -> tuple[int, ...]:
    """Root indices (one per conjugate pair) where the parameter's image is real and in [0, 1]."""
    if param.conj() != param:
        return ()
    ctx = cyc.ctx
    seen, out = set(), []
    for i in range(ctx.degree):
        k = _root_exponent(cyc, i)
        if k in seen or (cyc.m - k) % cyc.m in seen:
            continue
        seen.add(k)
        if sign_against(param, 0, i) >= 0 and sign_against(param, 1, i) <= 0:
            out.append(i)
    return tuple(out)


class HullWindow:
    """Points whose image at each window embedding lies in the convex hull of the seed's image."""

    def __init__(self, cyc: CyclotomicContext, seed: Sequence[FieldElement], param: FieldElement):
        self.cyc = cyc
        self.indices = window_embeddings(cyc, param)
        self._edges = {}
        self._float = {}
        for i in self.indices:
            pts = [complex(s.shadow(i)) for s in seed]
            xy = np.array([[p.real, p.imag] for p in pts])
            segment = False
            try:
                if len(pts) < 3:
                    raise QhullError("fewer than three points")
                hull = ConvexHull(xy)
                order = list(hull.vertices)  # counter-clockwise
                pairs = [(order[k], order[(k + 1) % len(order)]) for k in range(len(order))]
            except QhullError:
                # collinear images: the hull is a segment
                proj = [p.real * (xy[-1][0] - xy[0][0]) + p.imag * (xy[-1][1] - xy[0][1]) for p in pts]
                a, b = int(np.argmin(proj)), int(np.argmax(proj))
                pairs = [(a, b), (b, a)]
                segment = True
            edges = [(seed[a], (seed[b] - seed[a]).conj()) for a, b in pairs]
            self._edges[i] = (edges, segment)
            self._float[i] = [(pts[a], (pts[b] - pts[a]).conjugate()) for a, b in pairs]

    def contains(self, x: FieldElement) -> bool:
        for i in self.indices:
            edges, segment = self._edges[i]
            for p, dconj in edges:
                if _part_sign(dconj * (x - p), i, imag=True) < 0:
                    return False
            if segment:
                (p, d1), (q, d2) = edges
                if _part_sign(d1 * (x - p), i, imag=False) < 0 or _part_sign(d2 * (x - q), i, imag=False) < 0:
                    return False
        return True

    def maybe_coords(self, coords: np.ndarray) -> np.ndarray:
        mask = np.ones(len(coords), dtype=bool)
        for i in self.indices:
            z = np.asarray(coords, dtype=float) @ self.cyc.ctx.power_shadows(i)
            for p, dconj in self._float[i]:
                cross = (dconj * (z - p)).imag
                tol = 1e-9 * (1 + np.abs(z)) * (1 + abs(dconj))
                mask &= cross >= -tol
        return mask


# ---------------------------------------------------------------------------
# closures


def planar_closure(seed: PlanarSet, param: FieldElement, radius=None, rank: int | None = None,
                   budget: SearchBudget | None = None, window: bool = True) -> PlanarSet:
    """Star closure of a planar seed under ``param``.

    With ``rank`` the rank-n closure is returned.  Otherwise the seed is
    saturated inside the disk of the given radius about the seed's center
    (the origin if it has none), pruned by the hull windows when ``window``.
    """
    ctx = seed.cyc.ctx
    if param.ctx != ctx:
        raise ValueError("parameter and seed must share a context")
    elems = list(seed.elements)
    if rank is not None:
        pts = closure_rank(elems, rank, param=param, ctx=ctx,
                           max_points=(budget or SearchBudget()).max_points)
        return PlanarSet(seed.cyc, pts, seed.center, seed.order)
    if radius is None:
        raise ValueError("give either a rank or a radius")
    region = HullWindow(seed.cyc, elems, param) if window else None
    if region is not None and not region.indices:
        region = None
    pts = saturate_region(elems, window=region, radius=radius, budget=budget, param=param,
                          center=seed.center, ctx=ctx)
    return PlanarSet(seed.cyc, pts, seed.center, seed.order)


def rotate(ps: PlanarSet, x: FieldElement) -> FieldElement:
    """Rotation by 2 pi / m about the polygon center: x -> w_m x + 1."""
    return ps.cyc.root(ps.order) * x + 1


def reflect(x: FieldElement) -> FieldElement:
    """Reflection across the perpendicular bisector of the base: x -> 1 - conj(x)."""
    return 1 - x.conj()


def symmetry_check(ps: PlanarSet) -> dict[str, bool]:
    if ps.order is None:
        raise ValueError("symmetries are defined for polygon-generated sets")
    coords = ps.points.coord_set
    return {
        "rotation": all(rotate(ps, x).coords in coords for x in ps),
        "reflection": all(reflect(x).coords in coords for x in ps),
    }


# ---------------------------------------------------------------------------
# projections


def _hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row echelon basis of the integer lattice spanned by ``rows``."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    basis = []
    ncols = len(rows[0])
    for col in range(ncols):
        piv = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            head = piv[0]
            nxt = [head]
            for r in piv[1:]:
                q = r[col] // head[col]
                r2 = [a - q * b for a, b in zip(r, head)]
                (nxt if r2[col] != 0 else rest).append(r2)
            piv = nxt
        if piv:
            basis.append(piv[0])
        rows = [r for r in rest if any(r)]
    return basis


def _in_lattice(basis: list[list[int]], v: Sequence[int]) -> bool:
    v = list(v)
    for row in basis:
        col = next(k for k, c in enumerate(row) if c)
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


@dataclass(frozen=True)
class ProjectionReport:
    direction: tuple[int, ...]
    window_indices: tuple[int, ...]
    checked: int
    violations: tuple[tuple[int, ...], ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"direction": list(self.direction), "window_indices": list(self.window_indices),
                "checked": self.checked, "passed": self.passed,
                "violations": [list(v) for v in self.violations]}


def axis_projection_check(ps: PlanarSet, direction: FieldElement, seed: PlanarSet | None = None,
                          param: FieldElement | None = None) -> ProjectionReport:
    """Project onto the axis of ``direction`` and test the one-dimensional model set conditions.

    The projection of x is x conj(u) + conj(x) u (twice |u| times the
    component along u), a real element.  Projections of a star closure are
    the star closure of the projected seed, which lies in the affine
    Z[param]-module through the projected seed and, at each window
    embedding, between the extreme projected seed images.  Both conditions
    are checked exactly for every point.
    """
    seed = seed or PlanarSet(ps.cyc, PointSet.build(ps.cyc.ctx, [s.coords for s in ps.points.seed]))
    if param is None:
        if ps.points.param is None:
            raise ValueError("the parameter is required")
        param = FieldElement(ps.cyc.ctx, ps.points.param)
    ctx = ps.cyc.ctx
    u, ubar = direction, direction.conj()

    def proj(x: FieldElement) -> FieldElement:
        return x * ubar + x.conj() * u

    sp = [proj(s) for s in seed.elements]
    base = sp[0]
    gens = []
    power = ctx.one()
    for _ in range(ctx.degree):
        gens.extend(list((power * (s - base)).coords) for s in sp[1:])
        power = power * param
    lattice = _hnf(gens)
    indices = window_embeddings(ps.cyc, param)
    bounds = {}
    for i in indices:
        lo = hi = sp[0]
        for s in sp[1:]:
            if compare(s, lo, i) < 0:
                lo = s
            if compare(s, hi, i) > 0:
                hi = s
        bounds[i] = (lo, hi)
    bad = []
    for x in ps:
        y = proj(x)
        ok = _in_lattice(lattice, (y - base).coords)
        for i in indices if ok else ():
            lo, hi = bounds[i]
            if compare(y, lo, i) < 0 or compare(y, hi, i) > 0:
                ok = False
                break
        if not ok:
            bad.append(x.coords)
    return ProjectionReport(direction.coords, indices, len(ps), tuple(bad))


# ---------------------------------------------------------------------------
# distances


@dataclass(frozen=True)
class DistanceStats:
    min_distance: float
    min_distance_sq: FieldElement
    pairs: tuple[tuple[FieldElement, FieldElement], ...]
    histogram: dict

    def min_at_least(self, r) -> bool:
        """Exact test min distance >= r (rational r)."""
        r = Fraction(r)
        return sign_against(self.min_distance_sq, r * r, self.min_distance_sq.ctx.lambda_index) >= 0

    def to_json(self) -> dict:
        return {"min_distance": self.min_distance,
                "min_distance_sq": list(self.min_distance_sq.coords),
                "pairs": [[list(a.coords), list(b.coords)] for a, b in self.pairs],
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())}}


def distance_stats(points: Iterable[FieldElement], bin_width: float = 0.1) -> DistanceStats:
    """Minimum distance with every attaining pair, decided exactly.

    Candidates come from a k-d tree on the numeric shadows with a relative
    margin; among them squared distances |x - y|^2 are exact real elements
    and the minimum and its ties are settled by exact comparison.  The
    histogram counts nearest-neighbour distances in bins of ``bin_width``.
    """
    pts = list(points.elements if isinstance(points, PlanarSet) else points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    ctx = pts[0].ctx
    z = np.array([complex(p.shadow()) for p in pts])
    xy = np.column_stack([z.real, z.imag])
    tree = cKDTree(xy)
    dist, _ = tree.query(xy, k=2)
    nn = dist[:, 1]
    dmin = float(nn.min())
    cand = tree.query_pairs(dmin * (1 + 1e-6) + 1e-9, output_type="ndarray")
    idx = ctx.lambda_index
    best = None
    members: list[tuple[int, int]] = []
    for a, b in cand.tolist():
        d2 = abs2_element(pts[a] - pts[b])
        if d2 is None:
            raise ArithmeticError("squared distance is not exact in this context")
        c = 1 if best is None else compare(d2, best, idx)
        if c < 0 or best is None:
            best, members = d2, [(a, b)]
        elif c == 0:
            members.append((a, b))
    hist: dict = {}
    for d in nn:
        key = round(math.floor(d / bin_width) * bin_width, 10)
        hist[key] = hist.get(key, 0) + 1
    pairs = tuple(sorted(((min(pts[a], pts[b]), max(pts[a], pts[b])) for a, b in members),
                         key=lambda p: (p[0].coords, p[1].coords)))
    return DistanceStats(math.sqrt(abs(best.shadow())), best, pairs, hist)


# ---------------------------------------------------------------------------
# rendering


def to_svg(points: Iterable[FieldElement], marker_radius: float = SVG_MARKER_RADIUS,
           padding: float = SVG_PADDING) -> str:
    pts = sorted(points.elements if isinstance(points, PlanarSet) else points, key=lambda e: e.coords)
    z = [complex(p.shadow()) for p in pts]
    xs = [c.real for c in z] or [0.0]
    ys = [-c.imag for c in z] or [0.0]
    x0, x1 = min(xs) - marker_radius, max(xs) + marker_radius
    y0, y1 = min(ys) - marker_radius, max(ys) + marker_radius
    pw, ph = (x1 - x0) * padding, (y1 - y0) * padding
    vb = f"{x0 - pw:.6f} {y0 - ph:.6f} {x1 - x0 + 2 * pw:.6f} {y1 - y0 + 2 * ph:.6f}"
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb}">']
    for x, y in zip(xs, ys):
        lines.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="{marker_radius}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the lambda = 2 hexagon closure


def hexagon_parity_check(radius=6) -> dict:
    """Saturate P_6 under 2 and test every point a + b eta against ab = 0 (mod 2).

    eta = exp(2 pi i / 3), so Z[eta] = Z[w_6] with coordinates (a, b).  Each
    star 2b - a keeps the parity class of its first operand, and the seed
    hexagon only meets the classes (0,0), (1,0) and (0,1).
    """
    cyc = CyclotomicContext.of(3)
    seed = polygon_vertices(6, cyc)
    two = cyc.ctx.from_int(2)
    ps = planar_closure(seed, two, radius=radius)
    odd = [x.coords for x in ps if (x.coords[0] * x.coords[1]) % 2]
    one_eta = cyc.ctx.element([1, 1])
    return {"points": len(ps), "violations": odd, "contains_1_plus_eta": one_eta in ps,
            "set": ps}
