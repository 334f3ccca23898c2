"""Closures of finite seeds under the star operation a * b = (1 - l) a + l b.

Points are elements of Z[lambda] held as integer coordinate vectors.  Batches
of star products are computed with integer numpy arrays (falling back to
Python integers if int64 could overflow), filtered numerically with a safety
margin and then confirmed with exact arithmetic.
"""

from __future__ import annotations

import heapq
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .algebra import (
    FieldElement,
    IntPolynomial,
    NumberFieldContext,
    abs2_element,
    abs2_sign,
    context_of_element,
    make_context,
    sign_against,
)
from .algebra.field import MAX_LEVEL, abs2_interval

log = logging.getLogger(__name__)

Coords = tuple  # tuple[int, ...]

_INT64_SAFE = 2**62


class BudgetExceeded(RuntimeError):
    """A closure or search hit its budget; ``partial`` holds what was built."""

    def __init__(self, message: str, partial: "PointSet | None" = None, level: int | None = None):
        super().__init__(message)
        self.partial = partial
        self.level = level


class DerivationError(ValueError):
    """A derivation step does not replay."""

    def __init__(self, message: str, step_id: str | None = None):
        super().__init__(message)
        self.step_id = step_id


@dataclass(frozen=True)
class SearchBudget:
    max_points: int = 200_000
    max_abs: float | None = None
    max_depth: int = 16


class Region(Protocol):
    """Anything with an exact membership test (a model set window, a disk)."""

    def contains(self, x: FieldElement) -> bool: ...


# ---------------------------------------------------------------------------
# star products


def star(a: FieldElement, b: FieldElement, param: FieldElement | None = None) -> FieldElement:
    """a * b = a + l (b - a), with l the context's lambda unless ``param`` is given."""
    lam = a.ctx.lam() if param is None else param
    return a + lam * (b - a)


def _param_matrix(ctx: NumberFieldContext, param: FieldElement | None) -> np.ndarray:
    coords = ctx.lam().coords if param is None else param.coords
    return np.array(ctx.mult_matrix(coords), dtype=object)


def _star_rows(left: np.ndarray, right: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Row-wise star products of coordinate arrays (int64 when safe, else object)."""
    diff_bound = 2 * max(int(np.abs(left).max(initial=0)), int(np.abs(right).max(initial=0))) + 1
    mat_bound = int(max((sum(abs(int(v)) for v in row) for row in mat), default=1))
    if diff_bound * (mat_bound + 1) < _INT64_SAFE and left.dtype != object and right.dtype != object:
        m64 = mat.astype(np.int64)
        return left + (right - left) @ m64.T
    lo = left.astype(object)
    return lo + (right.astype(object) - lo).dot(mat.T)


def _as_array(rows: Sequence[Coords], d: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, d), dtype=np.int64)
    big = max(abs(v) for r in rows for v in r)
    return np.array(rows, dtype=np.int64 if big < _INT64_SAFE else object).reshape(len(rows), d)


def _shadows(arr: np.ndarray, powers: np.ndarray) -> np.ndarray:
    return arr.astype(float) @ powers


_BATCH = 1 << 20


def _pair_batches(new: Sequence[Coords], allp: Sequence[Coords], arr_all: np.ndarray, d: int, mat):
    """Yield (left coords, right coords, star rows) for new x all and all x new.

    Rows are produced in chunks of roughly ``_BATCH`` pairs; the coordinate
    lists are lazily indexable so provenance lookups stay cheap.
    """
    n_all = len(allp)
    if n_all == 0:
        return
    step = max(1, _BATCH // n_all)
    for start in range(0, len(new), step):
        block = list(new[start:start + step])
        arr_new = _as_array(block, d)
        rep_new = np.repeat(arr_new, n_all, axis=0)
        til_all = np.tile(arr_all, (len(block), 1)) if arr_all.dtype != object else \
            np.array([r for _ in block for r in arr_all], dtype=object).reshape(-1, d)
        lidx = _Rep(block, n_all)
        ridx = _Tile(allp, len(block))
        yield lidx, ridx, _star_rows(rep_new, til_all, mat)
        yield ridx, lidx, _star_rows(til_all, rep_new, mat)


class _Rep:
    def __init__(self, items, times):
        self.items, self.times = items, times

    def __getitem__(self, k):
        return self.items[k // self.times]


class _Tile:
    def __init__(self, items, times):
        self.items = items

    def __getitem__(self, k):
        return self.items[k % len(self.items)]


# ---------------------------------------------------------------------------
# point sets


@dataclass(frozen=True)
class PointSet:
    """A finite subset of Z[lambda], sorted by coordinates.

    ``provenance`` maps coordinates of each derived point to the coordinates
    of the two points it was starred from; seed points have no entry.
    """

    ctx: NumberFieldContext
    elements: tuple[FieldElement, ...]
    seed: tuple[FieldElement, ...] = ()
    rank: int | None = None
    region: str | None = None
    saturated: bool | None = None
    param: tuple[int, ...] | None = None
    provenance: Mapping[Coords, tuple[Coords, Coords]] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def build(cls, ctx, coords: Iterable[Coords], **meta) -> "PointSet":
        uniq = sorted(set(tuple(int(v) for v in c) for c in coords))
        return cls(ctx, tuple(FieldElement(ctx, c) for c in uniq), **meta)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(x.coords) in self.coord_set

    @property
    def coord_set(self) -> frozenset:
        return frozenset(e.coords for e in self.elements)

    def coords_array(self) -> np.ndarray:
        return _as_array([e.coords for e in self.elements], self.ctx.degree)

    def shadows(self, index: int | None = None) -> np.ndarray:
        return _shadows(self.coords_array(), self.ctx.power_shadows(index))

    def derivation_of(self, x: FieldElement) -> "Derivation":
        if x.coords not in self.coord_set:
            raise KeyError(f"{x.human()} is not in the set")
        param = None if self.param is None else FieldElement(self.ctx, self.param)
        return _derivation_from_parents(self.ctx, x.coords, self.provenance, self.seed, param)


def _seed_coords(ctx: NumberFieldContext, seed) -> list[Coords]:
    out = []
    for s in seed:
        if isinstance(s, FieldElement):
            if s.ctx != ctx:
                raise ValueError("seed element from a different context")
            out.append(s.coords)
        else:
            out.append(ctx.from_int(int(s)).coords)
    return out


def _resolve_ctx(seed, ctx) -> NumberFieldContext:
    if ctx is not None:
        return ctx
    for s in seed:
        if isinstance(s, FieldElement):
            return s.ctx
    raise ValueError("a context is required when the seed holds only integers")


def _distinct_rows(out: np.ndarray) -> tuple[list[int], list[list[int]]]:
    """Positions and values of the first occurrence of each distinct row."""
    if out.dtype == object or len(out) == 0:
        seen: dict[tuple, int] = {}
        for k, row in enumerate(out.tolist()):
            seen.setdefault(tuple(row), k)
        pos = sorted(seen.values())
        return pos, [list(out[k]) for k in pos]
    _, idx = np.unique(out, axis=0, return_index=True)
    idx.sort()
    return idx.tolist(), out[idx].tolist()


def closure_rank(seed, n: int, param: FieldElement | None = None, max_points: int = 200_000,
                 ctx: NumberFieldContext | None = None, on_level=None) -> PointSet:
    """The rank-n closure: level 0 is the seed, level k+1 is all stars of level k.

    Level k+1 = level k plus stars pairing a point new at level k with any
    point of level k (in both orders), so each pair is formed once.  If
    ``on_level(level, all_coords, new_coords)`` is given it runs after each
    level and may return True to stop early.  On budget overflow the error
    carries the last completed level.
    """
    ctx = _resolve_ctx(seed, ctx)
    d = ctx.degree
    mat = _param_matrix(ctx, param)
    base = _seed_coords(ctx, seed)
    known: dict[Coords, None] = dict.fromkeys(base)
    prov: dict[Coords, tuple[Coords, Coords]] = {}
    seed_elems = tuple(FieldElement(ctx, c) for c in sorted(known))
    pcoords = None if param is None else param.coords

    def snapshot(points, level: int, saturated: bool | None = None) -> PointSet:
        keep = {c: prov[c] for c in points if c in prov}
        return PointSet.build(ctx, points, seed=seed_elems, rank=level, saturated=saturated,
                              param=pcoords, provenance=keep)

    new = list(known)
    for level in range(n):
        allp = list(known)
        arr_all = _as_array(allp, d)
        fresh: list[Coords] = []
        for lpos, rpos, out in _pair_batches(new, allp, arr_all, d, mat):
            pos, rows = _distinct_rows(out)
            for k, row in zip(pos, rows):
                key = tuple(row)
                if key in known:
                    continue
                known[key] = None
                prov[key] = (lpos[k], rpos[k])
                fresh.append(key)
                if len(known) > max_points:
                    raise BudgetExceeded(
                        f"closure exceeded {max_points} points at level {level + 1}",
                        snapshot(allp, level), level)
        new = fresh
        if on_level is not None and on_level(level + 1, list(known), new):
            return snapshot(list(known), level + 1, saturated=not new)
        if not new:
            return snapshot(list(known), level + 1, saturated=True)
    return snapshot(list(known), n, saturated=False)


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class DerivationStep:
    id: str
    op: str  # "base" or "star"
    coords: tuple[int, ...]
    left: str | None = None
    right: str | None = None


@dataclass(frozen=True)
class Derivation:
    """A straight-line program producing ``target`` from seed points by stars."""

    ctx: NumberFieldContext
    steps: tuple[DerivationStep, ...]
    target: str
    param: tuple[int, ...] | None = None
    seed: tuple[tuple[int, ...], ...] | None = None

    def value(self, step_id: str | None = None) -> FieldElement:
        sid = self.target if step_id is None else step_id
        for s in self.steps:
            if s.id == sid:
                return FieldElement(self.ctx, s.coords)
        raise KeyError(sid)

    @property
    def depth(self) -> int:
        depth: dict[str, int] = {}
        for s in self.steps:
            depth[s.id] = 0 if s.op == "base" else 1 + max(depth[s.left], depth[s.right])
        return depth[self.target]

    def to_json(self) -> dict:
        root = self.ctx.roots[self.ctx.lambda_index].approx()
        out = {
            "schema": "qlambda.derivation/1",
            "minpoly": list(self.ctx.minpoly.coeffs),
            "root": [root.real, root.imag],
            "param": None if self.param is None else list(self.param),
            "seed": None if self.seed is None else [list(c) for c in self.seed],
            "target": self.target,
            "steps": [],
        }
        for s in self.steps:
            item = {"id": s.id, "op": s.op, "coords": list(s.coords)}
            if s.op == "star":
                item["left"], item["right"] = s.left, s.right
            out["steps"].append(item)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict | str, ctx: NumberFieldContext | None = None) -> "Derivation":
        if isinstance(data, str):
            data = json.loads(data)
        if ctx is None:
            root = data["root"]
            ctx = make_context(IntPolynomial(data["minpoly"]), complex(root[0], root[1]))
        elif list(ctx.minpoly.coeffs) != list(data["minpoly"]):
            raise ValueError("derivation minimal polynomial does not match the context")
        steps = []
        seen = set()
        for item in data["steps"]:
            sid = str(item["id"])
            if sid in seen:
                raise DerivationError(f"duplicate step id {sid}", sid)
            seen.add(sid)
            coords = tuple(int(v) for v in item["coords"])
            if len(coords) != ctx.degree:
                raise DerivationError(f"step {sid} has {len(coords)} coordinates", sid)
            op = item.get("op", "star")
            if op not in ("base", "star"):
                raise DerivationError(f"step {sid} has unknown op {op!r}", sid)
            left = right = None
            if op == "star":
                left, right = str(item["left"]), str(item["right"])
            steps.append(DerivationStep(sid, op, coords, left, right))
        param = data.get("param")
        seed = data.get("seed")
        return cls(ctx, tuple(steps), str(data["target"]),
                   None if param is None else tuple(int(v) for v in param),
                   None if seed is None else tuple(tuple(int(v) for v in c) for c in seed))


def replay_derivation(d: Derivation, seed=None) -> FieldElement:
    """Recompute every star step exactly; raise DerivationError at the first mismatch.

    Base steps must be seed points.  The seed defaults to the one stored in
    the derivation, or {0, 1} when none is stored.
    """
    ctx = d.ctx
    if seed is not None:
        allowed = set(_seed_coords(ctx, seed))
    elif d.seed is not None:
        allowed = set(d.seed)
    else:
        allowed = {ctx.zero().coords, ctx.one().coords}
    param = None if d.param is None else FieldElement(ctx, d.param)
    values: dict[str, FieldElement] = {}
    for s in d.steps:
        if s.op == "base":
            if s.coords not in allowed:
                raise DerivationError(f"step {s.id}: base point is not in the seed", s.id)
            values[s.id] = FieldElement(ctx, s.coords)
            continue
        for ref in (s.left, s.right):
            if ref not in values:
                raise DerivationError(f"step {s.id}: reference {ref!r} is not defined earlier", s.id)
        got = star(values[s.left], values[s.right], param)
        if got.coords != s.coords:
            raise DerivationError(
                f"step {s.id}: {s.left} * {s.right} = {got.human()}, recorded {FieldElement(ctx, s.coords).human()}",
                s.id)
        values[s.id] = got
    if d.target not in values:
        raise DerivationError(f"target {d.target!r} is not a step", d.target)
    return values[d.target]


def _derivation_from_parents(ctx, target: Coords, parents: Mapping[Coords, tuple[Coords, Coords]],
                             seed: Sequence[FieldElement], param: FieldElement | None) -> Derivation:
    order: list[Coords] = []
    ids: dict[Coords, str] = {}
    stack = [(target, False)]
    while stack:
        node, expanded = stack.pop()
        if node in ids:
            continue
        if node not in parents or expanded:
            ids[node] = f"p{len(order)}"
            order.append(node)
            continue
        stack.append((node, True))
        left, right = parents[node]
        for child in (right, left):
            if child not in ids:
                stack.append((child, False))
    steps = []
    for node in order:
        if node in parents:
            left, right = parents[node]
            steps.append(DerivationStep(ids[node], "star", node, ids[left], ids[right]))
        else:
            steps.append(DerivationStep(ids[node], "base", node))
    seed_coords = tuple(sorted(s.coords for s in seed)) if seed else None
    return Derivation(ctx, tuple(steps), ids[target], None if param is None else param.coords, seed_coords)


# ---------------------------------------------------------------------------
# bounded regions


class Disk:
    """The closed disk |x - u/w| <= R with u, w in Z[lambda] and rational R > 0.

    Membership is exact: |w x - u|^2 <= R^2 |w|^2.
    """

    def __init__(self, ctx: NumberFieldContext, radius, center: FieldElement | None = None,
                 denominator: FieldElement | None = None):
        self.ctx = ctx
        self.radius = Fraction(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.u = ctx.zero() if center is None else center
        self.w = ctx.one() if denominator is None else denominator
        self._c = complex(self.u.shadow()) / complex(self.w.shadow())
        self._r = float(self.radius)

    def maybe(self, shadows: np.ndarray) -> np.ndarray:
        """Float prefilter; never rejects a true member."""
        return np.abs(shadows - self._c) <= self._r * (1 + 1e-9) + 1e-9

    def contains(self, x: FieldElement) -> bool:
        y = self.w * x - self.u
        num, den = self.radius.numerator, self.radius.denominator
        if self.ctx.lambda_is_real:
            # den^2 y^2 - num^2 w^2 <= 0 at lambda
            expr = y * y * (den * den) - self.w * self.w * (num * num)
            return sign_against(expr, 0, self.ctx.lambda_index) <= 0
        ay, aw = abs2_element(y), abs2_element(self.w)
        if ay is not None and aw is not None:
            expr = ay * (den * den) - aw * (num * num)
            return sign_against(expr, 0, self.ctx.lambda_index) <= 0
        r2 = self.radius * self.radius
        for level in range(MAX_LEVEL):
            iy, iw = abs2_interval(y, level), abs2_interval(self.w, level)
            if iy.hi <= r2 * iw.lo:
                return True
            if iy.lo > r2 * iw.hi:
                return False
        raise ArithmeticError("point lies too close to the disk boundary to decide")


class Intersection:
    def __init__(self, *regions):
        self.regions = [r for r in regions if r is not None]

    def maybe(self, shadows: np.ndarray, coords: np.ndarray) -> np.ndarray:
        mask = np.ones(len(shadows), dtype=bool)
        for r in self.regions:
            mask &= _region_maybe(r, shadows, coords)
        return mask

    def contains(self, x: FieldElement) -> bool:
        return all(r.contains(x) for r in self.regions)


def _region_maybe(region, shadows: np.ndarray, coords: np.ndarray) -> np.ndarray:
    if isinstance(region, Disk):
        return region.maybe(shadows)
    fn = getattr(region, "maybe_coords", None)
    if fn is not None:
        return fn(coords)
    return np.ones(len(shadows), dtype=bool)


def saturate_region(seed, window=None, radius=None, budget: SearchBudget | None = None,
                    param: FieldElement | None = None, center: tuple | None = None,
                    ctx: NumberFieldContext | None = None) -> PointSet:
    """All points reachable from ``seed`` by stars whose intermediate results stay in the region.

    The region is the intersection of an optional window (any object with an
    exact ``contains``) and an optional disk of the given rational radius
    about ``center`` = (u, w) meaning u / w (default the origin).  Iteration
    stops when a round adds nothing.  Every point carries a derivation.
    Because the closure is confined to the region, the result is a subset of
    Q_lambda(seed) intersected with the region; for a model set window it is
    all such points whose derivations stay inside the radius.
    """
    ctx = _resolve_ctx(seed, ctx)
    budget = budget or SearchBudget()
    d = ctx.degree
    mat = _param_matrix(ctx, param)
    powers = ctx.power_shadows()
    disk = None
    if radius is not None:
        u, w = (None, None) if center is None else center
        disk = Disk(ctx, radius, u, w)
    region = Intersection(window, disk)
    base = _seed_coords(ctx, seed)
    known: dict[Coords, None] = dict.fromkeys(base)
    rejected: set[Coords] = set()
    prov: dict[Coords, tuple[Coords, Coords]] = {}
    seed_elems = tuple(FieldElement(ctx, c) for c in sorted(known))
    pcoords = None if param is None else param.coords
    new = list(known)
    rounds = 0
    while new:
        rounds += 1
        allp = list(known)
        arr_all = _as_array(allp, d)
        fresh: list[Coords] = []
        for lpos, rpos, out in _pair_batches(new, allp, arr_all, d, mat):
            mask = region.maybe(_shadows(out, powers), out)
            idx = np.nonzero(mask)[0]
            for k, row in zip(idx.tolist(), out[idx].tolist()):
                key = tuple(row)
                if key in known or key in rejected:
                    continue
                if not region.contains(FieldElement(ctx, key)):
                    rejected.add(key)
                    continue
                known[key] = None
                prov[key] = (lpos[k], rpos[k])
                fresh.append(key)
                if len(known) > budget.max_points:
                    partial = PointSet.build(ctx, known, seed=seed_elems, param=pcoords,
                                             saturated=False, provenance=dict(prov))
                    raise BudgetExceeded(f"saturation exceeded {budget.max_points} points",
                                         partial, rounds)
        new = fresh
    return PointSet.build(ctx, known, seed=seed_elems, param=pcoords, saturated=not new,
                          region="window-and-disk" if window is not None and disk is not None
                          else "window" if window is not None else "disk" if disk is not None else None,
                          provenance=dict(prov), rank=rounds)


class CongruenceScreen:
    """For integer lambda: the closure of {0, 1} stays in the integers n with
    n = 0 or 1 modulo lambda and modulo lambda - 1 (both sets are closed
    under stars and contain 0 and 1)."""

    def __init__(self, lam: int):
        self.moduli = tuple(m for m in (abs(lam), abs(lam - 1)) if m > 1)

    def contains(self, x: FieldElement) -> bool:
        n = x.coords[0]
        return all(n % m in (0, 1) for m in self.moduli)

    def maybe_coords(self, coords: np.ndarray) -> np.ndarray:
        col = coords[:, 0]
        mask = np.ones(len(col), dtype=bool)
        for m in self.moduli:
            r = col % m
            mask &= (r == 0) | (r == 1)
        return mask


# ---------------------------------------------------------------------------
# targeted derivation search


@dataclass
class SearchResult:
    found: bool
    derivation: Derivation | None
    explored: int
    reason: str = ""


def derivation_search(target: FieldElement, seed=None, budget: SearchBudget | None = None,
                      param: FieldElement | None = None, window="auto",
                      ctx: NumberFieldContext | None = None) -> SearchResult:
    """Best-first search for a star derivation of ``target`` from ``seed``.

    Points are accepted in order of increasing |x| (ties by coordinates).
    When lambda is an sPV number and ``window`` is "auto", candidates outside
    the model set window of the seed are pruned; this is sound because the
    window contains the whole closure.  Returns a replayable derivation or a
    result with found=False once the budget is spent.
    """
    ctx = target.ctx if ctx is None else ctx
    budget = budget or SearchBudget()
    seed = [ctx.zero(), ctx.one()] if seed is None else seed
    d = ctx.degree
    mat = _param_matrix(ctx, param)
    powers = ctx.power_shadows()
    base = sorted(set(_seed_coords(ctx, seed)))
    seed_elems = tuple(FieldElement(ctx, c) for c in base)
    if window == "auto":
        window = None
        if param is None and ctx.degree == 1 and abs(ctx.lam().coords[0]) >= 2:
            window = CongruenceScreen(ctx.lam().coords[0])
        elif param is None and ctx.window_indices:
            from .spv import classify_spv
            if classify_spv(ctx).is_spv:
                from .modelset import window_from_seed
                window = window_from_seed(ctx, seed_elems)
    tcoords = target.coords
    parents: dict[Coords, tuple[Coords, Coords]] = {}
    depth: dict[Coords, int] = {c: 0 for c in base}

    def result_for(found_coords: Coords) -> SearchResult:
        der = _derivation_from_parents(ctx, found_coords, parents, seed_elems, param)
        return SearchResult(True, der, len(depth))

    if tcoords in depth:
        return result_for(tcoords)
    if window is not None and not window.contains(target):
        return SearchResult(False, None, len(depth), "target lies outside the window of the seed")

    accepted: list[Coords] = list(base)
    buf = _GrowRows(d)
    for c in base:
        buf.append(c)
    depth_arr = [0] * len(base)
    heap: list = []
    # hashes of accepted and queued points; a collision can only hide a
    # candidate (weakening the search), never produce a wrong derivation
    seen: dict[int, int] = dict.fromkeys(_row_hashes(buf.view()).tolist(), -1)
    rejected: set[Coords] = set()
    max_abs = budget.max_abs
    tarr = np.array(tcoords, dtype=object if max(abs(v) for v in tcoords) >= _INT64_SAFE else np.int64)

    def expand(pc: Coords, pdep: int) -> Coords | None:
        arr = buf.view()
        dep_all = 1 + np.maximum(np.asarray(depth_arr), pdep)
        rep = np.repeat(_as_array([pc], d), len(arr), axis=0)
        for left_is_new in (True, False):
            left, right = (rep, arr) if left_is_new else (arr, rep)
            out = _star_rows(left, right, mat)
            mags = np.abs(_shadows(out, powers))
            keep = dep_all <= budget.max_depth
            if max_abs is not None:
                keep &= mags <= max_abs * (1 + 1e-9)
            if window is not None:
                keep &= _region_maybe(window, mags, out)
            hit = np.nonzero(keep & np.all(out == tarr, axis=1))[0]
            if len(hit):
                k = int(hit[0])
                other = accepted[k]
                lr = (pc, other) if left_is_new else (other, pc)
                parents[tcoords] = lr
                depth[tcoords] = int(dep_all[k])
                return tcoords
            idx = np.nonzero(keep)[0]
            hs = _row_hashes(out[idx]).tolist()
            deps = dep_all[idx].tolist()
            fresh = []
            get = seen.get
            for k, hv, dk in zip(idx.tolist(), hs, deps):
                prev = get(hv)
                if prev is None or prev > dk:
                    seen[hv] = dk
                    fresh.append(k)
            if not fresh:
                continue
            for k, row in zip(fresh, out[fresh].tolist()):
                key = tuple(row)
                other = accepted[k]
                lr = (pc, other) if left_is_new else (other, pc)
                heapq.heappush(heap, (float(mags[k]), key, lr))
        return None

    for c in base:
        hit = expand(c, 0)
        if hit is not None:
            return result_for(hit)

    while heap:
        if len(depth) >= budget.max_points:
            return SearchResult(False, None, len(depth), f"budget of {budget.max_points} points spent")
        mag, key, lr = heapq.heappop(heap)
        if key in depth or key in rejected:
            continue
        if window is not None and not window.contains(FieldElement(ctx, key)):
            rejected.add(key)
            continue
        dep = 1 + max(depth[lr[0]], depth[lr[1]])
        parents[key] = lr
        depth[key] = dep
        seen[int(_row_hashes(_as_array([key], d))[0])] = -1
        accepted.append(key)
        buf.append(key)
        depth_arr.append(dep)
        hit = expand(key, dep)
        if hit is not None:
            return result_for(hit)
    return SearchResult(False, None, len(depth), "search space exhausted within the bounds")


class _GrowRows:
    """Append-only coordinate rows with amortized growth (int64 until values get large)."""

    def __init__(self, d: int):
        self.d = d
        self.data = np.zeros((16, d), dtype=np.int64)
        self.n = 0

    def append(self, row: Coords) -> None:
        if self.data.dtype != object and max(abs(v) for v in row) >= _INT64_SAFE:
            self.data = self.data.astype(object)
        if self.n == len(self.data):
            grown = np.zeros((2 * len(self.data), self.d), dtype=self.data.dtype)
            grown[: self.n] = self.data[: self.n]
            self.data = grown
        self.data[self.n] = row
        self.n += 1

    def view(self) -> np.ndarray:
        return self.data[: self.n]


_HASH_WEIGHTS = np.array([0x9E3779B97F4A7C15 ^ (k * 0xBF58476D1CE4E5B9 % 2**64) | 1 for k in range(16)],
                         dtype=np.uint64)


def _row_hashes(rows: np.ndarray) -> np.ndarray:
    if rows.dtype == object:
        return np.array([hash(tuple(r)) for r in rows.tolist()], dtype=np.int64)
    w = _HASH_WEIGHTS[: rows.shape[1]]
    with np.errstate(over="ignore"):
        h = (rows.astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)
        h ^= h >> np.uint64(29)
    return h.view(np.int64)


# ---------------------------------------------------------------------------
# convexity witnesses


@dataclass(frozen=True)
class ConvexityVerdict:
    """Outcome of a witness search.

    ``kind`` is "convex" when two distinct closure points at distance < 1
    were found (the closure of {0, 1} is then dense in the region), and
    "unknown-at-budget" otherwise.
    """

    kind: str
    region: str | None
    witness: tuple[str, str] | None = None
    distance_sq: str | None = None
    method: str = ""
    depth_reached: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "region": self.region,
            "witness": None if self.witness is None else list(self.witness),
            "distance_sq": self.distance_sq,
            "method": self.method,
            "depth_reached": self.depth_reached,
        }


class _GaussRat:
    """Exact complex rational a + b i, for lambda given as a decimal."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    def __add__(self, o):
        o = _gr(o)
        return _GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _gr(o)
        return _GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _gr(o) - self

    def __mul__(self, o):
        o = _gr(o)
        return _GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, o):
        o = _gr(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def _gr(x) -> _GaussRat:
    return x if isinstance(x, _GaussRat) else _GaussRat(x)


def parse_lambda_value(text: str):
    """Parse "2.5", "5/2", "0.5+1.2i" into an exact Fraction or Gaussian rational."""
    t = text.strip().replace(" ", "").replace("j", "i")
    if t.endswith("i"):
        body = t[:-1]
        split = max(body.rfind("+", 1), body.rfind("-", 1))
        if split <= 0:
            return _GaussRat(0, Fraction(body or "1"))
        return _GaussRat(Fraction(body[:split]), Fraction(body[split:] if body[split + 1:] else body[split] + "1"))
    return Fraction(t)


def _region_name_numeric(lam) -> str:
    from .spv import COMPLEX_PLANE, REAL_LINE, UNIT_INTERVAL
    g = _gr(lam)
    if g.im != 0:
        return COMPLEX_PLANE
    return UNIT_INTERVAL if 0 <= g.re <= 1 else REAL_LINE


def _numeric_witness(lam, budget: SearchBudget) -> ConvexityVerdict:
    g = _gr(lam)
    region = _region_name_numeric(g)
    one = _GaussRat(1)

    def st(a, b):
        return a + g * (b - a)

    def check(a, b, method):
        d2 = (a - b).abs2()
        if 0 < d2 < 1:
            return ConvexityVerdict("convex", region, (str(a), str(b)), str(d2), method, None)
        return None

    zero = _GaussRat(0)
    for a, b, m in ((g, zero, "lambda and 0"),
                    (one, g, "1 and lambda"),
                    (g, (g - 1) * (g - 1), "lambda and (lambda-1)^2"),
                    (g * g - g + 1, zero, "lambda^2-lambda+1 and 0")):
        v = check(a, b, m)
        if v:
            return v
    pts = {zero, one}
    for level in range(1, budget.max_depth + 1):
        cur = list(pts)
        new = set()
        for a in cur:
            for b in cur:
                c = st(a, b)
                if c not in pts:
                    new.add(c)
        pts |= new
        for a in new:
            for b in pts:
                v = check(a, b, f"closure search at depth {level}") if a != b else None
                if v:
                    return replace_depth(v, level)
        if len(pts) > min(budget.max_points, 4000) or not new:
            return ConvexityVerdict("unknown-at-budget", None, method="closure search", depth_reached=level)
    return ConvexityVerdict("unknown-at-budget", None, method="closure search", depth_reached=budget.max_depth)


def replace_depth(v: ConvexityVerdict, level: int) -> ConvexityVerdict:
    return ConvexityVerdict(v.kind, v.region, v.witness, v.distance_sq, v.method, level)


def _pair_distance_below_one(a: FieldElement, b: FieldElement) -> bool:
    diff = a - b
    if diff.is_zero():
        return False
    return abs2_sign(diff, 1) < 0


def _algebraic_witness(ctx: NumberFieldContext, budget: SearchBudget) -> ConvexityVerdict:
    from .spv import convexity_region
    region = convexity_region(ctx)
    lam, one, zero = ctx.lam(), ctx.one(), ctx.zero()
    cands = (
        (lam, zero, "lambda and 0"),
        (one, lam, "1 and lambda"),
        (lam, (lam - 1) * (lam - 1), "lambda and (lambda-1)^2"),
        (lam * lam - lam + 1, zero, "lambda^2-lambda+1 and 0"),
    )
    for a, b, m in cands:
        if _pair_distance_below_one(a, b):
            d2 = abs2_element(a - b)
            return ConvexityVerdict("convex", region, (a.human(), b.human()),
                                    d2.human() if d2 is not None else None, m, None)
    from scipy.spatial import cKDTree
    powers = ctx.power_shadows()
    found: list = []
    reached = [0]

    def inspect(level, allp, new):
        reached[0] = level
        if not new:
            return False
        sh = _shadows(_as_array(allp, ctx.degree), powers)
        pts = np.column_stack([sh.real, sh.imag])
        # pairs at float distance within 1e-6 of 1 are skipped: missing a
        # witness there only weakens the verdict to unknown-at-budget
        for i, j in cKDTree(pts).query_pairs(1.0 - 1e-6, output_type="ndarray"):
            a, b = FieldElement(ctx, allp[i]), FieldElement(ctx, allp[j])
            if _pair_distance_below_one(a, b):
                found.append((a, b, level))
                return True
        return False

    try:
        closure_rank([zero, one], budget.max_depth, max_points=budget.max_points, ctx=ctx, on_level=inspect)
    except BudgetExceeded:
        pass
    if found:
        a, b, level = found[0]
        d2 = abs2_element(a - b)
        return ConvexityVerdict("convex", region, (a.human(), b.human()),
                                d2.human() if d2 is not None else None,
                                f"closure search at depth {level}", level)
    return ConvexityVerdict("unknown-at-budget", None, method="closure search", depth_reached=reached[0])


def convexity_witness(lambda_value, budget: SearchBudget | None = None) -> ConvexityVerdict:
    """Look for two distinct closure points of {0, 1} at distance below 1.

    ``lambda_value`` may be a context, a field element (its minimal
    polynomial defines the context), a rational, or a decimal string such as
    "2.5" or "0.5+1.2i".  Candidate pairs from small identities are tried
    first, followed by a closure search bounded by ``budget``.
    """
    budget = budget or SearchBudget(max_points=5_000, max_depth=12)
    if isinstance(lambda_value, NumberFieldContext):
        ctx = lambda_value
    elif isinstance(lambda_value, FieldElement):
        ctx = context_of_element(lambda_value)
    else:
        if isinstance(lambda_value, str):
            lambda_value = parse_lambda_value(lambda_value)
        elif isinstance(lambda_value, complex):
            lambda_value = _GaussRat(Fraction(lambda_value.real), Fraction(lambda_value.imag))
        elif isinstance(lambda_value, (Rational, float)):
            lambda_value = Fraction(lambda_value)
        g = _gr(lambda_value)
        if g.im == 0 and g.re.denominator == 1:
            ctx = make_context(IntPolynomial([-int(g.re), 1]), float(g.re))
        else:
            return _numeric_witness(g, budget)
    return _algebraic_witness(ctx, budget)
