"""Dense univariate polynomials over Q as plain lists of Fractions.

Coefficients are stored low degree first and trailing zeros are always
trimmed, so the zero polynomial is the empty list.  These helpers back the
exact parts of root isolation (Sturm counts, gcds, bisection) and the
polynomial groupoid module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

RatPoly = list  # list[Fraction], low degree first


def make(coeffs: Iterable) -> RatPoly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    return len(p) - 1


def add(p: Sequence, q: Sequence) -> RatPoly:
    n = max(len(p), len(q))
    return make((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def sub(p: Sequence, q: Sequence) -> RatPoly:
    n = max(len(p), len(q))
    return make((p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n))


def mul(p: Sequence, q: Sequence) -> RatPoly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return make(out)


def scale(p: Sequence, c) -> RatPoly:
    return make(c * a for a in p)


def derivative(p: Sequence) -> RatPoly:
    return make(i * p[i] for i in range(1, len(p)))


def evaluate(p: Sequence, x):
    """Horner evaluation; works for any ring element supporting * and +."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_(a: Sequence, b: Sequence) -> tuple[RatPoly, RatPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = make(a)
    q = [Fraction(0)] * max(len(rem) - len(b) + 1, 0)
    lead = b[-1]
    while rem and len(rem) >= len(b):
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        q[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem = make(rem)
    return make(q), rem


def monic(p: Sequence) -> RatPoly:
    if not p:
        return []
    return scale(p, 1 / Fraction(p[-1]))


def gcd(a: Sequence, b: Sequence) -> RatPoly:
    a, b = make(a), make(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def squarefree_part(p: Sequence) -> RatPoly:
    p = make(p)
    if len(p) <= 1:
        return monic(p)
    g = gcd(p, derivative(p))
    return monic(divmod_(p, g)[0])


def compose_affine(p: Sequence, a, b) -> RatPoly:
    """Return p(a + b*x)."""
    out: RatPoly = []
    lin = make([a, b])
    for c in reversed(p):
        out = add(mul(out, lin), [c])
    return out


def sturm_sequence(p: Sequence) -> list[RatPoly]:
    seq = [make(p), derivative(p)]
    while seq[-1]:
        r = divmod_(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(seq: Sequence[Sequence], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    return _sign_changes(evaluate(s, lo) for s in seq) - _sign_changes(evaluate(s, hi) for s in seq)


def cauchy_bound(p: Sequence) -> Fraction:
    lead = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Sequence, lo: Fraction, hi: Fraction,
                       max_width: Fraction | None = None) -> list[tuple[Fraction, Fraction]]:
    """Isolate the distinct real roots of ``p`` lying in the closed ``[lo, hi]``.

    Returns disjoint intervals ``(a, b)`` sorted increasingly; ``a == b`` marks
    an exact rational root, otherwise the root lies strictly inside ``(a, b)``
    and ``p`` changes sign across it.  ``p`` need not be squarefree.
    """
    sf = squarefree_part(p)
    if len(sf) <= 1:
        return []
    seq = sturm_sequence(sf)
    out: list[tuple[Fraction, Fraction]] = []
    if evaluate(sf, lo) == 0:
        out.append((lo, lo))
    stack = [(Fraction(lo), Fraction(hi))]
    found: list[tuple[Fraction, Fraction]] = []
    while stack:
        a, b = stack.pop()
        n = sturm_count(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            if evaluate(sf, b) == 0:
                found.append((b, b))
                continue
            found.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    for a, b in found:
        if a != b:
            # tighten away from the left endpoint, which could itself be a root
            # of sf only if it was handled as an exact root elsewhere
            while evaluate(sf, a) == 0 or (max_width is not None and b - a > max_width):
                mid = (a + b) / 2
                fm = evaluate(sf, mid)
                if fm == 0:
                    a = b = mid
                    break
                if sturm_count(seq, a, mid) == 1:
                    b = mid
                else:
                    a = mid
        out.append((a, b))
    out.sort()
    return out
