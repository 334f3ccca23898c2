"""Integer polynomials with a parser for human-written and JSON forms."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from fractions import Fraction
from numbers import Integral
from typing import Iterable, Sequence

from . import ratpoly


def _as_int(value) -> int:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ValueError(f"coefficient {value!r} is not an integer")


class IntPolynomial:
    """Polynomial with integer coefficients, stored low degree first.

    Trailing zeros are stripped on construction.  The zero polynomial has an
    empty coefficient tuple and reports degree 0.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_as_int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    # -- constructors -------------------------------------------------
    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Parse ``"x^2+3x-1"`` style text or a JSON list ``"[-1, 3, 1]"``."""
        text = text.strip()
        if text.startswith("["):
            return cls(json.loads(text))
        return cls(_parse_human(text))

    # -- basic properties ---------------------------------------------
    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def as_fractions(self) -> list[Fraction]:
        return [Fraction(c) for c in self.coeffs]

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            return other
        return IntPolynomial((other,))

    def __add__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "IntPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * self.coeffs[i] for i in range(1, len(self.coeffs)))

    def compose(self, inner: "IntPolynomial") -> "IntPolynomial":
        out = IntPolynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def divmod_monic(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Exact division by a monic integer polynomial."""
        if not divisor.is_monic():
            raise ValueError("divisor must be monic")
        q, r = ratpoly.divmod_(self.as_fractions(), divisor.as_fractions())
        return IntPolynomial(q), IntPolynomial(r)

    # -- dunder plumbing ----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, Integral):
            return self.coeffs == IntPolynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("IntPolynomial", self.coeffs))

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        return self.human()

    def human(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f"{sign}{body}"
        return text


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+)?\s*\*?\s*
        (?P<var>[a-zA-Zλ])?
        (?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?\s*""",
    re.VERBOSE,
)


def _parse_human(text: str) -> list[int]:
    if not text:
        raise ValueError("empty polynomial text")
    coeffs: dict[int, int] = {}
    pos = 0
    var_name = None
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign, coef, var, exp = m.group("sign", "coef", "var", "exp")
        if coef is None and var is None:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        if sign is None and not first:
            raise ValueError(f"missing operator before {text[pos:m.end()]!r}")
        if var is not None:
            if var_name is None:
                var_name = var
            elif var != var_name:
                raise ValueError("polynomial mixes variable names")
        if exp is not None and var is None:
            raise ValueError("exponent without variable")
        k = 0 if var is None else (int(exp) if exp is not None else 1)
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return [coeffs.get(k, 0) for k in range(top + 1)]


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPolynomial:
    """The m-th cyclotomic polynomial, by recursive exact division of x^m - 1."""
    if m < 1:
        raise ValueError("order must be positive")
    poly = IntPolynomial([-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            poly = poly.divmod_monic(cyclotomic(d))[0]
    return poly


def as_int_polynomial(value: "IntPolynomial | Sequence[int] | str") -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, str):
        return IntPolynomial.parse(value)
    return IntPolynomial(value)
