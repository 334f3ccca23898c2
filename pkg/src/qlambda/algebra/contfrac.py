"""Periodic continued fractions of real quadratic surds (P + sqrt(D)) / Q."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt


def surd_sign(a, b, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for rationals a, b and a positive non-square d."""
    a, b = Fraction(a), Fraction(b)
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 d
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def _floor_surd(p: int, d: int, q: int) -> int:
    """floor((p + sqrt(d)) / q) exactly."""
    guess = (p + isqrt(d)) // q if q > 0 else -((p + isqrt(d)) // -q) - 1
    # adjust: want a with a <= x < a + 1, i.e. sign(p - a q + sqrt d) matches sign(q) etc.
    def ge(a: int) -> bool:  # x >= a
        s = surd_sign(p - a * q, 1, d)
        return s * (1 if q > 0 else -1) >= 0

    a = guess
    while not ge(a):
        a -= 1
    while ge(a + 1):
        a += 1
    return a


@dataclass(frozen=True)
class PeriodicContinuedFraction:
    """Continued fraction [a0; a1, ..., (period)] of the surd (P + sqrt(D)) / Q.

    ``P``, ``D`` and ``Q`` record the normalized source with Q dividing D - P^2.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    P: int
    D: int
    Q: int
    _states: tuple = field(default=(), repr=False, compare=False)

    def quotient(self, k: int) -> int:
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % len(self.period)]

    def convergents(self, count: int) -> list[tuple[int, int]]:
        """(p_k, q_k) for k = 0..count-1 via the matrix recurrence."""
        out = []
        p_prev, p_prev2 = 1, 0  # p_{-1}, p_{-2}
        q_prev, q_prev2 = 0, 1
        for k in range(count):
            a = self.quotient(k)
            p = a * p_prev + p_prev2
            q = a * q_prev + q_prev2
            out.append((p, q))
            p_prev2, p_prev = p_prev, p
            q_prev2, q_prev = q_prev, q
        return out

    def pq(self, k: int) -> tuple[int, int]:
        """(p_k, q_k) for any k >= -2 (with p_-2 = 0, q_-2 = 1, p_-1 = 1, q_-1 = 0)."""
        if k == -2:
            return 0, 1
        if k == -1:
            return 1, 0
        return self.convergents(k + 1)[k]

    def eta(self, k: int) -> tuple[int, int]:
        """eta_k = (-1)^k (q_k x - p_k) as the pair (c0, c1) meaning c0 + c1 * x."""
        p, q = self.pq(k)
        s = 1 if k % 2 == 0 else -1
        return (-s * p, s * q)

    def value_sign(self, c0, c1) -> int:
        """Exact sign of c0 + c1 * x where x is this surd."""
        # x = (P + sqrt D)/Q  ->  c0 + c1 x = (c0 Q + c1 P + c1 sqrt D) / Q
        s = surd_sign(Fraction(c0) * self.Q + Fraction(c1) * self.P, Fraction(c1), self.D)
        return s if self.Q > 0 else -s

    def approx(self) -> float:
        return (self.P + self.D ** 0.5) / self.Q


def surd_continued_fraction(P: int, D: int, Q: int, max_steps: int = 100000) -> PeriodicContinuedFraction:
    """Expand (P + sqrt(D)) / Q with the classical (P, Q) state recursion.

    Input that does not satisfy Q | D - P^2 is rescaled first.  The period is
    detected by exact repetition of a state.
    """
    P, D, Q = int(P), int(D), int(Q)
    if D <= 0:
        raise ValueError("D must be positive")
    r = isqrt(D)
    if r * r == D:
        raise ValueError("D is a perfect square; the value is rational")
    if Q == 0:
        raise ValueError("Q must be nonzero")
    if (D - P * P) % Q != 0:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    p0, d0, q0 = P, D, Q
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    states = []
    p, q = P, Q
    for step in range(max_steps):
        state = (p, q)
        if state in seen:
            start = seen[state]
            return PeriodicContinuedFraction(
                tuple(quotients[:start]), tuple(quotients[start:]), p0, d0, q0, tuple(states)
            )
        seen[state] = step
        states.append(state)
        a = _floor_surd(p, D, q)
        quotients.append(a)
        p = a * q - p
        q = (D - p * p) // q
    raise ArithmeticError("period not found within the step budget")
