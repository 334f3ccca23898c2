"""Exact arithmetic in Z[lambda] and supporting exact numerics."""

from .contfrac import PeriodicContinuedFraction, surd_continued_fraction, surd_sign
from .field import (
    NEGATIVE,
    POSITIVE,
    ZERO,
    ContextError,
    FieldElement,
    NumberFieldContext,
    abs2_element,
    abs2_sign,
    abs_compare,
    charpoly,
    compare,
    context_of_element,
    embed_interval,
    exact_div,
    inverse_rational,
    make_context,
    minimal_polynomial,
    norm,
    ring_arith,
    sign_against,
    with_lambda_index,
)
from .interval import ComplexBox, RationalInterval
from .polynomial import IntPolynomial, cyclotomic

__all__ = [
    "ComplexBox",
    "ContextError",
    "FieldElement",
    "IntPolynomial",
    "NEGATIVE",
    "NumberFieldContext",
    "POSITIVE",
    "PeriodicContinuedFraction",
    "RationalInterval",
    "ZERO",
    "abs2_element",
    "abs2_sign",
    "abs_compare",
    "charpoly",
    "compare",
    "context_of_element",
    "cyclotomic",
    "embed_interval",
    "exact_div",
    "inverse_rational",
    "make_context",
    "minimal_polynomial",
    "norm",
    "ring_arith",
    "sign_against",
    "surd_continued_fraction",
    "surd_sign",
    "with_lambda_index",
]
