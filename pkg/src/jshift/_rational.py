"""Small helpers for exact rational values and their text forms."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational

from jshift.errors import SpecFormatError


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, bool):
        raise SpecFormatError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecFormatError(f"not a rational: {value!r}") from exc
    raise SpecFormatError(f"not an exact rational: {value!r} ({type(value).__name__})")


def fmt(q: Fraction) -> str:
    """Render as ``"p/q"`` (the denominator is always written)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rendered(q: Fraction) -> dict:
    """Report form: exact string plus a float rendering for humans."""
    return {"value": fmt(q), "float": float(q)}


def exact_sqrt(q: Fraction) -> Fraction | None:
    """Square root of ``q`` when it is rational, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    p, d = isqrt(q.numerator), isqrt(q.denominator)
    if p * p == q.numerator and d * d == q.denominator:
        return Fraction(p, d)
    return None


def sqrt_float(q: Fraction) -> float:
    """Nearest-float square root that survives numerators beyond float range."""
    q = Fraction(q)
    if q == 0:
        return 0.0
    try:
        return float(q) ** 0.5
    except OverflowError:
        # scale by an even power of two so the quotient fits a double
        shift = (q.numerator.bit_length() - q.denominator.bit_length()) // 2
        return float(q / Fraction(4) ** shift) ** 0.5 * 2.0**shift


def parse_range(text: str) -> tuple[int, int]:
    """Parse ``"a..b"`` (inclusive) into a pair of ints."""
    try:
        lo, hi = text.split("..")
        lo_i, hi_i = int(lo), int(hi)
    except ValueError as exc:
        raise SpecFormatError(f"bad range {text!r}; expected a..b") from exc
    return lo_i, hi_i
