"""Exact rational parsing and formatting shared by the JSON/CSV surfaces."""
from fractions import Fraction
import math


def as_fraction(x):
    """Coerce ints, Fractions and "num/den" strings; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fmt(q):
    """Render as "num/den" (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def dec(q, places=6):
    """Fixed-point decimal, rounded half-even on the exact value."""
    q = Fraction(q)
    scaled = round(q * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def lcm_denominator(values):
    return math.lcm(1, *(Fraction(v).denominator for v in values))
