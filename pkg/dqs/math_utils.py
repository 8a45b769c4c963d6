"""Working-precision helpers on top of mpmath - no module state.

Every evaluation builds its own ``MPContext`` so concurrent callers never share
a precision setting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import mpmath

# Rational upper bound for pi, used for magnitude bounds of w = i*pi.
PI_UPPER = Fraction(355, 113)


@dataclass(frozen=True)
class Ball:
    """A complex midpoint with an absolute error radius."""
    mid: Any
    radius: Any

    def describe(self, digits: int = 20) -> str:
        return f"{complex_string(self.mid, digits)} +/- {mpmath.nstr(self.radius, 3)}"


def make_context(bits: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = int(bits)
    return ctx


def rounding_unit(ctx) -> Any:
    """2^(1 - prec): bound on the relative error of one rounded operation."""
    return ctx.ldexp(ctx.mpf(1), 1 - ctx.prec)


def is_exact_at(q: Fraction, bits: int) -> bool:
    """True when q is a dyadic rational representable with ``bits`` mantissa bits."""
    den = q.denominator
    if den & (den - 1):
        return False
    num = abs(q.numerator)
    if num == 0:
        return True
    while num % 2 == 0:
        num //= 2
    return num.bit_length() <= bits


def fraction_to_mpf(ctx, q: Fraction) -> Any:
    return ctx.fdiv(q.numerator, q.denominator)


def fraction_upper(ctx, q: Fraction) -> Any:
    """An mpf that is >= q (q >= 0)."""
    x = fraction_to_mpf(ctx, q)
    if is_exact_at(q, ctx.prec):
        return x
    return x + abs(x) * rounding_unit(ctx)


def complex_string(z, digits: int = 20) -> str:
    re = mpmath.nstr(z.real, digits)
    im = mpmath.nstr(z.imag, digits)
    if im.startswith("-"):
        return f"{re}-{im[1:]}i"
    return f"{re}+{im}i"


def decimal_string(x, digits: int = 6) -> str:
    return mpmath.nstr(x, digits)


def upper_fraction(x) -> Fraction:
    """A rational >= x for a nonnegative mpf computed with at least 53 bits."""
    if x == 0:
        return Fraction(0)
    return Fraction(float(x)) * (1 + Fraction(1, 1 << 30))
