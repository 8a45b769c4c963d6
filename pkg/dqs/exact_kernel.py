"""Exact rational arithmetic, the coefficient ring Q[w] with w = i*pi, and binomials.

All values are immutable; every function here is pure.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .config import BINOMIAL_ROW_CAP, GUARD_BITS
from .errors import PoleError
from .math_utils import PI_UPPER, Ball, fraction_to_mpf, is_exact_at, make_context
from .types import Precision

Rational = Fraction
Scalar = Union[int, Fraction]


# --- Combinatorics --------------------------------------------------------

@lru_cache(maxsize=BINOMIAL_ROW_CAP)
def binomial_row(n: int) -> tuple[int, ...]:
    """Row n of Pascal's triangle by the multiplicative formula."""
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return tuple(row)


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0 (got {n})")
    if k < 0 or k > n:
        return 0
    if n <= BINOMIAL_ROW_CAP:
        return binomial_row(n)[k]
    k = min(k, n - k)
    value = 1
    for j in range(k):
        value = value * (n - j) // (j + 1)
    return value


def power_sum(p: int, a: int, b: int) -> Fraction:
    """Sum of 1/k^p for k = a..b; zero for an empty range."""
    if p < 1:
        raise ValueError(f"power_sum needs p >= 1 (got {p})")
    if a > b:
        return Fraction(0)
    if a <= 0 <= b:
        raise PoleError(f"power_sum range [{a}, {b}] contains k = 0")
    return sum((Fraction(1, k ** p) for k in range(a, b + 1)), Fraction(0))


# --- Q[w] -----------------------------------------------------------------

class CoeffW:
    """Polynomial in w (standing for i*pi) with rational coefficients.

    Trailing zeros are stripped on construction, so equality is structural.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, value: Scalar) -> CoeffW:
        return cls((value,))

    @classmethod
    def coerce(cls, value: Union[CoeffW, Scalar]) -> CoeffW:
        return value if isinstance(value, CoeffW) else cls.constant(value)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree in w; -1 for zero."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __getitem__(self, p: int) -> Fraction:
        if 0 <= p < len(self._coeffs):
            return self._coeffs[p]
        return Fraction(0)

    def __add__(self, other) -> CoeffW:
        if not isinstance(other, (CoeffW, int, Fraction)):
            return NotImplemented
        other = CoeffW.coerce(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return CoeffW(self[p] + other[p] for p in range(n))

    __radd__ = __add__

    def __neg__(self) -> CoeffW:
        return CoeffW(-c for c in self._coeffs)

    def __sub__(self, other) -> CoeffW:
        if not isinstance(other, (CoeffW, int, Fraction)):
            return NotImplemented
        return self + (-CoeffW.coerce(other))

    def __rsub__(self, other) -> CoeffW:
        return CoeffW.coerce(other) - self

    def __mul__(self, other) -> CoeffW:
        if isinstance(other, (int, Fraction)):
            return CoeffW(c * other for c in self._coeffs)
        if not isinstance(other, CoeffW):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return CoeffW()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return CoeffW(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CoeffW.constant(other)
        if not isinstance(other, CoeffW):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self.degree <= 0:
            return hash(self[0])
        return hash(self._coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "CoeffW(0)"
        terms = []
        for p, c in enumerate(self._coeffs):
            if c == 0:
                continue
            terms.append(str(c) if p == 0 else f"{c}*w" if p == 1 else f"{c}*w^{p}")
        return "CoeffW(" + " + ".join(terms) + ")"

    def abs_bound(self) -> Fraction:
        """Rational upper bound of |c(i*pi)|."""
        return sum((abs(c) * PI_UPPER ** p for p, c in enumerate(self._coeffs)), Fraction(0))


W = CoeffW((0, 1))
ZERO = CoeffW()
ONE = CoeffW.constant(1)


def coeffw_eval(c: CoeffW, prec: Precision = Precision(), ctx=None) -> Ball:
    """Numeric value of c at w = i*pi with an absolute error radius."""
    bits = prec.bits
    if ctx is None:
        ctx = make_context(bits + GUARD_BITS)
    unit = ctx.ldexp(ctx.mpf(1), 1 - bits)
    if c.degree <= 0:
        value = fraction_to_mpf(ctx, c[0])
        radius = ctx.mpf(0) if is_exact_at(c[0], bits) else abs(value) * unit
        return Ball(ctx.mpc(value, 0), radius)

    w = ctx.mpc(0, +ctx.pi)
    mid = ctx.mpc(0)
    magnitude = ctx.mpf(0)
    power = ctx.mpc(1)
    for coeff in c.coeffs:
        if coeff:
            term = fraction_to_mpf(ctx, coeff) * power
            mid += term
            magnitude += abs(term)
        power *= w
    radius = magnitude * (c.degree + 3) * unit
    return Ball(mid, radius)
