"""R(t, nu) = prod_{j=1..nu}(t - j) / prod_{j=0..nu}(t + j), its t-derivatives and tail bounds."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Sequence

import sympy

from .errors import DomainError, PoleError
from .exact_kernel import power_sum
from .logging import log
from .types import DerivOrder, RPoint, require_l

_T = sympy.Symbol("t")


def r_eval(pt: RPoint) -> Fraction:
    value = Fraction(1, 1)
    for j in range(1, pt.nu + 1):
        value *= pt.t - j
        if value == 0:
            return value
    for j in range(0, pt.nu + 1):
        value /= pt.t + j
    return value


def _inverse_power_sum(p: int, t: Fraction, offsets: range) -> Fraction:
    if t.denominator == 1:
        lo, hi = int(t) + offsets.start, int(t) + offsets.stop - 1
        return power_sum(p, lo, hi)
    return sum((1 / (t + j) ** p for j in offsets), Fraction(0))


def log_deriv(p: int, pt: RPoint) -> Fraction:
    """p-th derivative of log R at t."""
    if p < 1:
        raise ValueError(f"log_deriv needs p >= 1 (got {p})")
    if pt.is_zero_of_r:
        raise PoleError(f"log R(t, {pt.nu}) has a pole at t = {pt.t}")
    upper = _inverse_power_sum(p, pt.t, range(-pt.nu, 0))
    lower = _inverse_power_sum(p, pt.t, range(0, pt.nu + 1))
    sign = 1 if p % 2 == 1 else -1
    return sign * factorial(p - 1) * (upper - lower)


def complete_bell(xs: Sequence) -> object:
    """Complete Bell polynomial B_p(x_1, ..., x_p) for p <= 3."""
    p = len(xs)
    if p == 0:
        return 1
    if p == 1:
        return xs[0]
    if p == 2:
        return xs[0] ** 2 + xs[1]
    if p == 3:
        return xs[0] ** 3 + 3 * xs[0] * xs[1] + xs[2]
    raise ValueError(f"Bell polynomials are provided up to order 3 (got {p})")


@lru_cache(maxsize=64)
def _quotient_numerators(m: int, nu: int) -> tuple[tuple[sympy.Poly, ...], sympy.Poly]:
    """Numerators N_0..N_3 with (d/dt)^k R^m = N_k / D^(k+1), and D."""
    num = sympy.Poly(1, _T, domain="ZZ")
    den = sympy.Poly(1, _T, domain="ZZ")
    for j in range(1, nu + 1):
        num *= sympy.Poly(_T - j, _T, domain="ZZ") ** m
    for j in range(0, nu + 1):
        den *= sympy.Poly(_T + j, _T, domain="ZZ") ** m
    d_den = den.diff(_T)
    numerators = [num]
    for k in range(3):
        prev = numerators[-1]
        numerators.append(prev.diff(_T) * den - (k + 1) * prev * d_den)
    return tuple(numerators), den


def _poly_at(poly: sympy.Poly, t: Fraction) -> Fraction:
    value = poly.eval(sympy.Rational(t.numerator, t.denominator))
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def quotient_derivative(p: int, m: int, t: Fraction, nu: int) -> Fraction:
    """(d/dt)^p R^m at t by differentiating the explicit quotient of polynomials."""
    RPoint(t, nu)
    DerivOrder(p, m)
    numerators, den = _quotient_numerators(m, nu)
    t = Fraction(t)
    return _poly_at(numerators[p], t) / _poly_at(den, t) ** (p + 1)


def d_r_pow(order: DerivOrder, pt: RPoint) -> Fraction:
    """(d/dt)^p R^m at t.

    Off the zeros of R this is R^m * B_p(m g_1, ..., m g_p) with g_q the
    derivatives of log R; on the zeros the quotient form is used.
    """
    r_m = r_eval(pt) ** order.m
    if order.p == 0:
        return r_m
    if pt.is_zero_of_r:
        return quotient_derivative(order.p, order.m, pt.t, pt.nu)
    xs = [order.m * log_deriv(q, pt) for q in range(1, order.p + 1)]
    return r_m * complete_bell(xs)


def zero_order_check(l: int, nu: int) -> bool:
    """True iff (d/dt)^p R^(2+l) vanishes at t = 1..nu for every p < 2+l."""
    require_l(l)
    m = 2 + l
    for j in range(1, nu + 1):
        for p in range(m):
            value = d_r_pow(DerivOrder(p, m), RPoint(j, nu))
            if value != 0:
                log(f"[ZERO][FAIL] l={l} nu={nu}: derivative {p} at t={j} is {value}")
                return False
    return True


def tail_bound(l: int, p: int, nu: int, t0: int, z_abs: Fraction,
               t_power: int = 0) -> Optional[Fraction]:
    """Upper bound on sum_{t >= t0} t^t_power |(d/dt)^p R^(2+l)(t, nu)| z_abs^(-t).

    Uses |g_q| <= (q-1)! (2nu+1)/(t-nu)^q and |R| <= 1 for t > nu, so the
    derivative is at most the Bell polynomial of the bounds at t0. The
    remaining sum is dominated by a geometric series; returns None when its
    ratio is not below 1.
    """
    require_l(l)
    DerivOrder(p, 2 + l)
    if t0 < nu + 1:
        raise DomainError(f"tail bounds need t0 >= nu + 1 (got t0={t0}, nu={nu})")
    z_abs = Fraction(z_abs)
    if z_abs <= 1:
        raise DomainError(f"tail bounds need |z| > 1 (got {z_abs})")
    m = 2 + l
    xs = [m * factorial(q - 1) * Fraction(2 * nu + 1, (t0 - nu) ** q) for q in range(1, p + 1)]
    deriv_bound = Fraction(complete_bell(xs))
    x = 1 / z_abs
    ratio = Fraction(t0 + 1, t0) ** t_power * x
    if ratio >= 1:
        return None
    return deriv_bound * Fraction(t0) ** t_power * x ** t0 / (1 - ratio)
