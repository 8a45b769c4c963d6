"""Constructors for the functions f_{l,k}, their w-corrected variants and the Y columns.

Every constructor returns an immutable ``LogSeries`` and is memoized in the
shared series cache under its name and arguments.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterator, Optional

from .errors import DomainError, IndexSetError, TruncationError
from .exact_kernel import W, CoeffW, binomial
from .log_series import LogSeries, SeriesTail, TailKey, ls_delta, ls_mul_log, ls_scale
from .logging import log, now
from .r_derivatives import d_r_pow
from .services.series_cache import get_series_cache
from .types import (
    CheckReport,
    DerivOrder,
    FamilyIndex,
    RPoint,
    default_truncation,
    require_family_index,
    require_l,
)

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)
THIRD = Fraction(1, 3)


def _cached(fn: Callable[..., LogSeries]) -> Callable[..., LogSeries]:
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        key = (fn.__name__,) + args + tuple(sorted(kwargs.items()))
        return get_series_cache().get_or_build(key, lambda: fn(*args, **kwargs))
    return wrapper


def truncation_floor(l: int, nu: int) -> int:
    return nu + 4 + 2 * l


def require_truncation(l: int, nu: int, T: int) -> int:
    floor = truncation_floor(l, nu)
    if T < floor:
        raise TruncationError(f"truncation T={T} is below nu + 4 + 2l = {floor} for l={l}, nu={nu}")
    return T


def _require_min_l(l: int, min_l: int, name: str) -> None:
    require_l(l)
    if l < min_l:
        raise IndexSetError(f"{name} is defined for l >= {min_l} (got l={l})")


# --- Building blocks ------------------------------------------------------

@_cached
def build_f1(l: int, nu: int) -> LogSeries:
    """sum_{k=0..nu} (-1)^((nu+k) l) C(nu,k)^(2+l) C(nu+k,nu)^(2+l) z^k."""
    require_l(l)
    if nu < 0:
        raise DomainError(f"nu must be nonnegative (got {nu})")
    m = 2 + l
    coeffs = [
        (-1) ** ((nu + k) * l) * binomial(nu, k) ** m * binomial(nu + k, nu) ** m
        for k in range(nu + 1)
    ]
    return LogSeries.from_laurent(coeffs, 0)


@_cached
def build_tail(l: int, nu: int, T: int, p: int, start_at_one: bool = False) -> LogSeries:
    """(-1)^p/p! sum_t z^(-t) (d/dt)^p R^(2+l)(t, nu), exact for t <= T.

    The sum starts at t = nu + 1, or at t = 1 with ``start_at_one``.
    """
    require_l(l)
    require_truncation(l, nu, T)
    order_m = 2 + l
    DerivOrder(p, order_m)
    weight = Fraction((-1) ** p, factorial(p))
    start = 1 if start_at_one else nu + 1
    # coeffs[i] multiplies z^(-T + i), so t runs from T down to start.
    coeffs = [weight * d_r_pow(DerivOrder(p, order_m), RPoint(t, nu)) for t in range(T, start - 1, -1)]
    tail = SeriesTail({TailKey(l=l, nu=nu, p=p, start=T + 1): CoeffW.constant(weight)})
    return LogSeries.from_laurent(coeffs, -T, truncated=True, tail=tail)


def build_f2(l: int, nu: int, T: int) -> LogSeries:
    return build_tail(l, nu, T, 0)


def build_f4(l: int, nu: int, T: int) -> LogSeries:
    return build_tail(l, nu, T, 1)


def build_f6(l: int, nu: int, T: int) -> LogSeries:
    _require_min_l(l, 1, "f6")
    return build_tail(l, nu, T, 2)


def build_f8(l: int, nu: int, T: int) -> LogSeries:
    _require_min_l(l, 2, "f8")
    return build_tail(l, nu, T, 3)


def _log_power(a: LogSeries, k: int) -> LogSeries:
    for _ in range(k):
        a = ls_mul_log(a)
    return a


# --- Combinations ---------------------------------------------------------

@_cached
def build_f3(l: int, nu: int, T: int) -> LogSeries:
    """log(z) f2 + f4."""
    return ls_mul_log(build_f2(l, nu, T)) + build_f4(l, nu, T)


@_cached
def build_f5(l: int, nu: int, T: int) -> LogSeries:
    """1/2 log(z)^2 f2 + log(z) f4 + f6."""
    _require_min_l(l, 1, "f5")
    f2, f4, f6 = build_f2(l, nu, T), build_f4(l, nu, T), build_f6(l, nu, T)
    return ls_scale(HALF, _log_power(f2, 2)) + ls_mul_log(f4) + f6


@_cached
def build_f5_second_form(l: int, nu: int, T: int) -> LogSeries:
    """-1/2 log(z)^2 f2 + log(z) f3 + f6."""
    _require_min_l(l, 1, "f5")
    f2, f3, f6 = build_f2(l, nu, T), build_f3(l, nu, T), build_f6(l, nu, T)
    return ls_scale(-HALF, _log_power(f2, 2)) + ls_mul_log(f3) + f6


@_cached
def build_f5_vee(l: int, nu: int, T: int) -> LogSeries:
    """-w f3 + f5."""
    _require_min_l(l, 1, "f5")
    return ls_scale(-W, build_f3(l, nu, T)) + build_f5(l, nu, T)


@_cached
def build_f7(l: int, nu: int, T: int) -> LogSeries:
    """1/6 log(z)^3 f2 - 1/2 log(z)^2 f3 + log(z) f5 + f8."""
    _require_min_l(l, 2, "f7")
    f2, f3 = build_f2(l, nu, T), build_f3(l, nu, T)
    f5, f8 = build_f5(l, nu, T), build_f8(l, nu, T)
    return (ls_scale(SIXTH, _log_power(f2, 3)) + ls_scale(-HALF, _log_power(f3, 2))
            + ls_mul_log(f5) + f8)


@_cached
def build_f7_long_form(l: int, nu: int, T: int) -> LogSeries:
    """-1/3 log(z)^3 f2 + 1/2 log(z)^2 f3 + f8 + log(z) (f5 + 1/2 log(z)^2 f2 - log(z) f3)."""
    _require_min_l(l, 2, "f7")
    f2, f3 = build_f2(l, nu, T), build_f3(l, nu, T)
    f5, f8 = build_f5(l, nu, T), build_f8(l, nu, T)
    inner = f5 + ls_scale(HALF, _log_power(f2, 2)) - ls_mul_log(f3)
    return (ls_scale(-THIRD, _log_power(f2, 3)) + ls_scale(HALF, _log_power(f3, 2))
            + f8 + ls_mul_log(inner))


@_cached
def build_f7_vee(l: int, nu: int, T: int) -> LogSeries:
    """f7 - 2/3 w^2 f3, i.e. f7 + (2 pi^2 / 3) f3."""
    _require_min_l(l, 2, "f7")
    return build_f7(l, nu, T) + ls_scale(-Fraction(2, 3) * W * W, build_f3(l, nu, T))


def build_vee(l: int, k: int, nu: int, T: Optional[int] = None) -> LogSeries:
    """The function heading Y_{l,k}: f_{l,k} for k <= 3, the w-corrected form for k = 5, 7."""
    require_family_index(l, k)
    if k == 1:
        return build_f1(l, nu)
    T = default_truncation(nu) if T is None else T
    builders = {2: build_f2, 3: build_f3, 5: build_f5_vee, 7: build_f7_vee}
    return builders[k](l, nu, T)


# --- Y columns ------------------------------------------------------------

@dataclass(frozen=True)
class YVector:
    """Column of 4 + 2l series; entry i is (delta / nu)^(i-1) applied to the head function."""
    idx: FamilyIndex
    truncation: int
    entries: tuple[LogSeries, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> LogSeries:
        return self.entries[i]

    def __iter__(self) -> Iterator[LogSeries]:
        return iter(self.entries)

    @property
    def exact_from(self) -> Optional[int]:
        """Highest exact lower bound among the entries, None if none is truncated."""
        bounds = [s.exact_from for s in self.entries if s.exact_from is not None]
        return max(bounds) if bounds else None


def build_Y(idx: FamilyIndex, T: Optional[int] = None) -> YVector:
    T = default_truncation(idx.nu) if T is None else T
    return get_series_cache().get_or_build(("build_Y", idx, T), lambda: _build_Y(idx, T))


def _build_Y(idx: FamilyIndex, T: int) -> YVector:
    if idx.nu < 1:
        raise DomainError(f"Y columns need nu >= 1 (got nu={idx.nu})")
    require_truncation(idx.l, idx.nu, T)
    start = now()
    scale = Fraction(1, idx.nu)
    current = build_vee(idx.l, idx.k, idx.nu, T)
    entries = [current]
    for _ in range(idx.size - 1):
        current = ls_scale(scale, ls_delta(current))
        entries.append(current)
    log(f"[SERIES] Y l={idx.l} k={idx.k} nu={idx.nu} T={T} built in {(now() - start) * 1000:.0f} ms")
    return YVector(idx, T, tuple(entries))


# --- Construction checks --------------------------------------------------

def _witness(a: LogSeries, b: LogSeries) -> Optional[dict]:
    diff = a - b
    found = diff.first_nonzero()
    if found is None:
        return None
    m, e, c = found
    return {"m": m, "e": e, "difference": repr(c)}


def _compare(check_id: str, params: dict, a: LogSeries, b: LogSeries) -> CheckReport:
    start = now()
    equal = a == b
    witness = None if equal else (_witness(a, b) or {"window": [a.e_min, b.e_min]})
    status = "pass" if equal else "fail"
    if not equal:
        log(f"[FORMS][FAIL] {check_id}: {witness}")
    return CheckReport(check_id, params, status, elapsed_ms=int((now() - start) * 1000), witness=witness)


def forms_check(l: int, nu: int, T: Optional[int] = None) -> list[CheckReport]:
    """Compare the two displayed constructions of f5 (l >= 1) and of f7 (l = 2)."""
    require_l(l)
    T = default_truncation(nu) if T is None else T
    params = {"l": l, "nu": nu, "T": T}
    reports = []
    if l >= 1:
        reports.append(_compare(f"forms/f5/l{l}/nu{nu:03d}", params,
                                build_f5(l, nu, T), build_f5_second_form(l, nu, T)))
    if l == 2:
        reports.append(_compare(f"forms/f7/l{l}/nu{nu:03d}", params,
                                build_f7(l, nu, T), build_f7_long_form(l, nu, T)))
    return reports


def start_at_one_check(l: int, nu: int, T: Optional[int] = None) -> list[CheckReport]:
    """Tail sums started at t = 1 equal those started at t = nu + 1, for each p < 2 + l."""
    require_l(l)
    T = default_truncation(nu) if T is None else T
    reports = []
    for p in range(l + 2):
        params = {"l": l, "nu": nu, "T": T, "p": p}
        reports.append(_compare(f"start-at-one/l{l}/p{p}/nu{nu:03d}", params,
                                build_tail(l, nu, T, p, start_at_one=True), build_tail(l, nu, T, p)))
    return reports
