"""Truncated Laurent series in z with coefficients polynomial in log(z) over Q[w].

A series is stored densely as a numpy object array ``data[m, p, e - e_min]``
holding the rational coefficient of ``log(z)^m * w^p * z^e``. Exponents above
``e_max`` are exactly zero. Below ``e_min`` they are zero unless the series is
``truncated``, in which case the discarded part is described exactly by a
``SeriesTail`` and bounded by ``series_tail_bound``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple, Optional, Union

import numpy as np

from .config import GUARD_BITS
from .errors import DomainError, PoleError, TruncationError
from .exact_kernel import ONE, CoeffW
from .logging import log, now
from .math_utils import (
    Ball,
    decimal_string,
    fraction_to_mpf,
    fraction_upper,
    make_context,
    rounding_unit,
    upper_fraction,
)
from .types import CheckReport, EvalPoint, ExactComplex, Precision, TailBound

Scalar = Union[int, Fraction, CoeffW]


# --- Tail description -----------------------------------------------------

class TailKey(NamedTuple):
    """One tail family: sum over t >= start of
    t^t_power * log(z)^log_power * z^(shift - t) * (d/dt)^p R^(2+l)(t, nu)."""
    l: int
    nu: int
    p: int
    start: int
    t_power: int = 0
    log_power: int = 0
    shift: int = 0


def _accumulate(target: dict, key, coef: CoeffW) -> None:
    total = target.get(key, CoeffW()) + coef
    if total.is_zero():
        target.pop(key, None)
    else:
        target[key] = total


@dataclass(frozen=True)
class SeriesTail:
    """Exact description of the part of a series below its window.

    ``terms`` maps tail families to their CoeffW weight; ``spill`` holds single
    monomials ``(m, e)`` that a window intersection cut off.
    """
    terms: Mapping[TailKey, CoeffW] = field(default_factory=dict)
    spill: Mapping[tuple[int, int], CoeffW] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not self.terms and not self.spill

    def merged(self, other: SeriesTail, extra_spill: Optional[Mapping] = None) -> SeriesTail:
        terms = dict(self.terms)
        for key, coef in other.terms.items():
            _accumulate(terms, key, coef)
        spill = dict(self.spill)
        for key, coef in other.spill.items():
            _accumulate(spill, key, coef)
        for key, coef in (extra_spill or {}).items():
            _accumulate(spill, key, coef)
        return SeriesTail(terms, spill)

    def scaled(self, c: CoeffW) -> SeriesTail:
        if c.is_zero():
            return SeriesTail()
        return SeriesTail(
            {k: v * c for k, v in self.terms.items()},
            {k: v * c for k, v in self.spill.items()},
        )

    def with_log(self) -> SeriesTail:
        return SeriesTail(
            {k._replace(log_power=k.log_power + 1): v for k, v in self.terms.items()},
            {(m + 1, e): v for (m, e), v in self.spill.items()},
        )

    def shifted(self) -> SeriesTail:
        return SeriesTail(
            {k._replace(shift=k.shift + 1): v for k, v in self.terms.items()},
            {(m, e + 1): v for (m, e), v in self.spill.items()},
        )

    def differentiated(self) -> SeriesTail:
        # delta(t^j L^m z^(s-t)) = s t^j L^m z^(s-t) - t^(j+1) L^m z^(s-t) + m t^j L^(m-1) z^(s-t)
        terms: dict[TailKey, CoeffW] = {}
        for key, coef in self.terms.items():
            if key.shift:
                _accumulate(terms, key, coef * key.shift)
            _accumulate(terms, key._replace(t_power=key.t_power + 1), -coef)
            if key.log_power:
                _accumulate(terms, key._replace(log_power=key.log_power - 1), coef * key.log_power)
        spill: dict[tuple[int, int], CoeffW] = {}
        for (m, e), coef in self.spill.items():
            if e:
                _accumulate(spill, (m, e), coef * e)
            if m:
                _accumulate(spill, (m - 1, e), coef * m)
        return SeriesTail(terms, spill)

    def log_slice(self, m: int) -> SeriesTail:
        return SeriesTail(
            {k._replace(log_power=0): v for k, v in self.terms.items() if k.log_power == m},
            {(0, e): v for (mm, e), v in self.spill.items() if mm == m},
        )


EMPTY_TAIL = SeriesTail()


# --- The series -----------------------------------------------------------

def _is_zero_plane(plane: np.ndarray) -> bool:
    return all(x == 0 for x in plane.flat)


def _trim(data: np.ndarray) -> np.ndarray:
    """Drop trailing all-zero log-power and w-degree planes."""
    m_len, p_len = data.shape[0], data.shape[1]
    while m_len > 1 and _is_zero_plane(data[m_len - 1]):
        m_len -= 1
    while p_len > 1 and _is_zero_plane(data[:m_len, p_len - 1]):
        p_len -= 1
    if (m_len, p_len) == data.shape[:2]:
        return data
    return data[:m_len, :p_len].copy()


def _zeros(shape) -> np.ndarray:
    return np.zeros(shape, dtype=object)


class LogSeries:
    """Immutable log-power Laurent series with an exact coefficient window."""

    __slots__ = ("_data", "_e_min", "_truncated", "_tail")

    def __init__(self, data: np.ndarray, e_min: int, truncated: bool = False,
                 tail: Optional[SeriesTail] = None):
        data = np.asarray(data, dtype=object)
        if data.ndim != 3 or 0 in data.shape:
            raise ValueError(f"series data must be a non-empty (M, P, E) array (got shape {data.shape})")
        self._data = _trim(data)
        self._data.flags.writeable = False
        self._e_min = int(e_min)
        self._truncated = bool(truncated)
        self._tail = tail if (tail is not None and truncated) else EMPTY_TAIL

    # -- constructors --

    @classmethod
    def zero(cls) -> LogSeries:
        return cls(_zeros((1, 1, 1)), 0)

    @classmethod
    def from_laurent(cls, coeffs, e_min: int, truncated: bool = False,
                     tail: Optional[SeriesTail] = None) -> LogSeries:
        """Log-power 0, rational coefficients ``coeffs[i]`` of ``z^(e_min + i)``."""
        row = np.array([c if isinstance(c, (int, Fraction)) else Fraction(c) for c in coeffs], dtype=object)
        return cls(row.reshape(1, 1, len(row)), e_min, truncated, tail)

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], Scalar], *, e_min: Optional[int] = None,
                   e_max: Optional[int] = None, truncated: bool = False,
                   tail: Optional[SeriesTail] = None) -> LogSeries:
        """Build from ``{(m, e): coefficient}``; the window defaults to the span of the terms."""
        items = {key: CoeffW.coerce(c) for key, c in terms.items()}
        exps = [e for (_, e) in items]
        lo = e_min if e_min is not None else min(exps, default=0)
        hi = e_max if e_max is not None else max(exps, default=lo)
        hi = max(hi, lo)
        m_len = 1 + max((m for (m, _) in items), default=0)
        p_len = 1 + max((c.degree for c in items.values()), default=0)
        data = _zeros((m_len, max(p_len, 1), hi - lo + 1))
        for (m, e), c in items.items():
            if not lo <= e <= hi:
                raise ValueError(f"term z^{e} outside the window [{lo}, {hi}]")
            for p, cp in enumerate(c.coeffs):
                data[m, p, e - lo] = cp
        return cls(data, lo, truncated, tail)

    @classmethod
    def monomial(cls, c: Scalar, m: int, e: int) -> LogSeries:
        return cls.from_terms({(m, e): c})

    # -- accessors --

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def e_min(self) -> int:
        return self._e_min

    @property
    def e_max(self) -> int:
        return self._e_min + self._data.shape[2] - 1

    @property
    def max_log_power(self) -> int:
        return self._data.shape[0] - 1

    @property
    def w_degree(self) -> int:
        return self._data.shape[1] - 1

    @property
    def truncated(self) -> bool:
        return self._truncated

    @property
    def tail(self) -> SeriesTail:
        return self._tail

    @property
    def exact_from(self) -> Optional[int]:
        """Lowest exponent known exactly, or None if nothing was discarded."""
        return self._e_min if self._truncated else None

    def coeff(self, m: int, e: int) -> CoeffW:
        if e < self._e_min:
            if self._truncated:
                raise TruncationError(f"z^{e} lies below the exact window starting at z^{self._e_min}")
            return CoeffW()
        if m < 0 or m > self.max_log_power or e > self.e_max:
            return CoeffW()
        return CoeffW(self._data[m, :, e - self._e_min])

    def nonzero_terms(self) -> Iterator[tuple[int, int, CoeffW]]:
        """Yield ``(m, e, coefficient)`` for every nonzero stored coefficient."""
        for m in range(self.max_log_power + 1):
            for i in range(self._data.shape[2]):
                c = CoeffW(self._data[m, :, i])
                if not c.is_zero():
                    yield m, self._e_min + i, c

    def first_nonzero(self, lo: Optional[int] = None, hi: Optional[int] = None) -> Optional[tuple[int, int, CoeffW]]:
        """Lowest-exponent nonzero coefficient with lo <= e <= hi, as ``(m, e, c)``."""
        lo = self._e_min if lo is None else max(lo, self._e_min)
        hi = self.e_max if hi is None else min(hi, self.e_max)
        for e in range(lo, hi + 1):
            for m in range(self.max_log_power + 1):
                c = CoeffW(self._data[m, :, e - self._e_min])
                if not c.is_zero():
                    return m, e, c
        return None

    def is_zero(self) -> bool:
        """True when every stored coefficient vanishes (the tail is not consulted)."""
        return _is_zero_plane(self._data)

    def log_slice(self, m: int) -> LogSeries:
        """The series multiplying log(z)^m."""
        if m > self.max_log_power:
            plane = _zeros((1, 1, self._data.shape[2]))
        else:
            plane = self._data[m:m + 1]
        return LogSeries(plane, self._e_min, self._truncated, self._tail.log_slice(m))

    def embed(self, m_len: int, p_len: int, lo: int, hi: int) -> np.ndarray:
        """Copy into a zero array of shape (m_len, p_len, hi - lo + 1)."""
        out = _zeros((m_len, p_len, hi - lo + 1))
        src_lo, src_hi = max(lo, self._e_min), min(hi, self.e_max)
        if src_lo <= src_hi:
            m, p = self._data.shape[:2]
            out[:m, :p, src_lo - lo:src_hi - lo + 1] = \
                self._data[:, :, src_lo - self._e_min:src_hi - self._e_min + 1]
        return out

    # -- comparison and operators --

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogSeries):
            return NotImplemented
        if self._truncated != other._truncated:
            return False
        if self._truncated and self._e_min != other._e_min:
            return False
        m_len = max(self._data.shape[0], other._data.shape[0])
        p_len = max(self._data.shape[1], other._data.shape[1])
        lo = min(self._e_min, other._e_min)
        hi = max(self.e_max, other.e_max)
        return bool((self.embed(m_len, p_len, lo, hi) == other.embed(m_len, p_len, lo, hi)).all())

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: LogSeries) -> LogSeries:
        if not isinstance(other, LogSeries):
            return NotImplemented
        return ls_add(self, other)

    def __neg__(self) -> LogSeries:
        return ls_scale(CoeffW.constant(-1), self)

    def __sub__(self, other: LogSeries) -> LogSeries:
        if not isinstance(other, LogSeries):
            return NotImplemented
        return ls_add(self, -other)

    def __rmul__(self, c) -> LogSeries:
        if not isinstance(c, (int, Fraction, CoeffW)):
            return NotImplemented
        return ls_scale(c, self)

    def __repr__(self) -> str:
        flag = "truncated" if self._truncated else "exact"
        return (f"LogSeries(M={self.max_log_power}, w_degree={self.w_degree}, "
                f"window=[{self._e_min}, {self.e_max}], {flag})")


# --- Operations -----------------------------------------------------------

def ls_add(a: LogSeries, b: LogSeries) -> LogSeries:
    """Sum on the tightest window exact for both inputs.

    Coefficients of the wider input that fall below the result window move
    into the tail as spill monomials.
    """
    hi = max(a.e_max, b.e_max)
    lo_full = min(a.e_min, b.e_min)
    exact = [s.e_min for s in (a, b) if s.truncated]
    lo = max(exact) if exact else lo_full
    m_len = max(a.data.shape[0], b.data.shape[0])
    p_len = max(a.data.shape[1], b.data.shape[1])
    total = a.embed(m_len, p_len, lo_full, hi) + b.embed(m_len, p_len, lo_full, hi)

    spill: dict[tuple[int, int], CoeffW] = {}
    for i in range(lo - lo_full):
        for m in range(m_len):
            c = CoeffW(total[m, :, i])
            if not c.is_zero():
                spill[(m, lo_full + i)] = c
    tail = a.tail.merged(b.tail, spill) if exact else None
    return LogSeries(total[:, :, lo - lo_full:], lo, bool(exact), tail)


def ls_scale(c: Scalar, a: LogSeries) -> LogSeries:
    """Multiply every coefficient by ``c``."""
    c = CoeffW.coerce(c)
    if c == ONE:
        return a
    m_len, p_len, e_len = a.data.shape
    if c.is_zero():
        return LogSeries(_zeros((1, 1, e_len)), a.e_min, a.truncated, EMPTY_TAIL)
    out = _zeros((m_len, p_len + c.degree, e_len))
    for q, cq in enumerate(c.coeffs):
        if cq:
            out[:, q:q + p_len, :] += a.data * cq
    return LogSeries(out, a.e_min, a.truncated, a.tail.scaled(c))


def ls_mul_log(a: LogSeries) -> LogSeries:
    """Multiply by log(z)."""
    _, p_len, e_len = a.data.shape
    out = np.concatenate([_zeros((1, p_len, e_len)), a.data], axis=0)
    return LogSeries(out, a.e_min, a.truncated, a.tail.with_log())


def ls_mul_z(a: LogSeries) -> LogSeries:
    """Multiply by z: every exponent and the window move up by one."""
    return LogSeries(a.data, a.e_min + 1, a.truncated, a.tail.shifted())


def ls_delta(a: LogSeries) -> LogSeries:
    """Apply z d/dz: (log z)^m z^e -> e (log z)^m z^e + m (log z)^(m-1) z^e."""
    exps = np.array(list(range(a.e_min, a.e_max + 1)), dtype=object)
    out = a.data * exps
    for m in range(a.max_log_power):
        out[m] += a.data[m + 1] * (m + 1)
    return LogSeries(out, a.e_min, a.truncated, a.tail.differentiated())


# --- Numeric evaluation ---------------------------------------------------

def log_paper(z: ExactComplex, prec: Precision = Precision(), ctx=None) -> Ball:
    """log z = ln|z| + i arg z with -3pi/2 < arg z <= pi/2."""
    if z.is_zero():
        raise PoleError("log(z) has a singularity at z = 0")
    if ctx is None:
        ctx = make_context(prec.bits + GUARD_BITS)
    if z.is_polar:
        # Reduce arg/pi into (-3/2, 1/2].
        a = z.arg_pi
        k = math.ceil((a - Fraction(1, 2)) / 2)
        a -= 2 * k
        ln_r = ctx.log(fraction_to_mpf(ctx, z.modulus))
        arg = ctx.pi * fraction_to_mpf(ctx, a)
        value = ctx.mpc(ln_r, arg)
    else:
        value = ctx.log(z.to_mpc(ctx))
        if z.re < 0 and z.im >= 0:
            value = ctx.mpc(value.real, value.imag - 2 * ctx.pi)
    radius = (abs(value) + 1) * 8 * rounding_unit(ctx)
    return Ball(value, radius)


def _abs_log_upper(pt: EvalPoint) -> Fraction:
    ctx = make_context(64)
    return upper_fraction(abs(log_paper(pt.z, ctx=ctx).mid) + 1)


def series_tail_bound(a: LogSeries, pt: EvalPoint) -> TailBound:
    """Proven bound on the modulus of everything ``a`` discards at ``pt``."""
    if not a.truncated or a.tail.is_empty():
        return TailBound(Fraction(0))
    from .r_derivatives import tail_bound

    z_low, z_high = pt.z.abs_lower(), pt.z.abs_upper()
    log_abs = _abs_log_upper(pt)

    def z_pow(e: int) -> Fraction:
        return z_high ** e if e >= 0 else z_low ** e

    total = Fraction(0)
    for key, coef in a.tail.terms.items():
        family = tail_bound(key.l, key.p, key.nu, key.start, z_low, t_power=key.t_power)
        if family is None:
            return TailBound(None)
        total += coef.abs_bound() * log_abs ** key.log_power * z_pow(key.shift) * family
    for (m, e), coef in a.tail.spill.items():
        total += coef.abs_bound() * log_abs ** m * z_pow(e)
    return TailBound(total)


def ls_eval(a: LogSeries, pt: EvalPoint, tail: Optional[TailBound] = None, ctx=None) -> Ball:
    """Value of ``a`` at ``pt`` with w = i*pi; the radius covers rounding and the tail."""
    if ctx is None:
        ctx = make_context(pt.prec.bits + GUARD_BITS)
    if tail is None:
        tail = series_tail_bound(a, pt)

    z = pt.z.to_mpc(ctx)
    zinv = 1 / z
    z_abs = abs(z)
    zinv_abs = 1 / z_abs
    L = log_paper(pt.z, pt.prec, ctx=ctx).mid
    L_mag = abs(L) + 1
    w = ctx.mpc(0, +ctx.pi)
    z_top = z ** a.e_max
    z_top_abs = z_abs ** a.e_max

    total = ctx.mpc(0)
    magnitude = ctx.mpf(0)
    for m in range(a.max_log_power + 1):
        for p in range(a.w_degree + 1):
            row = a.data[m, p]
            if _is_zero_plane(row):
                continue
            acc = ctx.mpc(0)
            acc_abs = ctx.mpf(0)
            for d in row:
                x = fraction_to_mpf(ctx, d) if d else ctx.mpf(0)
                acc = acc * zinv + x
                acc_abs = acc_abs * zinv_abs + abs(x)
            total += L ** m * w ** p * acc * z_top
            magnitude += L_mag ** m * (ctx.pi + 1) ** p * acc_abs * z_top_abs

    n_ops = 4 * a.data.shape[2] + 8 * a.max_log_power + 16
    radius = magnitude * n_ops * rounding_unit(ctx)
    if tail.is_finite:
        radius += fraction_upper(ctx, tail.bound)
    else:
        radius = ctx.inf
    return Ball(total, radius)


def ls_eval_exact(a: LogSeries, z: ExactComplex) -> ExactComplex:
    """Exact value of a finite series without logarithms or w at a rectangular z."""
    if a.truncated or a.max_log_power > 0 or a.w_degree > 0:
        raise DomainError("exact evaluation needs a finite series free of log(z) and w")
    if z.is_polar:
        raise DomainError("exact evaluation needs z in rectangular form")
    if a.e_min < 0 and z.is_zero():
        raise PoleError("negative powers of z at z = 0")
    re, im = Fraction(0), Fraction(0)
    # Horner from the top exponent down to e_min, then scale by z^e_min.
    for d in reversed(list(a.data[0, 0])):
        re, im = re * z.re - im * z.im + d, re * z.im + im * z.re
    power = ExactComplex(Fraction(1), Fraction(0))
    step = z if a.e_min >= 0 else _exact_inverse(z)
    for _ in range(abs(a.e_min)):
        power = ExactComplex(power.re * step.re - power.im * step.im, power.re * step.im + power.im * step.re)
    return ExactComplex(re * power.re - im * power.im, re * power.im + im * power.re)


def _exact_inverse(z: ExactComplex) -> ExactComplex:
    n = z.abs_squared()
    return ExactComplex(z.re / n, -z.im / n)


# --- Branch convention check ----------------------------------------------

def _random_point(rng: random.Random, re_sign: int) -> ExactComplex:
    re = Fraction(rng.randint(1, 400), rng.randint(1, 40)) * re_sign
    im = Fraction(rng.randint(-400, 400), rng.randint(1, 40))
    return ExactComplex(re, im)


def branch_identity_check(samples: int = 20, seed: int = 0,
                          prec: Precision = Precision()) -> list[CheckReport]:
    """Numerically confirm log(-z) = log(z) - i pi for Re z > 0 and
    log(z) = log(-z) - i pi for Re z < 0 on random rational points."""
    reports = []
    for name, re_sign in (("re-positive", 1), ("re-negative", -1)):
        start = now()
        rng = random.Random(f"{seed}:{name}")
        ctx = make_context(prec.bits + GUARD_BITS)
        worst = ctx.mpf(0)
        worst_budget = ctx.mpf(0)
        passed = True
        first_bad = None
        for _ in range(samples):
            z = _random_point(rng, re_sign)
            lhs, rhs = (log_paper(-z, prec, ctx), log_paper(z, prec, ctx)) if re_sign > 0 else \
                (log_paper(z, prec, ctx), log_paper(-z, prec, ctx))
            diff = abs(lhs.mid - (rhs.mid - ctx.mpc(0, +ctx.pi)))
            budget = lhs.radius + rhs.radius + 4 * ctx.pi * rounding_unit(ctx)
            worst = max(worst, diff)
            worst_budget = max(worst_budget, budget)
            if diff > budget and passed:
                passed = False
                first_bad = {"z": str(z), "difference": decimal_string(diff)}
        status = "pass" if passed else "fail"
        log(f"[BRANCH]{'' if passed else '[FAIL]'} {name}: {samples} points, max difference {decimal_string(worst)}")
        reports.append(CheckReport(
            check_id=f"branch/{name}",
            params={"samples": samples, "seed": seed, "prec": prec.bits},
            status=status,
            residual=decimal_string(worst),
            budget=decimal_string(worst_budget),
            elapsed_ms=int((now() - start) * 1000),
            witness=first_bad,
        ))
    return reports
