"""Core data types for dqs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .config import DEFAULT_PREC_BITS, DEFAULT_T_MARGIN, MIN_PREC_BITS
from .errors import DomainError, IndexSetError, PoleError

# Admissible k for each l.
K_SETS: dict[int, tuple[int, ...]] = {
    0: (1, 2, 3),
    1: (1, 2, 3, 5),
    2: (1, 2, 3, 5, 7),
}

_SQRT_BITS = 64


def format_k_set(l: int) -> str:
    return "K_%d = {%s}" % (l, ", ".join(str(k) for k in K_SETS[l]))


def require_l(l: int) -> int:
    if l not in K_SETS:
        raise IndexSetError(f"l must be 0, 1 or 2 (got {l})")
    return l


def require_family_index(l: int, k: int) -> None:
    require_l(l)
    if k not in K_SETS[l]:
        raise IndexSetError(f"k={k} is not admissible for l={l}: {format_k_set(l)}")


def default_truncation(nu: int, margin: int = DEFAULT_T_MARGIN) -> int:
    return 2 * nu + margin


@dataclass(frozen=True)
class Precision:
    """Binary working precision for numeric evaluation."""
    bits: int = DEFAULT_PREC_BITS

    def __post_init__(self) -> None:
        if int(self.bits) < MIN_PREC_BITS:
            raise DomainError(f"precision must be at least {MIN_PREC_BITS} bits (got {self.bits})")


def _isqrt_fraction(value: Fraction, round_up: bool) -> Fraction:
    """Rational bound for sqrt(value), 64 fractional bits."""
    num, den = value.numerator, value.denominator
    scaled = num * den << (2 * _SQRT_BITS)
    root = math.isqrt(scaled)
    if round_up and root * root < scaled:
        root += 1
    return Fraction(root, den << _SQRT_BITS)


@dataclass(frozen=True)
class ExactComplex:
    """Exact complex number, rectangular (re, im) or polar (modulus, arg/pi)."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)
    modulus: Optional[Fraction] = None
    arg_pi: Optional[Fraction] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))
        if self.modulus is not None:
            if self.arg_pi is None:
                raise ValueError("polar form needs both modulus and arg_pi")
            object.__setattr__(self, "modulus", Fraction(self.modulus))
            object.__setattr__(self, "arg_pi", Fraction(self.arg_pi))
            if self.modulus < 0:
                raise ValueError("modulus must be nonnegative")

    @classmethod
    def from_polar(cls, modulus, arg_pi) -> ExactComplex:
        """z = modulus * exp(i * pi * arg_pi)."""
        return cls(modulus=Fraction(modulus), arg_pi=Fraction(arg_pi))

    @classmethod
    def parse(cls, text: str) -> ExactComplex:
        """Parse ``RE+IMi`` with rational parts: ``-3``, ``3/2+1/2i``, ``2i``, ``1-i``."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty complex literal")
        try:
            if not s.endswith("i"):
                return cls(Fraction(s), Fraction(0))
            body = s[:-1]
            split = max(body.rfind("+"), body.rfind("-"))
            if split > 0:
                re_part, im_part = body[:split], body[split:]
            else:
                re_part, im_part = "0", body
            if im_part in ("", "+", "-"):
                im_part += "1"
            return cls(Fraction(re_part), Fraction(im_part))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse complex number {text!r}: expected RE+IMi") from exc

    @property
    def is_polar(self) -> bool:
        return self.modulus is not None

    def is_zero(self) -> bool:
        if self.is_polar:
            return self.modulus == 0
        return self.re == 0 and self.im == 0

    def abs_squared(self) -> Fraction:
        if self.is_polar:
            return self.modulus * self.modulus
        return self.re * self.re + self.im * self.im

    def abs_lower(self) -> Fraction:
        """Rational lower bound of |z|."""
        if self.is_polar:
            return self.modulus
        return _isqrt_fraction(self.abs_squared(), round_up=False)

    def abs_upper(self) -> Fraction:
        """Rational upper bound of |z|."""
        if self.is_polar:
            return self.modulus
        return _isqrt_fraction(self.abs_squared(), round_up=True)

    def __neg__(self) -> ExactComplex:
        if self.is_polar:
            return ExactComplex.from_polar(self.modulus, self.arg_pi + 1)
        return ExactComplex(-self.re, -self.im)

    def to_mpc(self, ctx) -> Any:
        if self.is_polar:
            r = ctx.fdiv(self.modulus.numerator, self.modulus.denominator)
            a = ctx.fdiv(self.arg_pi.numerator, self.arg_pi.denominator)
            return ctx.mpc(r * ctx.cospi(a), r * ctx.sinpi(a))
        return ctx.mpc(
            ctx.fdiv(self.re.numerator, self.re.denominator),
            ctx.fdiv(self.im.numerator, self.im.denominator),
        )

    def __str__(self) -> str:
        if self.is_polar:
            return f"{self.modulus}*exp({self.arg_pi}*pi*i)"
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


@dataclass(frozen=True)
class EvalPoint:
    """A point with |z| > 1 and a working precision."""
    z: ExactComplex
    prec: Precision = field(default_factory=Precision)

    def __post_init__(self) -> None:
        if self.z.abs_squared() <= 1:
            raise DomainError(f"evaluation needs |z| > 1 (got z = {self.z})")


@dataclass(frozen=True)
class RPoint:
    """Argument (t, nu) of R(t, nu); rejects the poles t = 0, -1, ..., -nu."""
    t: Fraction
    nu: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", Fraction(self.t))
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative (got {self.nu})")
        if self.t.denominator == 1 and -self.nu <= self.t <= 0:
            raise PoleError(f"R(t, {self.nu}) has a pole at t = {self.t}")

    @property
    def is_zero_of_r(self) -> bool:
        """True at t = 1, ..., nu."""
        return self.t.denominator == 1 and 1 <= self.t <= self.nu


@dataclass(frozen=True)
class DerivOrder:
    """Order p of d/dt applied to R^m."""
    p: int
    m: int

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 3:
            raise ValueError(f"derivative order must be in 0..3 (got {self.p})")
        if self.m not in (2, 3, 4):
            raise ValueError(f"power of R must be 2, 3 or 4 (got {self.m})")


@dataclass(frozen=True)
class FamilyIndex:
    l: int
    k: int
    nu: int

    def __post_init__(self) -> None:
        require_family_index(self.l, self.k)
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative (got {self.nu})")

    @property
    def size(self) -> int:
        """Length 4 + 2l of the Y column."""
        return 4 + 2 * self.l


@dataclass(frozen=True)
class ExactCheckSpec:
    """Exact recurrence check over an inclusive nu range."""
    l: int
    k: int
    nu_min: int
    nu_max: int
    truncation: Optional[int] = None
    t_margin: int = DEFAULT_T_MARGIN

    def __post_init__(self) -> None:
        require_family_index(self.l, self.k)
        if self.nu_min < 2:
            raise DomainError(f"the recurrences are checked for nu >= 2 (got nu_min={self.nu_min})")
        if self.nu_max < self.nu_min:
            raise DomainError(f"empty nu range [{self.nu_min}, {self.nu_max}]")

    def nus(self) -> range:
        return range(self.nu_min, self.nu_max + 1)

    def truncation_for(self, nu: int) -> int:
        return self.truncation if self.truncation is not None else default_truncation(nu, self.t_margin)


@dataclass(frozen=True)
class NumericCheckSpec:
    """Numeric recurrence check at one nu and one point."""
    l: int
    k: int
    nu: int
    point: EvalPoint
    truncation: Optional[int] = None
    t_margin: int = DEFAULT_T_MARGIN

    def __post_init__(self) -> None:
        require_family_index(self.l, self.k)
        if self.nu < 2:
            raise DomainError(f"the recurrences are checked for nu >= 2 (got nu={self.nu})")

    @property
    def truncation_value(self) -> int:
        return self.truncation if self.truncation is not None else default_truncation(self.nu, self.t_margin)


@dataclass
class CheckReport:
    """Outcome of one check. Numeric fields are decimal strings, never floats."""
    check_id: str
    params: dict[str, Any]
    status: str
    residual: Optional[str] = None
    budget: Optional[str] = None
    window: Optional[tuple[int, int]] = None
    elapsed_ms: int = 0
    witness: Optional[dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "check_id": self.check_id,
            "params": dict(self.params),
            "status": self.status,
            "elapsed_ms": int(self.elapsed_ms),
        }
        if self.residual is not None:
            data["residual"] = self.residual
        if self.budget is not None:
            data["budget"] = self.budget
        if self.window is not None:
            data["window"] = [int(self.window[0]), int(self.window[1])]
        if self.witness is not None:
            data["witness"] = dict(self.witness)
        return data


@dataclass(frozen=True)
class TailBound:
    """Proven upper bound on the modulus of a discarded tail; None means no usable bound."""
    bound: Optional[Fraction] = Fraction(0)

    @property
    def is_finite(self) -> bool:
        return self.bound is not None
