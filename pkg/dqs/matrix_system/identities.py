"""Exact checks of the structural identities of the recurrence matrices over Q[z, u]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..logging import increment_checks, log, now
from ..types import CheckReport, require_l
from .poly_matrix import (
    DEFAULT_MATRICES,
    Z,
    DiagSpec,
    PolyMatrix,
    RecurrenceMatrices,
    a_matrix,
    s_matrix,
    t_matrix,
    v_matrix,
)

IDENTITY_NAMES = ("eq21", "eq22", "eq23", "eq24")

_DESCRIPTIONS = {
    "eq21": "A(z;-nu) T A(z;nu) = T",
    "eq22": "(S T)^2 = I",
    "eq23": "S T V(i) = -(-1)^i V(i) T S",
    "eq24": "V(i) T V(k) = 0",
}


@dataclass(frozen=True)
class IdentityResult:
    name: str
    passed: bool
    witness: Optional[dict] = None
    elapsed_ms: int = 0

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self.name]


@dataclass(frozen=True)
class IdentityReport:
    l: int
    results: tuple[IdentityResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_bools(self) -> dict[str, bool]:
        return {r.name: r.passed for r in self.results}

    def to_check_reports(self, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> list[CheckReport]:
        return [
            CheckReport(
                check_id=f"identities/l{self.l}/{r.name}",
                params={"l": self.l, "identity": r.description, "matrices": matrices.label},
                status="pass" if r.passed else "fail",
                elapsed_ms=r.elapsed_ms,
                witness=r.witness,
            )
            for r in self.results
        ]


def _located(residual: PolyMatrix, **extra) -> Optional[dict]:
    found = residual.first_nonzero()
    if found is None:
        return None
    i, j, value = found
    return {**extra, "row": i + 1, "col": j + 1, "residual": str(value)}


def _timed(name: str, fn) -> IdentityResult:
    start = now()
    increment_checks()
    witness = fn()
    return IdentityResult(name, witness is None, witness, int((now() - start) * 1000))


def check_identities(l: int, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> IdentityReport:
    """Verify the four identities for family l by exact polynomial-matrix arithmetic."""
    require_l(l)
    n = 4 + 2 * l
    t = t_matrix(DiagSpec(n, -1))
    s = s_matrix(l, matrices)
    vs = [v_matrix(l, i, matrices) for i in range(2 + l)]
    st = s @ t

    def inverse():
        product = a_matrix(l, Z, negate=True, matrices=matrices) @ t @ a_matrix(l, Z, matrices=matrices)
        return _located(product - t)

    def involution():
        return _located(st @ st - PolyMatrix.identity(n))

    def anticommute():
        for i, v in enumerate(vs):
            twisted = v @ t @ s
            residual = st @ v + twisted if i % 2 == 0 else st @ v - twisted
            witness = _located(residual, i=i)
            if witness:
                return witness
        return None

    def annihilate():
        for i, vi in enumerate(vs):
            vit = vi @ t
            for k, vk in enumerate(vs):
                witness = _located(vit @ vk, i=i, k=k)
                if witness:
                    return witness
        return None

    results = (
        _timed("eq21", inverse),
        _timed("eq22", involution),
        _timed("eq23", anticommute),
        _timed("eq24", annihilate),
    )
    for r in results:
        tag = "[IDENTITY]" if r.passed else "[IDENTITY][FAIL]"
        log(f"{tag} l={l} {r.name} {r.description}: {'pass' if r.passed else r.witness}")
    return IdentityReport(l, results)


def chain_check(l: int, nu: int, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> CheckReport:
    """A(z;nu) T_{-1} A(z;-nu) T_{-1+1/nu} = T_{1-1/nu} at exact u = 1/nu, symbolic z.

    This is what makes the backward recurrence consistent with the forward one.
    """
    require_l(l)
    start = now()
    increment_checks()
    n = 4 + 2 * l
    u = Fraction(1, nu)
    lhs = (a_matrix(l, Z, nu, matrices=matrices) @ t_matrix(DiagSpec(n, -1))
           @ a_matrix(l, Z, nu, negate=True, matrices=matrices) @ t_matrix(DiagSpec(n, -1 + u)))
    witness = _located(lhs - t_matrix(DiagSpec(n, 1 - u)))
    if witness:
        log(f"[IDENTITY][FAIL] chain l={l} nu={nu}: {witness}")
    return CheckReport(
        check_id=f"chain/l{l}/nu{nu:03d}",
        params={"l": l, "nu": nu, "matrices": matrices.label},
        status="pass" if witness is None else "fail",
        elapsed_ms=int((now() - start) * 1000),
        witness=witness,
    )
