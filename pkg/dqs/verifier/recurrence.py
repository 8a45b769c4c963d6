"""Exact and numeric residuals of the forward (eq16) and backward (eq17) recurrences.

Forward:  A(z; nu) Y(nu) = T_{1-1/nu} Y(nu-1)
Backward: Y(nu) = T_{-1} A(z; -nu) T_{-1+1/nu} Y(nu-1)

Exact mode applies the matrices to the series with nu instantiated as an exact
rational and requires every coefficient of the residual to vanish on the
comparison window. Numeric mode evaluates both sides at a point and compares
the residual with a proven error budget.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..config import GUARD_BITS
from ..exact_kernel import CoeffW
from ..f_family import YVector, build_Y
from ..log_series import LogSeries, ls_add, ls_eval, ls_mul_z, ls_scale
from ..logging import increment_checks, log, now
from ..math_utils import decimal_string, fraction_to_mpf, make_context, rounding_unit
from ..matrix_system.poly_matrix import DEFAULT_MATRICES, RecurrenceMatrices, a_pencil
from ..types import CheckReport, ExactCheckSpec, FamilyIndex, NumericCheckSpec

Rows = Sequence[Sequence[Fraction]]

EQUATIONS = ("eq16", "eq17")


# --- Matrices acting on series --------------------------------------------

def _combine(row: Sequence[Fraction], entries: Sequence[LogSeries]) -> Optional[LogSeries]:
    total = None
    for coef, series in zip(row, entries):
        if coef:
            term = ls_scale(coef, series)
            total = term if total is None else ls_add(total, term)
    return total


def apply_pencil(constant: Rows, linear: Rows, entries: Sequence[LogSeries]) -> list[LogSeries]:
    """(C + z D) applied to a column of series."""
    out = []
    for c_row, d_row in zip(constant, linear):
        const_part = _combine(c_row, entries)
        z_part = _combine(d_row, entries)
        parts = [p for p in (const_part, None if z_part is None else ls_mul_z(z_part)) if p is not None]
        if not parts:
            out.append(LogSeries.zero())
        elif len(parts) == 1:
            out.append(parts[0])
        else:
            out.append(ls_add(parts[0], parts[1]))
    return out


def apply_diagonal(lam: Fraction, entries: Sequence[LogSeries]) -> list[LogSeries]:
    """T_{n, lam} applied to a column of series."""
    return [ls_scale(lam ** i, s) for i, s in enumerate(entries)]


def forward_sides(idx: FamilyIndex, T: int, matrices: RecurrenceMatrices = DEFAULT_MATRICES,
                  ) -> tuple[list[LogSeries], list[LogSeries], YVector, YVector]:
    """Left and right sides of the forward recurrence as series columns."""
    y_nu, y_prev = _columns(idx, T)
    constant, linear = a_pencil(idx.l, idx.nu, matrices=matrices)
    lhs = apply_pencil(constant, linear, y_nu.entries)
    rhs = apply_diagonal(1 - Fraction(1, idx.nu), y_prev.entries)
    return lhs, rhs, y_nu, y_prev


def backward_sides(idx: FamilyIndex, T: int, matrices: RecurrenceMatrices = DEFAULT_MATRICES,
                   ) -> tuple[list[LogSeries], list[LogSeries], YVector, YVector]:
    """Left and right sides of the backward recurrence as series columns."""
    y_nu, y_prev = _columns(idx, T)
    constant, linear = a_pencil(idx.l, idx.nu, negate=True, matrices=matrices)
    inner = apply_diagonal(-1 + Fraction(1, idx.nu), y_prev.entries)
    rhs = apply_diagonal(Fraction(-1), apply_pencil(constant, linear, inner))
    return list(y_nu.entries), rhs, y_nu, y_prev


def _columns(idx: FamilyIndex, T: int) -> tuple[YVector, YVector]:
    prev = FamilyIndex(idx.l, idx.k, idx.nu - 1)
    return build_Y(idx, T), build_Y(prev, T)


def comparison_window(lhs: Sequence[LogSeries], rhs: Sequence[LogSeries],
                      y_nu: YVector, y_prev: YVector, T: int) -> tuple[int, int]:
    """[e_low + 1, e_high]: e_low is the larger exact lower bound of the two Y columns
    (-T when neither is truncated); the +1 covers the z factor in A."""
    bounds = [b for b in (y_nu.exact_from, y_prev.exact_from) if b is not None]
    e_low = max(bounds) if bounds else -T
    e_high = max(s.e_max for s in list(lhs) + list(rhs))
    return e_low + 1, e_high


# --- Exact mode -----------------------------------------------------------

def _exact_params(idx: FamilyIndex, T: int, matrices: RecurrenceMatrices) -> dict:
    return {"l": idx.l, "k": idx.k, "nu": idx.nu, "T": T, "mode": "exact", "matrices": matrices.label}


def _exact_report(which: str, idx: FamilyIndex, T: int, matrices: RecurrenceMatrices) -> CheckReport:
    start = now()
    increment_checks()
    sides = forward_sides if which == "eq16" else backward_sides
    lhs, rhs, y_nu, y_prev = sides(idx, T, matrices)
    lo, hi = comparison_window(lhs, rhs, y_nu, y_prev, T)
    check_id = f"{which}/exact/l{idx.l}/k{idx.k}/nu{idx.nu:03d}"
    params = _exact_params(idx, T, matrices)

    witness = None
    if lo > hi:
        witness = {"reason": "empty comparison window"}
    for entry, (a, b) in enumerate(zip(lhs, rhs), start=1):
        if witness is not None:
            break
        residual = ls_add(a, ls_scale(CoeffW.constant(-1), b))
        if residual.truncated and residual.e_min > lo:
            witness = {"entry": entry, "reason": f"residual exact only from z^{residual.e_min}"}
            break
        found = residual.first_nonzero(lo, hi)
        if found is not None:
            m, e, c = found
            witness = {"entry": entry, "m": m, "e": e, "coefficient": repr(c)}

    status = "pass" if witness is None else "fail"
    elapsed = int((now() - start) * 1000)
    if witness is None:
        log(f"[VERIFY] {check_id} pass window=[{lo}, {hi}] ({elapsed} ms)")
    else:
        log(f"[VERIFY][FAIL] {check_id} {witness}")
    return CheckReport(check_id, params, status, window=(lo, hi), elapsed_ms=elapsed, witness=witness)


def verify_eq16_exact(spec: ExactCheckSpec, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> list[CheckReport]:
    """Forward recurrence, one report per nu in spec.nus()."""
    return [_exact_report("eq16", FamilyIndex(spec.l, spec.k, nu), spec.truncation_for(nu), matrices)
            for nu in spec.nus()]


def verify_eq17_exact(spec: ExactCheckSpec, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> list[CheckReport]:
    """Backward recurrence, one report per nu in spec.nus()."""
    return [_exact_report("eq17", FamilyIndex(spec.l, spec.k, nu), spec.truncation_for(nu), matrices)
            for nu in spec.nus()]


def verify_exact_one(which: str, l: int, k: int, nu: int, T: int,
                     matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> CheckReport:
    if which not in EQUATIONS:
        raise ValueError(f"unknown recurrence {which!r}: expected one of {', '.join(EQUATIONS)}")
    return _exact_report(which, FamilyIndex(l, k, nu), T, matrices)


# --- Numeric mode ---------------------------------------------------------

def _numeric_matrices(which: str, idx: FamilyIndex, z, ctx, matrices: RecurrenceMatrices):
    """Numeric M1, M2 with residual = M1 Y(nu) - M2 Y(nu-1)."""
    n = idx.size
    u = Fraction(1, idx.nu)

    def pencil(negate: bool):
        constant, linear = a_pencil(idx.l, idx.nu, negate=negate, matrices=matrices)
        return [[fraction_to_mpf(ctx, constant[r][c]) + z * fraction_to_mpf(ctx, linear[r][c])
                 for c in range(n)] for r in range(n)]

    def diagonal(lam: Fraction):
        return [[fraction_to_mpf(ctx, lam ** r) if r == c else ctx.mpf(0) for c in range(n)] for r in range(n)]

    if which == "eq16":
        return pencil(False), diagonal(1 - u)
    a_neg = pencil(True)
    lam = -1 + u
    m2 = [[(-1) ** r * a_neg[r][c] * fraction_to_mpf(ctx, lam ** c) for c in range(n)] for r in range(n)]
    return diagonal(Fraction(1)), m2


def _row_norm(matrix) -> object:
    return max(sum(abs(x) for x in row) for row in matrix)


def verify_numeric(spec: NumericCheckSpec, which: str = "eq16",
                   matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> CheckReport:
    """Both sides evaluated at spec.point; pass iff max |residual| <= budget.

    budget = |M1| max rad Y(nu) + |M2| max rad Y(nu-1) + rounding of the products,
    with |.| the max absolute row sum and rad covering rounding and tails.
    """
    if which not in EQUATIONS:
        raise ValueError(f"unknown recurrence {which!r}: expected one of {', '.join(EQUATIONS)}")
    start = now()
    increment_checks()
    idx = FamilyIndex(spec.l, spec.k, spec.nu)
    T = spec.truncation_value
    pt = spec.point
    ctx = make_context(pt.prec.bits + GUARD_BITS)
    y_nu, y_prev = _columns(idx, T)
    now_vals = [ls_eval(s, pt, ctx=ctx) for s in y_nu]
    prev_vals = [ls_eval(s, pt, ctx=ctx) for s in y_prev]

    z = pt.z.to_mpc(ctx)
    m1, m2 = _numeric_matrices(which, idx, z, ctx, matrices)
    n = idx.size
    unit = rounding_unit(ctx)

    residual = ctx.mpf(0)
    rounding = ctx.mpf(0)
    for r in range(n):
        lhs = sum((m1[r][c] * now_vals[c].mid for c in range(n)), ctx.mpc(0))
        rhs = sum((m2[r][c] * prev_vals[c].mid for c in range(n)), ctx.mpc(0))
        residual = max(residual, abs(lhs - rhs))
        magnitude = sum(abs(m1[r][c]) * abs(now_vals[c].mid) + abs(m2[r][c]) * abs(prev_vals[c].mid)
                        for c in range(n))
        rounding = max(rounding, magnitude * (2 * n + 8) * unit)

    budget = (_row_norm(m1) * max(b.radius for b in now_vals)
              + _row_norm(m2) * max(b.radius for b in prev_vals) + rounding)
    passed = residual <= budget and budget != ctx.inf
    check_id = f"{which}/numeric/l{idx.l}/k{idx.k}/nu{idx.nu:03d}/z={pt.z}"
    params = {
        "l": idx.l, "k": idx.k, "nu": idx.nu, "T": T, "mode": "numeric",
        "z": str(pt.z), "prec": pt.prec.bits, "matrices": matrices.label,
    }
    elapsed = int((now() - start) * 1000)
    tag = "[VERIFY]" if passed else "[VERIFY][FAIL]"
    log(f"{tag} {check_id} residual={decimal_string(residual, 3)} budget={decimal_string(budget, 3)}")
    return CheckReport(
        check_id, params, "pass" if passed else "fail",
        residual=decimal_string(residual, 6), budget=decimal_string(budget, 6), elapsed_ms=elapsed,
    )
