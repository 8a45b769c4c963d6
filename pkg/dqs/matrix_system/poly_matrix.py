"""Square matrices over Q[z, u] (u standing for 1/nu) and the recurrence matrix A(z; nu)."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..errors import IndexSetError, PoleError
from ..types import require_l
from .constants import S_TILDE, V_TILDE_STAR, MatrixDisplay, constants_checksum

Z, U = sympy.symbols("z u")
GENS = (Z, U)
RING = QQ.poly_ring(*GENS)

Entry = Union[int, Fraction, sympy.Expr]


def _sym(value: Entry) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


def _elem(value: Entry):
    """Entry as an element of Q[z, u]; raises if it is not a polynomial."""
    if RING.of_type(value):
        return value
    return RING.from_sympy(sympy.expand(_sym(value)))


def _to_fraction(value: sympy.Expr) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _dense(rows: Sequence[Sequence[object]]) -> DomainMatrix:
    n = len(rows)
    return DomainMatrix([list(row) for row in rows], (n, n), RING)


@dataclass(frozen=True)
class PolyMatrix:
    """Immutable n x n matrix over Q[z, u], stored densely as a DomainMatrix.

    Entries stay sparse polynomials, so products need no symbolic expansion.
    """
    dm: DomainMatrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Entry]]) -> PolyMatrix:
        return cls(_dense([[_elem(x) for x in row] for row in rows]))

    @classmethod
    def diagonal(cls, values: Sequence[Entry]) -> PolyMatrix:
        n = len(values)
        diag = [_elem(v) for v in values]
        return cls(_dense([[diag[i] if i == j else RING.zero for j in range(n)] for i in range(n)]))

    @classmethod
    def identity(cls, n: int) -> PolyMatrix:
        return cls.diagonal([1] * n)

    @property
    def n(self) -> int:
        return self.dm.shape[0]

    def _element(self, i: int, j: int):
        return self.dm[i, j].element

    def entry(self, i: int, j: int) -> sympy.Expr:
        return RING.to_sympy(self._element(i, j))

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return PolyMatrix(self.dm.matmul(other.dm))

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        return PolyMatrix(self.dm.add(other.dm))

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return PolyMatrix(self.dm.sub(other.dm))

    def __neg__(self) -> PolyMatrix:
        return PolyMatrix(self.dm.neg())

    def scaled(self, c: Entry) -> PolyMatrix:
        return PolyMatrix(self.dm.mul(_elem(c)))

    def subs(self, values: dict) -> PolyMatrix:
        """Substitute rational values for z and/or u; the result stays in Q[z, u]."""
        subs = [(GENS.index(sym), QQ.from_sympy(_sym(v))) for sym, v in values.items()]
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                element = self._element(i, j)
                for index, value in subs:
                    element = element.subs(index, value)
                row.append(element)
            rows.append(row)
        return PolyMatrix(_dense(rows))

    def first_nonzero(self) -> Optional[tuple[int, int, sympy.Expr]]:
        """First entry (row-major, 0-based) that is not the zero polynomial."""
        for i in range(self.n):
            for j in range(self.n):
                if self._element(i, j):
                    return i, j, self.entry(i, j)
        return None

    def is_zero(self) -> bool:
        return self.first_nonzero() is None

    def degree(self, symbol: sympy.Symbol) -> int:
        """Largest degree of ``symbol`` over all entries (0 for the zero matrix)."""
        index = GENS.index(symbol)
        degrees = [self._element(i, j).degree(index)
                   for i in range(self.n) for j in range(self.n) if self._element(i, j)]
        return max(degrees, default=0)

    def int_rows(self) -> list[list[int]]:
        """Entries as exact integers; only for constant integer matrices."""
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                value = self.entry(i, j)
                if not value.is_Integer:
                    raise ValueError(f"entry ({i + 1}, {j + 1}) = {value} is not an integer")
                row.append(int(value))
            rows.append(row)
        return rows

    def rational_rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(_to_fraction(self.entry(i, j)) for j in range(self.n)) for i in range(self.n))


# --- The transcribed constants --------------------------------------------

@dataclass(frozen=True)
class RecurrenceMatrices:
    """The full set of constant displays used to assemble A(z; nu)."""
    s_tilde: dict[int, MatrixDisplay] = field(default_factory=lambda: dict(S_TILDE))
    v_tilde_star: dict[tuple[int, int], MatrixDisplay] = field(default_factory=lambda: dict(V_TILDE_STAR))
    label: str = "transcribed"

    def mutated(self, name: str, row: int, col: int, delta: int = 1) -> RecurrenceMatrices:
        """Copy with one printed entry (1-based row, col) of display ``name`` changed by ``delta``.

        ``name`` is ``"S<l>"`` or ``"V<l>.<i>"``.
        """
        s_tilde, v_tilde_star = dict(self.s_tilde), dict(self.v_tilde_star)
        if name.startswith("S"):
            key, table = int(name[1:]), s_tilde
        elif name.startswith("V"):
            l_text, i_text = name[1:].split(".")
            key, table = (int(l_text), int(i_text)), v_tilde_star
        else:
            raise IndexSetError(f"unknown matrix name {name!r}: expected S<l> or V<l>.<i>")
        if key not in table:
            raise IndexSetError(f"no display named {name!r}")
        display = table[key]
        rows = [list(r) for r in display.rows]
        rows[row - 1][col - 1] += delta
        table[key] = replace(display, rows=tuple(tuple(r) for r in rows))
        return RecurrenceMatrices(s_tilde, v_tilde_star, label=f"{name}[{row},{col}]{delta:+d}")

    def checksum(self) -> str:
        return constants_checksum(self.s_tilde, self.v_tilde_star)


DEFAULT_MATRICES = RecurrenceMatrices()


def s_matrix(l: int, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> PolyMatrix:
    require_l(l)
    return PolyMatrix.from_rows(matrices.s_tilde[l].entries())


def v_matrix(l: int, i: int, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> PolyMatrix:
    require_l(l)
    if not 0 <= i <= 1 + l:
        raise IndexSetError(f"V_{l}(i) exists for 0 <= i <= {1 + l} (got i={i})")
    return PolyMatrix.from_rows(matrices.v_tilde_star[(l, i)].entries())


@dataclass(frozen=True)
class DiagSpec:
    """T_{n, lambda}: diagonal entry i (1-based) is lambda^(i-1)."""
    n: int
    lam: Entry


def t_matrix(spec: DiagSpec) -> PolyMatrix:
    lam = _elem(spec.lam)
    return PolyMatrix.diagonal([lam ** i for i in range(spec.n)])


def _u_value(nu_arg, negate: bool) -> sympy.Expr:
    if nu_arg is None:
        u = U
    else:
        if nu_arg == 0:
            raise PoleError("A(z; nu) needs nu != 0")
        u = 1 / _sym(Fraction(nu_arg))
    return -u if negate else u


def a_matrix(l: int, z_arg: Entry = Z, nu_arg: Optional[Union[int, Fraction]] = None,
             negate: bool = False, matrices: RecurrenceMatrices = DEFAULT_MATRICES) -> PolyMatrix:
    """A(z; nu) = S_l + z sum_{i=0}^{1+l} nu^(-i) V_l(i).

    ``nu_arg=None`` keeps u = 1/nu symbolic; ``negate`` gives A(z; -nu).
    """
    u = _u_value(nu_arg, negate)
    z = _sym(z_arg)
    total = s_matrix(l, matrices)
    for i in range(2 + l):
        total = total + v_matrix(l, i, matrices).scaled(z * u ** i)
    return total


def a_pencil(l: int, nu: int, negate: bool = False, matrices: RecurrenceMatrices = DEFAULT_MATRICES,
             ) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[tuple[Fraction, ...], ...]]:
    """Exact rational (C, D) with A(z; +-nu) = C + z D."""
    if nu == 0:
        raise PoleError("A(z; nu) needs nu != 0")
    u = Fraction(-1 if negate else 1, nu)
    constant = s_matrix(l, matrices).rational_rows()
    n = len(constant)
    linear = [[Fraction(0)] * n for _ in range(n)]
    for i in range(2 + l):
        v = matrices.v_tilde_star[(l, i)].entries()
        weight = u ** i
        for r in range(n):
            for c in range(n):
                if v[r][c]:
                    linear[r][c] += weight * v[r][c]
    return constant, tuple(tuple(row) for row in linear)
