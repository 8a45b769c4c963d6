"""Transcribed constant matrices of the recurrence system.

Each display keeps its scalar prefactor separate from the integer rows so the
rows read exactly like the printed matrices. Do not edit by hand without
updating ``EXPECTED_CHECKSUM`` in the tests.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass


@dataclass(frozen=True)
class MatrixDisplay:
    """A printed matrix: ``prefactor * rows``."""
    prefactor: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def entries(self) -> tuple[tuple[int, ...], ...]:
        """Rows with the prefactor multiplied through."""
        return tuple(tuple(self.prefactor * x for x in row) for row in self.rows)

    def canonical_text(self, name: str) -> str:
        body = ";".join(",".join(str(x) for x in row) for row in self.rows)
        return f"{name}|{self.prefactor}|{body}"


S_TILDE: dict[int, MatrixDisplay] = {
    0: MatrixDisplay(
        prefactor=1,
        rows=(
            (1, -4, 8, -12),
            (0, 1, -4, 8),
            (0, 0, 1, -4),
            (0, 0, 0, 1),
        ),
    ),
    1: MatrixDisplay(
        prefactor=1,
        rows=(
            (-1, 6, -18, 38, -66, 102),
            (0, -1, 6, -18, 38, -66),
            (0, 0, -1, 6, -18, 38),
            (0, 0, 0, -1, 6, -18),
            (0, 0, 0, 0, -1, 6),
            (0, 0, 0, 0, 0, -1),
        ),
    ),
    2: MatrixDisplay(
        prefactor=1,
        rows=(
            (1, -8, 32, -88, 192, -360, 608, -952),
            (0, 1, -8, 32, -88, 192, -360, 608),
            (0, 0, 1, -8, 32, -88, 192, -360),
            (0, 0, 0, 1, -8, 32, -88, 192),
            (0, 0, 0, 0, 1, -8, 32, -88),
            (0, 0, 0, 0, 0, 1, -8, 32),
            (0, 0, 0, 0, 0, 0, 1, -8),
            (0, 0, 0, 0, 0, 0, 0, 1),
        ),
    ),
}

V_TILDE_STAR: dict[tuple[int, int], MatrixDisplay] = {
    (0, 0): MatrixDisplay(
        prefactor=4,
        rows=(
            (4, -5, -2, 3),
            (-3, 4, 1, -2),
            (2, -3, 0, 1),
            (-1, 2, -1, 0),
        ),
    ),
    (0, 1): MatrixDisplay(
        prefactor=4,
        rows=(
            (3, -6, 3, 0),
            (-2, 4, -2, 0),
            (1, -2, 1, 0),
            (0, 0, 0, 0),
        ),
    ),
    (1, 0): MatrixDisplay(
        prefactor=1,
        rows=(
            (146, -198, -180, 268, 66, -102),
            (-102, 146, 108, -180, -38, 66),
            (66, -102, -52, 108, 18, -38),
            (-38, 66, 12, -52, -6, 18),
            (18, -38, 12, 12, 2, -6),
            (-6, 18, -20, 12, -6, 2),
        ),
    ),
    (1, 1): MatrixDisplay(
        prefactor=1,
        rows=(
            (240, -516, 108, 372, -204, 0),
            (-160, 348, -84, -236, 132, 0),
            (96, -212, 60, 132, -76, 0),
            (-48, 108, -36, -60, 36, 0),
            (16, -36, 12, 20, -12, 0),
            (0, -4, 12, -12, 4, 0),
        ),
    ),
    (1, 2): MatrixDisplay(
        prefactor=1,
        rows=(
            (102, -306, 306, -102, 0, 0),
            (-66, 198, -198, 66, 0, 0),
            (38, -114, 114, -38, 0, 0),
            (-18, 54, -54, 18, 0, 0),
            (6, -18, 18, -6, 0, 0),
            (-2, 6, -6, 2, 0, 0),
        ),
    ),
    (2, 0): MatrixDisplay(
        prefactor=8,
        rows=(
            (176, -249, -364, 545, 280, -431, -76, 119),
            (-119, 176, 227, -364, -169, 280, 45, -76),
            (76, -119, -128, 227, 92, -169, -24, 45),
            (-45, 76, 61, -128, -43, 92, 11, -24),
            (24, -45, -20, 61, 16, -43, -4, 11),
            (-11, 24, -1, -20, -5, 16, 1, -4),
            (4, -11, 8, -1, 4, -5, 0, 1),
            (-1, 4, -7, 8, -7, 4, -1, 0),
        ),
    ),
    (2, 1): MatrixDisplay(
        prefactor=8,
        rows=(
            (455, -1020, -113, 1552, -603, -628, 357, 0),
            (-300, 682, 44, -996, 404, 394, -228, 0),
            (185, -428, -3, 592, -253, -228, 135, 0),
            (-104, 246, -16, -316, 144, 118, -72, 0),
            (51, -124, 19, 144, -71, -52, 33, 0),
            (-20, 50, -12, -52, 28, 18, -12, 0),
            (5, -12, 1, 16, -9, -4, 3, 0),
            (0, -2, 8, -12, 8, -2, 0, 0),
        ),
    ),
    (2, 2): MatrixDisplay(
        prefactor=8,
        rows=(
            (400, -1243, 972, 542, -1028, 357, 0, 0),
            (-259, 808, -642, -332, 653, -228, 0, 0),
            (156, -489, 396, 186, -384, 135, 0, 0),
            (-85, 268, -222, -92, 203, -72, 0, 0),
            (40, -127, 108, 38, -92, 33, 0, 0),
            (-15, 48, -42, -12, 33, -12, 0, 0),
            (4, -13, 12, 2, -8, 3, 0, 0),
            (-1, 4, -6, 4, -1, 0, 0, 0),
        ),
    ),
    (2, 3): MatrixDisplay(
        prefactor=8,
        rows=(
            (119, -476, 714, -476, 119, 0, 0, 0),
            (-76, 304, -456, 304, -76, 0, 0, 0),
            (45, -180, 270, -180, 45, 0, 0, 0),
            (-24, 96, -144, 96, -24, 0, 0, 0),
            (11, -44, 66, -44, 11, 0, 0, 0),
            (-4, 16, -24, 16, -4, 0, 0, 0),
            (1, -4, 6, -4, 1, 0, 0, 0),
            (0, 0, 0, 0, 0, 0, 0, 0),
        ),
    ),
}


def constants_canonical_text(
    s_tilde: dict[int, MatrixDisplay] = S_TILDE,
    v_tilde_star: dict[tuple[int, int], MatrixDisplay] = V_TILDE_STAR,
) -> str:
    lines = [s_tilde[l].canonical_text(f"S{l}") for l in sorted(s_tilde)]
    lines += [v_tilde_star[key].canonical_text(f"V{key[0]}.{key[1]}") for key in sorted(v_tilde_star)]
    return "".join(line + "\n" for line in lines)


def constants_checksum(
    s_tilde: dict[int, MatrixDisplay] = S_TILDE,
    v_tilde_star: dict[tuple[int, int], MatrixDisplay] = V_TILDE_STAR,
) -> str:
    """SHA-256 of the canonical text of every transcribed display."""
    text = constants_canonical_text(s_tilde, v_tilde_star)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
