"""Exact Gaussian elimination over Q or a tower field."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _is_zero(x) -> bool:
    return x == 0


def _size(x) -> int:
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    if isinstance(x, int):
        return x.bit_length()
    return x.size()


def row_basis(matrix: Sequence[Sequence]) -> list[int]:
    """Indices of rows forming a basis of the row space (greedy, in order)."""
    basis: list[list] = []
    pivots: list[int] = []
    chosen: list[int] = []
    for idx, row in enumerate(matrix):
        r = list(row)
        for b, pc in zip(basis, pivots):
            c = r[pc]
            if not _is_zero(c):
                f = c / b[pc]
                r = [x - f * y for x, y in zip(r, b)]
        pc = next((j for j, x in enumerate(r) if not _is_zero(x)), None)
        if pc is not None:
            basis.append(r)
            pivots.append(pc)
            chosen.append(idx)
    return chosen


def invert_matrix(matrix: Sequence[Sequence]) -> list[list]:
    n = len(matrix)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    aug = [list(row) + ident[i] for i, row in enumerate(matrix)]
    sol = _rref(aug, n)
    if sol is None:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in sol]


def _rref(aug: list[list], ncols: int):
    rows = len(aug)
    r = 0
    for c in range(ncols):
        cand = [i for i in range(r, rows) if not _is_zero(aug[i][c])]
        if not cand:
            return None
        piv = min(cand, key=lambda i: _size(aug[i][c]))
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and not _is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return aug


def solve(matrix: Sequence[Sequence], rhs: Sequence, zero=Fraction(0)):
    """One solution of ``matrix @ x = rhs`` or ``None`` when inconsistent.

    Free variables are set to zero.  Entries may be Fractions or tower
    elements; ``zero`` supplies the additive identity for the solution.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        cand = [i for i in range(r, m) if not _is_zero(aug[i][c])]
        if not cand:
            continue
        piv = min(cand, key=lambda i: _size(aug[i][c]))
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv if not _is_zero(x) else x for x in aug[r]]
        for i in range(m):
            if i != r and not _is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [x - f * y if not _is_zero(y) else x for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, m):
        if not _is_zero(aug[i][n]):
            return None
    x = [zero] * n
    for row, col in pivots:
        x[col] = aug[row][n]
    return x
