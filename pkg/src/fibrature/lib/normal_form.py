"""Integer row/column reduction of small integer matrices."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

IntMatrix = List[List[int]]


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def diagonalize(matrix: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Unimodular P, Q and diagonal D with P @ A @ Q == D.

    The diagonal is nonnegative but not normalized to a divisibility chain;
    use :func:`invariant_factors` for the canonical form.
    """

    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    p = _identity(rows)
    q = _identity(cols)

    for k in range(min(rows, cols)):
        while True:
            candidates = [(abs(a[i][j]), i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j]]
            if not candidates:
                return p, a, q
            _, pi, pj = min(candidates)
            a[k], a[pi] = a[pi], a[k]
            p[k], p[pi] = p[pi], p[k]
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            for row in q:
                row[k], row[pj] = row[pj], row[k]

            pivot = a[k][k]
            clean = True
            for i in range(k + 1, rows):
                factor = a[i][k] // pivot
                if factor:
                    a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
                    p[i] = [x - factor * y for x, y in zip(p[i], p[k])]
                clean = clean and a[i][k] == 0
            for j in range(k + 1, cols):
                factor = a[k][j] // pivot
                if factor:
                    for row in a:
                        row[j] -= factor * row[k]
                    for row in q:
                        row[j] -= factor * row[k]
                clean = clean and a[k][j] == 0
            if clean:
                break
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            p[k] = [-x for x in p[k]]
    return p, a, q


def invariant_factors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Smith invariant factors d_1 | d_2 | ... of a square integer matrix."""

    normal = smith_normal_form(Matrix(matrix), domain=ZZ)
    size = min(normal.shape)
    return sorted(abs(int(normal[i, i])) for i in range(size))


__all__ = ["diagonalize", "invariant_factors"]
