"""Exact dense linear algebra over the rationals, plus a float SVD wrapper.

Matrices are plain nested sequences (lists of rows) of ``int`` or
``Fraction``; numpy object arrays work too.  Everything here is a pure
function of its input.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

Matrix = Sequence[Sequence]


def as_fraction_rows(m: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in m]


def _shape(m: Matrix) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for row in m:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    return rows, cols


def clear_denominators(m: Matrix) -> tuple[list[list[int]], int]:
    """Return ``(integer matrix, d)`` with ``integer matrix == d * m``."""
    rows = as_fraction_rows(m)
    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, x.denominator)
    return [[int(x * d) for x in row] for row in rows], d


def _integer_rows(m: Matrix) -> list[list[int]]:
    # per-row scaling keeps the rank unchanged
    out = []
    for row in as_fraction_rows(m):
        d = 1
        for x in row:
            d = lcm(d, x.denominator)
        out.append([int(x * d) for x in row])
    return out


def rank_exact(m: Matrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    rows, cols = _shape(m)
    if rows == 0 or cols == 0:
        return 0
    a = _integer_rows(m)
    rank = 0
    prev = 1
    for col in range(cols):
        piv = None
        best = None
        for r in range(rank, rows):
            v = a[r][col]
            if v and (best is None or abs(v).bit_length() < best):
                piv, best = r, abs(v).bit_length()
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, rows):
            f = a[r][col]
            row = a[r]
            prow = a[rank]
            for c in range(col + 1, cols):
                row[c] = (p * row[c] - f * prow[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def det_exact(m: Matrix) -> Fraction:
    """Determinant over Q (Bareiss on the denominator-cleared matrix)."""
    n, cols = _shape(m)
    if n != cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a, d = clear_denominators(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        p = a[k][k]
        for r in range(k + 1, n):
            row = a[r]
            prow = a[k]
            f = row[k]
            for c in range(k + 1, n):
                row[c] = (p * row[c] - f * prow[c]) // prev
        prev = p
    return Fraction(sign * a[n - 1][n - 1], d**n)


def rref_exact(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    a = as_fraction_rows(m)
    rows, cols = _shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace_exact(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel over Q, one list per basis vector."""
    rows, cols = _shape(m)
    if rows == 0:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    a, pivots = rref_exact(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -a[i][f]
        basis.append(v)
    return basis


def is_skew(m: Matrix) -> bool:
    n, cols = _shape(m)
    if n != cols:
        return False
    return all(m[i][i] == 0 for i in range(n)) and all(
        m[i][j] == -m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def pfaffian_exact(m: Matrix) -> Fraction:
    """Pfaffian of an exactly skew-symmetric rational matrix.

    Denominators are cleared first, then a fraction-free skew elimination
    runs on integers: after each pivot pair, every remaining entry equals the
    Pfaffian of the pivots chosen so far bordered by its row/column index,
    and the update divides exactly by the previous pivot.  The sign follows
    ``Pf([[0, a], [-a, 0]]) == a``.
    """
    n, cols = _shape(m)
    if n != cols:
        raise ValueError("Pfaffian of a non-square matrix")
    if n % 2:
        raise ValueError("Pfaffian of an odd-sized matrix")
    if not is_skew(m):
        raise ValueError("matrix is not skew-symmetric")
    if n == 0:
        return Fraction(1)
    a, d = clear_denominators(m)
    sign = 1
    prev = 1
    size = n
    while size > 2:
        # pivot pair: nonzero entry with the smallest bit length
        best = None
        for i in range(size):
            row = a[i]
            for j in range(i + 1, size):
                v = row[j]
                if v and (best is None or abs(v).bit_length() < best[0]):
                    best = (abs(v).bit_length(), i, j)
        if best is None:
            return Fraction(0)
        _, i, j = best
        for src, dst in ((i, 0), (j, 1)):
            if src != dst:
                a[src], a[dst] = a[dst], a[src]
                for row in a:
                    row[src], row[dst] = row[dst], row[src]
                sign = -sign
        p = a[0][1]
        r0, r1 = a[0], a[1]
        new = [[0] * (size - 2) for _ in range(size - 2)]
        for x in range(2, size):
            rx = a[x]
            nx = new[x - 2]
            for y in range(x + 1, size):
                q, rem = divmod(p * rx[y] - r0[x] * r1[y] + r0[y] * r1[x], prev)
                assert rem == 0, "inexact division in Pfaffian elimination"
                nx[y - 2] = q
                new[y - 2][x - 2] = -q
        a = new
        prev = p
        size -= 2
    # a[0][1] is now the Pfaffian of the cleared matrix
    return Fraction(sign * a[0][1], d ** (n // 2))


def singular_values(m) -> np.ndarray:
    """Singular values in descending order (LAPACK divide-and-conquer SVD)."""
    a = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")
    return np.linalg.svd(a, compute_uv=False)


def matmul_exact(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    ra, ca = _shape(a)
    rb, cb = _shape(b)
    if ca != rb:
        raise ValueError("shape mismatch")
    bt = list(zip(*b)) if rb else [()] * cb
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def inverse_exact(m: Matrix) -> list[list[Fraction]]:
    n, cols = _shape(m)
    if n != cols:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(as_fraction_rows(m))]
    red, pivots = rref_exact(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def content(values) -> int:
    """gcd of an iterable of integers (0 for an all-zero input)."""
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def _sparse_echelon(rows) -> dict[int, dict[int, Fraction]]:
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {k: Fraction(v) for k, v in raw.items() if v}
        while row:
            k = min(row)
            prow = pivots.get(k)
            if prow is None:
                inv = 1 / row[k]
                pivots[k] = {c: v * inv for c, v in row.items()}
                break
            f = row[k]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return pivots


def sparse_rank(rows) -> int:
    """Rank over Q of a sparse system given as ``{column: value}`` rows."""
    return len(_sparse_echelon(rows))


def sparse_nullspace(rows, ncols: int) -> list[dict[int, Fraction]]:
    """Right kernel of a sparse rational system given as ``{column: value}`` rows.

    Rows are folded one at a time into an echelon basis whose pivot is the
    smallest column of each stored row.  Kernel vectors come back sparse.
    """
    pivots = _sparse_echelon(rows)
    basis = []
    order = sorted(pivots, reverse=True)
    for f in range(ncols):
        if f in pivots:
            continue
        v: dict[int, Fraction] = {f: Fraction(1)}
        # descending pivots: every column a stored row references is settled
        for p in order:
            s = sum((val * v[c] for c, val in pivots[p].items() if c != p and c in v), Fraction(0))
            if s:
                v[p] = -s
        basis.append(v)
    return basis
