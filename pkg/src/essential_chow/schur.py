"""Partitions, semistandard tableaux and Schur modules of GL(n).

Conventions used throughout the package:

* A partition is a weakly decreasing tuple of positive ints, e.g. ``(3, 2)``.
* A tableau (or any filling of a Young diagram) is a tuple of *columns*,
  each column a tuple of entries read top to bottom.  Entries are ``1..n``.
* The Schur module ``S_shape(E)`` is realised by products of column
  determinants: the filling with columns ``c_1, ..., c_k`` stands for
  ``prod_j det(z[r, c_j[s]])_{r,s}``.  Its semistandard tableaux form a basis,
  ``S_(d)`` is the d-th symmetric power and ``S_(1^d)`` the d-th exterior
  power.
* Basis order is lexicographic on the column word (columns concatenated left
  to right, each read top to bottom).  Every matrix in the package is indexed
  in this order.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from .exact_linalg import sparse_nullspace

Tableau = tuple[tuple[int, ...], ...]


def normalize_partition(parts) -> tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"{parts} is not weakly decreasing")
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def conjugate(shape) -> tuple[int, ...]:
    shape = normalize_partition(shape)
    if not shape:
        return ()
    return tuple(sum(1 for p in shape if p > j) for j in range(shape[0]))


def column_word(t: Tableau) -> tuple[int, ...]:
    return tuple(x for col in t for x in col)


def shape_of(t: Tableau) -> tuple[int, ...]:
    return conjugate(tuple(len(c) for c in t))


def tableau_rows(t: Tableau) -> list[list[int]]:
    height = len(t[0]) if t else 0
    return [[col[i] for col in t if len(col) > i] for i in range(height)]


def tableau_from_rows(rows) -> Tableau:
    rows = [list(r) for r in rows if len(r)]
    if not rows:
        return ()
    return tuple(tuple(r[j] for r in rows if len(r) > j) for j in range(len(rows[0])))


def is_semistandard(t: Tableau) -> bool:
    for col in t:
        if any(a >= b for a, b in zip(col, col[1:])):
            return False
    for left, right in zip(t, t[1:]):
        if any(a > b for a, b in zip(left, right)):
            return False
    return True


def weight(t: Tableau, n: int) -> tuple[int, ...]:
    w = [0] * n
    for col in t:
        for x in col:
            w[x - 1] += 1
    return tuple(w)


def ssyt_enumerate(shape, n: int) -> list[Tableau]:
    """All semistandard tableaux of ``shape`` with entries in ``1..n``, in basis order."""
    shape = normalize_partition(shape)
    if len(shape) > n:
        return []
    out: list[Tableau] = []

    def rows_for(length, above):
        # weakly increasing rows, strictly below the row above
        def rec(prefix):
            j = len(prefix)
            if j == length:
                yield tuple(prefix)
                return
            start = prefix[-1] if prefix else 1
            if above is not None:
                start = max(start, above[j] + 1)
            for v in range(start, n + 1):
                yield from rec(prefix + [v])

        return rec([])

    def build(i, rows):
        if i == len(shape):
            out.append(tableau_from_rows(rows))
            return
        above = rows[-1] if rows else None
        for row in rows_for(shape[i], above):
            build(i + 1, rows + [row])

    build(0, [])
    out.sort(key=column_word)
    return out


def schur_dimension(shape, n: int) -> int:
    """Dimension of ``S_shape(C^n)`` by the hook content formula."""
    shape = normalize_partition(shape)
    if len(shape) > n:
        return 0
    conj = conjugate(shape)
    num = Fraction(1)
    for i, row_len in enumerate(shape):
        for j in range(row_len):
            hook = row_len - j + conj[j] - i - 1
            num *= Fraction(n + j - i, hook)
    assert num.denominator == 1
    return int(num)


def _sort_column(col) -> tuple[int, tuple[int, ...]]:
    """Sort a column with the sign of the sorting permutation (0 on repeats)."""
    col = list(col)
    sign = 1
    for i in range(1, len(col)):
        j = i
        while j > 0 and col[j - 1] > col[j]:
            col[j - 1], col[j] = col[j], col[j - 1]
            sign = -sign
            j -= 1
    if any(a == b for a, b in zip(col, col[1:])):
        return 0, ()
    return sign, tuple(col)


def normalize_filling(filling) -> tuple[int, Tableau]:
    sign = 1
    cols = []
    for col in filling:
        s, c = _sort_column(col)
        if s == 0:
            return 0, ()
        sign *= s
        cols.append(c)
    return sign, tuple(cols)


def _shuffle_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _straighten_sorted(t: Tableau) -> tuple[tuple[Tableau, Fraction], ...]:
    # t has strictly increasing columns
    for j in range(len(t) - 1):
        left, right = t[j], t[j + 1]
        for i in range(len(right)):
            if left[i] > right[i]:
                break
        else:
            continue
        # Garnir relation for the violation at row i between columns j, j+1:
        # the alternating sum over shuffles of A = left[i:] and B = right[:i+1]
        # vanishes; the identity shuffle is t itself.
        a_vals = left[i:]
        b_vals = right[: i + 1]
        vals = a_vals + b_vals
        na = len(a_vals)
        acc: dict[Tableau, Fraction] = {}
        for chosen in combinations(range(len(vals)), na):
            if chosen == tuple(range(na)):
                continue
            rest = [k for k in range(len(vals)) if k not in chosen]
            perm = list(chosen) + rest
            sgn = _shuffle_sign(perm)
            new_left = left[:i] + tuple(vals[k] for k in chosen)
            new_right = tuple(vals[k] for k in rest) + right[i + 1 :]
            s, term = normalize_filling(t[:j] + (new_left, new_right) + t[j + 2 :])
            if s == 0:
                continue
            for tab, c in _straighten_sorted(term):
                acc[tab] = acc.get(tab, 0) - sgn * s * c
        return tuple((k, Fraction(v)) for k, v in sorted(acc.items(), key=lambda kv: column_word(kv[0])) if v)
    return ((t, Fraction(1)),)


def straighten(filling, n: int | None = None) -> dict[Tableau, Fraction]:
    """Expand a filling (tuple of columns) in the semistandard basis.

    Columns need not be increasing; a repeated entry in a column gives 0.
    The expansion uses column antisymmetry and Garnir relations, memoised on
    the column-sorted filling.
    """
    filling = tuple(tuple(c) for c in filling)
    if n is not None and any(not 1 <= x <= n for c in filling for x in c):
        raise ValueError("entry out of range")
    sign, t = normalize_filling(filling)
    if sign == 0:
        return {}
    return {tab: sign * c for tab, c in _straighten_sorted(t)}


def rectangle_sign_pairing(s: Tableau, t: Tableau, width: int, n: int) -> int:
    """Coefficient of the canonical n x width rectangle after fitting ``s`` with ``t`` rotated.

    The rectangle module is one-dimensional, so straightening reduces to the
    product of the column signs.
    """
    rows_s = tableau_rows(s)
    rows_t = tableau_rows(t)
    grid = [[None] * width for _ in range(n)]
    for i, row in enumerate(rows_s):
        for j, x in enumerate(row):
            grid[i][j] = x
    for i, row in enumerate(rows_t):
        for j, x in enumerate(row):
            gi, gj = n - 1 - i, width - 1 - j
            if grid[gi][gj] is not None:
                raise ValueError("tableaux overlap in the rectangle")
            grid[gi][gj] = x
    if any(x is None for row in grid for x in row):
        raise ValueError("tableaux do not fill the rectangle")
    expansion = straighten(tuple(tuple(grid[i][j] for i in range(n)) for j in range(width)), n)
    canonical = tuple(tuple(range(1, n + 1)) for _ in range(width))
    return int(expansion.get(canonical, 0))


class SchurModule:
    """``S_shape(C^n)`` with its semistandard basis and gl(n) action."""

    def __init__(self, shape, n: int):
        self.shape = normalize_partition(shape)
        self.n = n
        self.basis = ssyt_enumerate(self.shape, n)
        self.index = {t: i for i, t in enumerate(self.basis)}
        self.weights = [weight(t, n) for t in self.basis]
        self._actions: dict[tuple[int, int], dict[tuple[int, int], Fraction]] = {}

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return f"SchurModule({self.shape}, n={self.n}, dim={len(self)})"

    def act(self, a: int, b: int) -> dict[tuple[int, int], Fraction]:
        """Sparse matrix of the elementary matrix ``E_ab`` (``e_b -> e_a``).

        Keys are ``(row, col)`` so that ``E_ab v_col = sum_row M[row, col] v_row``.
        """
        key = (a, b)
        if key not in self._actions:
            mat: dict[tuple[int, int], Fraction] = {}
            for ci, t in enumerate(self.basis):
                for j, col in enumerate(t):
                    for i, x in enumerate(col):
                        if x != b:
                            continue
                        new_col = col[:i] + (a,) + col[i + 1 :]
                        filling = t[:j] + (new_col,) + t[j + 1 :]
                        for tab, c in straighten(filling).items():
                            k = (self.index[tab], ci)
                            mat[k] = mat.get(k, 0) + c
            self._actions[key] = {k: Fraction(v) for k, v in mat.items() if v}
        return self._actions[key]


def lie_generators(n: int) -> list[tuple[int, int]]:
    """Simple raising and lowering operators; with the torus they generate gl(n)."""
    out = []
    for a in range(1, n):
        out += [(a, a + 1), (a + 1, a)]
    return out


def complementary_width(shape_a, shape_b, n: int) -> int | None:
    a = list(normalize_partition(shape_a)) + [0] * n
    b = list(normalize_partition(shape_b)) + [0] * n
    if len(normalize_partition(shape_a)) > n or len(normalize_partition(shape_b)) > n:
        return None
    sums = {a[i] + b[n - 1 - i] for i in range(n)}
    if len(sums) != 1:
        return None
    return sums.pop()


def _solve_sparse_nullspace(equations, unknowns: int) -> list[list[Fraction]]:
    kernel = sparse_nullspace(equations, unknowns)
    return [[v.get(k, Fraction(0)) for k in range(unknowns)] for v in kernel]


def invariant_pairing(mod_a: SchurModule, mod_b: SchurModule, width: int) -> dict[tuple[int, int], Fraction]:
    """All GL-invariant pairings ``S_a x S_b -> det^width``; must be unique up to scale.

    Returned sparse, keyed ``(index in b, index in a)``.
    """
    n = mod_a.n
    target = (width,) * n
    slots = {}
    for ia, wa in enumerate(mod_a.weights):
        for ib, wb in enumerate(mod_b.weights):
            if tuple(x + y for x, y in zip(wa, wb)) == target:
                slots[(ib, ia)] = len(slots)
    equations = []
    for a, b in lie_generators(n):
        act_a = mod_a.act(a, b)
        act_b = mod_b.act(a, b)
        # P(E u, v) + P(u, E v) = 0 for every pair of basis vectors (u, v)
        eqs: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (r, c), v in act_a.items():
            # E v_c contains v_r; pair with every v_ib
            for ib in range(len(mod_b)):
                k = slots.get((ib, r))
                if k is not None:
                    e = eqs.setdefault((ib, c), {})
                    e[k] = e.get(k, 0) + v
        for (r, c), v in act_b.items():
            for ia in range(len(mod_a)):
                k = slots.get((r, ia))
                if k is not None:
                    e = eqs.setdefault((c, ia), {})
                    e[k] = e.get(k, 0) + v
        equations += eqs.values()
    kernel = _solve_sparse_nullspace(equations, len(slots))
    if len(kernel) != 1:
        raise ArithmeticError(f"invariant pairing space has dimension {len(kernel)}, expected 1")
    vec = kernel[0]
    return {key: vec[k] for key, k in slots.items() if vec[k]}


def dual_pairing_matrix(shape_a, shape_b, n: int) -> list[list[Fraction]]:
    """Matrix of the perfect pairing ``S_a(E) x S_b(E) -> (det E)^w`` for complementary shapes.

    Rows are indexed by SSYT(shape_b), columns by SSYT(shape_a).  The pairing
    is the unique GL(n)-invariant one; its scale is fixed so that the entry
    for the highest-weight tableau of ``shape_a`` equals the coefficient of
    the canonical rectangle obtained by fitting it with the partner tableau
    rotated by 180 degrees.
    """
    width = complementary_width(shape_a, shape_b, n)
    if width is None:
        raise ValueError(f"{shape_a} and {shape_b} are not complementary in an {n}-row rectangle")
    mod_a = SchurModule(shape_a, n)
    mod_b = SchurModule(shape_b, n)
    pairing = invariant_pairing(mod_a, mod_b, width)
    top = tableau_from_rows([[i + 1] * p for i, p in enumerate(mod_a.shape)])
    ia = mod_a.index[top]
    (ib, value), = [(ib, v) for (ib, a), v in pairing.items() if a == ia]
    ref = rectangle_sign_pairing(top, mod_b.basis[ib], width, n)
    scale = Fraction(ref) / value
    mat = [[Fraction(0)] * len(mod_a) for _ in range(len(mod_b))]
    for (ib, ia), v in pairing.items():
        mat[ib][ia] = v * scale
    return mat


def grassmannian_quadric_count(k: int, n: int) -> int:
    """Number of minimal quadric generators of the Plücker ideal of Gr(k, n).

    Quadrics in the C(n, k) Plücker variables span ``Sym^2`` of the k-th
    exterior power; the degree-2 part of the Grassmannian's coordinate ring
    is the Schur module of the two-column shape ``(2,) * k``.  The quadric
    relations are the difference.
    """
    m = comb(n, k)
    return comb(m + 1, 2) - schur_dimension((2,) * k, n)
