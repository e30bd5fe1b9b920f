"""GL(4)-equivariant linear resolutions of two rank-2 Ulrich modules on
symmetric 4x4 matrices of rank at most 2.

Differentials are matrices of linear forms in the ten coordinates
``x11, x12, x13, x14, x22, x23, x24, x33, x34, x44`` of a symmetric matrix.
Each Pieri component is found as the one-dimensional solution space of the
linear system expressing gl(4)-equivariance, so no polarization-operator
normalisation is baked in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm

import numpy as np

from .exact_linalg import content, inverse_exact, rank_exact, sparse_nullspace, sparse_rank
from .schur import SchurModule, Tableau, dual_pairing_matrix, lie_generators, normalize_partition

N = 4
SYM_COORDS: tuple[tuple[int, int], ...] = tuple((i, j) for i in range(1, N + 1) for j in range(i, N + 1))
NVARS = len(SYM_COORDS)

FIRST = "first"
SECOND = "second"
VARIANTS = (FIRST, SECOND)

# (F, G, G*) of the resolution F <- G <- G* <- F*
RESOLUTION_SHAPES = {
    FIRST: ((3,), [(3, 2)], [(3, 3, 1)]),
    SECOND: ((2, 2, 1), [(3, 2, 2), (3, 2, 1, 1), (2, 2, 2, 1)], [(4, 2, 2, 1), (3, 3, 2, 1), (3, 2, 2, 2)]),
}

Label = tuple[tuple[int, ...], Tableau]


@lru_cache(maxsize=None)
def schur_module(shape) -> SchurModule:
    return SchurModule(shape, N)


def is_horizontal_strip(big, small) -> bool:
    big = list(normalize_partition(big)) + [0] * N
    small = list(normalize_partition(small)) + [0] * N
    return all(big[i] >= small[i] >= big[i + 1] for i in range(N))


@dataclass
class EquivariantLinearMatrix:
    """Matrix of linear forms; ``coeffs[i, j, k]`` multiplies ``SYM_COORDS[k]``."""

    row_labels: list[Label]
    col_labels: list[Label]
    coeffs: np.ndarray  # object array of Fraction, shape (rows, cols, NVARS)
    name: str = ""

    @property
    def shape(self):
        return self.coeffs.shape[:2]

    def evaluate(self, point) -> list[list[Fraction]]:
        """Substitute values for the ten coordinates (a symmetric matrix or a 10-vector)."""
        vals = _coordinate_values(point)
        m = self.coeffs.dot(np.array(vals, dtype=object))
        return [[Fraction(x) for x in row] for row in m]

    def transpose(self) -> "EquivariantLinearMatrix":
        return EquivariantLinearMatrix(self.col_labels, self.row_labels, self.coeffs.transpose(1, 0, 2).copy(), self.name + "^T")

    def is_symmetric(self) -> bool:
        return self.shape[0] == self.shape[1] and bool(np.all(self.coeffs == self.coeffs.transpose(1, 0, 2)))

    def integer_coeffs(self) -> np.ndarray:
        """Coefficients as an int64 array after clearing the common denominator."""
        d = 1
        for x in self.coeffs.flat:
            d = lcm(d, Fraction(x).denominator)
        return np.array([[[int(Fraction(x) * d) for x in e] for e in row] for row in self.coeffs], dtype=np.int64)


def _coordinate_values(point) -> list[Fraction]:
    arr = np.asarray(point, dtype=object)
    if arr.shape == (NVARS,):
        return [Fraction(x) for x in arr]
    if arr.shape == (N, N):
        return [Fraction(arr[i - 1, j - 1]) for i, j in SYM_COORDS]
    raise ValueError("expected a 4x4 symmetric matrix or 10 coordinates")


def _labels(shape) -> list[Label]:
    shape = normalize_partition(shape)
    return [(shape, t) for t in schur_module(shape).basis]


def _primitive(vec) -> list[Fraction]:
    d = 1
    for v in vec:
        d = lcm(d, Fraction(v).denominator)
    ints = [int(Fraction(v) * d) for v in vec]
    g = content(ints)
    first = next(x for x in ints if x)
    if first < 0:
        g = -g
    return [Fraction(x, g) for x in ints]


def pieri_equations(source, target):
    """Unknown slots and the equivariance equations for maps ``S_source -> S_target (x) S_2``."""
    src, tgt, sym2 = schur_module(normalize_partition(source)), schur_module(normalize_partition(target)), schur_module((2,))
    slots: dict[tuple[int, int, int], int] = {}
    for s, ws in enumerate(src.weights):
        for q, wq in enumerate(sym2.weights):
            need = tuple(a - b for a, b in zip(ws, wq))
            for t, wt in enumerate(tgt.weights):
                if wt == need:
                    slots[(t, q, s)] = len(slots)
    by_s: dict[int, list] = {}
    by_t: dict[int, list] = {}
    by_q: dict[int, list] = {}
    for (t, q, s), k in slots.items():
        by_s.setdefault(s, []).append((t, q, k))
        by_t.setdefault(t, []).append((q, s, k))
        by_q.setdefault(q, []).append((t, s, k))
    equations = []
    for a, b in lie_generators(N):
        eqs: dict[tuple[int, int, int], dict[int, Fraction]] = {}

        def add(key, k, v):
            e = eqs.setdefault(key, {})
            e[k] = e.get(k, 0) + v

        # f(E v_s) - (E (x) 1 + 1 (x) E) f(v_s) = 0, coefficient of v_t (x) v_q
        for (s1, s), v in src.act(a, b).items():
            for t, q, k in by_s.get(s1, ()):
                add((t, q, s), k, v)
        for (t, t1), v in tgt.act(a, b).items():
            for q, s, k in by_t.get(t1, ()):
                add((t, q, s), k, -v)
        for (q, q1), v in sym2.act(a, b).items():
            for t, s, k in by_q.get(q1, ()):
                add((t, q, s), k, -v)
        equations += [e for e in eqs.values() if any(e.values())]
    return slots, equations


def build_pieri_map(source, target) -> EquivariantLinearMatrix:
    """Matrix (rows SSYT(target), columns SSYT(source)) of the degree-1 equivariant map.

    The map ``S_source(E) -> S_target(E) (x) S_2(E)`` is unique up to scale
    when ``source / target`` is a horizontal strip of size 2; the scale is
    chosen to make the coefficients coprime integers with a positive first
    nonzero entry.
    """
    source, target = normalize_partition(source), normalize_partition(target)
    if sum(source) != sum(target) + 2 or not is_horizontal_strip(source, target):
        raise ValueError(f"{source}/{target} is not a horizontal strip of size 2")
    slots, equations = pieri_equations(source, target)
    kernel = sparse_nullspace(equations, len(slots))
    if len(kernel) != 1:
        raise ArithmeticError(f"equivariant maps {source} -> {target} (x) S_2 form a space of dimension {len(kernel)}")
    vec = _primitive([kernel[0].get(k, 0) for k in range(len(slots))])
    rows, cols = _labels(target), _labels(source)
    coeffs = np.full((len(rows), len(cols), NVARS), Fraction(0), dtype=object)
    for (t, q, s), k in slots.items():
        coeffs[t, s, q] = vec[k]
    return EquivariantLinearMatrix(rows, cols, coeffs, name=f"pieri{source}->{target}")


def equivariance_residual(m: EquivariantLinearMatrix) -> int:
    """Number of violated equivariance equations (0 for an honest Pieri map)."""
    (src_shape, _), (tgt_shape, _) = m.col_labels[0], m.row_labels[0]
    slots, equations = pieri_equations(src_shape, tgt_shape)
    vec = {k: m.coeffs[t, s, q] for (t, q, s), k in slots.items()}
    support = {(t, s, q) for (t, q, s) in slots}
    outside = sum(
        1
        for t in range(m.shape[0])
        for s in range(m.shape[1])
        for q in range(NVARS)
        if m.coeffs[t, s, q] != 0 and (t, s, q) not in support
    )
    return outside + sum(1 for e in equations if sum(c * vec[k] for k, c in e.items()) != 0)


def _hstack(blocks: list[EquivariantLinearMatrix]) -> EquivariantLinearMatrix:
    cols = [lab for b in blocks for lab in b.col_labels]
    return EquivariantLinearMatrix(blocks[0].row_labels, cols, np.concatenate([b.coeffs for b in blocks], axis=1))


def _zeros(rows: list[Label], cols: list[Label]) -> np.ndarray:
    return np.full((len(rows), len(cols), NVARS), Fraction(0), dtype=object)


def _cleared(coeffs: np.ndarray) -> tuple[np.ndarray, int]:
    """``(integer object array, d)`` with ``integers == d * coeffs``."""
    d = 1
    for x in coeffs.flat:
        d = lcm(d, Fraction(x).denominator)
    ints = np.array([int(Fraction(x) * d) for x in coeffs.flat], dtype=object).reshape(coeffs.shape)
    return ints, d


def _exact_einsum(spec: str, a: np.ndarray, b: np.ndarray, inner: int) -> np.ndarray:
    """einsum of integer object arrays, in int64 whenever that cannot overflow."""
    bound_a = max((abs(int(x)) for x in a.flat), default=0)
    bound_b = max((abs(int(x)) for x in b.flat), default=0)
    if bound_a * bound_b * max(inner, 1) * 2 < 2**62:
        return np.einsum(spec, a.astype(np.int64), b.astype(np.int64)).astype(object)
    return np.einsum(spec, a, b)


def polynomial_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two matrices of linear forms over the commutative ring.

    Returns quadratic forms as coefficient arrays ``[i, j, u, v]``: for
    ``u < v`` the entry is the full coefficient of ``x_u x_v``, the diagonal
    holds the coefficient of ``x_u^2`` and the lower triangle is zero.
    """
    ia, da = _cleared(a)
    ib, db = _cleared(b)
    full = _exact_einsum("iku,kjv->ijuv", ia, ib, a.shape[1])
    upper = full + full.transpose(0, 1, 3, 2)
    il = np.tril_indices(a.shape[2], -1)
    upper[:, :, il[0], il[1]] = 0
    diag = np.arange(a.shape[2])
    upper[:, :, diag, diag] = full[:, :, diag, diag]
    scale = da * db
    if scale == 1:
        return upper
    return np.array([Fraction(int(x), scale) for x in upper.flat], dtype=object).reshape(upper.shape)


@dataclass
class FreeResolution:
    variant: str
    Dalpha: EquivariantLinearMatrix  # F <- G, 20 x 60
    Dphi: EquivariantLinearMatrix  # G <- G*, 60 x 60 in Pieri bases
    Dphi_sym: EquivariantLinearMatrix  # G <- G, dual bases, symmetric
    pairing: list[list[Fraction]]  # block-diagonal change of basis used for Dphi_sym
    betti: tuple[int, int, int, int] = (20, 60, 60, 20)
    rescaling: dict[str, Fraction] = field(default_factory=dict)


def _block_pairing(g_shapes, gd_shapes) -> list[list[Fraction]]:
    """Block diagonal matrix ``P[g, g*]`` of invariant pairings between G and G*."""
    sizes = [len(schur_module(normalize_partition(s))) for s in g_shapes]
    total = sum(sizes)
    mat = [[Fraction(0)] * total for _ in range(total)]
    off = 0
    for g, gd, size in zip(g_shapes, gd_shapes, sizes):
        q = dual_pairing_matrix(g, gd, N)  # rows SSYT(gd), cols SSYT(g)
        for i in range(size):
            for j in range(size):
                mat[off + j][off + i] = q[i][j]
        off += size
    return mat


def _right_multiply(coeffs: np.ndarray, mat) -> np.ndarray:
    ic, dc = _cleared(coeffs)
    im, dm = _cleared(np.array(mat, dtype=object))
    prod = _exact_einsum("iku,kj->iju", ic, im, coeffs.shape[1])
    return np.array([Fraction(int(x), dc * dm) for x in prod.flat], dtype=object).reshape(prod.shape)


def build_resolution(variant: str) -> FreeResolution:
    """Assemble alpha, phi and the symmetrised phi for one of the two Ulrich modules."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    f_shape, g_shapes, gd_shapes = RESOLUTION_SHAPES[variant]
    g_labels = [lab for s in g_shapes for lab in _labels(s)]
    gd_labels = [lab for s in gd_shapes for lab in _labels(s)]

    dalpha = _hstack([build_pieri_map(g, f_shape) for g in g_shapes])
    dalpha.name = f"alpha[{variant}]"

    # phi: one column block per G* summand; within a block the Pieri
    # components into the G summands are scaled so that alpha . phi = 0
    blocks = []
    for gd in gd_shapes:
        comps = [(g, build_pieri_map(gd, g)) for g in g_shapes if sum(gd) == sum(g) + 2 and is_horizontal_strip(gd, g)]
        if len(comps) == 1:
            scales = [Fraction(1)]
        else:
            scales = _compose_to_zero(dalpha, g_shapes, comps)
        col = _zeros(g_labels, _labels(gd))
        for (g, pm), c in zip(comps, scales):
            r0 = _offset(g_shapes, g)
            col[r0 : r0 + pm.shape[0], :, :] = pm.coeffs * c
        blocks.append(col)
    dphi = EquivariantLinearMatrix(g_labels, gd_labels, np.concatenate(blocks, axis=1), name=f"phi[{variant}]")

    pairing = _block_pairing(g_shapes, gd_shapes)
    # v*_g = sum_g* P^{-1}[g*, g] v_g*  =>  phi in dual bases is Dphi . P^{-1}
    sym = _right_multiply(dphi.coeffs, inverse_exact(pairing))
    rescaling: dict[str, Fraction] = {}
    if variant == SECOND:
        sym, rescaling = _rebalance_blocks(sym, g_shapes)
    sym = _normalize_scale(sym)
    dphi_sym = EquivariantLinearMatrix(g_labels, g_labels, sym, name=f"phi_sym[{variant}]")
    if not dphi_sym.is_symmetric():
        raise ArithmeticError(f"middle map of the {variant} resolution is not symmetric in dual bases")
    return FreeResolution(variant, dalpha, dphi, dphi_sym, pairing, rescaling=rescaling)


def _offset(shapes, shape) -> int:
    off = 0
    for s in shapes:
        if normalize_partition(s) == normalize_partition(shape):
            return off
        off += len(schur_module(normalize_partition(s)))
    raise KeyError(shape)


def _compose_to_zero(dalpha, g_shapes, comps) -> list[Fraction]:
    """Scalars ``c_g`` with ``sum_g alpha_g . (c_g phi_g) = 0``; must be unique up to scale."""
    products = []
    for g, pm in comps:
        r0 = _offset(g_shapes, g)
        a = dalpha.coeffs[:, r0 : r0 + pm.shape[0], :]
        products.append(polynomial_product(a, pm.coeffs).ravel())
    rows = []
    for idx in range(len(products[0])):
        row = {k: p[idx] for k, p in enumerate(products) if p[idx] != 0}
        if row:
            rows.append(row)
    kernel = sparse_nullspace(rows, len(comps))
    if len(kernel) != 1:
        raise ArithmeticError(f"alpha . phi = 0 has a {len(kernel)}-dimensional solution space")
    return _primitive([kernel[0].get(k, 0) for k in range(len(comps))])


def _rebalance_blocks(sym: np.ndarray, g_shapes) -> tuple[np.ndarray, dict[str, Fraction]]:
    """Scale column blocks 2 and 3 so the off-diagonal blocks become mutual transposes."""
    sizes = [len(schur_module(normalize_partition(s))) for s in g_shapes]
    bounds = np.cumsum([0] + sizes)
    sl = [slice(bounds[i], bounds[i + 1]) for i in range(3)]
    out = sym.copy()
    factors = {}
    for k, name in ((1, "c_mu"), (2, "c_nu")):
        lower = sym[sl[k], sl[0], :]  # T_k -> T_1^* block (mu_1 / nu_1)
        upper = sym[sl[0], sl[k], :]  # T_1 -> T_k^* block (mu_2 / nu_2)
        nz = np.argwhere(lower != 0)
        if not len(nz):
            raise ArithmeticError(f"off-diagonal block {k} vanishes")
        i, j, u = nz[0]
        if upper[j, i, u] == 0:
            raise ArithmeticError("off-diagonal blocks are not proportional to transposes")
        c = Fraction(lower[i, j, u]) / Fraction(upper[j, i, u])
        out[:, sl[k], :] = sym[:, sl[k], :] * c
        factors[name] = c
    return out, factors


def _normalize_scale(coeffs: np.ndarray) -> np.ndarray:
    d = 1
    for x in coeffs.flat:
        d = lcm(d, Fraction(x).denominator)
    ints = [int(Fraction(x) * d) for x in coeffs.flat]
    g = content(ints) or 1
    return np.array([Fraction(x, g) for x in ints], dtype=object).reshape(coeffs.shape)


def evaluate_at_diagonal(m: EquivariantLinearMatrix, r: int) -> list[list[Fraction]]:
    return m.evaluate(np.diag([1] * r + [0] * (N - r)))


def verify_support(res: FreeResolution) -> dict[int, int]:
    """Rank of alpha at diag(1,..,1,0,..,0) with r ones, r = 0..4."""
    return {r: rank_exact(evaluate_at_diagonal(res.Dalpha, r)) for r in range(N + 1)}


def complex_residual(res: FreeResolution) -> int:
    """Number of nonzero coefficients in alpha . phi_sym (polynomial ring)."""
    prod = polynomial_product(res.Dalpha.coeffs, res.Dphi_sym.coeffs)
    return int(np.count_nonzero(prod != 0))


def is_linear(m: EquivariantLinearMatrix) -> bool:
    return m.coeffs.ndim == 3 and m.coeffs.shape[2] == NVARS and any(x != 0 for x in m.coeffs.flat)


def verify_ulrich(res: FreeResolution) -> bool:
    """Linear differentials, Betti numbers C(3,i)*20, codimension-3 support, and a complex."""
    rows, cols = res.Dalpha.shape
    if (rows, cols) != (20, 60) or res.Dphi_sym.shape != (60, 60):
        return False
    betti = (rows, cols, res.Dphi_sym.shape[1], rows)
    if betti != tuple(comb(3, i) * rows for i in range(4)) or betti != res.betti:
        return False
    if not (is_linear(res.Dalpha) and is_linear(res.Dphi_sym) and res.Dphi_sym.is_symmetric()):
        return False
    support = verify_support(res)
    # cokernel vanishes exactly off the rank <= 2 locus
    if not (support[3] == support[4] == rows and support[2] < rows):
        return False
    return complex_residual(res) == 0


def hilbert_function_coker(m: EquivariantLinearMatrix, degree: int) -> int:
    """dim_Q of the degree-d piece of coker(alpha), by an exact rank count."""
    from itertools import combinations_with_replacement

    rows, cols = m.shape
    mons_d = list(combinations_with_replacement(range(NVARS), degree))
    mons_d1 = list(combinations_with_replacement(range(NVARS), degree - 1)) if degree else []
    index = {mon: i for i, mon in enumerate(mons_d)}
    n_rows = rows * len(mons_d)
    if degree == 0:
        return n_rows
    columns = []
    for j in range(cols):
        for mon in mons_d1:
            col = {}
            for i in range(rows):
                for u in range(NVARS):
                    c = m.coeffs[i, j, u]
                    if c:
                        key = i * len(mons_d) + index[tuple(sorted(mon + (u,)))]
                        col[key] = col.get(key, 0) + c
            columns.append(col)
    return n_rows - sparse_rank(columns)


def serialize_matrix(m: EquivariantLinearMatrix, header: str = "") -> str:
    lines = [f"equivariant-linear-matrix v1 {header}".rstrip()]
    lines.append(f"rows {m.shape[0]} cols {m.shape[1]} vars {NVARS}")
    for kind, labels in (("row", m.row_labels), ("col", m.col_labels)):
        for shape, t in labels:
            lines.append(f"{kind}-label {','.join(map(str, shape))} {'|'.join(''.join(map(str, c)) for c in t)}")
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            for u in range(NVARS):
                c = Fraction(m.coeffs[i, j, u])
                if c:
                    lines.append(f"{i} {j} {u} {c.numerator} {c.denominator}")
    return "\n".join(lines) + "\n"


def deserialize_matrix(text: str) -> EquivariantLinearMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("equivariant-linear-matrix v1"):
        raise ValueError("not an equivariant-linear-matrix v1 file")
    _, r, _, c, _, nv = lines[1].split()
    r, c = int(r), int(c)
    if int(nv) != NVARS:
        raise ValueError("variable count mismatch")
    rows, cols = [], []
    coeffs = np.full((r, c, NVARS), Fraction(0), dtype=object)
    for line in lines[2:]:
        parts = line.split()
        if parts[0] in ("row-label", "col-label"):
            shape = tuple(int(x) for x in parts[1].split(","))
            t = tuple(tuple(int(ch) for ch in col) for col in parts[2].split("|"))
            (rows if parts[0] == "row-label" else cols).append((shape, t))
        else:
            i, j, u, num, den = map(int, parts)
            coeffs[i, j, u] = Fraction(num, den)
    if len(rows) != r or len(cols) != c:
        raise ValueError("label count mismatch")
    return EquivariantLinearMatrix(rows, cols, coeffs)


def _symmetric_minors() -> list[dict[tuple[int, ...], int]]:
    """3x3 minors of the generic symmetric 4x4 matrix as sparse polynomials in the ten x_ij."""
    from itertools import combinations, permutations

    def var(i, j):
        return SYM_COORDS.index((min(i, j) + 1, max(i, j) + 1))

    minors = []
    for rows in combinations(range(N), 3):
        for cols in combinations(range(N), 3):
            poly: dict[tuple[int, ...], int] = {}
            for perm in permutations(range(3)):
                sign = -1 if sum(perm[a] > perm[b] for a in range(3) for b in range(a + 1, 3)) % 2 else 1
                mon = tuple(sorted(var(rows[k], cols[perm[k]]) for k in range(3)))
                poly[mon] = poly.get(mon, 0) + sign
            minors.append({m: c for m, c in poly.items() if c})
    return minors


def determinantal_hilbert_function(degree: int) -> int:
    """dim of the degree-d part of Q[x_ij] / (3x3 minors), by an exact rank count."""
    from itertools import combinations_with_replacement

    total = comb(degree + NVARS - 1, NVARS - 1)
    if degree < 3:
        return total
    index = {m: k for k, m in enumerate(combinations_with_replacement(range(NVARS), degree))}
    rows = []
    for minor in _symmetric_minors():
        for mult in combinations_with_replacement(range(NVARS), degree - 3):
            rows.append({index[tuple(sorted(m + mult))]: c for m, c in minor.items()})
    return total - sparse_rank(rows)
