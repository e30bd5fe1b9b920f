"""20x20 skew-symmetric matrices of Pluecker linear forms whose Pfaffian is
the Chow form, built as ``alpha . phi . alpha^T`` over the exterior algebra.

An entry is a linear form in the Pluecker coordinates ``p_abc`` (``a < b <
c``) of a plane, i.e. an element of the third exterior power of the ambient
coordinate space.  Entries are stored as an integer array
``coeffs[i, j, t]`` where ``t`` indexes :func:`triples` in lexicographic
order.  The Pfaffian is never expanded; it is only evaluated after
substituting Pluecker coordinates.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations, permutations
from math import comb, lcm
from pathlib import Path

import numpy as np

from .exact_linalg import content, pfaffian_exact
from .geometry import s_linear_map
from .pieri import VARIANTS, build_resolution

SYM10 = "sym10"
ESS9 = "ess9"
AMBIENT_SIZE = {SYM10: 10, ESS9: 9}
FORMAT_VERSION = "v1"

_PERM_SIGNS = [(p, 1 if sum(p[i] > p[j] for i in range(3) for j in range(i + 1, 3)) % 2 == 0 else -1) for p in permutations(range(3))]


@lru_cache(maxsize=None)
def triples(n: int) -> tuple[tuple[int, int, int], ...]:
    """Strictly increasing index triples of ``range(n)`` in lexicographic order."""
    return tuple(combinations(range(n), 3))


def wedge3(u, v, w) -> dict[tuple[int, int, int], Fraction]:
    """``u ^ v ^ w`` for three linear forms given as coefficient sequences."""
    n = len(u)
    if not len(v) == len(w) == n:
        raise ValueError("forms over different coordinate lists")
    out = {}
    for t in triples(n):
        c = _det3([[Fraction(f[i]) for i in t] for f in (u, v, w)])
        if c:
            out[t] = c
    return out


@dataclass
class ChowMatrix:
    variant: str
    ambient: str
    coeffs: np.ndarray  # integer object array, shape (20, 20, C(n, 3))

    @property
    def nvars(self) -> int:
        return AMBIENT_SIZE[self.ambient]

    @property
    def size(self) -> int:
        return self.coeffs.shape[0]

    def is_skew(self) -> bool:
        return bool(np.all(self.coeffs == -self.coeffs.transpose(1, 0, 2)))

    def is_primitive(self) -> bool:
        return content(self.coeffs.flat) == 1

    def entry(self, i: int, j: int) -> dict[tuple[int, int, int], int]:
        return {t: int(c) for t, c in zip(triples(self.nvars), self.coeffs[i, j]) if c}

    def evaluate(self, pluecker) -> np.ndarray:
        """Substitute Pluecker coordinates; exact (object) for rationals, float64 otherwise."""
        p = np.asarray(pluecker, dtype=object)
        if p.shape != (comb(self.nvars, 3),):
            raise ValueError(f"expected {comb(self.nvars, 3)} Pluecker coordinates for ambient {self.ambient}")
        if all(isinstance(x, (int, Fraction)) for x in p):
            ints, d = _scaled_integers(p)
            m = self.coeffs.dot(ints)
            return m if d == 1 else np.array([Fraction(x, d) for x in m.flat], dtype=object).reshape(m.shape)
        return self.float_coeffs().dot(np.asarray(pluecker, dtype=float))

    def float_coeffs(self) -> np.ndarray:
        cached = getattr(self, "_float", None)
        if cached is None:
            cached = self.coeffs.astype(float)
            self._float = cached
        return cached

    def pfaffian_at(self, pluecker) -> Fraction:
        """Exact Pfaffian after substitution (degree 10 in the Pluecker coordinates)."""
        p = np.asarray(pluecker, dtype=object)
        if p.shape != (comb(self.nvars, 3),):
            raise ValueError(f"expected {comb(self.nvars, 3)} Pluecker coordinates for ambient {self.ambient}")
        ints, d = _scaled_integers(p)
        return pfaffian_exact(self.coeffs.dot(ints).tolist()) / Fraction(d) ** (self.size // 2)

    def stats(self) -> dict[str, int]:
        """Basis-dependent shape facts (informational only)."""
        nz = self.coeffs != 0
        support = nz.sum(axis=2)
        off = ~np.eye(self.size, dtype=bool)
        return {
            "zero_offdiagonal_entries": int((support[off] == 0).sum()),
            "max_support": int(support.max()),
            "max_abs_coefficient": int(max(abs(int(x)) for x in self.coeffs.flat)),
        }


def _scaled_integers(values) -> tuple[np.ndarray, int]:
    fr = [Fraction(x) for x in values]
    d = 1
    for x in fr:
        d = lcm(d, x.denominator)
    return np.array([int(x * d) for x in fr], dtype=object), d


def _int_array(m) -> np.ndarray:
    """Integer object array from a rational one, after clearing denominators."""
    d = 1
    for x in m.flat:
        d = lcm(d, Fraction(x).denominator)
    return np.array([int(Fraction(x) * d) for x in m.flat], dtype=object).reshape(m.shape)


def _fits_int64(*arrays, terms: int) -> bool:
    bound = terms
    for a in arrays:
        bound *= max((abs(int(x)) for x in a.flat), default=0) or 1
    return bound * 6 < 2**62


def exterior_product(d0: np.ndarray, dsym: np.ndarray) -> np.ndarray:
    """``entry(i, j) = sum_{k,l} d0[i,k] ^ dsym[k,l] ^ d0[j,l]`` in the triple basis."""
    n = d0.shape[2]
    if _fits_int64(d0, dsym, d0, terms=d0.shape[1] * dsym.shape[1]):
        a, b = d0.astype(np.int64), dsym.astype(np.int64)
    else:
        a, b = d0, dsym
    u = np.einsum("ika,klb->ilab", a, b)
    full = np.einsum("ilab,jlc->ijabc", u, a)
    idx = np.array(triples(n))
    out = 0
    for perm, sign in _PERM_SIGNS:
        out = out + sign * full[:, :, idx[:, perm[0]], idx[:, perm[1]], idx[:, perm[2]]]
    return np.asarray(out).astype(object)


def _primitive(coeffs: np.ndarray) -> np.ndarray:
    g = content(coeffs.flat)
    if g == 0:
        raise ArithmeticError("Chow matrix vanishes identically")
    return np.array([int(x) // g for x in coeffs.flat], dtype=object).reshape(coeffs.shape)


def chow_matrix_symmetric(variant: str, resolution=None) -> ChowMatrix:
    """Chow matrix of the rank <= 2 symmetric 4x4 matrices, in the 120 ``p`` variables."""
    res = resolution or build_resolution(variant)
    cm = ChowMatrix(variant, SYM10, _primitive(exterior_product(_int_array(res.Dalpha.coeffs), _int_array(res.Dphi_sym.coeffs))))
    if not cm.is_skew():
        raise ArithmeticError("Chow matrix is not skew-symmetric")
    return cm


def third_power(linear_map) -> np.ndarray:
    """Matrix of the third exterior power: ``[t_src, t_dst]`` = 3x3 minor of ``linear_map``.

    ``linear_map[u][m]`` expresses source coordinate ``u`` in target coordinates ``m``.
    """
    rows, cols = len(linear_map), len(linear_map[0])
    out = np.empty((comb(rows, 3), comb(cols, 3)), dtype=object)
    for a, src in enumerate(triples(rows)):
        for b, dst in enumerate(triples(cols)):
            out[a, b] = _det3([[linear_map[u][m] for m in dst] for u in src])
    return out


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def essential_substitution() -> np.ndarray:
    """``2 s`` as a 10x9 integer matrix: ``x_ij = 2 s(M)_ij`` in the coordinates ``m11..m33``.

    The factor 2 clears the halves; it rescales the pulled-back matrix by a
    constant, which the content normalisation removes.
    """
    return np.array([[int(2 * x) for x in row] for row in s_linear_map()], dtype=object)


def pullback_to_essential(cm: ChowMatrix) -> ChowMatrix:
    """Substitute ``x_ij = s(M)_ij`` into a symmetric-ambient Chow matrix (84 ``q`` variables)."""
    if cm.ambient != SYM10:
        raise ValueError("pullback needs a matrix over the symmetric 4x4 coordinates")
    wedge = third_power(essential_substitution().tolist())
    out = ChowMatrix(cm.variant, ESS9, _primitive(cm.coeffs.dot(wedge)))
    if not out.is_skew():
        raise ArithmeticError("pulled-back Chow matrix is not skew-symmetric")
    return out


def pullback_via_differentials(variant: str, resolution=None) -> ChowMatrix:
    """Same as :func:`pullback_to_essential`, but substituting into ``alpha`` and ``phi`` first."""
    res = resolution or build_resolution(variant)
    sub = essential_substitution()
    d0 = _int_array(res.Dalpha.coeffs).dot(sub)
    d1 = _int_array(res.Dphi_sym.coeffs).dot(sub)
    if not np.all(d1 == d1.transpose(1, 0, 2)):
        raise ArithmeticError("substituted middle map lost its symmetry")
    out = ChowMatrix(variant, ESS9, _primitive(exterior_product(d0, d1)))
    if not out.is_skew():
        raise ArithmeticError("pulled-back Chow matrix is not skew-symmetric")
    return out


def pluecker_coordinates(basis) -> list:
    """3x3 minors (columns in :func:`triples` order) of a 3 x n spanning matrix."""
    b = np.asarray(basis, dtype=object)
    if b.shape[0] != 3:
        raise ValueError("a plane is spanned by 3 vectors")
    exact = all(isinstance(x, (int, Fraction)) for x in b.flat)
    out = []
    for t in triples(b.shape[1]):
        minor = b[:, list(t)]
        out.append(Fraction(_det3(minor.tolist())) if exact else float(_det3(minor.astype(float).tolist())))
    return out


# --- file format -----------------------------------------------------------

def serialize(cm: ChowMatrix) -> str:
    body = [f"chow-matrix {FORMAT_VERSION} variant={cm.variant} ambient={cm.ambient}"]
    tri = triples(cm.nvars)
    for i in range(cm.size):
        for j in range(cm.size):
            for t, c in zip(tri, cm.coeffs[i, j]):
                if c:
                    body.append(f"{i} {j} {t[0]} {t[1]} {t[2]} {int(c)}")
    text = "\n".join(body) + "\n"
    return text + f"sha256 {hashlib.sha256(text.encode()).hexdigest()}\n"


def deserialize(text: str) -> ChowMatrix:
    lines = text.splitlines(keepends=True)
    if len(lines) < 2 or not lines[-1].startswith("sha256 "):
        raise ValueError("missing content hash footer")
    body = "".join(lines[:-1])
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1].split()[1]:
        raise ValueError("checksum mismatch")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "chow-matrix":
        raise ValueError("not a chow-matrix file")
    if head[1] != FORMAT_VERSION:
        raise ValueError(f"unsupported chow-matrix version {head[1]!r}")
    fields = dict(h.split("=", 1) for h in head[2:])
    variant, ambient = fields.get("variant"), fields.get("ambient")
    if variant not in VARIANTS or ambient not in AMBIENT_SIZE:
        raise ValueError("bad header fields")
    index = {t: k for k, t in enumerate(triples(AMBIENT_SIZE[ambient]))}
    coeffs = np.zeros((20, 20, len(index)), dtype=object)
    for line in lines[1:-1]:
        try:
            i, j, a, b, c, v = map(int, line.split())
            coeffs[i, j, index[(a, b, c)]] = v
        except (ValueError, KeyError, IndexError) as exc:
            raise ValueError(f"malformed line: {line.strip()!r}") from exc
    return ChowMatrix(variant, ambient, coeffs)


def save(cm: ChowMatrix, path) -> None:
    Path(path).write_text(serialize(cm))


def load(path) -> ChowMatrix:
    return deserialize(Path(path).read_text())


def data_filename(variant: str, ambient: str) -> str:
    return f"chow_{variant}_{ambient}.txt"


def build_all(variants=VARIANTS) -> dict[tuple[str, str], ChowMatrix]:
    out = {}
    for v in variants:
        sym = chow_matrix_symmetric(v)
        out[(v, SYM10)] = sym
        out[(v, ESS9)] = pullback_to_essential(sym)
    return out


@lru_cache(maxsize=None)
def load_chow_matrix(variant: str, ambient: str = ESS9) -> ChowMatrix:
    """Packaged prebuilt matrix if present, otherwise built from scratch."""
    if variant not in VARIANTS or ambient not in AMBIENT_SIZE:
        raise ValueError("unknown variant or ambient")
    try:
        text = resources.files("essential_chow").joinpath("data").joinpath(data_filename(variant, ambient)).read_text()
        return deserialize(text)
    except FileNotFoundError:
        sym = chow_matrix_symmetric(variant)
        return sym if ambient == SYM10 else pullback_to_essential(sym)


def interpolate(xs, ys) -> list[Fraction]:
    """Exact coefficients (constant term first) of the interpolating polynomial (Newton form)."""
    xs = [Fraction(x) for x in xs]
    coef = [Fraction(y) for y in ys]
    n = len(xs)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - k])
    poly = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (t - xs[k]) + coef[k]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[k] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[k]
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def pencil_pfaffian(cm: ChowMatrix, y1, y2, y3, y4, samples: int = 31) -> list[Fraction]:
    """Pfaffian along the pencil of planes spanned by ``(y1 + t y4, y2, y3)``, as a polynomial in ``t``.

    The Pluecker coordinates are linear in ``t``, so the result has degree at
    most 10; ``samples`` exact evaluations (>= 31 leaves plenty of slack)
    determine it, and the trailing zero coefficients are dropped.
    """
    ts = list(range(samples))
    values = []
    for t in ts:
        row = [Fraction(a) + t * Fraction(b) for a, b in zip(y1, y4)]
        values.append(cm.pfaffian_at(pluecker_coordinates([row, list(y2), list(y3)])))
    return interpolate(ts, values)
