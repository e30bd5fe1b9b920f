"""The essential variety: defining cubics, the isometry ``s``, rank tests,
the parametrization of the singular locus, sampling and projection.

Matrices are nested lists or numpy arrays.  Functions return exact
``Fraction`` entries when every input entry is an ``int`` or ``Fraction``
and floats otherwise.  Complex numbers are pairs ``(re, im)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .exact_linalg import det_exact, rank_exact

NOT_IN_E = "NotInE"
IN_E = "InE"
IN_SING = "InSing"

# coordinate order of a 3x3 matrix as a 9-vector: m11, m12, m13, m21, ..., m33
ESSENTIAL_COORDS = tuple((i, j) for i in range(1, 4) for j in range(1, 4))


def _is_exact(values) -> bool:
    return all(isinstance(x, Rational) for x in np.asarray(values, dtype=object).flat)


def _entries(M):
    arr = np.asarray(M, dtype=object)
    if arr.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    if _is_exact(arr):
        return [[Fraction(x) for x in row] for row in arr], Fraction(1, 2)
    return [[float(x) for x in row] for row in arr], 0.5


def s_of_M(M) -> list[list]:
    """Traceless symmetric 4x4 matrix ``s(M)``, linear in M."""
    m, half = _entries(M)
    (m11, m12, m13), (m21, m22, m23), (m31, m32, m33) = m
    rows = [
        [m11 - m22 - m33, m13 + m31, m12 + m21, m23 - m32],
        [m13 + m31, -m11 - m22 + m33, m23 + m32, m12 - m21],
        [m12 + m21, m23 + m32, -m11 + m22 - m33, -m13 + m31],
        [m23 - m32, m12 - m21, -m13 + m31, m11 + m22 + m33],
    ]
    return [[half * x for x in row] for row in rows]


def s_linear_map() -> list[list[Fraction]]:
    """10x9 matrix ``S`` with ``x_ij = sum_k S[(ij), k] m_k`` (x in upper-triangular order)."""
    cols = []
    for k in range(9):
        e = [[0] * 3 for _ in range(3)]
        e[k // 3][k % 3] = 1
        s = s_of_M(e)
        cols.append([s[i][j] for i in range(4) for j in range(i, 4)])
    return [list(r) for r in zip(*cols)]


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _transpose(a):
    return [list(r) for r in zip(*a)]


def essential_cubics(M) -> list:
    """``det M`` followed by the nine entries of ``2 (M M^T) M - tr(M M^T) M``."""
    m, _ = _entries(M)
    mmt = _matmul(m, _transpose(m))
    tr = mmt[0][0] + mmt[1][1] + mmt[2][2]
    prod = _matmul(mmt, m)
    det = det_exact(m) if _is_exact(m) else float(np.linalg.det(np.array(m, dtype=float)))
    return [det] + [2 * prod[i][j] - tr * m[i][j] for i in range(3) for j in range(3)]


def rank_classify(M) -> str:
    """``InSing`` if rk s(M) <= 1, ``InE`` if rk s(M) == 2, else ``NotInE`` (exact input)."""
    if not _is_exact(M):
        raise TypeError("rank_classify needs rational entries")
    r = rank_exact(s_of_M(M))
    if r <= 1:
        return IN_SING
    if r == 2:
        return IN_E
    return NOT_IN_E


# --- complex pairs -------------------------------------------------------

def _c(x):
    return (x, 0 * x) if not isinstance(x, tuple) else x


def cadd(a, b):
    a, b = _c(a), _c(b)
    return (a[0] + b[0], a[1] + b[1])


def cmul(a, b):
    a, b = _c(a), _c(b)
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def cneg(a):
    a = _c(a)
    return (-a[0], -a[1])


def times_i(a):
    a = _c(a)
    return (-a[1], a[0])


def isotropic_vector(u) -> tuple:
    """``(u1^2 - u2^2, 2 u1 u2, i (u1^2 + u2^2))``, a zero of ``Q(a) = a1^2 + a2^2 + a3^2``."""
    u1, u2 = _c(u[0]), _c(u[1])
    s1, s2 = cmul(u1, u1), cmul(u2, u2)
    return (cadd(s1, cneg(s2)), cmul(2, cmul(u1, u2)), times_i(cadd(s1, s2)))


def quadric_Q(a):
    out = (0, 0)
    for x in a:
        out = cadd(out, cmul(x, x))
    return out


def sing_parametrization(u, v):
    """Rank-one point ``M = a b^T`` of the singular locus and its isotropic 4-vector ``k``.

    ``u = (u1, u2)`` and ``v = (v1, v2)`` hold complex pairs (plain numbers
    are read as real).  With ``k`` as returned, ``k k^T = -s(M)``; hence the
    rank-one factorisation ``s(M) = (i k)(i k)^T``.
    """
    a, b = isotropic_vector(u), isotropic_vector(v)
    M = [[cmul(a[i], b[j]) for j in range(3)] for i in range(3)]
    u1, u2 = _c(u[0]), _c(u[1])
    v1, v2 = _c(v[0]), _c(v[1])
    k = (
        times_i(cadd(cmul(u2, v2), cneg(cmul(u1, v1)))),
        cadd(cmul(u1, v1), cmul(u2, v2)),
        cneg(times_i(cadd(cmul(u1, v2), cmul(u2, v1)))),
        cadd(cneg(cmul(u1, v2)), cmul(u2, v1)),
    )
    return M, k


def complex_s_of_M(M) -> list[list[tuple]]:
    """``s`` applied to a complex matrix given by pairs; linear, so split real and imaginary parts."""
    re = s_of_M([[x[0] for x in row] for row in M])
    im = s_of_M([[x[1] for x in row] for row in M])
    return [[(re[i][j], im[i][j]) for j in range(4)] for i in range(4)]


def complex_rank(M) -> int:
    """Exact rank over Q(i) of a matrix of Gaussian-rational pairs, via the real 2n x 2n form."""
    n, m = len(M), len(M[0])
    big = [[0] * (2 * m) for _ in range(2 * n)]
    for i in range(n):
        for j in range(m):
            re, im = M[i][j]
            big[i][j], big[i][m + j] = re, -im
            big[n + i][j], big[n + i][m + j] = im, re
    return rank_exact(big) // 2


# --- sampling and projection --------------------------------------------

def cross_matrix(t) -> list[list]:
    """``[t]_x = [[0, t3, -t2], [-t3, 0, t1], [t2, -t1, 0]]`` (so ``t^T [t]_x = 0``)."""
    t1, t2, t3 = t
    z = 0 * t1
    return [[z, t3, -t2], [-t3, z, t1], [t2, -t1, z]]


def rotation_from_quaternion(q) -> list[list]:
    """Rotation matrix of the (not necessarily unit) quaternion ``(a, b, c, d)``."""
    a, b, c, d = q
    n = a * a + b * b + c * c + d * d
    if n == 0:
        raise ValueError("zero quaternion")
    if all(isinstance(x, Rational) for x in q):
        n = Fraction(n)
    rows = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    return [[x / n for x in row] for row in rows]


def haar_quaternion(rng: np.random.Generator) -> np.ndarray:
    q = rng.standard_normal(4)
    return q / np.linalg.norm(q)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed rotation from a uniform unit quaternion."""
    return np.array(rotation_from_quaternion(haar_quaternion(rng)), dtype=float)


def rationalize(x: float, bound: int) -> Fraction:
    """Best rational approximation with denominator <= bound, and ``|x - p/q| <= 1/(q bound)``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    target = Fraction(x)
    best = target.limit_denominator(bound)
    if abs(target - best) * best.denominator * bound <= 1:
        return best
    # the last continued-fraction convergent always meets the error bound
    p0, q0, p1, q1 = 0, 1, 1, 0
    rest = target
    while True:
        a = rest.numerator // rest.denominator
        p2, q2 = a * p1 + p0, a * q1 + q0
        if q2 > bound:
            return Fraction(p1, q1)
        p0, q0, p1, q1 = p1, q1, p2, q2
        frac = rest - a
        if frac == 0:
            return Fraction(p1, q1)
        rest = 1 / frac


def rational_rotation_near(q, bound: int = 10**6) -> list[list[Fraction]]:
    """Exactly orthogonal rational rotation near the rotation of the unit quaternion ``q``.

    The quaternion is pulled back to R^3 by stereographic projection from
    ``(-1, 0, 0, 0)``, rounded to nearby rationals and pushed forward again.
    """
    q = np.asarray(q, dtype=float)
    if q[0] < 0:
        q = -q  # same rotation; keeps away from the projection pole
    w = [rationalize(x / (1 + q[0]), bound) for x in q[1:]]
    n2 = sum(x * x for x in w)
    quat = [(1 - n2)] + [2 * x for x in w]
    return rotation_from_quaternion(quat)


def random_rational_rotation(rng: np.random.Generator, bound: int = 10**6) -> list[list[Fraction]]:
    return rational_rotation_near(haar_quaternion(rng), bound)


def uniform_in_ball(rng: np.random.Generator, radius: float, dim: int = 3) -> np.ndarray:
    d = rng.standard_normal(dim)
    d /= np.linalg.norm(d)
    return d * radius * rng.random() ** (1.0 / dim)


@dataclass
class EssentialSample:
    R: list
    t: list
    M: list


def random_essential(rng: np.random.Generator, rational: bool = False, bound: int = 1000) -> EssentialSample:
    """``M = [t]_x R`` for a Haar rotation ``R`` and ``t`` uniform in the radius-2 ball."""
    t = uniform_in_ball(rng, 2.0)
    if rational:
        R = random_rational_rotation(rng, bound)
        t = [rationalize(x, bound) for x in t]
        return EssentialSample(R, t, _matmul(cross_matrix(t), R))
    R = random_rotation(rng)
    return EssentialSample(R, t, np.array(cross_matrix(t), dtype=float) @ R)


def project_to_essential(M) -> np.ndarray:
    """Nearest-point style projection: average the top two singular values, zero the third.

    ``U`` and ``V`` are taken with determinant +1 (flipping the third
    singular vector, which is then multiplied by zero anyway).
    """
    U, s, Vt = np.linalg.svd(np.asarray(M, dtype=float))
    if np.linalg.det(U) < 0:
        U[:, 2] = -U[:, 2]
    if np.linalg.det(Vt) < 0:
        Vt[2, :] = -Vt[2, :]
    sigma = (s[0] + s[1]) / 2
    return U @ np.diag([sigma, sigma, 0.0]) @ Vt
