from fractions import Fraction

import numpy as np
import pytest

from essential_chow import chow
from essential_chow.chow import ESS9, SYM10, ChowMatrix
from essential_chow.geometry import random_essential, s_of_M
from essential_chow.pieri import VARIANTS

from conftest import rand_q

KEYS = [(v, a) for v in VARIANTS for a in (SYM10, ESS9)]


def random_plane(rng, n):
    return [[rand_q(rng) for _ in range(n)] for _ in range(3)]


def sym_vector(s):
    return [s[i][j] for i in range(4) for j in range(i, 4)]


def test_triples_and_wedge():
    assert len(chow.triples(9)) == 84 and len(chow.triples(10)) == 120
    e = np.eye(4, dtype=int).tolist()
    assert chow.wedge3(e[0], e[1], e[2]) == {(0, 1, 2): 1}
    assert chow.wedge3(e[1], e[0], e[2]) == {(0, 1, 2): -1}
    assert chow.wedge3(e[0], e[0], e[2]) == {}
    with pytest.raises(ValueError):
        chow.wedge3([1, 2], [1, 2, 3], [1, 2, 3])


@pytest.mark.parametrize("key", KEYS)
def test_matrix_is_skew_primitive_and_packaged(chow_matrices, key):
    cm = chow_matrices[key]
    assert cm.size == 20 and cm.coeffs.shape[2] == len(chow.triples(cm.nvars))
    assert cm.is_skew() and cm.is_primitive()
    assert not np.any(cm.coeffs[np.arange(20), np.arange(20)] != 0)
    packaged = chow.load_chow_matrix(*key)
    assert np.array_equal(packaged.coeffs, cm.coeffs)


@pytest.mark.parametrize("key", KEYS)
def test_vanishes_exactly_on_planes_meeting_the_variety(chow_matrices, key, rng):
    cm = chow_matrices[key]
    n = cm.nvars
    for _ in range(3):
        plane = random_plane(rng, n)
        assert cm.pfaffian_at(chow.pluecker_coordinates(plane)) != 0
        if key[1] == ESS9:
            point = [x for row in random_essential(rng, rational=True, bound=50).M for x in row]
        else:
            v, w = ([rand_q(rng) for _ in range(4)] for _ in range(2))
            point = sym_vector([[v[i] * v[j] - w[i] * w[j] for j in range(4)] for i in range(4)])
        plane[0] = point
        assert cm.pfaffian_at(chow.pluecker_coordinates(plane)) == 0


def test_rank_three_symmetric_point_is_not_on_the_variety(chow_matrices, rng):
    cm = chow_matrices[("first", SYM10)]
    vs = [[rand_q(rng) for _ in range(4)] for _ in range(3)]
    point = sym_vector([[sum(v[i] * v[j] for v in vs) for j in range(4)] for i in range(4)])
    plane = random_plane(rng, 10)
    plane[0] = point
    assert cm.pfaffian_at(chow.pluecker_coordinates(plane)) != 0


def test_homogeneity_and_basis_change(chow_matrices, rng):
    cm = chow_matrices[("second", ESS9)]
    plane = random_plane(rng, 9)
    p = chow.pluecker_coordinates(plane)
    pf = cm.pfaffian_at(p)
    lam = Fraction(-3, 2)
    assert cm.pfaffian_at([lam * x for x in p]) == lam ** 10 * pf
    g = [[2, 1, 0], [0, 1, 3], [1, 0, 1]]
    det_g = 2 * (1 - 0) - 1 * (0 - 3) + 0
    moved = [[sum(g[i][k] * plane[k][c] for k in range(3)) for c in range(9)] for i in range(3)]
    assert cm.pfaffian_at(chow.pluecker_coordinates(moved)) == det_g ** 10 * pf


def test_exact_and_float_evaluation_agree(chow_matrices, rng):
    cm = chow_matrices[("first", ESS9)]
    p = chow.pluecker_coordinates(random_plane(rng, 9))
    exact = np.array(cm.evaluate(p), dtype=float)
    approx = cm.evaluate([float(x) for x in p])
    assert np.allclose(exact, approx, rtol=1e-12, atol=1e-12)
    with pytest.raises(ValueError):
        cm.evaluate([1, 2, 3])


def test_variants_agree_up_to_constant(chow_matrices, rng):
    first, second = chow_matrices[("first", ESS9)], chow_matrices[("second", ESS9)]
    for _ in range(5):
        p = chow.pluecker_coordinates(random_plane(rng, 9))
        assert first.pfaffian_at(p) == -4 * second.pfaffian_at(p)


@pytest.mark.parametrize("variant", VARIANTS)
def test_pullback_routes_agree(resolutions, chow_matrices, variant):
    direct = chow_matrices[(variant, ESS9)]
    other = chow.pullback_via_differentials(variant, resolutions[variant])
    assert np.array_equal(direct.coeffs, other.coeffs) or np.array_equal(direct.coeffs, -other.coeffs)


def test_pullback_is_substitution(chow_matrices, rng):
    sym, ess = chow_matrices[("first", SYM10)], chow_matrices[("first", ESS9)]
    ratios = set()
    for _ in range(3):
        plane = [random_essential(rng, rational=True, bound=30).M for _ in range(2)]
        plane.append([[rand_q(rng) for _ in range(3)] for _ in range(3)])
        flat = [[x for row in m for x in row] for m in plane]
        image = [sym_vector(s_of_M(m)) for m in plane]
        a = ess.pfaffian_at(chow.pluecker_coordinates(flat))
        b = sym.pfaffian_at(chow.pluecker_coordinates(image))
        assert a == 0 and b == 0  # both contain an essential matrix
    for _ in range(3):
        flat = random_plane(rng, 9)
        image = [sym_vector(s_of_M([row[3 * i: 3 * i + 3] for i in range(3)])) for row in flat]
        ratios.add(ess.pfaffian_at(chow.pluecker_coordinates(flat)) / sym.pfaffian_at(chow.pluecker_coordinates(image)))
    assert len(ratios) == 1 and 0 not in ratios


def test_pullback_requires_symmetric_ambient(chow_matrices):
    with pytest.raises(ValueError):
        chow.pullback_to_essential(chow_matrices[("first", ESS9)])


def test_serialization(chow_matrices, tmp_path):
    cm = chow_matrices[("second", ESS9)]
    text = chow.serialize(cm)
    assert text.startswith("chow-matrix v1 variant=second ambient=ess9\n")
    back = chow.deserialize(text)
    assert (back.variant, back.ambient) == (cm.variant, cm.ambient)
    assert np.array_equal(back.coeffs, cm.coeffs)
    path = tmp_path / "m.txt"
    chow.save(cm, path)
    assert np.array_equal(chow.load(path).coeffs, cm.coeffs)
    lines = text.splitlines(keepends=True)
    tampered = lines[:]
    i, j, a, b, c, v = tampered[1].split()
    tampered[1] = f"{i} {j} {a} {b} {c} {int(v) + 1}\n"
    with pytest.raises(ValueError, match="checksum"):
        chow.deserialize("".join(tampered))
    with pytest.raises(ValueError, match="hash"):
        chow.deserialize("".join(lines[:-1]))
    body = text.split("sha256")[0].replace("chow-matrix v1", "chow-matrix v2", 1)
    import hashlib

    with pytest.raises(ValueError, match="version"):
        chow.deserialize(body + f"sha256 {hashlib.sha256(body.encode()).hexdigest()}\n")


def test_stats_are_informational(chow_matrices):
    stats = chow_matrices[("first", ESS9)].stats()
    assert set(stats) == {"zero_offdiagonal_entries", "max_support", "max_abs_coefficient"}
    assert stats["max_abs_coefficient"] >= 1


def test_interpolate():
    xs = range(5)
    ys = [3 - 2 * x + x ** 3 for x in xs]
    assert chow.interpolate(xs, ys) == [3, -2, 0, 1]
    assert chow.interpolate([0, 1], [0, 0]) == [0]


@pytest.mark.parametrize("variant", VARIANTS)
def test_pencil_has_degree_ten(chow_matrices, variant, rng):
    cm = chow_matrices[(variant, ESS9)]
    ys = [[rand_q(rng) for _ in range(9)] for _ in range(4)]
    poly = chow.pencil_pfaffian(cm, *ys)
    assert len(poly) - 1 == 10


def test_zero_plane_gives_zero_matrix(chow_matrices):
    cm = chow_matrices[("first", ESS9)]
    assert not np.any(cm.evaluate([0] * 84) != 0)
    assert cm.pfaffian_at([0] * 84) == 0


def test_constructor_keeps_ambient():
    cm = ChowMatrix("first", ESS9, np.zeros((20, 20, 84), dtype=object))
    assert cm.nvars == 9 and cm.is_skew() and not cm.is_primitive()
