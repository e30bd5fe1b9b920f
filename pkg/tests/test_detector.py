import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from essential_chow import chow
from essential_chow.detector import (
    DEGENERATE,
    EXACT,
    EXACT_CONSISTENT,
    EXAMPLE_POSITIVE,
    FLOAT,
    SIGNAL,
    build_Z,
    conic_point,
    detect,
    dual_pluecker,
    fivepoint_vanishing_check,
    gap_ratio,
    hadamard_bound,
    is_exact_data,
    parse_value,
    read_correspondences_csv,
)
from essential_chow.exact_linalg import nullspace_exact, rank_exact
from essential_chow.geometry import random_essential

from conftest import rand_q


def random_pairs(rng, n=6):
    return [((rand_q(rng), rand_q(rng)), (rand_q(rng), rand_q(rng))) for _ in range(n)]


def consistent_pairs(rng, n=6):
    M = random_essential(rng, rational=True, bound=60).M
    pairs = []
    while len(pairs) < n:
        x = (rand_q(rng), rand_q(rng))
        try:
            pairs.append((x, conic_point(M, x, rand_q(rng))))
        except (ValueError, ZeroDivisionError):
            continue
    return M, pairs


def signed(p, idx):
    """Antisymmetric extension of Plücker coordinates to unsorted index triples."""
    if len(set(idx)) < 3:
        return 0
    order = sorted(range(3), key=lambda k: idx[k])
    inversions = sum(order[a] > order[b] for a in range(3) for b in range(a + 1, 3))
    return (-1) ** inversions * p[tuple(sorted(idx))]


def test_first_row_of_example():
    z = build_Z(EXAMPLE_POSITIVE)
    assert z[0] == [0, 0, Fraction(8, 11), 0, 0, Fraction(16, 11), 0, 0, 1]
    assert rank_exact(z) == 6


def test_rows_annihilate_the_essential_matrix(rng):
    M, pairs = consistent_pairs(rng)
    flat = [x for row in M for x in row]
    for row in build_Z(pairs):
        assert sum(a * b for a, b in zip(row, flat)) == 0


def test_zero_data_has_rank_one():
    assert rank_exact(build_Z([((0, 0), (0, 0))] * 6)) == 1


def test_dual_pluecker_is_kernel_pluecker(rng):
    z = build_Z(random_pairs(rng))
    q = dual_pluecker(z)
    kernel = nullspace_exact(z)
    assert len(kernel) == 3
    p = chow.pluecker_coordinates(kernel)
    ratio = {a / b for a, b in zip(q, p) if b} | {a for a, b in zip(q, p) if not b and a}
    assert len(ratio) == 1 and 0 not in ratio


def test_dual_pluecker_satisfies_pluecker_relations(rng):
    q = dual_pluecker(build_Z(random_pairs(rng)))
    p = dict(zip(chow.triples(9), q))
    for pair in list(combinations(range(9), 2))[:12]:
        for quad in list(combinations(range(9), 4))[:12]:
            total = sum((-1) ** k * signed(p, pair + (quad[k],)) * signed(p, quad[:k] + quad[k + 1:]) for k in range(4))
            assert total == 0


def test_dual_pluecker_vanishes_on_rank_deficient_z(rng):
    pairs = random_pairs(rng, 5)
    pairs.append(pairs[0])
    assert not any(dual_pluecker(build_Z(pairs)))


def test_float_and_exact_minors_agree(rng):
    z = build_Z(random_pairs(rng))
    exact = np.array(dual_pluecker(z), dtype=float)
    approx = np.array(dual_pluecker(np.array(z, dtype=float).tolist()))
    assert np.allclose(exact, approx, rtol=1e-9, atol=1e-12)
    assert np.max(np.abs(approx)) <= hadamard_bound(z) * (1 + 1e-12)


def test_positive_example_is_consistent():
    for variant in ("first", "second"):
        report = detect(EXAMPLE_POSITIVE, EXACT, variant=variant)
        assert report.verdict == EXACT_CONSISTENT and report.pfaffian == 0
        assert report.gap_ratio > 1e6


def test_random_data_gives_signal(rng):
    for _ in range(5):
        report = detect(random_pairs(rng), EXACT)
        assert report.verdict == SIGNAL and report.pfaffian != 0


def test_constructed_scenes_are_consistent(rng):
    for _ in range(5):
        _, pairs = consistent_pairs(rng)
        assert detect(pairs, EXACT).verdict == EXACT_CONSISTENT


def test_degenerate_data():
    pairs = list(EXAMPLE_POSITIVE[:5]) + [EXAMPLE_POSITIVE[0]]
    assert detect(pairs, EXACT).verdict == DEGENERATE
    floats = [(tuple(map(float, x)), tuple(map(float, y))) for x, y in pairs]
    assert detect(floats, FLOAT).verdict == DEGENERATE


def test_float_mode_separates(rng):
    good = detect([(tuple(map(float, x)), tuple(map(float, y))) for x, y in EXAMPLE_POSITIVE], FLOAT)
    bad = detect([(tuple(map(float, x)), tuple(map(float, y))) for x, y in random_pairs(rng)], FLOAT)
    assert good.verdict == bad.verdict == SIGNAL
    assert good.log10_gap > 10 and bad.log10_gap < 4


def test_evaluation_scales_with_power_ten(rng):
    cm = chow.load_chow_matrix("first", chow.ESS9)
    q = dual_pluecker(build_Z(random_pairs(rng)))
    lam = Fraction(2, 3)
    assert cm.pfaffian_at([lam * x for x in q]) == lam ** 10 * cm.pfaffian_at(q)


def test_input_validation():
    with pytest.raises(ValueError):
        detect(EXAMPLE_POSITIVE[:5])
    with pytest.raises(ValueError):
        detect([((0.0, float("nan")), (1.0, 2.0))] + list(EXAMPLE_POSITIVE[1:]), FLOAT)
    with pytest.raises(ValueError):
        detect([((0.5, 0.0), (1.0, 2.0))] + list(EXAMPLE_POSITIVE[1:]), EXACT)
    with pytest.raises(ValueError):
        detect(EXAMPLE_POSITIVE, "fuzzy")


def test_gap_ratio():
    assert gap_ratio(list(range(20, 0, -1))) == 3 / 1
    assert gap_ratio([1.0] * 19 + [0.0]) == float("inf")


def test_five_point_check(rng):
    M, pairs = consistent_pairs(rng, 6)
    assert fivepoint_vanishing_check(pairs[:5], pairs[5])
    assert not fivepoint_vanishing_check(pairs[:5], ((Fraction(1, 2), 3), (Fraction(2, 7), -1)))


def test_conic_point_lies_on_epipolar_line(rng):
    M = random_essential(rng, rational=True, bound=50).M
    x = (Fraction(1, 3), Fraction(-2, 5))
    y = conic_point(M, x)
    assert sum(([y[0], y[1], 1][i] * M[i][j] * [x[0], x[1], 1][j]) for i in range(3) for j in range(3)) == 0
    with pytest.raises(ValueError):
        conic_point([[0] * 3] * 3, x)


def test_csv_parsing(tmp_path):
    path = tmp_path / "pairs.csv"
    rows = ["x1,x2,y1,y2"] + [f"{x[0]},{x[1]},{y[0]},{y[1]}" for x, y in EXAMPLE_POSITIVE]
    path.write_text("\n".join(rows) + "\n")
    data = read_correspondences_csv(path)
    assert data == [(tuple(map(Fraction, x)), tuple(map(Fraction, y))) for x, y in EXAMPLE_POSITIVE]
    assert is_exact_data(data)
    assert parse_value("0.25") == 0.25 and isinstance(parse_value("0.25"), float)
    assert parse_value("-3/4") == Fraction(-3, 4) and parse_value("7") == 7
    (tmp_path / "short.csv").write_text("x1,x2,y1,y2\n1,2,3,4\n")
    with pytest.raises(ValueError):
        read_correspondences_csv(tmp_path / "short.csv")
    (tmp_path / "cols.csv").write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_correspondences_csv(tmp_path / "cols.csv")


def test_report_json_is_serializable():
    report = detect(EXAMPLE_POSITIVE, EXACT)
    payload = json.loads(json.dumps(report.to_json()))
    assert payload["verdict"] == EXACT_CONSISTENT and payload["pfaffian"] == "0"
    degenerate = detect(list(EXAMPLE_POSITIVE[:5]) + [EXAMPLE_POSITIVE[0]], EXACT).to_json()
    assert degenerate["gap_ratio"] is None and degenerate["log10_gap"] is None
