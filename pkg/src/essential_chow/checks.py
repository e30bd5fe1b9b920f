"""End-to-end acceptance checks, shared by ``verify`` and the test-suite.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
property, so a report can list every outcome.
"""
from __future__ import annotations

import contextlib
import filecmp
import io
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import chow
from .detector import EXACT, EXACT_CONSISTENT, EXAMPLE_POSITIVE, conic_point, detect
from .exact_linalg import rank_exact
from .geometry import (
    complex_rank,
    complex_s_of_M,
    cmul,
    cadd,
    essential_cubics,
    random_essential,
    s_of_M,
    sing_parametrization,
)
from .pieri import VARIANTS, build_resolution, complex_residual, is_linear, verify_support
from .schur import grassmannian_quadric_count, schur_dimension


@dataclass
class CheckResult:
    number: int | str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number!s:>2} {self.name}: {self.detail}"


@lru_cache(maxsize=None)
def _resolution(variant):
    return build_resolution(variant)


@lru_cache(maxsize=None)
def _fresh_chow(variant, ambient):
    sym = chow.chow_matrix_symmetric(variant, _resolution(variant))
    return sym if ambient == chow.SYM10 else chow.pullback_to_essential(sym)


def _rq(rng, num=9, den=9):
    return Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))


def random_correspondences(rng, n=6):
    return [((_rq(rng), _rq(rng)), (_rq(rng), _rq(rng))) for _ in range(n)]


def check_resolution_shape() -> CheckResult:
    start = time.perf_counter()
    details, ok = [], True
    for v in VARIANTS:
        res = _resolution(v)
        betti = (res.Dalpha.shape[0], res.Dalpha.shape[1], res.Dphi_sym.shape[1], res.Dalpha.shape[0])
        linear = is_linear(res.Dalpha) and is_linear(res.Dphi_sym)
        residual = complex_residual(res)
        ok &= betti == (20, 60, 60, 20) and linear and residual == 0
        details.append(f"{v}: betti={betti} linear={linear} nonzero(alpha.phi)={residual}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    return CheckResult(1, "resolution shape", ok, "; ".join(details) + f"; {elapsed:.1f}s")


def check_middle_symmetry() -> CheckResult:
    flags = {v: _resolution(v).Dphi_sym.is_symmetric() for v in VARIANTS}
    return CheckResult(2, "middle-map symmetry", all(flags.values()), str(flags))


def check_skew_symmetry() -> CheckResult:
    details, ok = [], True
    for v in VARIANTS:
        for amb in (chow.SYM10, chow.ESS9):
            cm = _fresh_chow(v, amb)
            good = cm.is_skew() and cm.is_primitive() and all(isinstance(x, int) for x in cm.coeffs.flat)
            packaged = chow.load_chow_matrix(v, amb)
            same = bool(np.all(packaged.coeffs == cm.coeffs))
            ok &= good and same
            details.append(f"{v}/{amb}: skew+primitive={good} matches-packaged={same}")
    return CheckResult(3, "skew-symmetry", ok, "; ".join(details))


def check_positive_control() -> CheckResult:
    start = time.perf_counter()
    verdicts = {v: detect(EXAMPLE_POSITIVE, EXACT, v) for v in VARIANTS}
    ok = all(r.verdict == EXACT_CONSISTENT and r.pfaffian == 0 for r in verdicts.values())
    detail = ", ".join(f"{v}: Pf={r.pfaffian}" for v, r in verdicts.items())
    return CheckResult(4, "positive control", ok, f"{detail}; {time.perf_counter() - start:.1f}s")


def check_negative_control(samples: int = 100, seed: int = 2024) -> CheckResult:
    rng = np.random.default_rng(seed)
    cms = {v: chow.load_chow_matrix(v, chow.ESS9) for v in VARIANTS}
    ratios, nonzero = set(), 0
    for _ in range(samples):
        data = random_correspondences(rng)
        pf = {v: detect(data, EXACT, cm=cm).pfaffian for v, cm in cms.items()}
        if all(pf.values()):
            nonzero += 1
            ratios.add(pf["first"] / pf["second"])
    ok = nonzero == samples and len(ratios) == 1
    ratio = next(iter(ratios)) if len(ratios) == 1 else f"{len(ratios)} distinct"
    return CheckResult(5, "negative control", ok, f"nonzero={nonzero}/{samples}; Pf_first/Pf_second={ratio}")


def _complex_cubics(M):
    """The ten cubics on a matrix of complex pairs."""
    def mm(a, b):
        out = [[(0, 0)] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                acc = (0, 0)
                for k in range(3):
                    acc = cadd(acc, cmul(a[i][k], b[k][j]))
                out[i][j] = acc
        return out

    Mt = [[M[j][i] for j in range(3)] for i in range(3)]
    mmt = mm(M, Mt)
    tr = cadd(cadd(mmt[0][0], mmt[1][1]), mmt[2][2])
    prod = mm(mmt, M)
    det = (0, 0)
    for (i, j, k), sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1), ((0, 2, 1), -1), ((1, 0, 2), -1), ((2, 1, 0), -1)):
        term = cmul(cmul(M[0][i], M[1][j]), M[2][k])
        det = cadd(det, (sign * term[0], sign * term[1]))
    rest = [cadd(cmul(2, prod[i][j]), cmul((-tr[0], -tr[1]), M[i][j])) for i in range(3) for j in range(3)]
    return [det] + rest


def check_geometry(random_count: int = 1000, constructed: int = 200, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    mismatches = isometry_failures = 0
    samples = [[[_rq(rng) for _ in range(3)] for _ in range(3)] for _ in range(random_count)]
    for _ in range(constructed // 2):
        samples.append(random_essential(rng, rational=True, bound=100).M)
    for M in samples:
        on_e = not any(essential_cubics(M))
        s = s_of_M(M)
        mismatches += on_e != (rank_exact(s) <= 2)
        lhs = sum(x * x for row in s for x in row)
        isometry_failures += lhs != sum(Fraction(x) ** 2 for row in M for x in row)
    sing_failures = 0
    for _ in range(constructed - constructed // 2):
        u = ((_rq(rng), _rq(rng)), (_rq(rng), _rq(rng)))
        v = ((_rq(rng), _rq(rng)), (_rq(rng), _rq(rng)))
        M, _k = sing_parametrization(u, v)
        cubics_vanish = all(c == (0, 0) for c in _complex_cubics(M))
        sing_failures += not (cubics_vanish and complex_rank(complex_s_of_M(M)) <= 1)
    ok = mismatches == isometry_failures == sing_failures == 0
    detail = f"cubics<->rank mismatches={mismatches}/{len(samples)}; isometry failures={isometry_failures}; singular-locus failures={sing_failures}/{constructed - constructed // 2}"
    return CheckResult(6, "geometry oracles", ok, detail)


def check_counting() -> CheckResult:
    values = {
        "dim S_(10,10,10)(C^10)": (schur_dimension((10, 10, 10), 10), 108284013552),
        "dim S_(10,10,10)(C^9)": (schur_dimension((10, 10, 10), 9), 9386849472),
        "quadrics Gr(3,10)": (grassmannian_quadric_count(3, 10), 2310),
        "quadrics Gr(3,9)": (grassmannian_quadric_count(3, 9), 1050),
    }
    ok = all(a == b for a, b in values.values())
    return CheckResult(7, "counting oracles", ok, ", ".join(f"{k}={a}" for k, (a, _) in values.items()))


def check_degree(seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    degrees = {}
    for v in VARIANTS:
        for amb in (chow.SYM10, chow.ESS9):
            cm = chow.load_chow_matrix(v, amb)
            ys = [[_rq(rng) for _ in range(cm.nvars)] for _ in range(4)]
            degrees[f"{v}/{amb}"] = len(chow.pencil_pfaffian(cm, *ys)) - 1
    return CheckResult(8, "degree along a pencil", all(d == 10 for d in degrees.values()), str(degrees))


def five_point_instance(rng):
    """(five consistent pairs, a sixth pair on an epipolar conic, a generic sixth pair)."""
    while True:
        M = random_essential(rng, rational=True, bound=60).M
        five = []
        try:
            for _ in range(5):
                x = (_rq(rng), _rq(rng))
                five.append((x, conic_point(M, x, _rq(rng))))
            x6 = (_rq(rng), _rq(rng))
            on = (x6, conic_point(M, x6, _rq(rng)))
        except (ValueError, ZeroDivisionError):
            continue
        return M, five, on, (x6, (_rq(rng), _rq(rng)))


def check_five_point(instances: int = 20, seed: int = 13) -> CheckResult:
    from .detector import fivepoint_vanishing_check

    rng = np.random.default_rng(seed)
    cm = chow.load_chow_matrix("first", chow.ESS9)
    on_true = off_false = 0
    for _ in range(instances):
        _M, five, on, off = five_point_instance(rng)
        on_true += fivepoint_vanishing_check(five, on, cm=cm)
        off_false += not fivepoint_vanishing_check(five, off, cm=cm)
    ok = on_true == off_false == instances
    return CheckResult(9, "five-point splitting", ok, f"on-conic true {on_true}/{instances}; generic false {off_false}/{instances}")


def check_noise_law(trials: int = 100, seed: int = 42) -> CheckResult:
    from .experiment import REFERENCE_FIRST, REFERENCE_SECOND, run_sweep

    start = time.perf_counter()
    grid = list(range(1, 11))
    res = run_sweep(grid, trials, master_seed=seed)
    worst, slopes = 0.0, {}
    for v, ref in (("first", REFERENCE_FIRST), ("second", REFERENCE_SECOND)):
        for r in grid:
            if r >= 2 or (v, r) == ("second", 1):
                worst = max(worst, abs(res.mean(r, v) - ref[r]))
        slopes[v] = res.slope(v, 2, 10)
    anchors = {
        "first@4": res.mean(4, "first"),
        "first@8": res.mean(8, "first"),
        "second@1": res.mean(1, "second"),
    }
    ok = worst <= 0.5 and all(0.85 <= s <= 1.15 for s in slopes.values())
    detail = (
        f"max |mean - reference|={worst:.3f}; slopes={ {k: round(s, 3) for k, s in slopes.items()} }; "
        f"anchors={ {k: round(a, 3) for k, a in anchors.items()} }; {time.perf_counter() - start:.1f}s"
    )
    return CheckResult(10, "noise law", ok, detail)


def check_determinism() -> CheckResult:
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp, contextlib.redirect_stdout(io.StringIO()):
        tmp = Path(tmp)
        for k in (1, 2):
            main(["experiment", "--seed", "42", "--r-grid", "2:6:1", "--trials", "10", "--out-csv", str(tmp / f"run{k}.csv")])
        csv_same = filecmp.cmp(tmp / "run1.csv", tmp / "run2.csv", shallow=False) and filecmp.cmp(
            tmp / "run1_aggregate.csv", tmp / "run2_aggregate.csv", shallow=False
        )
        for k in (1, 2):
            _resolution.cache_clear()
            main(["build", "--out", str(tmp / f"build{k}")])
        names = sorted(p.name for p in (tmp / "build1").iterdir())
        build_same = names == sorted(p.name for p in (tmp / "build2").iterdir()) and all(
            filecmp.cmp(tmp / "build1" / n, tmp / "build2" / n, shallow=False) for n in names
        )
    return CheckResult(11, "determinism", csv_same and build_same, f"experiment CSVs identical={csv_same}; build files identical={build_same} ({len(names)} files)")


def check_support() -> CheckResult:
    reports = {v: verify_support(_resolution(v)) for v in VARIANTS}
    ok = all(r == {0: 0, 1: r[1], 2: 18, 3: 20, 4: 20} for r in reports.values())
    return CheckResult("S", "support ranks", ok, str(reports))


ALL_CHECKS = (
    check_resolution_shape,
    check_middle_symmetry,
    check_skew_symmetry,
    check_positive_control,
    check_negative_control,
    check_geometry,
    check_counting,
    check_degree,
    check_five_point,
    check_noise_law,
    check_determinism,
)

QUICK_CHECKS = (check_counting, check_positive_control, check_degree)


def run_checks(level: str = "quick"):
    checks = ALL_CHECKS if level == "full" else QUICK_CHECKS
    for check in checks:
        yield check()
    if level == "full":
        yield check_support()


__all__ = ["CheckResult", "ALL_CHECKS", "QUICK_CHECKS", "run_checks"]
