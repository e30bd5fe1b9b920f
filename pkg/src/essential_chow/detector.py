"""Decide whether six image correspondences come from two calibrated cameras.

The six epipolar constraints ``(y1, y2, 1) M (x1, x2, 1)^T = 0`` form a 6x9
matrix ``Z``; its kernel is a plane in the space of 3x3 matrices whose
Pluecker coordinates are the signed complementary 6x6 minors of ``Z``.
Substituting them into a Chow matrix gives a 20x20 skew matrix that is
singular exactly when the plane meets the essential variety.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .chow import ESS9, ChowMatrix, load_chow_matrix, triples
from .exact_linalg import det_exact, singular_values

EXACT = "exact"
FLOAT = "float"

EXACT_CONSISTENT = "ExactConsistent"
SIGNAL = "Signal"
DEGENERATE = "Degenerate"

DEGENERACY_TOLERANCE = 1e-13

Correspondence = tuple[Sequence, Sequence]  # (x, y), each a 2-vector


def build_Z(correspondences) -> list[list]:
    """Rows ``(y1 x1, y1 x2, y1, y2 x1, y2 x2, y2, x1, x2, 1)``, matching ``m11..m33``."""
    rows = []
    for x, y in correspondences:
        x1, x2 = x
        y1, y2 = y
        one = 1 if all(isinstance(v, (int, Fraction)) for v in (x1, x2, y1, y2)) else 1.0
        rows.append([y1 * x1, y1 * x2, y1 * one, y2 * x1, y2 * x2, y2 * one, x1 * one, x2 * one, one])
    return rows


def _complement(t) -> list[int]:
    return [c for c in range(9) if c not in t]


def pluecker_sign(t) -> int:
    """Sign relating the complementary minor of ``Z`` to the kernel plane's Pluecker coordinate."""
    return -1 if sum(t) % 2 else 1


def dual_pluecker(z, exact: Optional[bool] = None) -> list:
    """84 values ``q_abc = (-1)^(a+b+c) det(Z without columns a, b, c)`` in triple order."""
    arr = np.asarray(z, dtype=object)
    if arr.shape != (6, 9):
        raise ValueError("Z must be 6x9")
    if exact is None:
        exact = all(isinstance(v, (int, Fraction)) for v in arr.flat)
    if exact:
        return [pluecker_sign(t) * det_exact(arr[:, _complement(t)].tolist()) for t in triples(9)]
    zf = arr.astype(float)
    if not np.all(np.isfinite(zf)):
        raise ValueError("non-finite correspondence data")
    minors = np.linalg.det(np.stack([zf[:, _complement(t)] for t in triples(9)]))
    signs = np.array([pluecker_sign(t) for t in triples(9)], dtype=float)
    return list(signs * minors)


def hadamard_bound(z) -> float:
    """Upper bound for every 6x6 minor: the product of the row norms of ``Z``."""
    zf = np.asarray(z, dtype=float)
    return float(np.prod(np.linalg.norm(zf, axis=1)))


def evaluate_chow(cm: ChowMatrix, q) -> np.ndarray:
    if cm.ambient != ESS9:
        raise ValueError("the detector needs a Chow matrix over the essential coordinates")
    return cm.evaluate(q)


def gap_ratio(spectrum) -> float:
    """``sigma_18 / sigma_20`` (singular values in descending order)."""
    s18, s20 = spectrum[17], spectrum[19]
    if s20 == 0:
        return math.inf
    return float(s18 / s20)


@dataclass
class DetectionReport:
    verdict: str
    pfaffian: Optional[Fraction] = None
    spectrum: Optional[np.ndarray] = None
    gap_ratio: Optional[float] = None
    variant: str = ""
    mode: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def log10_gap(self) -> Optional[float]:
        if self.gap_ratio is None:
            return None
        return math.inf if math.isinf(self.gap_ratio) else math.log10(self.gap_ratio)

    def to_json(self) -> dict:
        def finite(x):
            return None if x is None or not math.isfinite(x) else x

        return {
            "verdict": self.verdict,
            "pfaffian": None if self.pfaffian is None else str(self.pfaffian),
            "gap_ratio": finite(self.gap_ratio),
            "log10_gap": finite(self.log10_gap),
            "variant": self.variant,
            "mode": self.mode,
        }


def _validate(correspondences) -> list[Correspondence]:
    pairs = [(tuple(x), tuple(y)) for x, y in correspondences]
    if len(pairs) != 6 or any(len(x) != 2 or len(y) != 2 for x, y in pairs):
        raise ValueError("need exactly six correspondences of 2-vectors")
    for x, y in pairs:
        for v in x + y:
            if not isinstance(v, (int, Fraction)) and not math.isfinite(float(v)):
                raise ValueError("non-finite correspondence data")
    return pairs


def detect(correspondences, mode: str = FLOAT, variant: str = "first", cm: Optional[ChowMatrix] = None) -> DetectionReport:
    """Exact Pfaffian test (rational data) or the ``sigma_18 / sigma_20`` spectral signal."""
    pairs = _validate(correspondences)
    cm = cm or load_chow_matrix(variant, ESS9)
    if mode == EXACT:
        if not all(isinstance(v, (int, Fraction)) for x, y in pairs for v in x + y):
            raise ValueError("exact mode needs rational correspondences")
        z = build_Z(pairs)
        q = dual_pluecker(z, exact=True)
        if not any(q):
            return DetectionReport(DEGENERATE, Fraction(0), variant=cm.variant, mode=mode, notes=["rank(Z) < 6"])
        pf = cm.pfaffian_at(q)
        matrix = cm.evaluate([float(v) for v in q])
        spectrum = singular_values(matrix)
        gap = gap_ratio(spectrum)
        verdict = EXACT_CONSISTENT if pf == 0 else SIGNAL
        return DetectionReport(verdict, pf, spectrum, gap, cm.variant, mode)
    if mode != FLOAT:
        raise ValueError(f"unknown mode {mode!r}")
    z = build_Z([(tuple(float(v) for v in x), tuple(float(v) for v in y)) for x, y in pairs])
    q = np.array(dual_pluecker(z, exact=False))
    if np.max(np.abs(q)) < DEGENERACY_TOLERANCE * hadamard_bound(z):
        return DetectionReport(DEGENERATE, variant=cm.variant, mode=mode, notes=["rank(Z) < 6 numerically"])
    spectrum = singular_values(evaluate_chow(cm, q))
    gap = gap_ratio(spectrum)
    return DetectionReport(SIGNAL, None, spectrum, gap, cm.variant, mode)


def conic_point(M, x, free=Fraction(1, 3)) -> tuple:
    """A ``y`` with ``(y1, y2, 1) M (x1, x2, 1)^T = 0``.

    ``y1 = free`` and ``y2`` is solved for; if the epipolar line is
    vertical, ``y2 = free`` and ``y1`` is solved for instead.
    """
    xt = [x[0], x[1], 1]
    line = [sum(M[i][j] * xt[j] for j in range(3)) for i in range(3)]  # y . line = 0
    if line[1] != 0:
        return (free, -(line[0] * free + line[2]) / line[1])
    if line[0] != 0:
        return (-(line[1] * free + line[2]) / line[0], free)
    raise ValueError("the epipolar line is at infinity")


def fivepoint_vanishing_check(five, sixth, variant: str = "first", cm: Optional[ChowMatrix] = None) -> bool:
    """True iff the exact detector reports consistency on ``five + [sixth]``."""
    report = detect(list(five) + [sixth], mode=EXACT, variant=variant, cm=cm)
    return report.verdict == EXACT_CONSISTENT


def parse_value(text: str):
    """``p/q`` or integer strings become exact rationals; decimals become floats."""
    text = text.strip()
    if "/" in text or text.lstrip("+-").isdigit():
        return Fraction(text)
    return float(text)


def read_correspondences_csv(path) -> list[Correspondence]:
    """Six data rows with columns ``x1, x2, y1, y2`` (header row required)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"x1", "x2", "y1", "y2"} - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"missing columns: {sorted(missing)}")
        rows = [((parse_value(r["x1"]), parse_value(r["x2"])), (parse_value(r["y1"]), parse_value(r["y2"]))) for r in reader]
    if len(rows) != 6:
        raise ValueError(f"expected six correspondences, found {len(rows)}")
    return rows


def is_exact_data(correspondences) -> bool:
    return all(isinstance(v, (int, Fraction)) for x, y in correspondences for v in tuple(x) + tuple(y))


EXAMPLE_POSITIVE = [
    ((0, 0), (Fraction(8, 11), Fraction(16, 11))),
    ((1, -1), (Fraction(7, 22), Fraction(5, 22))),
    ((0, Fraction(-1, 2)), (Fraction(8, 29), Fraction(34, 29))),
    ((-3, 0), (Fraction(17, 20), -1)),
    ((Fraction(3, 2), Fraction(-5, 2)), (Fraction(1, 7), Fraction(1, 7))),
    ((1, Fraction(1, 7)), (Fraction(9, 4), Fraction(3, 4))),
]
"""Six exact correspondences generated by two calibrated cameras (a consistent instance)."""
