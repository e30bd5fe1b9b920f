# Six correspondences, two calibrated cameras: are they consistent?
#
# Each pair (x, y) gives one linear equation  (y, 1) M (x, 1)^T = 0  on the
# 3x3 essential matrix M.  Six pairs cut out a 3-dimensional space of
# candidate matrices, and that space meets the essential variety exactly
# when the pairs come from a real two-camera scene.  The test is a single
# polynomial: the Pfaffian of a 20x20 skew matrix whose entries are linear
# in the 84 maximal minors of the 6x9 data matrix Z.

from fractions import Fraction

import numpy as np

from essential_chow import build_Z, detect, dual_pluecker, load_chow_matrix
from essential_chow.detector import EXAMPLE_POSITIVE
from essential_chow.experiment import add_noise, sample_scene

# The data matrix of a consistent example, in exact rationals.
Z = build_Z(EXAMPLE_POSITIVE)
print("first row of Z:", [str(v) for v in Z[0]])

# 84 signed 6x6 minors = coordinates of the kernel plane of Z
q = dual_pluecker(Z)
print("nonzero minors:", sum(1 for v in q if v), "of", len(q))

# Substitute into the prebuilt Chow matrix and take the Pfaffian exactly.
cm = load_chow_matrix("first")
print("Pfaffian on consistent data:", cm.pfaffian_at(q))

# Break consistency by moving a single image point.
broken = list(EXAMPLE_POSITIVE)
(x, y) = broken[5]
broken[5] = (x, (y[0] + Fraction(1, 10), y[1]))
report = detect(broken, mode="exact")
print("after moving one point:", report.verdict, "Pfaffian =", report.pfaffian)

# With floating point data the Pfaffian is never exactly zero; instead the
# rank of the evaluated matrix drops from 20 to 18, so the ratio of the
# 18th to the 20th singular value is the signal.
rng = np.random.default_rng(0)
scene = sample_scene(rng)
for r in (2, 5, 8, 11):
    noisy = add_noise(scene.correspondences, r, rng)
    report = detect(noisy, mode="float")
    print(f"noise 1e-{r:<2d}  log10(sigma18/sigma20) = {report.log10_gap:6.2f}")

random_pairs = [(tuple(rng.uniform(-1, 1, 2)), tuple(rng.uniform(-1, 1, 2))) for _ in range(6)]
print("random pairs: log10 gap =", round(detect(random_pairs).log10_gap, 2))
