# How sharply does the spectral signal separate noise levels?
#
# For each noise exponent r, image coordinates are perturbed by
# unif[-10^-r, 10^-r]; the mean of log10(sigma18 / sigma20) should grow by
# about one unit per unit of r until double precision saturates it.

import numpy as np

from essential_chow.experiment import REFERENCE_FIRST, REFERENCE_SECOND, run_sweep

grid = [1, 2, 4, 6, 8, 10, 12, 14]
result = run_sweep(grid, trials=30, master_seed=42)

print(" r   first  (ref)    second (ref)")
for r in grid:
    print(f"{r:2d}  {result.mean(r, 'first'):6.2f} ({REFERENCE_FIRST[r]:5.2f})  {result.mean(r, 'second'):6.2f} ({REFERENCE_SECOND[r]:5.2f})")

print("\nslope over r = 2..10:", {v: round(result.slope(v, 2, 10), 3) for v in ("first", "second")})
spread = np.mean([result.sd(r, "first") for r in grid])
print(f"average trial-to-trial sd (first): {spread:.2f}")
