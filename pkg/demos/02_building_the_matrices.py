# Where the 20x20 matrices come from.
#
# The variety of symmetric 4x4 matrices of rank <= 2 carries Ulrich sheaves
# whose minimal free resolutions are linear with ranks 20, 60, 60, 20 and
# a symmetric middle map.  The maps are equivariant for GL(4), so every
# block is a Pieri map between Schur modules, computed here as the kernel
# of a linear system.  Wedging the first map, the middle map and the first
# map again gives the skew Chow matrix; substituting the traceless
# symmetric embedding of 3x3 matrices moves it to the essential variety.

import time

import numpy as np

from essential_chow import chow, pieri
from essential_chow.schur import schur_dimension

for variant in pieri.VARIANTS:
    f, g, gd = pieri.RESOLUTION_SHAPES[variant]
    dims = [schur_dimension(s, 4) for s in g]
    print(f"{variant}: F = S{f} (dim {schur_dimension(f, 4)}), G = {g} (dims {dims}), G* = {gd}")

start = time.perf_counter()
res = pieri.build_resolution("second")
print(f"\nbuilt the second resolution in {time.perf_counter() - start:.1f}s")
print("alpha:", res.Dalpha.shape, " phi (dual bases):", res.Dphi_sym.shape, " symmetric:", res.Dphi_sym.is_symmetric())
print("alpha . phi == 0:", pieri.complex_residual(res) == 0)
print("block rescaling factors:", {k: str(v) for k, v in res.rescaling.items()})

# The cokernel of alpha lives exactly on the rank <= 2 locus.
print("rank of alpha at diag(1^r, 0^(4-r)):", pieri.verify_support(res))

# Its Hilbert function is that of a free module of rank 20 in 7 variables.
print("Hilbert function d=0..2:", [pieri.hilbert_function_coker(res.Dalpha, d) for d in range(3)])

sym = chow.chow_matrix_symmetric("second", res)
ess = chow.pullback_to_essential(sym)
print("\nChow matrix over 120 coordinates, skew:", sym.is_skew(), sym.stats())
print("pulled back to 84 coordinates, skew:", ess.is_skew(), ess.stats())

# Both variants define the same hypersurface: the Pfaffians differ by a constant.
rng = np.random.default_rng(1)
plane = rng.integers(-5, 6, size=(3, 9)).tolist()
p = chow.pluecker_coordinates(plane)
first = chow.load_chow_matrix("first")
print("\nPf(first) / Pf(second) on a random plane:", first.pfaffian_at(p) / ess.pfaffian_at(p))
print("degree along a pencil of planes:", len(chow.pencil_pfaffian(first, *rng.integers(-5, 6, size=(4, 9)).tolist())) - 1)
