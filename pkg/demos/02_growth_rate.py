# How fast do the fronts grow from one level to the next?
#
# The smallest factor rho with front(l+1) containing rho * front(l) bounds the
# area of all later levels once it is certified. The ratio at level 18 -> 19
# gives an area exponent just below 1.051.

# %%
import time

from ternary_area.pareto import compute_fronts
from ternary_area.staircase import minimal_shift
from ternary_area.upper import exponent_of_factor

t = time.perf_counter()
fronts = compute_fronts(19)
print(f"fronts to level 19 in {time.perf_counter() - t:.1f}s; sizes {[len(f) for f in fronts]}")

# %%
for l in range(1, 19):
    rho = minimal_shift(fronts[l - 1].staircase(), fronts[l].staircase())
    rep = exponent_of_factor(rho)
    print(f"{l:2d} -> {l + 1:2d}: rho = {str(rho):>14s}  exponent {rep.exponent:.5f}")

# %%
# The level-to-level exponents keep falling; the lower-bound curve puts a floor under them.
from ternary_area.lower import solve_constants

print("lower-bound exponent", solve_constants().exponent)
