# Iterate P(S) = shift(N_inf(S), -delta) from the lower-bound curve, then
# freeze a rational staircase and check it exactly.

# %%
import time

import numpy as np

from ternary_area.fixedpoint import (extract_certificate, fit_slopes, iterate_to_fixed_point, seed_boundary,
                                     verify_certificate)
from ternary_area.lower import solve_constants

c = solve_constants(1e-12)
seed = seed_boundary(c)
t = time.perf_counter()
res = iterate_to_fixed_point(seed, c.delta, tol=1e-9,
                             callback=lambda k, d, r, g: k % 100 == 0 and print(f"  {k}: residual {r:.2e}"))
print(f"{res.iterations} iterations, {time.perf_counter() - t:.1f}s, rate {res.delta:.12f}")
print("tail slopes", fit_slopes(res.boundary.omega, res.boundary.eta), "expected", -c.sigma, -1 / c.sigma)

# %%
# The limit differs from the seed only near the kink.
gap = res.boundary.eta - seed.eta
print("largest lift", gap.max(), "at omega", res.boundary.omega[np.argmax(gap)])

# %%
cert = extract_certificate(res.boundary, res.delta + 1e-4)
rep = verify_certificate(cert)
print(f"{len(cert.points)} points, rho = {cert.rho}, {rep.checked} targets, passed {rep.passed}")
print(f"exponent {rep.exponent.exponent:.6f}, with epsilon margin {rep.exponent_with_margin.exponent:.6f}")
