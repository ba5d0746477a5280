# The constants of the lower-bound curve and a numerical look at the lower inequality.

# %%
import numpy as np

from ternary_area.lower import (LOG2, f0, f0_critical_phi, f1, f2, lemma_minima, solve_constants, verify_base_case,
                                verify_lower_lemma)

c = solve_constants(1e-12)
print(c)
print("exponent", c.exponent)

# %%
# For each branch the minimum of f0 and of max(f1, f2) must not fall below delta.
for name, (m0, m12) in lemma_minima(c).items():
    print(f"{name:9s}  min f0 - delta = {m0 - c.delta:+.3e}   min max(f1,f2) - delta = {m12 - c.delta:+.3e}")
print("lower inequality:", verify_lower_lemma(c), " base case:", verify_base_case(c))

# %%
# f1 falls and f2 rises; they cross at phi = -log 2 on both branches.
phi = np.linspace(-3, 1, 9)
for tau in (c.sigma, 1 / c.sigma):
    print(np.round(f1(phi, tau, c), 4))
    print(np.round(f2(phi, tau, c), 4))
    print("crossing value", f1(-LOG2, tau, c), " f0 critical point", f0_critical_phi(tau, c),
          f0(f0_critical_phi(tau, c), tau, c))
