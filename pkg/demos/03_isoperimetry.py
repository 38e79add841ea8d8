"""Conductance, the Cheeger constant, and isoperimetric profiles.

On instances small enough to enumerate, the Cheeger constant is exact.
Two cheap upper bounds bracket it from above: a spectral sweep cut and
a trap search over isolated singletons and pairs.  The profile phi(t)
refines the constant by constraining the admissible set size.
"""

import math

from hopwalk.isoperimetry import (
    cheeger_exact,
    cheeger_sweep_upper,
    cut_conductance,
    hybrid_profile_exact,
    iso_profile_exact,
    trap_upper_bound,
)
from hopwalk.pointprocess import sample_poisson
from hopwalk.walk import build_generator

xi = sample_poisson(1.0, 2, 3.2, seed=17)
print(f"instance: {len(xi)} points, alpha = 1\n")

for model in (1, 2, 3):
    gen = build_generator(xi, 1.0, model)
    phi, cut = cheeger_exact(gen)
    sweep, _ = cheeger_sweep_upper(gen)
    trap, witness = trap_upper_bound(xi, gen)
    print(f"model {model}: Phi = {phi:.5f} at cut {cut}, "
          f"sweep bound {sweep:.5f}, trap bound {trap:.5f} at {witness}")

gen = build_generator(xi, 1.0, 2)
phi, cut = cheeger_exact(gen)
rep = cut_conductance(gen, cut)
print(f"\noptimal model-2 cut: flow {rep.flow:.5f} over weight "
      f"{rep.weight:.5f} ({100 * rep.pi_mass:.0f}% of stationary mass)")

grid = (0.1, 0.25, 0.5, 0.75, 1.0)
prof = iso_profile_exact(gen, grid)
print("\nisoperimetric profile (weight-fraction constraint):")
for t, v in zip(grid, prof.values):
    print(f"  phi({t:4}) = {'inf' if math.isinf(v) else f'{v:.5f}'}")

gen3 = build_generator(xi, 1.0, 3)
hyb = hybrid_profile_exact(gen3, grid)
print("\nhybrid profile (model-3 weights, counting constraint):")
for t, v in zip(grid, hyb.values):
    print(f"  psi({t:4}) = {'inf' if math.isinf(v) else f'{v:.5f}'}")
