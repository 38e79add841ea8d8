"""Sampling point processes and their local interaction statistics.

Three samplers share one interface: homogeneous Poisson, inhomogeneous
Poisson (thinning against an intensity bound), and a p-thinned integer
lattice.  R_A measures the interaction mass a sub-box exchanges with the
whole configuration; S_ell is its unit-cube coarse-graining.
"""

import numpy as np

from hopwalk.pointprocess import (
    r_statistic,
    s_statistic,
    sample_inhomogeneous_poisson,
    sample_poisson,
    sample_thinned_lattice,
)

rho, dim, side = 1.0, 2, 16.0

xi = sample_poisson(rho, dim, side, seed=0)
print(f"Poisson(rho={rho}) in a side-{side} box: {len(xi)} points "
      f"(expected {rho * side ** dim:.0f})")

lattice = sample_thinned_lattice(spacing=1.0, keep_prob=0.5, dim=dim,
                                 side=side, seed=0)
print(f"half-thinned unit lattice: {len(lattice)} of "
      f"{int(side + 1) ** dim} sites kept")

ramp = sample_inhomogeneous_poisson(
    lambda x: rho * min(1.0, np.linalg.norm(x) / side), rho, dim, side, seed=0)
print(f"radial-ramp intensity: {len(ramp)} points "
      f"(thinner near the center)")

# R of the centered quarter box; never below its point count
half = side / 4
r_val = r_statistic(xi, [-half] * dim, [half] * dim, alpha=1.0)
count = int(np.sum(np.all(np.abs(xi.points) <= half, axis=1)))
print(f"\nR over the centered side-{2 * half:.0f} box: {r_val:.3f} "
      f"(>= point count {count})")

for ell in (4, 8):
    s_val = s_statistic(xi, ell, alpha=1.0)
    print(f"S_{ell} / {ell}^{dim} = {s_val / ell ** dim:.3f}")
