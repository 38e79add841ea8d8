"""Uniform mixing time against its spectral and isoperimetric bounds.

The exact mixing time comes from the heat kernel.  Three upper bounds
sit above it: the one-line relaxation-time bound, the integral of the
inverse spectral profile, and the Cheeger-squared route through the
isoperimetric profile.  The spectral-profile integral is usually the
tightest of the three.
"""

from hopwalk.isoperimetry import cheeger_exact
from hopwalk.pointprocess import sample_poisson
from hopwalk.spectral import (
    mixing_bound_profile_integral,
    mixing_bound_simple,
    mixing_time_exact,
    spectral_gap,
    spectral_profile_exact,
)
from hopwalk.walk import build_generator

xi = sample_poisson(1.0, 2, 3.2, seed=5)
print(f"instance: {len(xi)} points, alpha = 1\n")

for model in (2, 3):
    gen = build_generator(xi, 1.0, model)
    lam, _ = spectral_gap(gen)
    phi, _ = cheeger_exact(gen)
    tau = mixing_time_exact(gen)
    simple = mixing_bound_simple(1.0 / lam, gen.nu_star)
    prof = spectral_profile_exact(gen)
    integral = mixing_bound_profile_integral(prof, gen.nu_star, phi)
    print(f"model {model}:")
    print(f"  gap lambda_1 = {lam:.5f}, Cheeger Phi = {phi:.5f}")
    print(f"  Phi^2/2 = {0.5 * phi ** 2:.5f} <= lambda_1 "
          f"<= 2 Phi = {2 * phi:.5f}")
    print(f"  tau = {tau:.3f} <= profile integral {integral:.3f} "
          f"<= simple bound {simple:.3f}"
          if integral <= simple else
          f"  tau = {tau:.3f} <= bounds: profile {integral:.3f}, "
          f"simple {simple:.3f}")
    print("  spectral profile steps (mass r : Lambda(r)):")
    for r, v in list(zip(prof.breakpoints, prof.values))[:4]:
        print(f"    {r:.4f} : {v:.5f}")
    print()
