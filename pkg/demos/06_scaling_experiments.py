"""Scaling sweeps: how the relaxation time grows with the box.

A sweep runs one cell per (box side, seed), writes a CSV, and fits
log-log slopes of per-L medians.  With alpha below the dimension the
relaxation time grows diffusively (slope near 2); at alpha equal to
the dimension the density drives the behavior, which the transition
scan exposes by varying rho at fixed L.

This demo uses deliberately small boxes so it finishes in seconds; the
acceptance-scale parameters live in tests/test_acceptance.py.
"""

import tempfile
from pathlib import Path

from hopwalk.experiments import (
    ExperimentConfig,
    a2_check,
    fit_exponent,
    run_scaling,
    transition_scan,
)

outdir = Path(tempfile.mkdtemp(prefix="hopwalk_demo_"))

cfg = ExperimentConfig(dim=2, alpha=1.0, rho=1.0, model=1,
                       L_list=(6, 9, 12, 18), seeds=tuple(range(8)),
                       output_path=str(outdir / "scaling.csv"))
rows = run_scaling(cfg)
fit = fit_exponent(rows, "poincare")
print(f"alpha = 1 sweep ({len(rows)} cells): relaxation-time slope "
      f"{fit.slope:.2f} (r^2 {fit.r_squared:.3f})")
for L, med in fit.per_L_medians:
    print(f"  L = {L:2d}: median gamma = {med:.3f}")

scan_cfg = ExperimentConfig(dim=2, alpha=2.0, rho=1.0, model=1,
                            L_list=(12,), rho_list=(0.5, 1.0, 2.0),
                            seeds=tuple(range(8)),
                            output_path=str(outdir / "transition.csv"))
_rows, verdict = transition_scan(scan_cfg)
print(f"\ntransition scan at alpha = dim = 2, L = 12:")
print(f"  median Phi_hat * L over rho {verdict['rho_list']}: "
      + ", ".join(f"{v:.3f}" for v in verdict["phi_times_L_medians"]))
print(f"  increasing with density: {verdict['phi_increasing']}")

a2_cfg = ExperimentConfig(dim=2, alpha=1.0, rho=1.0, model=1,
                          L_list=(12,), ell_list=(4, 8),
                          seeds=tuple(range(50)),
                          output_path=str(outdir / "a2.csv"))
_rows, summary = a2_check(a2_cfg)
print(f"\nenvironment regularity: mean S/ell^2 = "
      + ", ".join(f"{summary['per_ell'][e]['mean']:.3f}"
                  for e in a2_cfg.ell_list)
      + f"; CSVs in {outdir}")
