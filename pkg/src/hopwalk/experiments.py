"""Experiment harness: scaling sweeps over the box side, density scans at
the critical decay exponent, and environment-regularity statistics.

Every sweep is deterministic given its configuration (seeds included) at
any worker count: cells are pure functions of (parameters, L, rho, seed)
and rows are written in configuration order.  A failing cell never aborts
a sweep; its row carries a status code instead.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from . import isoperimetry, pointprocess, spectral, walk

CSV_HEADER = ("L,seed,n,model,alpha,rho,gap,poincare,nu_star,tau,bound_simple,"
              "bound_profile,phi_sweep,phi_trap,remark1_ratio,status")

# per-cell spectral-profile integrals are only attempted below this size
_PROFILE_CELL_LIMIT = 14


class ConfigError(ValueError):
    """Malformed experiment configuration."""


class InsufficientDataError(ValueError):
    """Not enough valid cells for the requested fit."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat description of one sweep; round-trips through key=value text."""

    dim: int = 2
    alpha: float = 1.0
    rho: float = 1.0
    model: int = 1
    L_list: tuple = ()
    seeds: tuple = ()
    cutoff: float = walk.DEFAULT_CUTOFF
    size_limits: tuple = (isoperimetry.ENUMERATION_LIMIT, spectral.DENSE_LIMIT)
    process: str = "poisson"
    output_path: str = "out.csv"
    rho_list: tuple = ()
    ell_list: tuple = ()
    spacing: float = 1.0
    keep_prob: float = 0.5
    r_gamma: float = 10.0
    workers: int = 1

    def validate(self) -> "ExperimentConfig":
        if not self.L_list or list(self.L_list) != sorted(set(self.L_list)):
            raise ConfigError("L_list must be nonempty and strictly increasing")
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be nonempty and distinct")
        if self.model not in walk.MODELS:
            raise ConfigError(f"model must be in {walk.MODELS}")
        if self.process not in ("poisson", "thinned_lattice", "inhomogeneous"):
            raise ConfigError(f"unknown process {self.process!r}")
        if self.rho <= 0 or self.alpha <= 0 or not 0 <= self.cutoff < 1:
            raise ConfigError("rho and alpha must be positive, cutoff in [0, 1)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self


_LIST_FIELDS = {"L_list": int, "seeds": int, "size_limits": int,
                "rho_list": float, "ell_list": int}
_INT_FIELDS = {"dim", "model", "workers"}
_FLOAT_FIELDS = {"alpha", "rho", "cutoff", "spacing", "keep_prob", "r_gamma"}


def parse_config(text: str) -> ExperimentConfig:
    """Parse key=value lines ('#' comments, comma-separated lists)."""
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _LIST_FIELDS:
            conv = _LIST_FIELDS[key]
            values[key] = tuple(conv(v.strip()) for v in val.split(",") if v.strip())
        elif key in _INT_FIELDS:
            values[key] = int(val)
        elif key in _FLOAT_FIELDS:
            values[key] = float(val)
        else:
            values[key] = val
    return ExperimentConfig(**values)


def serialize_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in fields(ExperimentConfig):
        v = getattr(cfg, f.name)
        if f.name in _LIST_FIELDS:
            v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())


def _sample(cfg: ExperimentConfig, side: float, seed: int) -> pointprocess.PointSet:
    if cfg.process == "poisson":
        return pointprocess.sample_poisson(cfg.rho, cfg.dim, side, seed)
    if cfg.process == "thinned_lattice":
        return pointprocess.sample_thinned_lattice(cfg.spacing, cfg.keep_prob,
                                                   cfg.dim, side, seed)
    # built-in inhomogeneous profile: radial ramp from rho/2 to rho
    half_diag = side * math.sqrt(cfg.dim) / 2.0

    def intensity(x):
        return cfg.rho * (0.5 + 0.5 * min(1.0, np.linalg.norm(x) / half_diag))

    return pointprocess.sample_inhomogeneous_poisson(intensity, cfg.rho,
                                                     cfg.dim, side, seed)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.17g}"
    return str(v)


def _scaling_cell(args) -> dict:
    """One (L, rho, seed) cell; never raises, reports a status instead."""
    cfg, L, rho, seed = args
    cfg = replace(cfg, rho=rho)
    enum_limit, dense_limit = cfg.size_limits
    row = {"L": L, "seed": seed, "n": 0, "model": cfg.model, "alpha": cfg.alpha,
           "rho": rho, "gap": None, "poincare": None, "nu_star": None,
           "tau": None, "bound_simple": None, "bound_profile": None,
           "phi_sweep": None, "phi_trap": None, "remark1_ratio": None,
           "status": "ok"}
    try:
        xi = _sample(cfg, float(L), seed)
        row["n"] = len(xi)
        if len(xi) < 2:
            row["status"] = "degenerate"
            return row
        gen = walk.build_generator(xi, cfg.alpha, cfg.model, cfg.cutoff)
        row["nu_star"] = gen.nu_star
        energy, variance = walk.dirichlet_form(
            gen, np.linalg.norm(xi.points, axis=1))
        if energy > 0:
            row["remark1_ratio"] = variance / energy
        if len(xi) >= 3:
            phi_trap, _ = isoperimetry.trap_upper_bound(xi, gen)
            row["phi_trap"] = phi_trap
        try:
            gap, vec = spectral.spectral_gap(gen, dense_limit=dense_limit)
            row["gap"] = gap
            row["poincare"] = 1.0 / gap
            row["bound_simple"] = spectral.mixing_bound_simple(1.0 / gap,
                                                              gen.nu_star)
            phi_sweep, _ = isoperimetry.cheeger_sweep_upper(gen, eigvec=vec)
            row["phi_sweep"] = phi_sweep
            if len(xi) <= dense_limit:
                row["tau"] = spectral.mixing_time_exact(gen,
                                                        dense_limit=dense_limit)
            if cfg.model in (2, 3) and len(xi) <= min(_PROFILE_CELL_LIMIT,
                                                      enum_limit):
                profile = spectral.spectral_profile_exact(gen)
                phi_exact, _ = isoperimetry.cheeger_exact(gen)
                row["bound_profile"] = spectral.mixing_bound_profile_integral(
                    profile, gen.nu_star, phi_exact)
        except spectral.DisconnectedStateSpaceError:
            row["status"] = "disconnected"
    except walk.DegenerateModelError:
        row["status"] = "degenerate"
    except Exception as exc:  # crash isolation: record, keep sweeping
        row["status"] = f"error:{type(exc).__name__}"
    return row


def _run_cells(cfg: ExperimentConfig, tasks: list) -> list:
    if cfg.workers == 1:
        return [_scaling_cell(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_scaling_cell, tasks))


def rows_to_csv(rows: list, path) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[k]) for k in CSV_HEADER.split(",")) + "\n")


def run_scaling(cfg: ExperimentConfig, write: bool = True) -> list:
    """Sweep (L, seed) cells at fixed rho; returns rows in config order and
    optionally writes the CSV at cfg.output_path."""
    cfg.validate()
    tasks = [(cfg, L, cfg.rho, seed) for L in cfg.L_list for seed in cfg.seeds]
    rows = _run_cells(cfg, tasks)
    if write:
        rows_to_csv(rows, cfg.output_path)
    return rows


@dataclass(frozen=True)
class ScalingFit:
    """Ordinary least squares of log(median statistic) on log(L)."""

    slope: float
    intercept: float
    r_squared: float
    per_L_medians: tuple


def _medians(rows: list, statistic: str, key: str = "L") -> list:
    per = {}
    for row in rows:
        v = row.get(statistic)
        if v is not None and not (isinstance(v, float) and not math.isfinite(v)):
            per.setdefault(row[key], []).append(v)
    return sorted((k, float(np.median(v))) for k, v in per.items())


def fit_exponent(rows: list, statistic: str) -> ScalingFit:
    """Log-log slope of the per-L median of one statistic column."""
    med = _medians(rows, statistic)
    med = [(L, m) for L, m in med if m > 0]
    if len(med) < 3:
        raise InsufficientDataError(
            f"need >= 3 box sides with valid {statistic!r} cells, got {len(med)}")
    x = np.log([L for L, _ in med])
    y = np.log([m for _, m in med])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return ScalingFit(slope=float(slope), intercept=float(intercept),
                      r_squared=min(1.0, max(0.0, r2)),
                      per_L_medians=tuple(med))


def _phi_hat(row: dict):
    cands = [row[k] for k in ("phi_sweep", "phi_trap") if row[k] is not None]
    return min(cands) if cands else None


def _gamma_hat(row: dict):
    cands = []
    if row["poincare"] is not None:
        cands.append(row["poincare"])
    if row["phi_trap"] is not None and row["phi_trap"] > 0:
        cands.append(0.5 / row["phi_trap"])
    return max(cands) if cands else None


def transition_scan(cfg: ExperimentConfig, write: bool = True) -> tuple:
    """Scan rho at fixed L with alpha equal to the dimension.

    Returns (rows, verdict) where the verdict reports whether the medians
    of phi_hat * L and of gamma_hat / L^2 move monotonically in the
    diffusive direction as rho grows.
    """
    cfg.validate()
    if cfg.alpha != cfg.dim:
        raise ConfigError(f"transition scan requires alpha == dim "
                          f"({cfg.alpha} != {cfg.dim})")
    if not cfg.rho_list:
        raise ConfigError("transition scan requires rho_list")
    L = cfg.L_list[0]
    tasks = [(cfg, L, rho, seed) for rho in cfg.rho_list for seed in cfg.seeds]
    rows = _run_cells(cfg, tasks)
    if write:
        rows_to_csv(rows, cfg.output_path)
    phi_med, gamma_med = [], []
    for rho in cfg.rho_list:
        sub = [r for r in rows if r["rho"] == rho]
        phis = [_phi_hat(r) * L for r in sub if _phi_hat(r) is not None]
        gams = [_gamma_hat(r) / L ** 2 for r in sub if _gamma_hat(r) is not None]
        phi_med.append(float(np.median(phis)) if phis else math.nan)
        gamma_med.append(float(np.median(gams)) if gams else math.nan)
    verdict = {
        "rho_list": tuple(cfg.rho_list),
        "phi_times_L_medians": tuple(phi_med),
        "gamma_over_L2_medians": tuple(gamma_med),
        "trivial": len(cfg.rho_list) < 2,
        "phi_increasing": all(a < b for a, b in zip(phi_med, phi_med[1:])),
        "gamma_decreasing": all(a > b for a, b in zip(gamma_med, gamma_med[1:])),
    }
    return rows, verdict


A2_CSV_HEADER = "ell,seed,n,S,R,status"


def _a2_cell(args) -> dict:
    cfg, ell, seed = args
    row = {"ell": ell, "seed": seed, "n": 0, "S": None, "R": None, "status": "ok"}
    try:
        # pad the sampled box so every cube of the ell-window sees its full
        # interaction neighborhood; beyond the pad the kernel is below 1e-6
        pad = math.ceil((6 * math.log(10)) ** (1.0 / cfg.alpha))
        xi = _sample(cfg, float(ell + 2 * pad), seed)
        half = ell / 2.0
        row["n"] = int(np.sum(np.all(np.abs(xi.points) <= half, axis=1)))
        row["S"] = pointprocess.s_statistic(xi, ell, cfg.alpha)
        row["R"] = pointprocess.r_statistic(xi, [-half] * cfg.dim,
                                            [half] * cfg.dim, cfg.alpha)
    except Exception as exc:
        row["status"] = f"error:{type(exc).__name__}"
    return row


def a2_check(cfg: ExperimentConfig, write: bool = True) -> tuple:
    """Regularity statistics of the sampled environment across scales.

    Returns (rows, summary) where the summary holds mean and variance of
    S/ell^d per ell, the fitted log-log decay slope of Var(S/ell^d), and
    the empirical frequency of R exceeding r_gamma * ell^d.
    """
    cfg.validate()
    if cfg.process not in ("poisson", "thinned_lattice"):
        raise ConfigError("a2 check requires a Poisson-dominated process")
    if not cfg.ell_list:
        raise ConfigError("a2 check requires ell_list")
    tasks = [(cfg, ell, seed) for ell in cfg.ell_list for seed in cfg.seeds]
    if cfg.workers == 1:
        rows = [_a2_cell(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_a2_cell, tasks))
    if write:
        with open(cfg.output_path, "w") as fh:
            fh.write(A2_CSV_HEADER + "\n")
            for row in rows:
                fh.write(",".join(_fmt(row[k])
                                  for k in A2_CSV_HEADER.split(",")) + "\n")
    summary = {"per_ell": {}, "tail_freq": {}}
    var_points = []
    for ell in cfg.ell_list:
        vals = [r["S"] / ell ** cfg.dim for r in rows
                if r["ell"] == ell and r["S"] is not None]
        rvals = [r["R"] for r in rows if r["ell"] == ell and r["R"] is not None]
        mean = float(np.mean(vals))
        var = float(np.var(vals, ddof=1)) if len(vals) > 1 else math.nan
        summary["per_ell"][ell] = {"mean": mean, "var": var}
        summary["tail_freq"][ell] = float(np.mean(
            [v >= cfg.r_gamma * ell ** cfg.dim for v in rvals]))
        if var > 0:
            var_points.append((ell, var))
    if len(var_points) >= 3:
        x = np.log([p[0] for p in var_points])
        y = np.log([p[1] for p in var_points])
        summary["var_decay_slope"] = float(np.polyfit(x, y, 1)[0])
    else:
        summary["var_decay_slope"] = math.nan
    return rows, summary
