"""Spectral gaps, spectral profiles, heat kernels and uniform mixing times.

The generator is analyzed through its symmetrization in the stationary
inner product: a dense full eigensolve below DENSE_LIMIT states, and a
preconditioned iterative extremal eigensolve (deflating the known constant
mode) above it.  Mixing times are located by bisection on the uniform
relative distance of the heat kernel to stationarity, which is
nonincreasing in time for reversible chains.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, asdict

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .pointprocess import InvalidParameterError
from .walk import WalkGenerator

DENSE_LIMIT = 400
PROFILE_ENUM_LIMIT = 18

INF = float("inf")


class DisconnectedStateSpaceError(ValueError):
    """The stored rate graph is reducible; eigen-quantities are undefined."""

    def __init__(self, labels):
        self.labels = np.asarray(labels)
        comps = [np.flatnonzero(self.labels == c).tolist()
                 for c in range(self.labels.max() + 1)]
        super().__init__(f"state space is disconnected; components: {comps}")


class SizeLimitError(ValueError):
    """Instance too large for the requested dense computation."""


@dataclass(frozen=True)
class SpectralProfile:
    """Right-continuous nonincreasing step function r -> worst restricted
    eigenvalue over subsets of stationary mass at most r."""

    breakpoints: tuple
    values: tuple
    ground_states_sign_definite: bool = True

    def __call__(self, r: float) -> float:
        if r < self.breakpoints[0]:
            raise InvalidParameterError(
                f"r={r} below the first breakpoint {self.breakpoints[0]}")
        i = int(np.searchsorted(self.breakpoints, r, side="right")) - 1
        return self.values[i]


@dataclass(frozen=True)
class SpectralReport:
    """Flat record of the spectral quantities of one generator."""

    model: int
    n: int
    gap: float
    poincare: float
    nu_star: float
    tau_exact: float | None
    bound_simple: float
    bound_profile: float | None
    method: str

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    CSV_HEADER = "model,n,gap,poincare,nu_star,tau,bound_simple,bound_profile,method"

    def to_csv_row(self) -> str:
        def fmt(v):
            return "" if v is None else f"{v:.17g}"
        return (f"{self.model},{self.n},{fmt(self.gap)},{fmt(self.poincare)},"
                f"{fmt(self.nu_star)},{fmt(self.tau_exact)},{fmt(self.bound_simple)},"
                f"{fmt(self.bound_profile)},{self.method}")


def _check_connected(gen: WalkGenerator) -> None:
    ncomp, labels = connected_components(gen.graph.rates, directed=False)
    if ncomp > 1:
        raise DisconnectedStateSpaceError(labels)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def _gap_dense(a: np.ndarray) -> tuple[float, np.ndarray]:
    vals, vecs = sla.eigh(a, subset_by_index=[0, 1])
    return float(vals[1]), vecs[:, 1]


def _gap_iterative(gen: WalkGenerator) -> tuple[float, np.ndarray]:
    """Smallest nonzero eigenvalue by LOBPCG with an algebraic-multigrid
    preconditioner, constrained against the exact kernel vector."""
    import pyamg
    from scipy.sparse.linalg import lobpcg

    a = gen.symmetrized(dense=False)
    n = gen.n
    y = np.sqrt(gen.weights)
    y = (y / np.linalg.norm(y))[:, None]
    # pyamg's setup estimates spectral radii from the *global* numpy RNG;
    # pin its state so the result is a pure function of the input
    state = np.random.get_state()
    np.random.seed(0)
    try:
        ml = pyamg.smoothed_aggregation_solver(a.tocsr().astype(float), B=y)
        m = ml.aspreconditioner()
    finally:
        np.random.set_state(state)
    rng = np.random.default_rng(0)  # fixed: determinism contract
    x = rng.standard_normal((n, 1))
    x -= y @ (y.T @ x)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # lobpcg stagnation chatter
            vals, vecs = lobpcg(a, x, M=m, Y=y, tol=1e-9, maxiter=300,
                                largest=False)
        lam, v = float(vals[0]), vecs[:, 0]
        resid = np.linalg.norm(a @ v - lam * v) / np.linalg.norm(v)
        scale = max(1.0, abs(a.diagonal()).max())
        if not np.isfinite(lam) or lam <= 0 or resid > 1e-8 * scale:
            raise RuntimeError(f"lobpcg residual {resid:.2e} too large")
        return lam, v
    except Exception:
        # dense extremal solve as the robust fallback
        return _gap_dense(gen.symmetrized(dense=True))


def spectral_gap(gen: WalkGenerator, method: str = "auto",
                 dense_limit: int = DENSE_LIMIT) -> tuple[float, np.ndarray]:
    """Smallest nonzero eigenvalue of the negated generator, with the
    associated eigenvector in original coordinates (for sweep cuts).

    Raises DisconnectedStateSpaceError on reducible stored graphs and never
    returns a silent wrong answer.
    """
    if gen.degenerate:
        return INF, np.zeros(1)
    if gen.n < 2:
        raise InvalidParameterError("need at least two states")
    _check_connected(gen)
    if method == "auto":
        method = "dense" if gen.n <= dense_limit else "iterative"
    if method == "dense":
        lam, u = _gap_dense(gen.symmetrized(dense=True))
    elif method == "iterative":
        lam, u = _gap_iterative(gen)
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    vec = _fix_sign(u / np.sqrt(gen.weights))
    return lam, vec


def _eigendecomposition(gen: WalkGenerator):
    """Full eigensystem of the symmetrized operator; columns of p are the
    eigenvectors mapped back to original coordinates."""
    a = gen.symmetrized(dense=True)
    vals, vecs = sla.eigh(a)
    p = vecs / np.sqrt(gen.nu)[:, None]
    return vals, p


def heat_kernel(gen: WalkGenerator, t: float, method: str = "spectral",
                dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Row-stochastic transition kernel at time t.

    method='spectral' synthesizes from the full symmetric eigensystem;
    method='expm' applies dense scaling-and-squaring to t * generator.
    """
    if t < 0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    if gen.n > dense_limit:
        raise SizeLimitError(f"n={gen.n} exceeds the dense limit {dense_limit}")
    if method == "expm":
        return sla.expm(t * gen.dense_generator())
    if method != "spectral":
        raise InvalidParameterError(f"unknown method {method!r}")
    vals, p = _eigendecomposition(gen)
    core = (p * np.exp(-vals * t)) @ p.T
    return core * gen.nu[None, :]


def mixing_bound_simple(poincare: float, nu_star: float) -> float:
    """Relaxation-time bound on the uniform mixing time:
    poincare * (1 + log(1 / nu_star))."""
    return poincare * (1.0 + math.log(1.0 / nu_star))


def _uniform_distance_fn(gen: WalkGenerator):
    vals, p = _eigendecomposition(gen)
    lam, p1 = vals[1:], p[:, 1:]

    def dist(t: float) -> float:
        core = (p1 * np.exp(-lam * t)) @ p1.T
        return float(np.abs(core).max())

    return dist


def mixing_time_exact(gen: WalkGenerator, rtol: float = 1e-6,
                      dense_limit: int = DENSE_LIMIT) -> float:
    """Uniform mixing time: first t with relative sup-distance of the heat
    kernel to stationarity at most 1/e, by bisection.

    The distance is nonincreasing in t for reversible chains, so bisection
    on [0, 10 * relaxation bound] brackets the crossing.
    """
    if gen.n > dense_limit:
        raise SizeLimitError(f"n={gen.n} exceeds the dense limit {dense_limit}")
    if gen.n < 2:
        raise InvalidParameterError("need at least two states")
    _check_connected(gen)
    dist = _uniform_distance_fn(gen)
    target = 1.0 / math.e
    lam, _ = spectral_gap(gen, dense_limit=dense_limit)
    hi = mixing_bound_simple(1.0 / lam, gen.nu_star)
    hi_max = 10.0 * hi
    while dist(hi) > target:
        hi *= 2.0
        if hi > hi_max:
            raise RuntimeError("mixing-time bracket exceeded its guaranteed window")
    lo = 0.0
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if dist(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _components(adj: np.ndarray, idx: np.ndarray):
    """Connected components of the subgraph induced on idx (boolean adj)."""
    remaining = list(idx)
    while remaining:
        seen = {remaining[0]}
        frontier = [remaining[0]]
        pool = set(remaining[1:])
        while frontier:
            v = frontier.pop()
            hits = [u for u in pool if adj[v, u]]
            for u in hits:
                pool.discard(u)
                seen.add(u)
                frontier.append(u)
        yield np.array(sorted(seen))
        remaining = [v for v in remaining if v not in seen]


def _dirichlet_matrices(gen: WalkGenerator):
    """Quadratic forms of the Dirichlet energy and the variance."""
    r = gen.graph.rates.toarray()
    s = r.sum(axis=1)
    emat = (np.diag(s) - r) / gen.total_weight
    bmat = np.diag(gen.nu) - np.outer(gen.nu, gen.nu)
    return emat, bmat


def spectral_profile_exact(gen: WalkGenerator,
                           size_limit: int = PROFILE_ENUM_LIMIT) -> SpectralProfile:
    """Exact spectral profile by enumerating all vertex subsets.

    For each proper subset the restricted ground eigenvalue of the
    energy/variance pencil is solved per connected component, relying on
    sign-definiteness of the component ground states (checked, reported in
    the result); the full set contributes the spectral gap itself.
    """
    n = gen.n
    if n < 2:
        raise InvalidParameterError("need at least two states")
    if n > size_limit:
        raise SizeLimitError(f"n={n} exceeds the enumeration limit {size_limit}")
    _check_connected(gen)
    emat, bmat = _dirichlet_matrices(gen)
    adj = gen.graph.rates.toarray() > 0
    records = []  # (nu_mass, lambda)
    sign_ok = True
    for mask in range(1, 2 ** n - 1):
        idx = np.flatnonzero([(mask >> i) & 1 for i in range(n)])
        lam_u = INF
        for comp in _components(adj, idx):
            vals, vecs = sla.eigh(emat[np.ix_(comp, comp)],
                                  bmat[np.ix_(comp, comp)],
                                  subset_by_index=[0, 0])
            v = vecs[:, 0]
            tol = 1e-9 * np.abs(v).max()
            if not (np.all(v >= -tol) or np.all(v <= tol)):
                sign_ok = False
            lam_u = min(lam_u, float(vals[0]))
        records.append((float(gen.nu[idx].sum()), lam_u))
    gap, _ = spectral_gap(gen)
    records.append((1.0, gap))
    records.sort(key=lambda rv: rv[0])
    breakpoints, values = [], []
    running = INF
    for r, lam in records:
        running = min(running, lam)
        if breakpoints and math.isclose(r, breakpoints[-1], rel_tol=1e-12):
            values[-1] = running
        else:
            breakpoints.append(r)
            values.append(running)
    return SpectralProfile(breakpoints=tuple(breakpoints), values=tuple(values),
                           ground_states_sign_definite=sign_ok)


class ProfileCoverageError(ValueError):
    """The supplied profile does not cover the integration range."""


def _step_integral(breaks, vals, a: float, b: float) -> float:
    """Exact integral of 1/(t * step(t)) over [a, b], where the step function
    takes vals[i] on [breaks[i], breaks[i+1]) and the last value extends to b.

    Infinite step values contribute zero (no admissible sets there).
    """
    total = 0.0
    for i in range(len(breaks)):
        seg_lo = max(a, breaks[i])
        seg_hi = b if i + 1 == len(breaks) else min(b, breaks[i + 1])
        if seg_hi > seg_lo and vals[i] > 0 and not math.isinf(vals[i]):
            total += math.log(seg_hi / seg_lo) / vals[i]
    return total


def mixing_bound_profile_integral(profile, nu_star: float,
                                  cheeger: float | None = None) -> float:
    """Profile integral bound on the uniform mixing time.

    From a SpectralProfile: 2 * integral over [4 nu_*, 4e] of dr/(r Lambda(r)),
    extending Lambda past its last breakpoint by the Cheeger lower bound
    Lambda = cheeger^2 / 2.  From an IsoProfile: 4 * integral of
    dt/(t phibar(t)^2) with phibar(t) = phi(t) for t <= 1/2 and = cheeger
    above.  Step functions are integrated in closed form.
    """
    a, b = 4.0 * nu_star, 4.0 * math.e
    if a >= b:
        raise InvalidParameterError("integration range is empty")
    if hasattr(profile, "breakpoints"):  # spectral profile
        breaks = list(profile.breakpoints)
        vals = list(profile.values)
        if a < breaks[0] * (1 - 1e-12):
            raise ProfileCoverageError(
                f"profile starts at {breaks[0]}, needs coverage from {a}")
        if b > breaks[-1]:
            if cheeger is None:
                raise ProfileCoverageError(
                    "need the Cheeger constant to extend the profile past "
                    f"its last breakpoint {breaks[-1]}")
            # past the data the profile is bounded below by cheeger^2 / 2
            breaks.append(breaks[-1])
            vals.append(0.5 * cheeger ** 2)
        return 2.0 * _step_integral(breaks, vals, a, b)
    if hasattr(profile, "grid"):  # isoperimetric profile
        grid = list(profile.grid)
        values = list(profile.values)
        if grid[-1] < 0.5:
            raise ProfileCoverageError("iso profile grid must reach t = 1/2")
        if cheeger is None:
            k = next(i for i, t in enumerate(grid) if t >= 0.5)
            cheeger = values[k]
        # conservative steps: on [grid[i], grid[i+1]) use the value at the
        # right endpoint, which can only underestimate the profile
        breaks = [min(a, grid[0])] + grid[:-1]
        sq = [INF if math.isinf(v) else v * v for v in values]
        # above 1/2 the profile is frozen at the Cheeger constant
        cut, cutv = [], []
        for r, v in zip(breaks, sq):
            if r < 0.5:
                cut.append(r)
                cutv.append(v)
        cut.append(0.5)
        cutv.append(cheeger ** 2)
        return 4.0 * _step_integral(cut, cutv, a, b)
    raise InvalidParameterError("profile must be a SpectralProfile or IsoProfile")


def spectral_report(gen: WalkGenerator, profile=None, cheeger: float | None = None,
                    dense_limit: int = DENSE_LIMIT) -> SpectralReport:
    """Assemble the standard spectral summary of one generator."""
    method = "dense" if gen.n <= dense_limit else "iterative"
    gap, _ = spectral_gap(gen, dense_limit=dense_limit)
    poincare = 1.0 / gap
    tau = mixing_time_exact(gen, dense_limit=dense_limit) if gen.n <= dense_limit else None
    bound_profile = None
    if profile is not None:
        bound_profile = mixing_bound_profile_integral(profile, gen.nu_star, cheeger)
    return SpectralReport(model=gen.model, n=gen.n, gap=gap, poincare=poincare,
                          nu_star=gen.nu_star, tau_exact=tau,
                          bound_simple=mixing_bound_simple(poincare, gen.nu_star),
                          bound_profile=bound_profile, method=method)
