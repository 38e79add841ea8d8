"""Sampling of random point sets in a centered box and their regularity statistics.

All samplers are pure functions of their parameters and a 64-bit seed: the
same inputs always give the same point list, in the same order.  The sampled
set lives in the closed box of side `side` centered at the origin.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist


class InvalidParameterError(ValueError):
    """A sampler or statistic was called with out-of-range parameters."""


@dataclass(frozen=True)
class PointSet:
    """A finite realization of a simple point process inside the box
    [-side/2, side/2]^dim.

    `points` is an (n, dim) float array, read-only after construction.
    """

    dim: int
    side: float
    points: np.ndarray
    seed: int
    label: str = ""

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.size == 0:
            pts = pts.reshape(0, self.dim)
        if pts.shape[1] != self.dim:
            raise InvalidParameterError(
                f"points have dimension {pts.shape[1]}, expected {self.dim}"
            )
        half = self.side / 2.0
        if pts.size and np.max(np.abs(pts)) > half * (1 + 1e-12):
            raise InvalidParameterError("points outside the box")
        if len(pts) > 1:
            # simple point process: no repeated points
            order = np.lexsort(pts.T[::-1])
            if np.any(np.all(np.diff(pts[order], axis=0) == 0, axis=1)):
                raise InvalidParameterError("duplicate points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def count_in(self, lo, hi) -> int:
        """Number of points in the closed axis-aligned box [lo, hi]."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if len(self.points) == 0:
            return 0
        inside = np.all((self.points >= lo) & (self.points <= hi), axis=1)
        return int(inside.sum())

    def to_csv(self, path) -> None:
        """Write the point set; header comment carries (dim, side, seed)."""
        with open(path, "w") as fh:
            fh.write("# dim,side,seed\n")
            fh.write(f"# {self.dim},{self.side!r},{self.seed}\n")
            for row in self.points:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    @classmethod
    def from_csv(cls, path, label: str = "") -> "PointSet":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if len(lines) < 2 or not lines[0].startswith("#") or not lines[1].startswith("#"):
            raise InvalidParameterError(f"{path}: missing dim,side,seed header")
        dim_s, side_s, seed_s = lines[1].lstrip("# ").split(",")
        rows = [
            [float(v) for v in ln.split(",")] for ln in lines[2:] if not ln.startswith("#")
        ]
        pts = np.asarray(rows, dtype=float) if rows else np.zeros((0, int(dim_s)))
        return cls(dim=int(dim_s), side=float(side_s), points=pts,
                   seed=int(seed_s), label=label)


@dataclass(frozen=True)
class BoxOccupancy:
    """Occupancy indicator of the K-cube partition x*K + [0, K)^d.

    `occupied[x]` is True exactly when the cube indexed by x in Z^d contains
    at least one point of the source set; only cubes meeting the sampling box
    are recorded.
    """

    cube_side: float
    origin_offset: np.ndarray
    occupied: dict = field(repr=False)

    @property
    def good_fraction(self) -> float:
        if not self.occupied:
            return 0.0
        return sum(self.occupied.values()) / len(self.occupied)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed))


def _check_box(dim: int, side: float) -> None:
    if dim < 1:
        raise InvalidParameterError(f"dim must be >= 1, got {dim}")
    if side <= 0:
        raise InvalidParameterError(f"side must be positive, got {side}")


def sample_poisson(rho: float, dim: int, side: float, seed: int) -> PointSet:
    """Homogeneous Poisson sample of intensity rho in the centered box.

    The count is Poisson(rho * side^dim); given the count, points are i.i.d.
    uniform.
    """
    _check_box(dim, side)
    if rho <= 0:
        raise InvalidParameterError(f"intensity must be positive, got {rho}")
    rng = _rng(seed)
    n = rng.poisson(rho * side ** dim)
    pts = rng.uniform(-side / 2.0, side / 2.0, size=(n, dim))
    return PointSet(dim=dim, side=side, points=pts, seed=seed,
                    label=f"poisson(rho={rho})")


def sample_inhomogeneous_poisson(intensity_fn, rho2: float, dim: int,
                                 side: float, seed: int) -> PointSet:
    """Inhomogeneous Poisson sample by thinning a rate-rho2 homogeneous one.

    `intensity_fn` maps a point (length-dim array) to an intensity in
    (0, rho2]; each homogeneous point x is kept with probability
    intensity_fn(x) / rho2.  With intensity_fn identically rho2, the output
    coincides with sample_poisson(rho2, ...) for the same seed.
    """
    _check_box(dim, side)
    if rho2 <= 0:
        raise InvalidParameterError(f"rho2 must be positive, got {rho2}")
    rng = _rng(seed)
    n = rng.poisson(rho2 * side ** dim)
    pts = rng.uniform(-side / 2.0, side / 2.0, size=(n, dim))
    vals = np.array([float(intensity_fn(p)) for p in pts])
    if np.any(vals > rho2 * (1 + 1e-12)):
        raise InvalidParameterError("intensity exceeds rho2 at a sampled point")
    if np.any(vals <= 0):
        raise InvalidParameterError("intensity must be strictly positive")
    keep = rng.uniform(size=n) < vals / rho2
    return PointSet(dim=dim, side=side, points=pts[keep], seed=seed,
                    label=f"inhomogeneous_poisson(rho2={rho2})")


def sample_thinned_lattice(spacing: float, keep_prob: float, dim: int,
                           side: float, seed: int) -> PointSet:
    """p-thinning of the scaled lattice spacing * Z^d inside the closed box.

    Lattice points on the box boundary are included.  With keep_prob = 1 the
    output does not depend on the seed.
    """
    _check_box(dim, side)
    if spacing <= 0:
        raise InvalidParameterError(f"spacing must be positive, got {spacing}")
    if not 0 < keep_prob <= 1:
        raise InvalidParameterError(f"keep_prob must be in (0, 1], got {keep_prob}")
    half = side / 2.0
    kmax = math.floor(half / spacing + 1e-12)
    kmin = -kmax
    axes = [np.arange(kmin, kmax + 1) for _ in range(dim)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    pts = grid * spacing
    if keep_prob < 1:
        rng = _rng(seed)
        keep = rng.uniform(size=len(pts)) < keep_prob
        pts = pts[keep]
    return PointSet(dim=dim, side=side, points=pts, seed=seed,
                    label=f"thinned_lattice(spacing={spacing},p={keep_prob})")


def good_box_field(xi: PointSet, cube_side: float) -> BoxOccupancy:
    """Occupancy of the K-cube partition: a cube is good iff it holds a point.

    Records every cube x*K + [0, K)^d that meets the closed sampling box.
    """
    if cube_side <= 0:
        raise InvalidParameterError(f"cube_side must be positive, got {cube_side}")
    half = xi.side / 2.0
    lo = math.floor(-half / cube_side)
    if (lo + 1) * cube_side <= -half:
        lo += 1
    hi = math.floor(half / cube_side + 1e-12)
    axes = [range(lo, hi + 1)] * xi.dim
    occupied = {}
    for idx in itertools.product(*axes):
        occupied[idx] = False
    if len(xi):
        cells = np.floor(xi.points / cube_side).astype(int)
        for row in cells:
            occupied[tuple(row)] = True
    return BoxOccupancy(cube_side=cube_side, origin_offset=np.zeros(xi.dim),
                        occupied=occupied)


def r_statistic(xi: PointSet, lo, hi, alpha: float) -> float:
    """Local interaction mass of the closed box [lo, hi]:
    sum over x in the box, y anywhere, of exp(-|x-y|^alpha).

    The diagonal y = x contributes 1 per point, so the value is never below
    the point count of the box.
    """
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    if len(xi) == 0:
        return 0.0
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    inside = np.all((xi.points >= lo) & (xi.points <= hi), axis=1)
    if not inside.any():
        return 0.0
    d = cdist(xi.points[inside], xi.points)
    return float(np.exp(-(d ** alpha)).sum())


def s_statistic(xi: PointSet, ell: int, alpha: float) -> float:
    """Unit-cube coarse-graining of the local interaction mass.

    Counts points per unit cube centered at integer sites and returns
    sum over integer u with |u|_inf <= ell/2 and all integer v of
    exp(-|u-v|^alpha) * count(u) * count(v).  The v-sum is truncated at
    Chebyshev radius V where exp(-V^alpha) < 1e-16, below double precision.
    """
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    if ell <= 0:
        raise InvalidParameterError(f"ell must be positive, got {ell}")
    if ell > xi.side:
        raise InvalidParameterError(f"ell={ell} exceeds box side {xi.side}")
    if len(xi) == 0:
        return 0.0
    v_max = math.ceil((16 * math.log(10)) ** (1.0 / alpha))
    cells = np.rint(xi.points).astype(int)
    uniq, counts = np.unique(cells, axis=0, return_counts=True)
    half = ell / 2.0
    in_ell = np.all(np.abs(uniq) <= half, axis=1)
    if not in_ell.any():
        return 0.0
    u_cells, u_counts = uniq[in_ell], counts[in_ell]
    cheb = np.max(np.abs(u_cells[:, None, :] - uniq[None, :, :]), axis=2)
    d = cdist(u_cells.astype(float), uniq.astype(float))
    kern = np.where(cheb <= v_max, np.exp(-(d ** alpha)), 0.0)
    return float(u_counts @ kern @ counts)
