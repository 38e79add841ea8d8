"""Bernoulli site percolation diagnostics and coarse-grained cube clusters.

Covers i.i.d. site fields on the box {1..n}^d with nearest-neighbor
adjacency: cluster labeling, vertex-disjoint face-to-face crossing counts
(via unit-vertex-capacity maximum flow), the large-cluster events used in
the scaling experiments, and the connected cluster of occupied K-cubes of a
sampled point set together with its boundary statistics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .pointprocess import InvalidParameterError, PointSet, good_box_field


class EmptyEnvironmentError(ValueError):
    """No occupied cube fully inside the box."""


class InvalidSubsetError(ValueError):
    """A cube collection is not contained in the cluster it refers to."""


@dataclass(frozen=True)
class SiteField:
    """i.i.d. Bernoulli(p) open/closed sites on the grid {1..n}^dim."""

    n: int
    dim: int
    p: float
    seed: int
    open: np.ndarray = field(repr=False)

    def to_rle(self, path) -> None:
        """Run-length-encoded dump, one grid line per row."""
        flat = self.open.reshape(-1, self.n)
        with open(path, "w") as fh:
            fh.write(f"# n={self.n} dim={self.dim} p={self.p!r} seed={self.seed}\n")
            for line in flat:
                runs = []
                count, cur = 0, bool(line[0])
                for v in line:
                    if bool(v) == cur:
                        count += 1
                    else:
                        runs.append(f"{count}{'o' if cur else 'c'}")
                        cur, count = bool(v), 1
                runs.append(f"{count}{'o' if cur else 'c'}")
                fh.write("".join(runs) + "\n")


@dataclass(frozen=True)
class ClusterLabeling:
    """Nearest-neighbor connected components of the open sites.

    `labels` is 0 on closed sites and 1..max_label on open ones; `sizes`
    and `diameters` (Chebyshev) are indexed by label-1.
    """

    labels: np.ndarray = field(repr=False)
    sizes: np.ndarray
    diameters: np.ndarray
    max_label: int

    def largest(self) -> int:
        """Label of the maximal cluster (smallest label on ties)."""
        if self.max_label == 0:
            return 0
        return int(np.argmax(self.sizes)) + 1


@dataclass(frozen=True)
class GreyCluster:
    """Largest face-connected component of occupied K-cubes fully inside
    the sampling box of the source point set."""

    source: PointSet
    cube_side: float
    member_cubes: frozenset
    all_inside_cubes: frozenset

    @property
    def coverage(self) -> float:
        return len(self.member_cubes) / len(self.all_inside_cubes)


def sample_site_field(n: int, dim: int, p: float, seed: int) -> SiteField:
    """Sample an i.i.d. Bernoulli(p) site configuration, deterministic in seed."""
    if not 0 <= p <= 1:
        raise InvalidParameterError(f"p must be in [0, 1], got {p}")
    if n < 1 or dim < 1:
        raise InvalidParameterError("n and dim must be positive")
    rng = np.random.default_rng(np.uint64(seed))
    grid = rng.random(size=(n,) * dim) < p
    grid.setflags(write=False)
    return SiteField(n=n, dim=dim, p=p, seed=seed, open=grid)


def label_clusters(field_: SiteField) -> ClusterLabeling:
    """Label the nearest-neighbor open clusters and report per-cluster size
    and Chebyshev diameter."""
    structure = ndimage.generate_binary_structure(field_.dim, 1)
    labels, nlab = ndimage.label(field_.open, structure=structure)
    sizes = np.zeros(nlab, dtype=int)
    diameters = np.zeros(nlab, dtype=int)
    if nlab:
        sizes = np.bincount(labels.ravel())[1:]
        slices = ndimage.find_objects(labels)
        for k, sl in enumerate(slices):
            diameters[k] = max(s.stop - s.start - 1 for s in sl)
    return ClusterLabeling(labels=labels, sizes=sizes, diameters=diameters,
                           max_label=int(nlab))


def crossing_count(field_: SiteField, direction: int = 0) -> int:
    """Maximal number of vertex-disjoint open paths between the two faces
    orthogonal to `direction`, by unit-vertex-capacity maximum flow.

    Each open site is split into an in/out pair of capacity 1.
    """
    if field_.dim < 2:
        raise InvalidParameterError("crossings need dim >= 2")
    if not 0 <= direction < field_.dim:
        raise InvalidParameterError(f"direction out of range: {direction}")
    open_ = field_.open
    coords = np.argwhere(open_)
    if len(coords) == 0:
        return 0
    m = len(coords)
    site_id = -np.ones(open_.shape, dtype=int)
    site_id[tuple(coords.T)] = np.arange(m)
    # nodes: 0 = source, 1 = sink, then in(v) = 2 + 2v, out(v) = 3 + 2v
    src, snk = 0, 1
    rows, cols, caps = [], [], []

    def add(u, v, c):
        rows.append(u)
        cols.append(v)
        caps.append(c)

    big = m + 1
    for v in range(m):
        add(2 + 2 * v, 3 + 2 * v, 1)
    for v, c in enumerate(coords):
        if c[direction] == 0:
            add(src, 2 + 2 * v, big)
        if c[direction] == field_.n - 1:
            add(3 + 2 * v, snk, big)
        for axis in range(field_.dim):
            for sign in (-1, 1):
                nb = c.copy()
                nb[axis] += sign
                if 0 <= nb[axis] < field_.n:
                    u = site_id[tuple(nb)]
                    if u >= 0:
                        add(3 + 2 * v, 2 + 2 * u, big)
    graph = csr_matrix((caps, (rows, cols)), shape=(2 + 2 * m, 2 + 2 * m))
    return int(maximum_flow(graph, src, snk).flow_value)


def evaluate_events(field_: SiteField, kappa: float) -> tuple[bool, bool, bool]:
    """The three large-cluster events of the box:

    - uniqueness: at most one cluster of Chebyshev diameter >= floor(n/10);
    - crossing: some cluster meets all 2*dim faces;
    - giant: some cluster holds at least kappa * n^dim sites.
    """
    if not 0 < kappa < 1:
        raise InvalidParameterError(f"kappa must be in (0, 1), got {kappa}")
    lab = label_clusters(field_)
    thresh = field_.n // 10
    unique_large = int(np.sum(lab.diameters >= thresh)) <= 1
    crossing = False
    for k in range(1, lab.max_label + 1):
        where = lab.labels == k
        touches = all(
            where.take(0, axis=ax).any() and where.take(-1, axis=ax).any()
            for ax in range(field_.dim)
        )
        if touches:
            crossing = True
            break
    giant = lab.max_label > 0 and lab.sizes.max() >= kappa * field_.n ** field_.dim
    return unique_large, crossing, giant


def cluster_cube_density(field_: SiteField, labeling: ClusterLabeling,
                         cube_side: int) -> float:
    """Minimal per-cube occupation fraction of the maximal cluster under a
    partition into `cube_side`-cubes.

    Trailing partial cubes are merged into the last full cube along each
    axis.
    """
    if cube_side < 1 or cube_side > field_.n:
        raise InvalidParameterError(f"bad cube side {cube_side}")
    if labeling.max_label == 0:
        return 0.0
    n = field_.n
    target = labeling.labels == labeling.largest()
    ncubes = max(1, n // cube_side)
    edges = [np.arange(ncubes + 1) * cube_side for _ in range(field_.dim)]
    for e in edges:
        e[-1] = n  # merge the trailing partial cube
    best = math.inf
    for cell in itertools.product(*[range(ncubes)] * field_.dim):
        sl = tuple(slice(edges[ax][c], edges[ax][c + 1])
                   for ax, c in enumerate(cell))
        block = target[sl]
        best = min(best, block.sum() / block.size)
    return float(best)


def _inside_cube_range(side: float, k: float) -> range:
    """Integer indices x with x*K + [0,K)^d fully inside [-side/2, side/2]."""
    half = side / 2.0
    lo = math.ceil(-half / k - 1e-12)
    hi = math.floor(half / k - 1 + 1e-12)
    return range(lo, hi + 1)


def grey_cluster(xi: PointSet, cube_side: float) -> GreyCluster:
    """Largest face-connected component of occupied K-cubes fully inside the
    box; ties resolved toward the component holding the lexicographically
    smallest cube index."""
    if cube_side <= 0:
        raise InvalidParameterError(f"cube_side must be positive, got {cube_side}")
    occ = good_box_field(xi, cube_side).occupied
    rng_ = _inside_cube_range(xi.side, cube_side)
    inside = [idx for idx in itertools.product(*[rng_] * xi.dim)]
    good = sorted(idx for idx in inside if occ.get(idx, False))
    if not good:
        raise EmptyEnvironmentError("no occupied cube fully inside the box")
    good_set = set(good)
    seen = set()
    components = []
    for start in good:
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for ax in range(xi.dim):
                for sign in (-1, 1):
                    nb = list(v)
                    nb[ax] += sign
                    nb = tuple(nb)
                    if nb in good_set and nb not in comp:
                        comp.add(nb)
                        frontier.append(nb)
        seen |= comp
        components.append(comp)
    # ties between equal-size components go to the one holding the
    # lexicographically smallest cube index
    best = sorted(components, key=lambda c: (-len(c), min(c)))[0]
    return GreyCluster(source=xi, cube_side=cube_side,
                       member_cubes=frozenset(best),
                       all_inside_cubes=frozenset(inside))


def density_and_occupancy_checks(xi: PointSet, cube_side: float, eps: float,
                                 c_w: float) -> dict:
    """Coarse-grained regularity report of one sampled environment:

    - 'min_density': minimal fraction of any L^eps-cube (fully inside the
      box) covered by the grey-cube cluster;
    - 'occupancy': whether every C_W*(log L)^(1/d)-cube fully inside the box
      contains a point.
    """
    L = xi.side
    side_eps = L ** eps
    side_occ = c_w * math.log(L) ** (1.0 / xi.dim)
    if side_eps > L or side_occ > L or side_occ <= 0:
        raise InvalidParameterError("requested cube scales do not fit the box")
    try:
        cluster = grey_cluster(xi, cube_side)
        members = cluster.member_cubes
    except EmptyEnvironmentError:
        members = frozenset()
    centers = {idx: (np.array(idx) + 0.5) * cube_side for idx in members}
    min_density = math.inf
    eps_cells = list(_inside_cube_range(L, side_eps))
    if not eps_cells:
        raise InvalidParameterError("no L^eps cube fits inside the box")
    for cell in itertools.product(*[eps_cells] * xi.dim):
        lo = np.array(cell) * side_eps
        hi = lo + side_eps
        vol = sum(
            1 for c in centers.values() if np.all(c >= lo) and np.all(c < hi)
        ) * cube_side ** xi.dim
        min_density = min(min_density, vol / side_eps ** xi.dim)
    occ_cells = list(_inside_cube_range(L, side_occ))
    if not occ_cells:
        raise InvalidParameterError("no occupancy cube fits inside the box")
    occupancy = True
    for cell in itertools.product(*[occ_cells] * xi.dim):
        lo = np.array(cell) * side_occ
        if xi.count_in(lo, lo + side_occ) == 0:
            occupancy = False
            break
    return {"min_density": float(min_density), "occupancy": occupancy}


def boundary_ratio(cluster: GreyCluster, subset) -> tuple[float, float, float]:
    """Volumes of the outer boundary and of a cube collection A inside the
    grey cluster, and their ratio.

    The boundary consists of cluster cubes outside A that are face-adjacent
    to A; volumes are cube counts times K^dim.
    """
    a = {tuple(int(v) for v in idx) for idx in subset}
    if not a:
        raise InvalidSubsetError("subset must be nonempty")
    if not a <= cluster.member_cubes:
        raise InvalidSubsetError("subset is not contained in the grey cluster")
    dim = cluster.source.dim
    boundary = set()
    for idx in a:
        for ax in range(dim):
            for sign in (-1, 1):
                nb = list(idx)
                nb[ax] += sign
                nb = tuple(nb)
                if nb in cluster.member_cubes and nb not in a:
                    boundary.add(nb)
    kd = cluster.cube_side ** dim
    vol_a = len(a) * kd
    vol_b = len(boundary) * kd
    return vol_b, vol_a, vol_b / vol_a


def random_connected_subset(cluster: GreyCluster, size: int, seed: int) -> set:
    """Uniform-seed random connected cube collection grown inside the grey
    cluster; used for boundary-ratio spot checks."""
    if size < 1 or size > len(cluster.member_cubes):
        raise InvalidParameterError(f"bad subset size {size}")
    rng = np.random.default_rng(np.uint64(seed))
    members = sorted(cluster.member_cubes)
    start = members[rng.integers(len(members))]
    chosen = {start}
    frontier = set()
    dim = cluster.source.dim

    def neighbors(idx):
        for ax in range(dim):
            for sign in (-1, 1):
                nb = list(idx)
                nb[ax] += sign
                yield tuple(nb)

    frontier |= {nb for nb in neighbors(start) if nb in cluster.member_cubes}
    while len(chosen) < size:
        if not frontier:
            break
        pick = sorted(frontier)[rng.integers(len(frontier))]
        frontier.discard(pick)
        chosen.add(pick)
        frontier |= {nb for nb in neighbors(pick)
                     if nb in cluster.member_cubes and nb not in chosen}
    return chosen
