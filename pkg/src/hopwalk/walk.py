"""Rate graphs and the three reversible generators on a finite point set.

Jump rates are exp(-|x-y|^alpha) in Euclidean distance.  Three per-vertex
normalizations are supported:

  model 1: unit weights, uniform stationary law;
  model 2: full weights w_x = sum of incident rates;
  model 3: hybrid weights w_x = max(1, model-2 weight).

The generator has off-diagonal entries rate/w_x, zero row sums, and is
reversible with respect to nu(x) = w_x / sum(w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.spatial.distance import pdist, squareform

from .pointprocess import InvalidParameterError, PointSet

DEFAULT_CUTOFF = 1e-14

MODELS = (1, 2, 3)


class DegenerateModelError(ValueError):
    """Model 2 requested on a single-point state space (all weights vanish)."""


@dataclass(frozen=True)
class RateGraph:
    """Sparse symmetric jump rates between the points of a PointSet.

    Rates below `cutoff` are dropped, except that every vertex keeps its
    single largest incident rate, which preserves irreducibility of the
    stored graph whenever the untruncated graph is irreducible.
    """

    n: int
    alpha: float
    cutoff: float
    rates: sp.csr_matrix = field(repr=False)
    points: np.ndarray = field(repr=False)

    def untruncated_rates(self, rows=None) -> np.ndarray:
        """Dense exact rates recomputed from coordinates (no cutoff).

        With `rows`, only those rows of the full rate matrix are returned.
        """
        if rows is None:
            d = squareform(pdist(self.points))
            r = np.exp(-(d ** self.alpha))
            np.fill_diagonal(r, 0.0)
            return r
        from scipy.spatial.distance import cdist
        d = cdist(self.points[rows], self.points)
        r = np.exp(-(d ** self.alpha))
        for i, row in enumerate(np.atleast_1d(rows)):
            r[i, row] = 0.0
        return r


def build_rate_graph(xi: PointSet, alpha: float,
                     cutoff: float = DEFAULT_CUTOFF) -> RateGraph:
    """Assemble the symmetric rate graph exp(-|x-y|^alpha) with sparsity
    cutoff and the keep-max rule."""
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    if not 0 <= cutoff < 1:
        raise InvalidParameterError(f"cutoff must be in [0, 1), got {cutoff}")
    n = len(xi)
    if n == 0:
        raise InvalidParameterError("empty point set")
    if n == 1:
        return RateGraph(n=1, alpha=alpha, cutoff=cutoff,
                         rates=sp.csr_matrix((1, 1)), points=xi.points)
    d = squareform(pdist(xi.points))
    off = ~np.eye(n, dtype=bool)
    if np.any(d[off] == 0.0):
        raise InvalidParameterError("duplicate points: zero distance between states")
    r = np.exp(-(d ** alpha))
    np.fill_diagonal(r, 0.0)
    keep = r >= cutoff
    # keep-max: each vertex retains its largest incident rate
    argmax = np.argmax(r, axis=1)
    keep[np.arange(n), argmax] = True
    keep[argmax, np.arange(n)] = True
    r = np.where(keep, r, 0.0)
    return RateGraph(n=n, alpha=alpha, cutoff=cutoff,
                     rates=sp.csr_matrix(r), points=xi.points)


def vertex_weights(graph: RateGraph, model: int) -> np.ndarray:
    """Per-vertex normalizing weights of the requested model.

    Model 2 sums the stored (cutoff) rates; with the default cutoff the
    difference from the analytic sum is below representable relative error.
    """
    if model not in MODELS:
        raise InvalidParameterError(f"model must be one of {MODELS}, got {model}")
    if model == 1:
        return np.ones(graph.n)
    w2 = np.asarray(graph.rates.sum(axis=1)).ravel()
    if model == 2:
        if graph.n == 1:
            raise DegenerateModelError("model 2 needs at least two points")
        return w2
    return np.maximum(1.0, w2)


@dataclass(frozen=True)
class WalkGenerator:
    """One of the three reversible generators over a rate graph.

    `weights` are the per-vertex normalizers, `nu` the stationary probability
    proportional to them.  `degenerate` flags the trivial single-state chain,
    whose spectral gap is reported as the +inf sentinel.
    """

    model: int
    graph: RateGraph
    weights: np.ndarray = field(repr=False)
    nu: np.ndarray = field(repr=False)
    degenerate: bool = False

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def points(self) -> np.ndarray:
        return self.graph.points

    @property
    def nu_star(self) -> float:
        return float(self.nu.min())

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def dense_generator(self) -> np.ndarray:
        """Dense generator matrix: off-diagonal rate/w_x, zero row sums."""
        r = self.graph.rates.toarray()
        gen = r / self.weights[:, None]
        np.fill_diagonal(gen, -gen.sum(axis=1))
        return gen

    def symmetrized(self, dense: bool = True):
        """The nonnegative-definite form D_nu^{1/2} (-L) D_nu^{-1/2}.

        Equals D_w^{-1/2} (D_s - R) D_w^{-1/2} with R the stored rates and
        s the row sums; symmetric with kernel spanned by sqrt(nu).
        """
        s = np.asarray(self.graph.rates.sum(axis=1)).ravel()
        inv_sqrt = 1.0 / np.sqrt(self.nu * self.total_weight)
        if dense:
            a = -self.graph.rates.toarray() * np.outer(inv_sqrt, inv_sqrt)
            np.fill_diagonal(a, s * inv_sqrt ** 2)
            return a
        d_inv = sp.diags(inv_sqrt)
        return (d_inv @ (sp.diags(s) - self.graph.rates) @ d_inv).tocsr()

    def dump(self, edges_path, weights_path) -> None:
        """Debug dump: 'x_index,y_index,rate' edge list plus a weights file."""
        coo = sp.triu(self.graph.rates, k=1).tocoo()
        with open(edges_path, "w") as fh:
            for i, j, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{i},{j},{v:.17g}\n")
        with open(weights_path, "w") as fh:
            for w in self.weights:
                fh.write(f"{w:.17g}\n")


def build_generator(xi: PointSet, alpha: float, model: int,
                    cutoff: float = DEFAULT_CUTOFF) -> WalkGenerator:
    """Build the model-i generator on the rate graph of xi."""
    graph = build_rate_graph(xi, alpha, cutoff)
    w = vertex_weights(graph, model)
    nu = w / w.sum()
    return WalkGenerator(model=model, graph=graph, weights=w, nu=nu,
                         degenerate=(graph.n == 1))


def generator_from_graph(graph: RateGraph, model: int) -> WalkGenerator:
    """Build a generator reusing an already assembled rate graph."""
    w = vertex_weights(graph, model)
    nu = w / w.sum()
    return WalkGenerator(model=model, graph=graph, weights=w, nu=nu,
                         degenerate=(graph.n == 1))


def dirichlet_form(gen: WalkGenerator, f) -> tuple[float, float]:
    """Energy and variance of f under the generator's stationary law.

    energy = 1/2 sum_xy nu(x) L(x,y) (f(x)-f(y))^2, which for every model
    reduces to sum over stored edges of rate * (f(x)-f(y))^2 / W_tot;
    variance = nu(f^2) - nu(f)^2.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (gen.n,):
        raise InvalidParameterError(f"f must have shape ({gen.n},)")
    coo = sp.triu(gen.graph.rates, k=1).tocoo()
    energy = float(np.sum(coo.data * (f[coo.row] - f[coo.col]) ** 2)) / gen.total_weight
    mean = float(gen.nu @ f)
    variance = float(gen.nu @ f ** 2) - mean ** 2
    return energy, variance
