"""Cut conductances, exact Cheeger constants and isoperimetric profiles.

Exact quantities are obtained by enumerating all proper nonempty vertex
subsets (feasible up to ENUMERATION_LIMIT vertices); above that, the module
offers certified upper bounds only: a spectral sweep cut and a trap scan
over near-isolated singletons and pairs.

Cut flows are always recomputed from coordinates with untruncated rates:
the sparsity cutoff is a generator-assembly optimization and must not
silently reduce a boundary flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .pointprocess import InvalidParameterError, PointSet
from .walk import WalkGenerator

ENUMERATION_LIMIT = 24
_CHUNK = 1 << 14

INF = float("inf")


class InvalidCutError(ValueError):
    """The requested cut is empty or the full vertex set."""


class EnumerationLimitError(ValueError):
    """Too many vertices for exact enumeration; use the sweep or trap bound."""


@dataclass(frozen=True)
class CutReport:
    """Conductance of one vertex subset U: boundary flow over subset weight."""

    subset: tuple
    weight: float
    flow: float
    conductance: float
    pi_mass: float


@dataclass(frozen=True)
class IsoProfile:
    """Worst conductance over sets of bounded size, per grid point.

    `kind` is 'model1'/'model2'/'model3' for the weight-fraction constraint
    of the corresponding model, or 'hybrid' for the model-3 conductance under
    the counting-measure constraint.  Grid points admitting no set get +inf.
    """

    grid: tuple
    values: tuple
    kind: str

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,phi\n")
            for t, v in zip(self.grid, self.values):
                fh.write(f"{t:.17g},{'inf' if math.isinf(v) else format(v, '.17g')}\n")


def cut_conductance(gen: WalkGenerator, subset) -> CutReport:
    """Exact conductance of U from untruncated rates."""
    idx = np.asarray(sorted(set(int(i) for i in subset)), dtype=int)
    if idx.size == 0 or idx.size >= gen.n:
        raise InvalidCutError("cut must be a proper nonempty subset")
    if idx.min() < 0 or idx.max() >= gen.n:
        raise InvalidCutError("vertex index out of range")
    mask = np.zeros(gen.n, dtype=bool)
    mask[idx] = True
    d = cdist(gen.points[mask], gen.points[~mask])
    flow = float(np.exp(-(d ** gen.graph.alpha)).sum())
    weight = float(gen.weights[mask].sum())
    return CutReport(subset=tuple(idx.tolist()), weight=weight, flow=flow,
                     conductance=flow / weight,
                     pi_mass=weight / gen.total_weight)


def _mask_indices(mask_int: int, n: int) -> tuple:
    return tuple(i for i in range(n) if mask_int >> i & 1)


def _enumerate_cut_stats(rates: np.ndarray, weights: np.ndarray):
    """Yield (mask_ints, sizes, weights, flows) over all proper nonempty
    subsets, in chunks of increasing mask value."""
    n = len(weights)
    row_sums = rates.sum(axis=1)
    bit_w = weights.astype(float)
    for start in range(1, 2 ** n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 2 ** n), dtype=np.int64)
        member = (masks[:, None] >> np.arange(n)) & 1  # (chunk, n) 0/1
        member = member.astype(float)
        sizes = member.sum(axis=1)
        proper = sizes < n
        masks, member, sizes = masks[proper], member[proper], sizes[proper]
        w = member @ bit_w
        # flow(U) = sum_{x in U} rowsum(x) - 2 * internal rate mass
        internal = np.einsum("ki,ij,kj->k", member, rates, member)
        flow = member @ row_sums - internal
        yield masks, sizes.astype(int), w, flow


def _lex_smaller(a: tuple, b: tuple) -> bool:
    return a < b


def cheeger_exact(gen: WalkGenerator) -> tuple[float, tuple]:
    """Exact Cheeger constant by enumeration over subsets with
    W(U) <= W_total / 2; ties broken by lexicographically smallest index set."""
    n = gen.n
    if n < 2:
        raise InvalidCutError("need at least two vertices")
    if n > ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"n={n} exceeds the enumeration limit {ENUMERATION_LIMIT}; "
            "use cheeger_sweep_upper or trap_upper_bound")
    rates = gen.graph.untruncated_rates()
    half = gen.total_weight / 2.0
    best = INF
    best_set: tuple = ()
    for masks, _sizes, w, flow in _enumerate_cut_stats(rates, gen.weights):
        adm = w <= half * (1 + 1e-15)
        if not adm.any():
            continue
        cond = flow[adm] / w[adm]
        sub_masks = masks[adm]
        k = int(np.argmin(cond))
        val = float(cond[k])
        if val < best:
            best = val
            best_set = _mask_indices(int(sub_masks[k]), n)
        # resolve exact ties toward the lexicographically smallest index set
        for m in sub_masks[cond == best]:
            cand = _mask_indices(int(m), n)
            if _lex_smaller(cand, best_set):
                best_set = cand
    return best, best_set


def iso_profile_exact(gen: WalkGenerator, grid) -> IsoProfile:
    """Isoperimetric profile phi(t) = inf of conductance over subsets of
    weight fraction at most t, exactly by enumeration."""
    n = gen.n
    if n < 2:
        raise InvalidCutError("need at least two vertices")
    if n > ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"n={n} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    grid = tuple(float(t) for t in grid)
    if any(t <= 0 or t > 1 for t in grid) or list(grid) != sorted(grid):
        raise InvalidParameterError("grid must be increasing values in (0, 1]")
    rates = gen.graph.untruncated_rates()
    w_tot = gen.total_weight
    values = np.full(len(grid), INF)
    for _masks, _sizes, w, flow in _enumerate_cut_stats(rates, gen.weights):
        cond = flow / w
        frac = w / w_tot
        for j, t in enumerate(grid):
            adm = frac <= t * (1 + 1e-15)
            if adm.any():
                values[j] = min(values[j], float(cond[adm].min()))
    return IsoProfile(grid=grid, values=tuple(values.tolist()),
                      kind=f"model{gen.model}")


def hybrid_profile_exact(gen3: WalkGenerator, grid) -> IsoProfile:
    """Hybrid profile: model-3 conductance under the counting constraint
    #(U) <= t * n."""
    if gen3.model != 3:
        raise InvalidParameterError("hybrid profile requires a model-3 generator")
    n = gen3.n
    if n < 2:
        raise InvalidCutError("need at least two vertices")
    if n > ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"n={n} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    grid = tuple(float(t) for t in grid)
    if any(t <= 0 or t > 1 for t in grid) or list(grid) != sorted(grid):
        raise InvalidParameterError("grid must be increasing values in (0, 1]")
    rates = gen3.graph.untruncated_rates()
    values = np.full(len(grid), INF)
    for _masks, sizes, w, flow in _enumerate_cut_stats(rates, gen3.weights):
        cond = flow / w
        frac = sizes / n
        for j, t in enumerate(grid):
            adm = frac <= t * (1 + 1e-15)
            if adm.any():
                values[j] = min(values[j], float(cond[adm].min()))
    return IsoProfile(grid=grid, values=tuple(values.tolist()), kind="hybrid")


def cheeger_sweep_upper(gen: WalkGenerator,
                        eigvec: np.ndarray | None = None) -> tuple[float, tuple]:
    """Spectral sweep-cut upper bound on the Cheeger constant.

    Sorts vertices by the second eigenvector of the symmetrized generator
    (ties broken by index), evaluates every prefix cut, and returns the best
    conductance among prefixes or their complements with weight at most half
    the total.  An already computed eigenvector can be passed in.
    """
    from .spectral import spectral_gap

    if gen.n < 2:
        raise InvalidCutError("need at least two vertices")
    vec = spectral_gap(gen)[1] if eigvec is None else np.asarray(eigvec)
    order = np.lexsort((np.arange(gen.n), vec))
    rates = gen.graph.untruncated_rates()
    row_sums = rates.sum(axis=1)
    w_ord = gen.weights[order]
    w_tot = gen.total_weight
    best = INF
    best_cut: tuple = ()
    flow = 0.0
    weight = 0.0
    for k in range(gen.n - 1):
        v = order[k]
        flow += row_sums[v] - 2.0 * rates[v, order[:k]].sum()
        weight += w_ord[k]
        if weight <= w_tot / 2.0:
            cond = flow / weight
            cut = order[: k + 1]
        else:
            cond = flow / (w_tot - weight)
            cut = order[k + 1:]
        if cond < best:
            best = float(cond)
            best_cut = tuple(sorted(int(i) for i in cut))
    return best, best_cut


def trap_upper_bound(xi: PointSet, gen: WalkGenerator) -> tuple[float, tuple]:
    """Upper bound on the Cheeger constant from trap candidates.

    Models 1 and 3 scan all singletons.  Model 2 additionally scans pairs of
    points at mutual distance at most sqrt(d), where a close pair forms a
    deep trap whose internal rate dominates its weight.  Only candidates of
    at most half the total weight are admitted.
    """
    n = gen.n
    if n < 3:
        raise InvalidCutError("trap scan needs at least three points")
    alpha = gen.graph.alpha
    rates = gen.graph.untruncated_rates()
    row_sums = rates.sum(axis=1)
    half = gen.total_weight / 2.0
    best = INF
    best_set: tuple = ()
    adm = gen.weights <= half
    if adm.any():
        cond = row_sums[adm] / gen.weights[adm]
        k = int(np.argmin(cond))
        best = float(cond[k])
        best_set = (int(np.flatnonzero(adm)[k]),)
    if gen.model == 2:
        d = cdist(xi.points, xi.points)
        close = np.triu(d <= math.sqrt(xi.dim), k=1)
        for i, j in zip(*np.nonzero(close)):
            weight = gen.weights[i] + gen.weights[j]
            if weight > half:
                continue
            flow = row_sums[i] + row_sums[j] - 2.0 * rates[i, j]
            cond = flow / weight
            if cond < best:
                best = float(cond)
                best_set = (int(i), int(j))
    return best, best_set
