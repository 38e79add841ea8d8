"""Independent brute-force reference implementations used by the tests.

Everything here is written with plain loops and itertools, deliberately
avoiding the vectorized code paths of the package, so that agreement
between the two is a meaningful cross-check.
"""

import itertools
import math

import numpy as np
import scipy.linalg as sla


def brute_rates(points, alpha):
    """Dense rate matrix by a plain double loop."""
    n = len(points)
    r = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = math.dist(points[i], points[j])
            r[i, j] = math.exp(-(d ** alpha))
    return r


def brute_cut(points, alpha, weights, subset):
    """(weight, flow, conductance) of one subset from scratch."""
    subset = set(subset)
    n = len(points)
    flow = 0.0
    for i in subset:
        for j in range(n):
            if j not in subset:
                d = math.dist(points[i], points[j])
                flow += math.exp(-(d ** alpha))
    weight = sum(weights[i] for i in subset)
    return weight, flow, flow / weight


def brute_cheeger(points, alpha, weights):
    """Cheeger constant over all subsets of at most half the total weight."""
    n = len(points)
    total = sum(weights)
    best = math.inf
    best_set = None
    for k in range(1, n):
        for combo in itertools.combinations(range(n), k):
            w, _, cond = brute_cut(points, alpha, weights, combo)
            if w <= total / 2 * (1 + 1e-15):
                if cond < best or (cond == best and combo < best_set):
                    best = cond
                    best_set = combo
    return best, best_set


def brute_iso_profile(points, alpha, weights, grid, counting=False):
    """phi(t) over subsets constrained by weight fraction (or count
    fraction when counting=True)."""
    n = len(points)
    total = sum(weights)
    values = [math.inf] * len(grid)
    for k in range(1, n):
        for combo in itertools.combinations(range(n), k):
            w, _, cond = brute_cut(points, alpha, weights, combo)
            frac = k / n if counting else w / total
            for j, t in enumerate(grid):
                if frac <= t * (1 + 1e-15):
                    values[j] = min(values[j], cond)
    return values


def subset_cut_tables(points, alpha, weight_sets):
    """Boundary flow, cardinality and weight sums of every nonempty vertex
    subset, enumerated over bitmasks.

    Adding vertex v to a subset S changes the boundary flow by
    deg(v) - 2 * rate(v, S), so one pass over the masks in increasing
    order fills the whole table.  Returns (flow, sizes, wsums) indexed by
    mask, with wsums[k][m] the weight of mask m under weight_sets[k].
    """
    n = len(points)
    r = brute_rates(points, alpha)
    deg = r.sum(axis=1)
    m_all = 1 << n
    flow = [0.0] * m_all
    sizes = [0] * m_all
    wsums = [[0.0] * m_all for _ in weight_sets]
    for m in range(1, m_all):
        low = m & -m
        v = low.bit_length() - 1
        rest = m ^ low
        cross = 0.0
        t = rest
        while t:
            u = (t & -t).bit_length() - 1
            cross += r[v, u]
            t &= t - 1
        flow[m] = flow[rest] + deg[v] - 2.0 * cross
        sizes[m] = sizes[rest] + 1
        for k, w in enumerate(weight_sets):
            wsums[k][m] = wsums[k][rest] + w[v]
    return flow, sizes, wsums


def _union_find_components(members, adj):
    """Connected components of the induced subgraph, by union-find."""
    members = list(members)
    parent = {v: v for v in members}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in itertools.combinations(members, 2):
        if adj[a, b]:
            parent[find(a)] = find(b)
    groups = {}
    for v in members:
        groups.setdefault(find(v), []).append(v)
    return [sorted(g) for g in groups.values()]


def brute_spectral_profile_function(gen, spectral_gap_value):
    """Right-continuous step function r -> Lambda(r) as (breakpoints, values),
    fully independently of the package's enumeration."""
    rates = gen.graph.rates.toarray()
    n = gen.n
    s = rates.sum(axis=1)
    emat = (np.diag(s) - rates) / gen.total_weight
    bmat = np.diag(gen.nu) - np.outer(gen.nu, gen.nu)
    adj = rates > 0
    records = []
    for k in range(1, n):
        for combo in itertools.combinations(range(n), k):
            lam = math.inf
            for comp in _union_find_components(combo, adj):
                idx = np.array(comp)
                vals = sla.eigh(emat[np.ix_(idx, idx)],
                                bmat[np.ix_(idx, idx)], eigvals_only=True)
                lam = min(lam, float(vals[0]))
            records.append((float(gen.nu[list(combo)].sum()), lam))
    records.append((1.0, spectral_gap_value))
    records.sort(key=lambda rv: rv[0])
    breakpoints, values = [], []
    running = math.inf
    for r, lam in records:
        running = min(running, lam)
        if breakpoints and math.isclose(r, breakpoints[-1], rel_tol=1e-12):
            values[-1] = running
        else:
            breakpoints.append(r)
            values.append(running)
    return breakpoints, values


def brute_label_clusters(open_grid):
    """Nearest-neighbor cluster labels by repeated transitive closure."""
    open_grid = np.asarray(open_grid, dtype=bool)
    dim = open_grid.ndim
    sites = [tuple(idx) for idx in np.argwhere(open_grid)]
    site_set = set(sites)
    labels = {}
    next_label = 0
    for start in sites:
        if start in labels:
            continue
        next_label += 1
        stack = [start]
        labels[start] = next_label
        while stack:
            v = stack.pop()
            for ax in range(dim):
                for sign in (-1, 1):
                    nb = list(v)
                    nb[ax] += sign
                    nb = tuple(nb)
                    if nb in site_set and nb not in labels:
                        labels[nb] = next_label
                        stack.append(nb)
    out = np.zeros(open_grid.shape, dtype=int)
    for v, lab in labels.items():
        out[v] = lab
    return out, next_label


def brute_crossing(open_grid, direction=0):
    """Maximal vertex-disjoint crossing count by plain DFS augmenting
    paths on the in/out-split digraph (pure-Python Ford-Fulkerson)."""
    open_grid = np.asarray(open_grid, dtype=bool)
    dim = open_grid.ndim
    n = open_grid.shape[0]
    sites = [tuple(idx) for idx in np.argwhere(open_grid)]
    index = {v: i for i, v in enumerate(sites)}
    m = len(sites)
    if m == 0:
        return 0
    # node ids: source = -1, sink = -2, in(v) = 2v, out(v) = 2v+1
    cap = {}

    def add_edge(u, v, c):
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)

    big = m + 1
    for v, site in enumerate(sites):
        add_edge(2 * v, 2 * v + 1, 1)
        if site[direction] == 0:
            add_edge(-1, 2 * v, big)
        if site[direction] == n - 1:
            add_edge(2 * v + 1, -2, big)
        for ax in range(dim):
            for sign in (-1, 1):
                nb = list(site)
                nb[ax] += sign
                nb = tuple(nb)
                if nb in index:
                    add_edge(2 * v + 1, 2 * index[nb], big)
    adj = {}
    for (u, v) in cap:
        adj.setdefault(u, []).append(v)

    def augment():
        seen = {-1}
        stack = [(-1, [])]
        while stack:
            u, path = stack.pop()
            if u == -2:
                for e in path:
                    cap[e] -= 1
                    cap[(e[1], e[0])] += 1
                return True
            for v in adj.get(u, []):
                if v not in seen and cap[(u, v)] > 0:
                    seen.add(v)
                    stack.append((v, path + [(u, v)]))
        return False

    flow = 0
    while augment():
        flow += 1
    return flow


def brute_min_vertex_cut(open_grid, direction=0):
    """Size of the smallest set of open sites whose removal disconnects the
    two faces, by exhaustive subset search (tiny fields only)."""
    open_grid = np.asarray(open_grid, dtype=bool)
    sites = [tuple(idx) for idx in np.argwhere(open_grid)]

    def connects(removed):
        grid = open_grid.copy()
        for v in removed:
            grid[v] = False
        labels, nlab = brute_label_clusters(grid)
        for k in range(1, nlab + 1):
            where = labels == k
            if where.take(0, axis=direction).any() and \
                    where.take(-1, axis=direction).any():
                return True
        return False

    if not connects(()):
        return 0
    for size in range(1, len(sites) + 1):
        for combo in itertools.combinations(sites, size):
            if not connects(combo):
                return size
    return len(sites)
