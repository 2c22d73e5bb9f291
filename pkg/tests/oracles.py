"""Independent brute-force oracles for the test suite.

Everything here works on plain adjacency dicts with BFS and subset
enumeration only; nothing imports the package's flow machinery, so these
stay valid as cross-checks for it.
"""

import random
from itertools import combinations


def random_graph(seed, n, p=0.4):
    """Seeded random simple graph on range(n), connected when possible."""
    rng = random.Random(seed)
    adj = {v: set() for v in range(n)}
    for v in range(1, n):
        w = rng.randrange(v)
        adj[v].add(w)
        adj[w].add(v)
    for u, w in combinations(range(n), 2):
        if rng.random() < p:
            adj[u].add(w)
            adj[w].add(u)
    return {v: sorted(ws) for v, ws in adj.items()}


def has_path_avoiding(adj, S, X, Y):
    """Is there an X-Y path in the graph minus S (one-vertex paths count)?"""
    S = set(S)
    X = set(X) - S
    Y = set(Y)
    if X & Y:
        return True
    seen = set(X)
    stack = list(X)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in S or w in seen:
                continue
            if w in Y:
                return True
            seen.add(w)
            stack.append(w)
    return False


def brute_min_separator_size(adj, X, Y, max_size=5):
    """Smallest |S| with no X-Y path in G - S, by exhaustive enumeration.

    Returns None when every S up to max_size fails.
    """
    verts = sorted(adj)
    for size in range(0, max_size + 1):
        for S in combinations(verts, size):
            if not has_path_avoiding(adj, S, X, Y):
                return size
    return None


def brute_all_min_separators(adj, X, Y, size):
    """Every separator of exactly the given (minimum) size."""
    out = []
    for S in combinations(sorted(adj), size):
        if not has_path_avoiding(adj, S, X, Y):
            out.append(frozenset(S))
    return out


def brute_components(adj, removed):
    removed = set(removed)
    seen = set(removed)
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = set()
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.add(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def bfs_ball(adj, root, radius):
    depth = {root: 0}
    frontier = [root]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in depth:
                    depth[w] = depth[v] + 1
                    nxt.append(w)
        frontier = nxt
    return depth


def half_grid_adj(k, cols):
    """Plain adjacency of [k] x [cols] (grid rules), for oracle cross-checks."""
    adj = {}
    for i in range(1, k + 1):
        for j in range(1, cols + 1):
            nbrs = []
            if j > 1:
                nbrs.append((i, j - 1))
            if j < cols:
                nbrs.append((i, j + 1))
            if i > 1:
                nbrs.append((i - 1, j))
            if i < k:
                nbrs.append((i + 1, j))
            adj[(i, j)] = nbrs
    return adj
