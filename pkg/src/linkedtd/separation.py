"""Menger-style minimum vertex separators, disjoint path families, and stars.

The engine is a vertex-capacitated max-flow: every vertex is split into an
in-node and an out-node joined by a unit arc, edges become uncapacitated arcs
between the corresponding out/in nodes, and source/sink attachments are
uncapacitated.  Minimum cuts therefore always come out as vertex sets (which
may intersect the terminal sets, matching the separator definition where
C(S, ...) merely has to avoid X).  Augmenting-path search runs in the
truncation's deterministic vertex order, so flows, cuts and path families are
reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import AuditError
from .graph_core import touch

INF = float("inf")


@dataclass(frozen=True)
class PathFamily:
    """Pairwise vertex-disjoint X-Y paths; each path meets X only in its
    first vertex and Y only in its last (one-vertex paths for X ∩ Y)."""

    paths: tuple
    endpoints_left: frozenset
    endpoints_right: frozenset

    def __len__(self):
        return len(self.paths)

    @property
    def value(self):
        return len(self.paths)


@dataclass(frozen=True)
class Separation:
    """An ordered vertex bipartition (A, B) with no edge across A∖B -- B∖A."""

    left: frozenset
    right: frozenset

    @property
    def separator(self):
        return self.left & self.right

    @property
    def order(self):
        return len(self.left & self.right)


@dataclass(frozen=True)
class Star:
    """A star of separations: pairwise A ⊆ D and B ⊇ C; `interior` is the
    intersection of all right sides (all vertices for the empty star)."""

    separations: tuple
    interior: frozenset


class _Flow:
    """Unit-vertex-capacity max flow between vertex sets of a truncation.

    Node 2i   = in-node of vertex i (truncation-local dense index),
    node 2i+1 = out-node.  Arc storage is the classic paired head/next list.
    """

    def __init__(self, t, sources, sinks, removed=frozenset(), uncuttable=frozenset()):
        self.t = t
        verts = [v for v in t.verts if v not in removed]
        self.verts = verts
        self.pos = {v: i for i, v in enumerate(verts)}
        n = 2 * len(verts) + 2
        self.source = 2 * len(verts)
        self.sink = 2 * len(verts) + 1
        self.head = [-1] * n
        self.to = []
        self.cap = []
        self.nxt = []
        self.sources = [v for v in t.sorted(frozenset(sources) & t.vertices)
                        if v not in removed]
        self.sinks = (frozenset(sinks) & t.vertices) - removed
        src_set = frozenset(self.sources)
        for v in verts:
            i = self.pos[v]
            self._arc(2 * i, 2 * i + 1, INF if v in uncuttable else 1)
        # no arcs into source in-nodes or out of sink out-nodes: a maximum
        # family never needs paths running through a second terminal, and
        # this keeps extracted paths meeting X/Y only at their endpoints
        for v in verts:
            if v in self.sinks:
                continue
            i = self.pos[v]
            for w in t.neighbors(v):
                if w in self.pos and w not in src_set:
                    self._arc(2 * i + 1, 2 * self.pos[w], INF)
        for v in self.sources:
            self._arc(self.source, 2 * self.pos[v], INF)
        for v in t.sorted(self.sinks):
            self._arc(2 * self.pos[v] + 1, self.sink, INF)
        self.value = 0
        self._run()

    def _arc(self, a, b, c):
        self.to.append(b)
        self.cap.append(c)
        self.nxt.append(self.head[a])
        self.head[a] = len(self.to) - 1
        self.to.append(a)
        self.cap.append(0)
        self.nxt.append(self.head[b])
        self.head[b] = len(self.to) - 1

    def _run(self):
        head, to, cap, nxt = self.head, self.to, self.cap, self.nxt
        src, snk = self.source, self.sink
        while True:
            prev_arc = {src: -1}
            queue = deque([src])
            found = False
            while queue and not found:
                u = queue.popleft()
                e = head[u]
                while e != -1:
                    v = to[e]
                    if cap[e] > 0 and v not in prev_arc:
                        prev_arc[v] = e
                        if v == snk:
                            found = True
                            break
                        queue.append(v)
                    e = nxt[e]
            if not found:
                break
            # unit bottleneck: every augmenting path crosses a unit split arc,
            # except when source and sink attach to the same split vertex, in
            # which case the bottleneck is still that vertex's unit arc
            v = snk
            bottleneck = INF
            while v != src:
                e = prev_arc[v]
                bottleneck = min(bottleneck, cap[e])
                v = to[e ^ 1]
            v = snk
            while v != src:
                e = prev_arc[v]
                cap[e] -= bottleneck
                cap[e ^ 1] += bottleneck
                v = to[e ^ 1]
            self.value += int(bottleneck)

    # -- cut extraction ----------------------------------------------------

    def _reachable_from_source(self):
        seen = {self.source}
        queue = deque([self.source])
        head, to, cap, nxt = self.head, self.to, self.cap, self.nxt
        while queue:
            u = queue.popleft()
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
                e = nxt[e]
        return seen

    def _coreachable_to_sink(self):
        seen = {self.sink}
        queue = deque([self.sink])
        head, to, cap, nxt = self.head, self.to, self.cap, self.nxt
        while queue:
            u = queue.popleft()
            e = head[u]
            while e != -1:
                # arc e^1 points v -> u; usable backwards iff it has capacity
                v = to[e]
                if cap[e ^ 1] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
                e = nxt[e]
        return seen

    def cut_nearest_sources(self):
        reach = self._reachable_from_source()
        out = [v for v in self.verts
               if 2 * self.pos[v] in reach and 2 * self.pos[v] + 1 not in reach]
        return frozenset(out)

    def cut_nearest_sinks(self):
        coreach = self._coreachable_to_sink()
        out = [v for v in self.verts
               if 2 * self.pos[v] + 1 in coreach and 2 * self.pos[v] not in coreach]
        return frozenset(out)

    # -- path extraction ---------------------------------------------------

    def paths(self):
        """Decompose the flow into vertex-disjoint paths (lists of vertices)."""
        succ = {}
        used_from_source = []
        head, to, cap, nxt = self.head, self.to, self.cap, self.nxt
        for v in self.verts:
            i = self.pos[v]
            e = head[2 * i + 1]
            while e != -1:
                # forward arcs sit at even indices; flow = residual on pair
                if e % 2 == 0 and cap[e ^ 1] > 0 and to[e] != self.sink:
                    succ[v] = self.verts[to[e] // 2]
                e = nxt[e]
        e = head[self.source]
        while e != -1:
            if e % 2 == 0 and cap[e ^ 1] > 0:
                used_from_source.append(self.verts[to[e] // 2])
            e = nxt[e]
        used_from_source.sort(key=self.t.sort_key)
        result = []
        for start in used_from_source:
            path = [start]
            v = start
            while v not in self.sinks:
                v = succ[v]
                path.append(v)
            result.append(tuple(path))
        return result

    # -- enumeration of all minimum cuts ------------------------------------

    def all_min_cuts(self, limit=10000):
        """Every minimum vertex cut, via closed sets of the residual digraph.

        A minimum cut corresponds to a set of nodes that is closed under
        residual arcs, contains everything reachable from the source, and
        avoids everything co-reachable to the sink; the cut vertices are the
        split arcs leaving the set.  Enumeration recurses over the strongly
        connected components of the residual graph between those two poles.
        """
        reach = self._reachable_from_source()
        coreach = self._coreachable_to_sink()
        if reach & coreach:
            raise AuditError("flow not maximum; residual path remains")
        n = 2 * len(self.verts) + 2
        # residual adjacency (arcs with remaining capacity)
        radj = [[] for _ in range(n)]
        head, to, cap, nxt = self.head, self.to, self.cap, self.nxt
        for u in range(n):
            e = head[u]
            while e != -1:
                if cap[e] > 0:
                    radj[u].append(to[e])
                e = nxt[e]

        comp = self._scc(radj, n)
        ncomp = max(comp) + 1
        csucc = [set() for _ in range(ncomp)]
        for u in range(n):
            for v in radj[u]:
                if comp[u] != comp[v]:
                    csucc[comp[u]].add(comp[v])
        base = {comp[u] for u in reach}
        forbidden = {comp[u] for u in coreach}
        # every minimum cut is the split-arc boundary of a residual-closed
        # node set containing `base` and avoiding `forbidden`; all such sets
        # are reachable from the base closure by single-component additions
        return self._min_cuts_bfs(base, forbidden, csucc, ncomp, comp, n, limit)

    def _min_cuts_bfs(self, base, forbidden, csucc, ncomp, comp, n, limit):
        def closure_of(seed):
            cl = set(seed)
            stack = list(seed)
            while stack:
                c = stack.pop()
                for d in csucc[c]:
                    if d not in cl:
                        cl.add(d)
                        stack.append(d)
            return frozenset(cl)

        start = closure_of(base)
        if start & forbidden:
            return []
        seen = {start}
        queue = deque([start])
        cuts = set()
        while queue and len(seen) <= limit:
            cl = queue.popleft()
            members = {u for u in range(n) if comp[u] in cl}
            cut = frozenset(
                v for v in self.verts
                if 2 * self.pos[v] in members and 2 * self.pos[v] + 1 not in members)
            cuts.add(cut)
            for c in range(ncomp):
                if c in cl or c in forbidden:
                    continue
                nxt_cl = closure_of(cl | {c})
                if nxt_cl & forbidden or nxt_cl in seen:
                    continue
                seen.add(nxt_cl)
                queue.append(nxt_cl)
        return sorted(cuts, key=lambda s: sorted(self.t.sort_key(v) for v in s))

    @staticmethod
    def _scc(adj, n):
        """Iterative Tarjan; returns component id per node."""
        indexv = [-1] * n
        low = [0] * n
        oncur = [False] * n
        comp = [-1] * n
        stack = []
        counter = [0]
        ccount = [0]
        for root in range(n):
            if indexv[root] != -1:
                continue
            work = [(root, 0)]
            while work:
                v, pi = work[-1]
                if pi == 0:
                    indexv[v] = low[v] = counter[0]
                    counter[0] += 1
                    stack.append(v)
                    oncur[v] = True
                advanced = False
                for i in range(pi, len(adj[v])):
                    w = adj[v][i]
                    if indexv[w] == -1:
                        work[-1] = (v, i + 1)
                        work.append((w, 0))
                        advanced = True
                        break
                    elif oncur[w]:
                        low[v] = min(low[v], indexv[w])
                if advanced:
                    continue
                if low[v] == indexv[v]:
                    while True:
                        w = stack.pop()
                        oncur[w] = False
                        comp[w] = ccount[0]
                        if w == v:
                            break
                    ccount[0] += 1
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
        return comp


# -- public operations -------------------------------------------------------


def max_disjoint_paths(t, X, Y, removed=frozenset(), uncuttable=frozenset()):
    """A maximum family of pairwise vertex-disjoint X-Y paths.

    By Menger's theorem its cardinality equals the minimum X-Y vertex
    separator size; vertices of X ∩ Y contribute one-vertex paths.
    """
    f = _Flow(t, frozenset(X), frozenset(Y), removed, uncuttable)
    return PathFamily(tuple(f.paths()), frozenset(X), frozenset(Y))


def separator_order(t, X, Y, removed=frozenset(), uncuttable=frozenset()):
    """Minimum X-Y vertex separator size (= max disjoint path count)."""
    return _Flow(t, frozenset(X), frozenset(Y), removed, uncuttable).value


def min_separator(t, X, Y, side="nearest_X", removed=frozenset(), uncuttable=frozenset()):
    """A canonical minimum X-Y vertex separator.

    `nearest_X` is the reachable-set cut of a maximum flow (the unique
    inclusion-minimal minimum cut on the X side); `nearest_Y` symmetric.
    Deterministic given the truncation's vertex order.
    """
    f = _Flow(t, frozenset(X), frozenset(Y), removed, uncuttable)
    if side == "nearest_X":
        return f.cut_nearest_sources()
    if side == "nearest_Y":
        return f.cut_nearest_sinks()
    raise ValueError(f"unknown side {side!r}")


def all_min_separators(t, X, Y, limit=10000, removed=frozenset()):
    """Every minimum X-Y vertex separator (residual closed-set enumeration)."""
    return _Flow(t, frozenset(X), frozenset(Y), removed).all_min_cuts(limit)


def is_linked_set(t, X, Y):
    """True iff there are |X| disjoint X-Y paths, one starting at each x."""
    X = frozenset(X)
    return separator_order(t, X, frozenset(Y)) == len(X)


def separates(t, S, X, Y):
    """Does S hit every X-Y path (trivial one-vertex paths included)?"""
    S = frozenset(S)
    X = frozenset(X) - S
    Y = frozenset(Y)
    if X & Y:
        return False
    seen = set(X)
    stack = list(X)
    while stack:
        v = stack.pop()
        for w in t.neighbors(v):
            if w in S or w in seen:
                continue
            if w in Y:
                return False
            seen.add(w)
            stack.append(w)
    return True


def star_from_regions(t, regions):
    """Package pairwise non-touching regions as a star of separations.

    For each region C the separation is (C ∪ N(C), V ∖ C); the star is
    left-componental by construction and left-tight when each region's
    neighbourhood is exactly its separator (always true here).
    """
    regions = list(regions)
    for i, c in enumerate(regions):
        for d in regions[i + 1:]:
            if touch(c, d):
                raise AuditError(f"touching regions passed to star_from_regions: {c} / {d}")
    seps = []
    interior = set(t.vertices)
    for c in regions:
        left = c.vertices | c.neighborhood
        right = t.vertices - c.vertices
        seps.append(Separation(frozenset(left), frozenset(right)))
        interior &= right
    return Star(tuple(seps), frozenset(interior))


def star_is_valid(star):
    """Check the pairwise star axioms: A ⊆ D and B ⊇ C for distinct members."""
    seps = star.separations
    for i, s in enumerate(seps):
        for r in seps:
            if r is s:
                continue
            if not (s.left <= r.right and s.right >= r.left):
                return False
    return True
