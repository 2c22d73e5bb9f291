"""Finitely presented graph families, their finite BFS truncations, and
component/neighbourhood primitives.

A family presents a (possibly infinite) locally finite graph through a
deterministic neighbour generator.  Everything downstream operates on a
`Truncation`: the closed BFS ball of a chosen radius around the family root,
with the outermost layer marked as `frontier`.  Frontier membership is the
computable stand-in for "this part continues beyond the window"; whenever an
operation needs certainty about the infinite graph it must consult the
family's end oracle certificates (module `ends`) rather than the window alone.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Optional

from .errors import FamilyError, HorizonError


@dataclass(frozen=True)
class GraphFamily:
    """A graph presented by a neighbour generator.

    `generator(v)` must be deterministic, symmetric and return a finite list.
    `max_horizon` caps expansion for families whose presentation is only
    faithful up to a depth (None means unbounded).
    """

    name: str
    generator: Callable[[Any], list]
    root: Any
    params: Mapping[str, Any] = field(default_factory=dict)
    oracle: Any = None  # EndOracle; typed loosely to avoid an import cycle
    max_horizon: Optional[int] = None

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"GraphFamily({self.name}{', ' + ps if ps else ''})"


class Truncation:
    """The closed BFS ball of radius `horizon` around the family root.

    Immutable after construction.  Vertices carry a deterministic index
    (BFS discovery order); all iteration in the package follows it, which
    makes every downstream computation reproducible.
    """

    def __init__(self, family, horizon, verts, adj, depth, frontier):
        self.family = family
        self.horizon = horizon
        self.verts = tuple(verts)  # discovery order
        self._adj = adj  # vertex -> tuple of neighbours, discovery-sorted
        self.depth = depth
        self.frontier = frozenset(frontier)
        self.vertices = frozenset(verts)
        self.index = {v: i for i, v in enumerate(self.verts)}

    # -- basic queries ----------------------------------------------------

    def neighbors(self, v):
        return self._adj[v]

    def has_edge(self, u, v):
        return v in self._adj.get(u, ())

    @property
    def edges(self):
        """Undirected edge set as frozensets (derived, not stored)."""
        out = set()
        for u in self.verts:
            for w in self._adj[u]:
                if self.index[u] < self.index[w]:
                    out.add(frozenset((u, w)))
        return out

    def sort_key(self, v):
        return self.index[v]

    def sorted(self, vs):
        return sorted(vs, key=self.index.__getitem__)

    def ball(self, radius):
        """Vertices within BFS depth `radius` of the root."""
        return frozenset(v for v in self.verts if self.depth[v] <= radius)

    def max_depth(self, vs, default=0):
        vs = list(vs)
        if not vs:
            return default
        return max(self.depth[v] for v in vs)

    def min_depth(self, vs, default=0):
        vs = list(vs)
        if not vs:
            return default
        return min(self.depth[v] for v in vs)

    # -- restriction ------------------------------------------------------

    def restrict(self, keep):
        """Induced sub-truncation on `keep`.

        Depth, index and frontier are inherited; the restriction is the
        window view of an induced subgraph such as G[V(C) ∪ N(C)].
        """
        keep = frozenset(keep)
        verts = [v for v in self.verts if v in keep]
        adj = {v: tuple(w for w in self._adj[v] if w in keep) for v in verts}
        sub = Truncation.__new__(Truncation)
        sub.family = self.family
        sub.horizon = self.horizon
        sub.verts = tuple(verts)
        sub._adj = adj
        sub.depth = self.depth
        sub.frontier = self.frontier & keep
        sub.vertices = keep
        sub.index = self.index
        return sub

    def __repr__(self):
        return (f"Truncation({self.family.name}, h={self.horizon}, "
                f"n={len(self.verts)})")


@dataclass(frozen=True)
class Region:
    """A connected induced subgraph together with its exact neighbourhood.

    `order` is |neighborhood|.  `touches_frontier` flags that the region may
    continue beyond the window (the finite/infinite proxy).
    """

    vertices: frozenset
    neighborhood: frozenset
    touches_frontier: bool = False

    @property
    def order(self):
        return len(self.neighborhood)

    def __contains__(self, v):
        return v in self.vertices

    def __le__(self, other):
        return self.vertices <= other.vertices

    def __lt__(self, other):
        return self.vertices < other.vertices

    def __repr__(self):
        return (f"Region(n={len(self.vertices)}, order={self.order}"
                f"{', frontier' if self.touches_frontier else ''})")


def expand(family, horizon):
    """Closed BFS ball of radius `horizon` around the family root.

    Every vertex within the ball has its generator called, so all edges with
    both endpoints inside the window are present (including frontier-frontier
    edges).  Raises FamilyError on asymmetric adjacency and HorizonError when
    the family's presentation cap is exceeded.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if family.max_horizon is not None and horizon > family.max_horizon:
        raise HorizonError(
            f"family {family.name} is presented faithfully only up to "
            f"horizon {family.max_horizon}; requested {horizon}",
            required=horizon,
        )
    gen_cache = {}

    def gen(v):
        if v not in gen_cache:
            nbrs = family.generator(v)
            if nbrs is None:
                raise FamilyError(
                    f"family {family.name}: generator signalled a non-finite "
                    f"neighbour list at {v!r}")
            gen_cache[v] = list(nbrs)
        return gen_cache[v]

    depth = {family.root: 0}
    order = [family.root]
    queue = deque([family.root])
    while queue:
        v = queue.popleft()
        if depth[v] == horizon:
            continue
        for w in gen(v):
            if w not in depth:
                depth[w] = depth[v] + 1
                order.append(w)
                queue.append(w)

    inside = set(order)
    adj = {}
    for v in order:
        adj[v] = tuple(w for w in gen(v) if w in inside)
    # symmetry check on the window
    for v in order:
        for w in adj[v]:
            if v not in gen(w):
                raise FamilyError(
                    f"family {family.name}: asymmetric adjacency between "
                    f"{v!r} and {w!r}")
    frontier = [v for v in order if depth[v] == horizon]
    # resort neighbour tuples into discovery order
    idx = {v: i for i, v in enumerate(order)}
    adj = {v: tuple(sorted(ws, key=idx.__getitem__)) for v, ws in adj.items()}
    return Truncation(family, horizon, order, adj, depth, frontier)


def components_minus(t, removed):
    """Connected components of t minus `removed`, as Regions.

    Returns a deterministic list (ordered by smallest vertex index).  Each
    region's neighbourhood is the exact set of removed vertices adjacent to
    it, and `touches_frontier` is set when the region meets the window edge.
    """
    removed = frozenset(removed)
    seen = set(removed)
    out = []
    for start in t.verts:
        if start in seen:
            continue
        comp = []
        nbhd = set()
        frontier_hit = False
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            if v in t.frontier:
                frontier_hit = True
            for w in t.neighbors(v):
                if w in removed:
                    nbhd.add(w)
                elif w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(Region(frozenset(comp), frozenset(nbhd), frontier_hit))
    return out


def region_of(t, vertices):
    """Build a Region from an explicit vertex set, checking connectivity."""
    vertices = frozenset(vertices)
    if not vertices:
        raise ValueError("a region must be non-empty")
    start = t.sorted(vertices)[0]
    seen = {start}
    stack = [start]
    nbhd = set()
    frontier_hit = False
    while stack:
        v = stack.pop()
        if v in t.frontier:
            frontier_hit = True
        for w in t.neighbors(v):
            if w in vertices:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
            else:
                nbhd.add(w)
    if seen != vertices:
        raise ValueError("vertex set is not connected in the host graph")
    return Region(vertices, frozenset(nbhd), frontier_hit)


def touch(c, d):
    """True iff the regions share a vertex or are joined by an edge.

    Both regions must come from the same truncation; an edge between them is
    visible as a neighbourhood hit.
    """
    if c.vertices & d.vertices:
        return True
    return bool(c.neighborhood & d.vertices) or bool(d.neighborhood & c.vertices)


def nested(c, d):
    return (not touch(c, d)) or c.vertices <= d.vertices or d.vertices <= c.vertices


def component_containing(t, removed, v):
    """The component of t - removed containing v, as a Region."""
    removed = frozenset(removed)
    if v in removed or v not in t.vertices:
        raise ValueError(f"{v!r} not in the graph minus the removed set")
    comp = []
    nbhd = set()
    frontier_hit = False
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        comp.append(u)
        if u in t.frontier:
            frontier_hit = True
        for w in t.neighbors(u):
            if w in removed:
                nbhd.add(w)
            elif w not in seen:
                seen.add(w)
                stack.append(w)
    return Region(frozenset(comp), frozenset(nbhd), frontier_hit)
