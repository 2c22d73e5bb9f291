"""Computable stand-ins for the end space of a family.

Ends are oracle-declared, never inferred: a family ships, per end, a canonical
ray, a private "anchor" slice sequence marching into the end, its dominator
set and degree, and a stabilization certificate.  The certificate
`stabilization_depth(k, d)` promises that any minimum separator of order <= k
between a vertex set within depth d and any end lies entirely within the
returned depth, so window answers beyond it equal their infinite-graph
counterparts.  Every "X to end" quantity becomes a finite flow problem
between X and an anchor slice beyond the certified depth (dominators join the
sink side: an X-end separator must also shield the dominators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Optional

from .errors import AuditError, HorizonError
from .graph_core import Region, component_containing, components_minus
from .separation import _Flow, max_disjoint_paths, min_separator, separator_order

# separator orders relevant to boundary decisions at desk scale; all built-in
# families have combined degrees <= 4
BOUNDARY_ORDER_CAP = 6


@dataclass(frozen=True)
class EndHandle:
    """A family-declared end.

    `ray_fn(h)` is the canonical ray truncated to depth <= h (a path, prefix
    monotone in h).  `anchor_fn(n)` is the n-th slice of the end's private
    tube; None means "use whole depth slices" (single-end families).
    `attach_depth` bounds the depth at which the end's tube hangs off the
    rest of the graph.
    """

    id: str
    degree: Optional[int]
    dominators: frozenset
    attach_depth: int
    ray_fn: Callable[[int], tuple] = field(compare=False, repr=False)
    anchor_fn: Optional[Callable[[int], tuple]] = field(
        default=None, compare=False, repr=False)

    @property
    def combined_degree(self):
        if self.degree is None:
            return None
        return self.degree + len(self.dominators)

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"EndHandle({self.id})"


@dataclass(frozen=True)
class EndOracle:
    """Enumerable (possibly sampled) end set plus stabilization certificates."""

    family_name: str
    ends_fn: Callable[[int], tuple] = field(compare=False, repr=False)
    stabilization_depth: Callable[[int, int], int] = field(compare=False, repr=False)
    sampled: bool = False

    def ends(self, horizon):
        return self.ends_fn(horizon)

    def by_id(self, horizon, end_id):
        for eps in self.ends(horizon):
            if eps.id == end_id:
                return eps
        raise KeyError(end_id)


# -- ray / anchor helpers ------------------------------------------------------


def ray_in(t, eps):
    """The canonical ray's window portion inside t (a path suffix for
    restricted hosts; the full prefix on the root truncation)."""
    ray = [v for v in eps.ray_fn(t.horizon) if t.depth.get(v, t.horizon + 1) <= t.horizon]
    present = [v in t.vertices for v in ray]
    if all(present):
        return tuple(ray)
    # restricted host: keep the maximal suffix that is present
    cut = max(i for i, p in enumerate(present) if not p)
    return tuple(ray[cut + 1:])


def tail_vertex(t, eps):
    ray = ray_in(t, eps)
    if not ray:
        raise HorizonError(
            f"end {eps.id}: canonical ray invisible in this window",
            required=eps.attach_depth + 2)
    return ray[-1]


def lives_in(t, eps):
    """Window proxy for 'the end lives in this (restricted) graph'."""
    ray = [v for v in eps.ray_fn(t.horizon)]
    return bool(ray) and ray[-1] in t.vertices


def _slices(t, eps):
    if eps.anchor_fn is not None:
        # slice indices need not track depth (apex shortcuts flatten it), so
        # scan with a miss budget instead of a fixed range
        misses = 0
        cap = 8 * (t.horizon + 2) + 64
        for n in range(1, cap):
            raw = eps.anchor_fn(n)
            s = tuple(v for v in raw if v in t.vertices)
            if s and len(s) == len(raw):
                misses = 0
                yield s
            else:
                misses += 1
                if misses > t.horizon + 4:
                    return
    else:
        for n in range(1, t.horizon + 1):
            s = tuple(v for v in t.verts if t.depth[v] == n)
            if s:
                yield s


def anchor_beyond(t, eps, min_depth, deepest=False):
    """An anchor slice of eps with every vertex strictly deeper than
    min_depth (certified to pin the end).  HorizonError when the window has
    no such slice."""
    best = None
    for s in _slices(t, eps):
        if t.min_depth(s) > min_depth:
            if not deepest:
                return s
            best = s
    if best is not None:
        return best
    raise HorizonError(
        f"end {eps.id}: no anchor slice beyond certified depth {min_depth} "
        f"within horizon {t.horizon}",
        required=min_depth + max(2, eps.attach_depth + 2))


def ends_living_in(t, oracle):
    """Oracle ends whose window tail lies inside t (t may be restricted)."""
    return tuple(eps for eps in oracle.ends(t.horizon) if lives_in(t, eps))


# -- the C(S, end) primitive ---------------------------------------------------


def component_of_end(t, S, eps, oracle=None):
    """The component of t - S in which the end lives, as a Region.

    Requires the horizon to cover the stabilization certificate for |S| at
    the depths S occupies; refuses with the required horizon otherwise.
    """
    oracle = oracle or t.family.oracle
    S = frozenset(S)
    d = t.max_depth(S, 0)
    D = oracle.stabilization_depth(len(S), d)
    if t.horizon < D:
        raise HorizonError(
            f"component_of_end needs horizon >= {D} for a separator of "
            f"order {len(S)} at depth {d}", required=D)
    # beyond the separator's depth the end's tube is S-free, so any anchor
    # slice there pins the component
    a = anchor_beyond(t, eps, d)
    return component_containing(t, S, a[0])


def _sink_side(t, eps, D, deepest=False):
    sinks = set(anchor_beyond(t, eps, D, deepest=deepest))
    sinks.update(v for v in eps.dominators if v in t.vertices)
    return frozenset(sinks)


def min_end_separator(t, X, eps, side="nearest_X", oracle=None, witness=False):
    """A minimum X-end vertex separator (canonical nearest cut).

    Computed as the minimum cut between X and an anchor slice beyond the
    certified depth, with the end's dominators on the sink side.  With
    `witness=True` also returns the disjoint path family showing the
    separator is linked toward the end.
    """
    oracle = oracle or t.family.oracle
    X = frozenset(X)
    D = oracle.stabilization_depth(len(X), t.max_depth(X, 0))
    sinks = _sink_side(t, eps, D)
    S = min_separator(t, X, sinks, side=side)
    if not witness:
        return S
    return S, max_disjoint_paths(t, S, sinks)


def is_linked_to_end(t, X, eps, oracle=None):
    """True iff |min X-end separator| = |X| (disjoint paths-and-rays from
    every x, dominators counting as path targets)."""
    oracle = oracle or t.family.oracle
    X = frozenset(X)
    D = oracle.stabilization_depth(len(X), t.max_depth(X, 0))
    sinks = _sink_side(t, eps, D)
    return separator_order(t, X, sinks) == len(X)


def end_separator_order(t, X, eps, oracle=None):
    oracle = oracle or t.family.oracle
    X = frozenset(X)
    D = oracle.stabilization_depth(len(X), t.max_depth(X, 0))
    return separator_order(t, X, _sink_side(t, eps, D))


# -- boundary ------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _tail_region(t, eps, D):
    """Component of t - B_D containing the end's tail (cached per window)."""
    ball = t.ball(D)
    a = anchor_beyond(t, eps, D)
    return component_containing(t, ball, a[0])


def end_in_boundary(t, X, eps, oracle=None):
    """Window decision of 'no finite X-end separator exists'.

    When the whole of X fits under a certificate, iterate: find the minimum
    cut between X and a deep anchor slice, nearest the end.  A cut confined
    to the certified ball is a genuine finite separator: remove it and retry
    (X may reconnect deeper).  A cut forced beyond the certified depth means
    separators escape every ball the window can certify, so the end lies in
    the closure of X.  When X itself reaches beyond every certifiable depth
    it is indistinguishable from a set continuing forever, and counts as
    attached exactly to the ends whose private tail region it enters beyond
    their certificate.
    """
    oracle = oracle or t.family.oracle
    X = frozenset(X) & t.vertices
    if not X:
        return False
    if not lives_in(t, eps):
        # the end is not part of this (restricted) graph
        return False
    D0 = oracle.stabilization_depth(BOUNDARY_ORDER_CAP, eps.attach_depth)
    if t.horizon <= D0 + 1:
        raise HorizonError(
            f"end {eps.id}: boundary decisions need horizon > {D0 + 1}",
            required=D0 + 2)
    D = oracle.stabilization_depth(
        BOUNDARY_ORDER_CAP, max(eps.attach_depth, t.max_depth(X)))
    try:
        anchor_beyond(t, eps, D)
        exact = True
    except HorizonError:
        exact = False
    if not exact:
        tail = _tail_region(t, eps, D0)
        return any(t.depth[v] > D0 for v in X & tail.vertices)
    tail = _tail_region(t, eps, D)
    if not (X & tail.vertices):
        # N(tail region) is itself a confined finite separator
        return False
    removed = frozenset()
    budget = len(t.ball(D)) + 2
    for _ in range(budget):
        sources = X - removed
        if not sources:
            return False
        sinks = frozenset(anchor_beyond(t, eps, max(D, t.max_depth(removed, 0)),
                                        deepest=True)) - removed
        f = _Flow(t, sources, sinks, removed=removed)
        if f.value == 0:
            return False
        S = f.cut_nearest_sinks()
        if t.max_depth(S) > D:
            return True
        removed = removed | S
    raise AuditError(f"boundary iteration did not settle for end {eps.id}")


def boundary_of(t, X, oracle=None):
    """The set of oracle ends in the closure of the vertex set X."""
    oracle = oracle or t.family.oracle
    return frozenset(
        eps for eps in oracle.ends(t.horizon) if end_in_boundary(t, X, eps, oracle))


# -- G_delta specifications ----------------------------------------------------


@dataclass(frozen=True)
class ClosedStage:
    """Window view of one closed set X_n: a vertex part plus end ids."""

    vertices: frozenset
    end_ids: frozenset


@dataclass(frozen=True)
class GDeltaSpec:
    """A displayed-end prescription: the ends to display and the exhaustion
    of everything else by closed stages."""

    name: str
    oracle: EndOracle
    psi_fn: Callable[[Any], tuple] = field(compare=False, repr=False)
    stage_fn: Callable[[int, Any], ClosedStage] = field(compare=False, repr=False)

    def psi(self, t):
        return self.psi_fn(t)

    def psi_ids(self, t):
        return frozenset(e.id for e in self.psi(t))

    def xi(self, t):
        pids = self.psi_ids(t)
        return tuple(e for e in self.oracle.ends(t.horizon) if e.id not in pids)

    def stage(self, n, t):
        return self.stage_fn(n, t)


def _dominated_by(oracle, t, vertices):
    vertices = frozenset(vertices)
    return frozenset(
        e.id for e in oracle.ends(t.horizon) if e.dominators & vertices)


def _ball_stage(oracle, n, t):
    if not oracle.ends(t.horizon):
        # finite / end-free window: the whole vertex set is closed
        return ClosedStage(frozenset(t.vertices), frozenset())
    ball = t.ball(n)
    return ClosedStage(ball, _dominated_by(oracle, t, ball))


def undominated_gdelta(family):
    """Display exactly the undominated ends; stage n is the closed ball
    B_n(root) together with the ends its vertices dominate."""
    oracle = family.oracle

    def psi(t):
        return tuple(e for e in oracle.ends(t.horizon) if not e.dominators)

    return GDeltaSpec("undominated", oracle, psi,
                      lambda n, t: _ball_stage(oracle, n, t))


def all_ends_gdelta(family):
    """Display every oracle end (valid only when no end is dominated)."""
    oracle = family.oracle

    def psi(t):
        return tuple(oracle.ends(t.horizon))

    return GDeltaSpec("all", oracle, psi,
                      lambda n, t: _ball_stage(oracle, n, t))


def subset_gdelta(family, end_ids):
    """Display the listed oracle ends; the remaining ends enter the stages
    one by one (single end points are closed)."""
    oracle = family.oracle
    wanted = frozenset(end_ids)

    def psi(t):
        return tuple(e for e in oracle.ends(t.horizon) if e.id in wanted)

    def stage(n, t):
        base = _ball_stage(oracle, n, t)
        others = [e.id for e in oracle.ends(t.horizon) if e.id not in wanted]
        return ClosedStage(base.vertices, base.end_ids | frozenset(others[:n]))

    return GDeltaSpec("subset", oracle, psi, stage)


def audit_gdelta(t, spec, levels):
    """Audit a GDeltaSpec on a window: stages monotone and closed, disjoint
    from the displayed ends, and exhausting the window's vertices."""
    psi_ids = spec.psi_ids(t)
    prev = ClosedStage(frozenset(), frozenset())
    for n in range(1, levels + 1):
        st = spec.stage(n, t)
        if not (prev.vertices <= st.vertices and prev.end_ids <= st.end_ids):
            raise AuditError(f"stage {n} is not monotone")
        if st.end_ids & psi_ids:
            raise AuditError(
                f"stage {n} contains displayed ends {sorted(st.end_ids & psi_ids)}; "
                f"the prescription is unsatisfiable")
        dom = _dominated_by(spec.oracle, t, st.vertices)
        if not dom <= st.end_ids:
            raise AuditError(
                f"stage {n} not closed: misses dominated ends {sorted(dom - st.end_ids)}")
        boundary = boundary_of(t, st.vertices, spec.oracle)
        extra = frozenset(e.id for e in boundary) - st.end_ids
        if extra:
            raise AuditError(
                f"stage {n} not closed: boundary ends {sorted(extra)} missing")
        prev = st
    full = spec.stage(t.horizon, t)
    if not t.ball(min(levels, t.horizon)) <= full.vertices:
        raise AuditError("stages do not exhaust the window's vertices")
    return True


# -- oracle audit --------------------------------------------------------------


def audit_oracle(t, oracle=None):
    """Declared-versus-window report for every end: a tube-width estimate of
    the degree and a star-witness fan count per declared dominator."""
    oracle = oracle or t.family.oracle
    report = {"family": t.family.name, "horizon": t.horizon,
              "sampled": oracle.sampled, "ends": []}
    for eps in oracle.ends(t.horizon):
        entry = {"id": eps.id,
                 "declared_degree": eps.degree,
                 "declared_dominators": sorted(map(str, eps.dominators)),
                 "attach_depth": eps.attach_depth}
        try:
            D = oracle.stabilization_depth(BOUNDARY_ORDER_CAP, eps.attach_depth)
            near = anchor_beyond(t, eps, D)
            far = anchor_beyond(t, eps, t.max_depth(near), deepest=True)
            if frozenset(near) == frozenset(far):
                entry["window_degree"] = None
            else:
                entry["window_degree"] = separator_order(t, near, far)
        except HorizonError as exc:
            entry["window_degree"] = None
            entry["note"] = str(exc)
        doms = []
        for x in eps.dominators:
            ray = frozenset(ray_in(t, eps)) - {x}
            fan = separator_order(t, {x}, ray, uncuttable=frozenset({x}))
            doms.append({"vertex": str(x), "star_fan": fan,
                         "consistent": fan >= min(8, max(1, len(ray) // 2))})
        entry["dominator_checks"] = doms
        degree = entry.get("window_degree")
        entry["degree_consistent"] = (
            eps.degree is None or degree is None or degree == eps.degree)
        report["ends"].append(entry)
    return report
