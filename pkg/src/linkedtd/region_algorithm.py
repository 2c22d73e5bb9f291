"""Nicest-region selection: for a finite vertex set X in a connected host,
pick, end by end, an inclusion-maximal region of minimal neighbourhood order
that is linked to its end, keeping the whole family nested.

Ends are processed in order of their minimum X-separator size (ties by end
id).  An end is skipped when X is linked to it, when it lives in a
previously emitted region, or when it lives in an input region (inputs play
the role of regions picked by an earlier, compatible run; re-picking them
would break distinctness of the combined sequence).  The canonical candidate
for an end is the component of the nearest-X minimum separator on the end's
side, which realizes inclusion-maximality; when that candidate crosses an
already-placed region it is uncrossed into a nested replacement of the same
order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import AuditError, HorizonError, UncrossError
from .graph_core import Region, component_containing, nested, touch
from .separation import all_min_separators, is_linked_set, separator_order
from .ends import (anchor_beyond, component_of_end, end_separator_order,
                   ends_living_in, is_linked_to_end, min_end_separator,
                   tail_vertex)


@dataclass
class AlgorithmRun:
    """Transcript of one run: the host window, inputs, and the emitted
    regions with their ends, orders and chosen separators."""

    host: object
    input_X: frozenset
    input_D: tuple
    output: list = field(default_factory=list)  # Regions, emission order
    per_region_end: dict = field(default_factory=dict)  # index -> EndHandle
    separators: list = field(default_factory=list)  # frozensets, per region
    skipped: list = field(default_factory=list)  # (end id, reason)

    @property
    def orders(self):
        return [r.order for r in self.output]

    def to_json(self):
        return {
            "schema": 1,
            "kind": "region_run",
            "X": sorted(map(str, self.input_X)),
            "inputs": [sorted(map(str, d.vertices)) for d in self.input_D],
            "regions": [
                {"end": self.per_region_end[i].id,
                 "order": r.order,
                 "neighborhood": sorted(map(str, r.neighborhood)),
                 "separator": sorted(map(str, self.separators[i])),
                 "size": len(r.vertices)}
                for i, r in enumerate(self.output)],
            "skipped": list(self.skipped),
        }


def _audit_inputs(host, X, inputs, oracle):
    k = len(X)
    for d in inputs:
        if d.vertices & X:
            raise AuditError(f"input region {d!r} meets X")
        if d.order >= k:
            raise AuditError(
                f"input region {d!r} has order {d.order} >= |X| = {k}")
        if not _is_end_linked(host, d, oracle):
            raise AuditError(f"input region {d!r} is not end-linked")
    for c, d in combinations(inputs, 2):
        if touch(c, d):
            raise AuditError(f"input regions touch: {c!r} / {d!r}")


def _is_end_linked(host, region, oracle):
    for eps in ends_living_in(host, oracle):
        if tail_vertex(host, eps) in region.vertices:
            if is_linked_to_end(host, region.neighborhood, eps, oracle):
                return True
    return False


def run(host, X, inputs, oracle=None, audit_inputs=True):
    """Execute the selection loop; see the module docstring.

    `host` is a (restricted) truncation, `X` a finite non-empty vertex set
    inside it, `inputs` pairwise non-touching end-linked regions of order
    < |X| disjoint from X.  Terminates when every end is linked to X or
    lives in an emitted/input region.
    """
    oracle = oracle or host.family.oracle
    X = frozenset(X)
    if not X:
        raise AuditError("X must be non-empty")
    inputs = tuple(inputs)
    if audit_inputs:
        _audit_inputs(host, X, inputs, oracle)
    k = len(X)
    rr = AlgorithmRun(host, X, inputs)

    candidates = []
    for eps in ends_living_in(host, oracle):
        tail = tail_vertex(host, eps)
        holder = next((d for d in inputs if tail in d.vertices), None)
        if holder is not None:
            rr.skipped.append((eps.id, "lives in an input region"))
            continue
        ell = end_separator_order(host, X, eps, oracle)
        if ell >= k:
            rr.skipped.append((eps.id, "linked to X"))
            continue
        candidates.append((ell, eps.id, eps, tail))
    candidates.sort(key=lambda c: (c[0], c[1]))

    for ell, _eid, eps, tail in candidates:
        if any(tail in r.vertices for r in rr.output):
            rr.skipped.append((eps.id, "lives in an earlier output"))
            continue
        S = min_end_separator(host, X, eps, side="nearest_X", oracle=oracle)
        region = component_of_end(host, S, eps, oracle)
        placed = list(inputs) + rr.output
        if not all(nested(region, d) for d in placed):
            region, S = _nested_replacement(host, X, eps, region, placed, oracle)
        if region.vertices & X:
            raise AuditError(f"region for {eps.id} meets X")
        if region.order >= k:
            raise AuditError(
                f"region for {eps.id} has order {region.order} >= {k}")
        rr.output.append(region)
        rr.per_region_end[len(rr.output) - 1] = eps
        rr.separators.append(frozenset(S))
    orders = rr.orders
    if any(a > b for a, b in zip(orders, orders[1:])):
        raise AuditError(f"emitted orders not non-decreasing: {orders}")
    return rr


def _nested_replacement(host, X, eps, region, placed, oracle):
    """Replace a crossing candidate by a nested region of the same order.

    First try the other minimum separators on the end's side; then fall back
    to the corner search of `uncross`.
    """
    ell = region.order
    D = oracle.stabilization_depth(len(X), host.max_depth(X, 0))
    sinks = set(anchor_beyond(host, eps, D))
    sinks.update(v for v in eps.dominators if v in host.vertices)
    best = None
    for S in all_min_separators(host, X, frozenset(sinks), limit=2000):
        cand = component_of_end(host, S, eps, oracle)
        if cand.vertices & X or cand.order > ell:
            continue
        if all(nested(cand, d) for d in placed):
            if best is None or len(cand.vertices) > len(best[0].vertices):
                best = (cand, S)
    if best is not None:
        return best
    cand = uncross(host, region, placed, eps, oracle=oracle, forbidden=X)
    return cand, cand.neighborhood


def uncross(host, C, others, eps, oracle=None, forbidden=frozenset()):
    """A region linked to `eps`, of order at most C's, nested with `others`.

    Brute-force corner search at desk scale: candidate separators are drawn
    from the union of C's neighbourhood with the neighbourhoods of the
    regions C crosses; each candidate separator spawns the component of the
    end's tail, which is kept when it is end-linked, small enough, nested
    with everything, and avoids `forbidden`.  Deterministic; raises
    UncrossError when the search space is exhausted.
    """
    oracle = oracle or host.family.oracle
    k = C.order
    crossing = [d for d in others if not nested(C, d)]
    if not crossing:
        return C
    tail = tail_vertex(host, eps)
    pool = set(C.neighborhood)
    for d in crossing:
        pool |= d.neighborhood
    pool -= forbidden
    pool = host.sorted(pool)
    best = None
    for size in range(1, k + 1):
        for S in combinations(pool, size):
            Sset = frozenset(S)
            if tail in Sset:
                continue
            cand = component_containing(host, Sset, tail)
            if cand.order > k or cand.vertices & forbidden:
                continue
            if not all(nested(cand, d) for d in others):
                continue
            if not is_linked_to_end(host, cand.neighborhood, eps, oracle):
                continue
            if best is None or len(cand.vertices) > len(best.vertices):
                best = cand
        if best is not None:
            return best
    raise UncrossError(
        f"no nested end-linked replacement of order <= {k} for end {eps.id}")


# -- run audits ----------------------------------------------------------------


@dataclass
class RunAudit:
    """Pass/fail record for the two selection guarantees plus maximality."""

    covered: list = field(default_factory=list)  # (end id, status)
    linked_neighborhoods: list = field(default_factory=list)  # (idx, bool)
    maximality: list = field(default_factory=list)  # (idx, vertex, reason)
    passed: bool = True

    def to_json(self):
        return {
            "schema": 1,
            "kind": "region_run_audit",
            "covered": self.covered,
            "linked_neighborhoods": self.linked_neighborhoods,
            "maximality": [
                {"region": i, "vertex": str(v), "reason": r}
                for i, v, r in self.maximality],
            "passed": self.passed,
        }


def audit_run(rr, oracle=None, maximality=False):
    """Check the selection guarantees on a finished run.

    (1) every end that is not linked to X and lives in no input region lives
        in some emitted region whose neighbourhood is linked to that end;
    (2) every emitted region's neighbourhood is linked to X.
    With `maximality=True` additionally certify that no emitted region can
    absorb an adjacent vertex without breaking a selection clause.
    """
    host = rr.host
    oracle = oracle or host.family.oracle
    audit = RunAudit()
    k = len(rr.input_X)
    for eps in ends_living_in(host, oracle):
        tail = tail_vertex(host, eps)
        if any(tail in d.vertices for d in rr.input_D):
            audit.covered.append((eps.id, "input"))
            continue
        if is_linked_to_end(host, rr.input_X, eps, oracle):
            audit.covered.append((eps.id, "linked"))
            continue
        hit = None
        for i, r in enumerate(rr.output):
            if tail in r.vertices and is_linked_to_end(
                    host, r.neighborhood, eps, oracle):
                hit = i
                break
        if hit is None:
            audit.covered.append((eps.id, "UNCOVERED"))
            audit.passed = False
        else:
            audit.covered.append((eps.id, f"region {hit}"))
    for i, r in enumerate(rr.output):
        ok = is_linked_set(host, r.neighborhood, rr.input_X)
        audit.linked_neighborhoods.append((i, ok))
        if not ok:
            audit.passed = False
    if maximality:
        _audit_maximality(rr, oracle, audit, k)
    return audit


def _audit_maximality(rr, oracle, audit, k):
    host = rr.host
    for i, r in enumerate(rr.output):
        eps = rr.per_region_end[i]
        others = list(rr.input_D) + [q for j, q in enumerate(rr.output) if j != i]
        for v in host.sorted(r.neighborhood):
            reason = None
            if v in rr.input_X:
                reason = "hits X"
            else:
                grown_verts = r.vertices | {v}
                nb = (r.neighborhood - {v}) | (
                    frozenset(host.neighbors(v)) - grown_verts)
                grown = Region(grown_verts, frozenset(nb),
                               r.touches_frontier or v in host.frontier)
                if grown.order > r.order:
                    reason = "raises order"
                elif not all(nested(grown, d) for d in others):
                    reason = "breaks nestedness"
                elif not is_linked_to_end(host, grown.neighborhood, eps, oracle):
                    reason = "breaks end-linkage"
            if reason is None:
                audit.maximality.append((i, v, "ENLARGEABLE"))
                audit.passed = False
            else:
                audit.maximality.append((i, v, reason))
    return audit
