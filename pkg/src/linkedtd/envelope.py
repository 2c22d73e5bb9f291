"""Envelopes of vertex-and-end sets.

An envelope of a set X of vertices and ends is a vertex set X* containing
X's vertices, of finite adhesion, whose end boundary is exactly the closure
of X in the end space.  The base construction seeds X's vertices with the
canonical ray of every end in the closure and then seals: any complement
component whose window boundary shows an end outside the closure gets a
minimum separator shielding that end absorbed.  The avoidance variant
rebuilds a given envelope around a family of pairwise non-touching regions
whose closures avoid X, swapping region interiors for region neighbourhoods:

    X* = (X** minus the met regions) plus their neighbourhoods.

Finite-adhesion is audited window-relative: complement components that do
not touch the frontier have exact (hence certifiably finite) neighbourhoods;
frontier components carry their in-window neighbourhood as a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import AuditError, HorizonError
from .graph_core import Region, components_minus, touch
from .ends import boundary_of, end_in_boundary, min_end_separator, ray_in


@dataclass(frozen=True)
class VertexEndSet:
    """A set of vertices plus oracle end handles (the envelope input)."""

    vertices: frozenset
    ends: frozenset = frozenset()

    @staticmethod
    def of(vertices=(), ends=()):
        return VertexEndSet(frozenset(vertices), frozenset(ends))


@dataclass(frozen=True)
class EnvelopeResult:
    core: VertexEndSet
    envelope: frozenset
    adhesion_witness: tuple  # complement Regions with exact neighbourhoods
    boundary_witness: frozenset  # end handles = window boundary of envelope

    def to_json(self):
        return {
            "schema": 1,
            "kind": "envelope",
            "core_vertices": sorted(map(str, self.core.vertices)),
            "core_ends": sorted(e.id for e in self.core.ends),
            "envelope": sorted(map(str, self.envelope)),
            "boundary": sorted(e.id for e in self.boundary_witness),
            "complement_components": [
                {"size": len(r.vertices),
                 "neighborhood": sorted(map(str, r.neighborhood)),
                 "touches_frontier": r.touches_frontier}
                for r in self.adhesion_witness],
        }


def _closure_ends(t, x, oracle):
    return frozenset(x.ends) | boundary_of(t, x.vertices, oracle)


def envelope(t, x, oracle=None, _audit=True):
    """An envelope of the vertex-and-end set `x` in the window t.

    The seed is x's vertices plus, per closure end, the window portion of
    its canonical ray; a bounded sealing loop then absorbs minimum
    separators shielding any stray boundary end.  The result is audited
    (boundary equality and adhesion witnesses) before being returned.
    """
    oracle = oracle or t.family.oracle
    if isinstance(x, frozenset) or isinstance(x, set):
        x = VertexEndSet.of(x)
    for eps in x.ends:
        if eps not in oracle.ends(t.horizon):
            raise AuditError(f"end {eps!r} is not declared by the oracle")
    closure = _closure_ends(t, x, oracle)
    current = set(x.vertices)
    for eps in sorted(closure, key=lambda e: e.id):
        current.update(ray_in(t, eps))
    for _ in range(4):
        stray = [eps for eps in boundary_of(t, frozenset(current), oracle)
                 if eps not in closure]
        if not stray:
            break
        for eps in stray:
            current |= min_end_separator(t, frozenset(x.vertices), eps,
                                         oracle=oracle)
    result = _package(t, x, frozenset(current), oracle)
    if _audit:
        audit_envelope(t, result, oracle)
    return result


def envelope_avoiding(t, x, regions, oracle=None):
    """An envelope of `x` that avoids every region in `regions`.

    Preconditions (audited): the regions are pairwise non-touching and their
    closures avoid x.  Construction: take a base envelope X**, collect the
    regions it meets, and replace their interiors by their neighbourhoods.
    """
    oracle = oracle or t.family.oracle
    if isinstance(x, frozenset) or isinstance(x, set):
        x = VertexEndSet.of(x)
    regions = list(regions)
    for i, c in enumerate(regions):
        for d in regions[i + 1:]:
            if touch(c, d):
                raise AuditError(
                    f"avoidance regions touch: {c!r} / {d!r}")
    for d in regions:
        if d.vertices & x.vertices:
            raise AuditError(
                f"region {d!r} meets the core vertex set; its closure must avoid it")
        for eps in x.ends:
            if end_in_boundary(t, d.vertices, eps, oracle):
                raise AuditError(
                    f"region {d!r} has core end {eps.id} in its closure")
    base = envelope(t, x, oracle, _audit=False)
    met = [d for d in regions if d.vertices & base.envelope]
    final = set(base.envelope)
    for d in met:
        final -= d.vertices
        final |= d.neighborhood
    result = _package(t, x, frozenset(final), oracle)
    audit_envelope(t, result, oracle, avoided=regions)
    return result


def _package(t, x, vertices, oracle):
    comps = components_minus(t, vertices)
    boundary = boundary_of(t, vertices, oracle)
    return EnvelopeResult(x, vertices, tuple(comps), frozenset(boundary))


def audit_envelope(t, result, oracle=None, avoided=()):
    """Machine-check the envelope contract; raises AuditError on violation.

    Checks: the envelope contains the core's vertices; its window boundary
    equals the closure of the core; every complement component has a finite
    (window-exact for non-frontier components) neighbourhood; avoided
    regions are disjoint from the envelope and appear as complement
    components with matching neighbourhoods when they were swallowed whole.
    """
    oracle = oracle or t.family.oracle
    x = result.core
    if not x.vertices <= result.envelope:
        raise AuditError("envelope does not contain the core vertex set")
    closure = _closure_ends(t, x, oracle)
    if result.boundary_witness != closure:
        raise AuditError(
            f"boundary mismatch: envelope has "
            f"{sorted(e.id for e in result.boundary_witness)}, closure of the "
            f"core is {sorted(e.id for e in closure)}")
    for comp in result.adhesion_witness:
        if not comp.neighborhood <= result.envelope:
            raise AuditError("complement component with neighbours outside the envelope")
    for d in avoided:
        if d.vertices & result.envelope:
            raise AuditError(f"avoidance violated: envelope meets {d!r}")
    return True
