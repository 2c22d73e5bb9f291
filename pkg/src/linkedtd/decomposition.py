"""Level-by-level construction of a tight, componental, finite-adhesion
rooted tree-decomposition displaying a prescribed end set, the contraction
step that makes it linked, the end-to-tree map, and the property verifier.

Round i extends every leaf created in round i-1: for each remaining
component C, a region-selection run inside G[V(C) ∪ N(C)] on X = N(C)
produces the new region set; the bag is an envelope of

    (stage_i ∩ I) ∪ (stage_i's ends on the boundary of I) ∪
    (neighbourhoods of maximal regions whose closure meets stage_i) ∪ N(C)

that avoids every region, where I is the complement of all regions (carried
and new) inside C ∪ N(C).  Regions carried along the branch are the
bookkeeping that later rounds turn into actual edges, which is what the
contraction step needs to certify linkedness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import AuditError, HorizonError
from .graph_core import Region, components_minus, expand
from .separation import max_disjoint_paths, separator_order
from .ends import (audit_gdelta, end_in_boundary, end_separator_order,
                   is_linked_to_end, lives_in, min_end_separator, tail_vertex)
from .envelope import VertexEndSet, envelope_avoiding
from .region_algorithm import run as region_run


# -- data ----------------------------------------------------------------------


@dataclass
class NodeRecord:
    node: int
    parent: int
    round: int
    component: Region
    X: frozenset
    inputs: tuple  # (Region, end_id) carried into the run
    run_json: dict
    region_set: tuple  # (Region, end_id) = carried + new, in order
    I: frozenset
    U1: frozenset
    U2: tuple  # end ids
    U3: frozenset
    bag: frozenset


@dataclass
class RoundRecord:
    round: int
    components: tuple  # Regions of G - G^{i-1}
    nodes: tuple  # NodeRecords
    covered_after: frozenset


class TreeDecomposition:
    """Rooted tree, bags, per-edge adhesion sets and region sets.

    Edges are keyed by their child node id.  `pending` lists the components
    of the window not yet decomposed, attached to the leaf whose bag holds
    their neighbourhood (the window proxy for the construction continuing).
    """

    def __init__(self, truncation, spec, levels):
        self.t = truncation
        self.spec = spec
        self.oracle = spec.oracle if spec is not None else truncation.family.oracle
        self.levels = levels
        self.root = 0
        self.parent = {0: None}
        self.children = {0: []}
        self.height = {0: 0}
        self.bags = {}
        self.region_sets = {}  # child id -> tuple[(Region, end_id)]
        self.component_for = {}  # child id -> Region
        self.pending = []  # (leaf id, Region)
        self.log = []
        self.contracted = False

    # -- structure helpers ------------------------------------------------

    def nodes(self):
        return sorted(self.parent)

    def edge_ids(self):
        """Edges as child node ids, root-excluded, deterministic order."""
        return [n for n in self.nodes() if self.parent[n] is not None]

    def adhesion(self, child):
        return self.bags[child] & self.bags[self.parent[child]]

    def add_node(self, parent, bag):
        node = max(self.parent) + 1
        self.parent[node] = parent
        self.children[node] = []
        self.children[parent].append(node)
        self.height[node] = self.height[parent] + 1
        self.bags[node] = frozenset(bag)
        return node

    def subtree(self, node):
        out = [node]
        stack = [node]
        while stack:
            n = stack.pop()
            for c in self.children[n]:
                out.append(c)
                stack.append(c)
        return out

    def strictly_above(self, child):
        """Vertices of the part strictly above the edge into `child`:
        bags of the subtree plus pending components under it, minus the
        adhesion set."""
        sub = set(self.subtree(child))
        verts = set()
        for n in sub:
            verts |= self.bags[n]
        for leaf, comp in self.pending:
            if leaf in sub:
                verts |= comp.vertices
        return frozenset(verts) - self.adhesion(child)

    def tree_path(self, a, b):
        """Node path between two nodes (inclusive)."""
        anc_a = []
        n = a
        while n is not None:
            anc_a.append(n)
            n = self.parent[n]
        marks = set(anc_a)
        path_b = []
        n = b
        while n not in marks:
            path_b.append(n)
            n = self.parent[n]
        meet = n
        return anc_a[:anc_a.index(meet) + 1] + list(reversed(path_b))

    def comparable_pairs(self):
        """Edge pairs (e, f) with e on the root path of f, e != f."""
        out = []
        for f in self.edge_ids():
            n = self.parent[f]
            while n is not None and self.parent[n] is not None:
                out.append((n, f))
                n = self.parent[n]
        out.sort(key=lambda p: (self.height[p[0]], self.height[p[1]], p))
        return out

    def edges_between(self, e, f):
        """Edges (child ids) on the tree path joining edges e and f,
        endpoints included; e must be an ancestor edge of f."""
        out = []
        n = f
        while n != self.parent[e]:
            out.append(n)
            n = self.parent[n]
            if n is None:
                raise AuditError(f"edges {e} and {f} are not comparable")
        return list(reversed(out))

    # -- serialization ----------------------------------------------------

    def to_json(self):
        enc = _encode_vertex
        data = {
            "schema": 1,
            "kind": "tree_decomposition",
            "family": {"name": self.t.family.name,
                       "params": dict(self.t.family.params)},
            "horizon": self.t.horizon,
            "levels": self.levels,
            "contracted": self.contracted,
            "psi": sorted(self.spec.psi_ids(self.t)) if self.spec else [],
            "nodes": [
                {"id": n, "parent": self.parent[n], "height": self.height[n],
                 "bag": sorted((enc(v) for v in self.bags[n]), key=str)}
                for n in self.nodes()],
            "edges": [
                {"child": c,
                 "adhesion": sorted((enc(v) for v in self.adhesion(c)), key=str),
                 "regions": [
                     {"end": eid,
                      "order": r.order,
                      "vertices": sorted((enc(v) for v in r.vertices), key=str),
                      "neighborhood": sorted((enc(v) for v in r.neighborhood), key=str)}
                     for r, eid in self.region_sets.get(c, ())]}
                for c in self.edge_ids()],
            "pending": [
                {"leaf": leaf,
                 "component": sorted((enc(v) for v in comp.vertices), key=str),
                 "neighborhood": sorted((enc(v) for v in comp.neighborhood), key=str)}
                for leaf, comp in self.pending],
        }
        return data

    def to_dot(self):
        lines = ["digraph decomposition {", "  rankdir=TB;",
                 "  node [shape=box, fontname=monospace];"]
        for n in self.nodes():
            label = ",".join(str(v) for v in self.t.sorted(self.bags[n]))
            if len(label) > 60:
                label = label[:57] + "..."
            lines.append(f'  n{n} [label="{n}: {label}"];')
        for c in self.edge_ids():
            lines.append(
                f'  n{self.parent[c]} -> n{c} [label="{len(self.adhesion(c))}"];')
        for i, (leaf, comp) in enumerate(self.pending):
            lines.append(
                f'  p{i} [label="pending ({len(comp.vertices)}v)", style=dashed];')
            lines.append(f"  n{leaf} -> p{i} [style=dashed];")
        lines.append("}")
        return "\n".join(lines)


def _encode_vertex(v):
    if isinstance(v, tuple):
        return [_encode_vertex(x) for x in v]
    return v


def _decode_vertex(v):
    if isinstance(v, list):
        return tuple(_decode_vertex(x) for x in v)
    return v


def from_json(data, truncation, spec=None):
    """Rebuild a TreeDecomposition from its JSON export over a truncation
    of the same family and horizon."""
    td = TreeDecomposition(truncation, spec, data.get("levels", 0))
    td.contracted = data.get("contracted", False)
    nodes = sorted(data["nodes"], key=lambda n: (n["parent"] is not None, n["id"]))
    for n in nodes:
        nid = n["id"]
        td.parent[nid] = n["parent"]
        td.children.setdefault(nid, [])
        if n["parent"] is not None:
            td.children.setdefault(n["parent"], []).append(nid)
        td.height[nid] = n["height"]
        td.bags[nid] = frozenset(_decode_vertex(v) for v in n["bag"])
        if n["parent"] is None:
            td.root = nid
    t = truncation
    for e in data.get("edges", ()):
        regions = []
        for r in e.get("regions", ()):
            verts = frozenset(_decode_vertex(v) for v in r["vertices"])
            nb = frozenset(_decode_vertex(v) for v in r["neighborhood"])
            regions.append((Region(verts, nb, bool(verts & t.frontier)), r["end"]))
        td.region_sets[e["child"]] = tuple(regions)
    for p in data.get("pending", ()):
        verts = frozenset(_decode_vertex(v) for v in p["component"])
        nb = frozenset(_decode_vertex(v) for v in p["neighborhood"])
        td.pending.append((p["leaf"], Region(verts, nb, bool(verts & t.frontier))))
    return td


# -- construction --------------------------------------------------------------


def build(family, spec, horizon, levels, audit_spec=True):
    """Run `levels` rounds of the recursive construction on the window.

    Fails fast with HorizonError (naming the deficit and round) when any
    certificate does not fit, and with AuditError when the prescription or
    an internal contract audit fails.
    """
    t = expand(family, horizon)
    oracle = spec.oracle
    if audit_spec:
        audit_gdelta(t, spec, min(levels, max(1, horizon // 2)))
    td = TreeDecomposition(t, spec, levels)
    td.bags[0] = frozenset({family.root})
    covered = {family.root}
    td.log.append(RoundRecord(1, (), (), frozenset(covered)))

    for i in range(2, levels + 1):
        comps = components_minus(t, covered)
        if not comps:
            break
        parents_at = [n for n in td.nodes() if td.height[n] == i - 2]
        records = []
        stage = spec.stage(i, t)
        for comp in sorted(comps, key=lambda c: min(t.sort_key(v) for v in c.vertices)):
            hosts = [n for n in parents_at if comp.neighborhood <= td.bags[n]]
            if len(hosts) != 1:
                raise AuditError(
                    f"round {i}: component neighbourhood lies in {len(hosts)} "
                    f"bags at height {i - 2}; construction invariant broken")
            leaf = hosts[0]
            try:
                rec = _extend(td, t, spec, oracle, i, leaf, comp, stage)
            except HorizonError as exc:
                raise HorizonError(
                    f"round {i}: {exc}", required=exc.required) from exc
            records.append(rec)
            covered |= rec.bag
        td.log.append(RoundRecord(i, tuple(comps), tuple(records),
                                  frozenset(covered)))

    for comp in components_minus(t, covered):
        hosts = [n for n in td.nodes() if comp.neighborhood <= td.bags[n]
                 and not td.children[n]]
        if len(hosts) != 1:
            hosts = [n for n in td.nodes() if comp.neighborhood <= td.bags[n]]
            hosts = hosts[-1:]
        if not hosts:
            raise AuditError("left-over component with no hosting leaf")
        td.pending.append((hosts[0], comp))
    return td


def _extend(td, t, spec, oracle, i, leaf, comp, stage):
    carried = tuple(
        (d, eid) for d, eid in td.region_sets.get(leaf, ())
        if d.vertices < comp.vertices)
    carried_max = _maximal(carried)
    host = t.restrict(comp.vertices | comp.neighborhood)
    X = frozenset(comp.neighborhood)
    rr = region_run(host, X, [d for d, _ in carried_max], oracle)
    new = tuple((r, rr.per_region_end[j].id) for j, r in enumerate(rr.output))
    region_set = carried + new
    region_set_max = _maximal(region_set)
    all_region_verts = frozenset().union(
        *(d.vertices for d, _ in region_set)) if region_set else frozenset()
    I = (comp.vertices | X) - all_region_verts
    U1 = stage.vertices & I
    U2 = tuple(
        eps for eps in oracle.ends(t.horizon)
        if eps.id in stage.end_ids and end_in_boundary(t, I, eps, oracle))
    U3 = set()
    for d, eid in region_set_max:
        meets = bool(stage.vertices & d.vertices)
        if not meets and eid in stage.end_ids:
            meets = True
        if not meets:
            # other oracle ends living in d whose id is staged
            meets = any(
                e2.id in stage.end_ids and lives_in(t, e2)
                and tail_vertex(t, e2) in d.vertices
                for e2 in oracle.ends(t.horizon))
        if meets:
            U3 |= d.neighborhood
    core = VertexEndSet(U1 | frozenset(U3) | X, frozenset(U2))
    env = envelope_avoiding(host, core, [d for d, _ in region_set_max], oracle)
    bag = env.envelope
    node = td.add_node(leaf, bag)
    td.region_sets[node] = region_set
    td.component_for[node] = comp
    return NodeRecord(node, leaf, i, comp, X, carried, rr.to_json(),
                      region_set, I, U1, tuple(e.id for e in U2),
                      frozenset(U3), bag)


def _maximal(region_set):
    out = []
    for d, eid in region_set:
        if not any(d.vertices < q.vertices for q, _ in region_set):
            if all(d.vertices != q.vertices for q, _ in out):
                out.append((d, eid))
    return tuple(out)


# -- contraction ---------------------------------------------------------------


def contract_to_linked(td, oracle=None):
    """Contract every edge whose adhesion set is linked to no end living
    strictly above it; merged bags are unions over contraction classes."""
    oracle = oracle or td.oracle
    t = td.t
    keep = set()
    for c in td.edge_ids():
        ve = td.adhesion(c)
        above = td.strictly_above(c)
        for eps in oracle.ends(t.horizon):
            if not lives_in(t, eps):
                continue
            if tail_vertex(t, eps) not in above:
                continue
            try:
                linked = is_linked_to_end(t, ve, eps, oracle)
            except HorizonError as exc:
                raise HorizonError(
                    f"edge into node {c}: {exc}", required=exc.required) from exc
            if linked:
                keep.add(c)
                break

    rep = {}

    def find(n):
        while rep.get(n, n) != n:
            n = rep[n]
        return n

    for c in td.edge_ids():
        if c not in keep:
            rep[find(c)] = find(td.parent[c])

    out = TreeDecomposition(t, td.spec, td.levels)
    out.contracted = True
    out.parent = {}
    out.children = {}
    out.bags = {}
    classes = {}
    for n in td.nodes():
        classes.setdefault(find(n), []).append(n)
    for r, members in classes.items():
        out.parent[r] = None
        out.children[r] = []
        out.bags[r] = frozenset().union(*(td.bags[m] for m in members))
    for c in sorted(keep):
        pr = find(td.parent[c])
        out.parent[c] = pr
        out.children[pr].append(c)
        out.region_sets[c] = td.region_sets.get(c, ())
        if c in td.component_for:
            out.component_for[c] = td.component_for[c]
    out.root = find(td.root)
    out.height = {}
    stack = [(out.root, 0)]
    while stack:
        n, h = stack.pop()
        out.height[n] = h
        for ch in out.children[n]:
            stack.append((ch, h + 1))
    for leaf, comp in td.pending:
        out.pending.append((find(leaf), comp))
    out.log = td.log
    return out


# -- end-to-tree map -----------------------------------------------------------


@dataclass
class EndTreeMap:
    """Image of every oracle end: a node, or a rooted edge ray.

    `open_ray` marks ends whose descent reached a leaf with a pending
    component still containing their tail: the window proxy for an end of
    the decomposition tree."""

    node_image: dict = field(default_factory=dict)
    ray_image: dict = field(default_factory=dict)  # end id -> tuple of child ids
    open_ray: dict = field(default_factory=dict)  # end id -> bool
    failures: list = field(default_factory=list)

    def to_json(self):
        return {
            "schema": 1,
            "kind": "end_tree_map",
            "nodes": {k: v for k, v in self.node_image.items()},
            "rays": {k: list(v) for k, v in self.ray_image.items()},
            "open": dict(self.open_ray),
            "failures": list(self.failures),
        }


def end_tree_map(td, oracle=None):
    """Direct every edge toward the side holding each end; descend from the
    root while exactly one child edge points onward."""
    oracle = oracle or td.oracle
    t = td.t
    out = EndTreeMap()
    above = {c: td.strictly_above(c) for c in td.edge_ids()}
    pending_by_leaf = {}
    for leaf, compp in td.pending:
        pending_by_leaf.setdefault(leaf, set()).update(compp.vertices)
    for eps in oracle.ends(t.horizon):
        if not lives_in(t, eps):
            continue
        tail = tail_vertex(t, eps)
        node = td.root
        edges = []
        while True:
            onward = [c for c in td.children[node] if tail in above[c]]
            if len(onward) > 1:
                out.failures.append(
                    (eps.id, f"{len(onward)} outward edges at node {node}"))
                break
            if not onward:
                if tail in pending_by_leaf.get(node, ()):  # still descending
                    out.ray_image[eps.id] = tuple(edges)
                    out.open_ray[eps.id] = True
                else:
                    out.node_image[eps.id] = node
                break
            node = onward[0]
            edges.append(node)
    return out


# -- verification --------------------------------------------------------------


@dataclass
class PropertyResult:
    passed: Optional[bool]  # None = informational
    detail: str = ""
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {"passed": self.passed, "detail": self.detail,
                "witnesses": self.witnesses[:20]}


@dataclass
class VerificationReport:
    properties: dict = field(default_factory=dict)

    @property
    def all_passed(self):
        return all(p.passed is not False for p in self.properties.values())

    def to_json(self):
        return {
            "schema": 1,
            "kind": "verification_report",
            "all_passed": self.all_passed,
            "properties": {k: v.to_json() for k, v in self.properties.items()},
        }

    def __getitem__(self, k):
        return self.properties[k]


def verify(td, spec=None, oracle=None, pair_budget=200):
    """Check every decomposition property on the window; all findings land
    in the report, never in exceptions."""
    t = td.t
    spec = spec if spec is not None else td.spec
    oracle = oracle or td.oracle
    rep = VerificationReport()
    rep.properties["t1"] = _check_t1(td, t)
    rep.properties["t2"] = _check_t2(td)
    rep.properties["finite_adhesion"] = _check_adhesion(td)
    rep.properties["tight"] = _check_tight(td, t)
    rep.properties["componental"] = _check_componental(td, t)
    rep.properties["linked"] = _check_linked(td, t, pair_budget)
    if spec is not None:
        etm = end_tree_map(td, oracle)
        rep.properties["displays_psi"] = _check_displays(td, t, spec, oracle, etm)
        rep.properties["displays_dominators"] = _check_dominators(
            td, t, spec, oracle, etm)
        rep.properties["displays_combined_degrees"] = _check_degrees(
            td, t, spec, oracle, etm)
    rep.properties["connected_parts"] = _check_connected_parts(td, t)
    return rep


def _check_t1(td, t):
    covered = set()
    for n in td.nodes():
        covered |= td.bags[n]
    pend = {}
    for idx, (leaf, comp) in enumerate(td.pending):
        for v in comp.vertices:
            pend[v] = idx
    missing = [v for v in t.verts if v not in covered and v not in pend]
    bad_edges = []
    for u in t.verts:
        for w in t.neighbors(u):
            if t.sort_key(u) > t.sort_key(w):
                continue
            if any(u in td.bags[n] and w in td.bags[n] for n in td.nodes()):
                continue
            iu, iw = pend.get(u), pend.get(w)
            if iu is not None or iw is not None:
                idx = iu if iu is not None else iw
                comp = td.pending[idx][1]
                span = comp.vertices | comp.neighborhood
                if u in span and w in span:
                    continue
            bad_edges.append((str(u), str(w)))
    ok = not missing and not bad_edges
    return PropertyResult(
        ok,
        f"{len(missing)} vertices / {len(bad_edges)} edges uncovered "
        f"({len(pend)} vertices awaiting later rounds)",
        [str(v) for v in missing[:10]] + bad_edges[:10])


def _check_t2(td):
    holders = {}
    for n in td.nodes():
        for v in td.bags[n]:
            holders.setdefault(v, set()).add(n)
    bad = []
    for v, nodes in holders.items():
        # connectivity of the induced subtree
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            n = stack.pop()
            nbrs = list(td.children[n])
            if td.parent[n] is not None:
                nbrs.append(td.parent[n])
            for m in nbrs:
                if m in nodes and m not in seen:
                    seen.add(m)
                    stack.append(m)
        if seen != nodes:
            bad.append(str(v))
    return PropertyResult(not bad, f"{len(bad)} vertices with disconnected bag sets",
                          bad[:10])


def _check_adhesion(td):
    sizes = [len(td.adhesion(c)) for c in td.edge_ids()]
    return PropertyResult(
        True,
        f"max adhesion {max(sizes) if sizes else 0}; every adhesion set is a "
        f"finite window set (exactness certified via tightness and stability)")


def _check_tight(td, t):
    bad = []
    for c in td.edge_ids():
        ve = td.adhesion(c)
        above = td.strictly_above(c)
        if not above:
            continue
        sub = t.restrict(above | ve)
        comps = components_minus(sub, ve)
        if not any(r.neighborhood == ve for r in comps):
            best = max((r.neighborhood for r in comps), key=len, default=frozenset())
            bad.append({"edge": c, "adhesion": sorted(map(str, ve)),
                        "best_neighborhood": sorted(map(str, best))})
    return PropertyResult(not bad, f"{len(bad)} edges without a tight component",
                          bad[:10])


def _check_componental(td, t):
    bad = []
    for c in td.edge_ids():
        above = td.strictly_above(c)
        if not above:
            continue
        sub = t.restrict(above)
        comps = components_minus(sub, frozenset())
        if len(comps) != 1:
            bad.append({"edge": c, "components": len(comps)})
    return PropertyResult(not bad, f"{len(bad)} edges with disconnected strict upper part",
                          bad[:10])


def _check_linked(td, t, pair_budget):
    pairs = td.comparable_pairs()[:max(0, pair_budget)]
    bad = []
    checked = 0
    for e, f in pairs:
        ve, vf = td.adhesion(e), td.adhesion(f)
        need = min(len(td.adhesion(g)) for g in td.edges_between(e, f))
        flow = separator_order(t, ve, vf)
        checked += 1
        if flow != need:
            bad.append({"edges": (e, f), "flow": flow, "min_adhesion": need})
    return PropertyResult(
        not bad, f"{checked} comparable pairs checked, {len(bad)} failures",
        bad[:10])


def _check_displays(td, t, spec, oracle, etm):
    psi_ids = spec.psi_ids(t)
    bad = []
    notes = []
    for eps in spec.psi(t):
        if not lives_in(t, eps):
            continue
        if eps.id in etm.node_image:
            bad.append({"end": eps.id, "problem": "mapped to a node",
                        "node": etm.node_image[eps.id]})
    rays = {}
    for eid, edges in etm.ray_image.items():
        if eid in psi_ids:
            rays.setdefault(edges, []).append(eid)
    unresolved = 0
    for edges, ids in rays.items():
        if len(ids) > 1:
            unresolved += len(ids) - 1
            notes.append(f"ends {ids} share the window ray prefix (unresolved)")
    for eid in etm.node_image:
        if eid not in psi_ids:
            continue
    for eid, edges in etm.ray_image.items():
        if eid not in psi_ids:
            notes.append(f"non-displayed end {eid} still descending at the window edge")
    # bag boundaries must avoid the displayed ends
    boundary_bad = []
    for n in td.nodes():
        for eps in spec.psi(t):
            try:
                if end_in_boundary(t, td.bags[n], eps, oracle):
                    boundary_bad.append({"bag": n, "end": eps.id})
            except HorizonError:
                notes.append(f"bag {n} / end {eps.id}: boundary not certifiable")
    ok = not bad and not boundary_bad
    for item in etm.failures:
        bad.append({"end": item[0], "problem": item[1]})
        ok = False
    detail = (f"{len(bad)} displayed-end failures, {len(boundary_bad)} bag-boundary "
              f"violations, {unresolved} pairs unresolved at the window edge")
    if notes:
        detail += "; " + "; ".join(notes[:4])
    return PropertyResult(ok, detail, bad[:10] + boundary_bad[:10])


def _ray_adhesions(td, etm, eid):
    edges = etm.ray_image.get(eid, ())
    return [td.adhesion(c) for c in edges]


def _check_dominators(td, t, spec, oracle, etm):
    bad = []
    notes = []
    for eps in spec.psi(t):
        sets = _ray_adhesions(td, etm, eps.id)
        if len(sets) < 3:
            notes.append(f"{eps.id}: ray prefix too short to stabilize")
            continue
        # vertices surviving into every adhesion of the final stretch; the
        # stretch is stable when widening it by one edge changes nothing
        stable = frozenset(sets[-1]) & frozenset(sets[-2])
        wider = stable & frozenset(sets[-3])
        declared = frozenset(v for v in eps.dominators if v in t.vertices)
        if stable != wider:
            notes.append(f"{eps.id}: adhesion intersection not yet stable")
            continue
        if stable != declared:
            bad.append({"end": eps.id, "stable": sorted(map(str, stable)),
                        "declared": sorted(map(str, declared))})
    detail = f"{len(bad)} mismatches"
    if notes:
        detail += "; " + "; ".join(notes[:4])
    return PropertyResult(not bad, detail, bad[:10])


def _check_degrees(td, t, spec, oracle, etm):
    bad = []
    notes = []
    for eps in spec.psi(t):
        sets = _ray_adhesions(td, etm, eps.id)
        if len(sets) < 2:
            notes.append(f"{eps.id}: ray prefix too short to stabilize")
            continue
        # the final plateau of adhesion sizes is the window's liminf value;
        # a plateau of length >= 2 counts as stabilized, never extrapolated
        sizes = [len(s) for s in sets]
        if sizes[-1] != sizes[-2]:
            notes.append(f"{eps.id}: adhesion sizes not yet stable ({sizes})")
            continue
        value = sizes[-1]
        if eps.combined_degree is None:
            notes.append(f"{eps.id}: infinite combined degree, prefix value {value}")
            continue
        if value != eps.combined_degree:
            bad.append({"end": eps.id, "stabilized": value,
                        "combined_degree": eps.combined_degree})
    detail = f"{len(bad)} mismatches"
    if notes:
        detail += "; " + "; ".join(notes[:4])
    return PropertyResult(not bad, detail, bad[:10])


def _check_connected_parts(td, t):
    disconnected = []
    for n in td.nodes():
        bag = td.bags[n]
        if not bag:
            continue
        sub = t.restrict(bag)
        if len(components_minus(sub, frozenset())) != 1:
            disconnected.append(n)
    return PropertyResult(
        None,
        f"{len(disconnected)} of {len(td.nodes())} parts disconnected "
        f"(informational; connected parts are not generally achievable)")


# -- construction-log checks ---------------------------------------------------


def check_coverage_bound(td):
    """Every staged vertex enters the construction within (adhesion size - 1)
    rounds of its stage: returns (violations, checked)."""
    t, spec = td.t, td.spec
    entry = {}
    for rec in td.log:
        for v in rec.covered_after:
            entry.setdefault(v, rec.round)
    comps_at = {rec.round: rec.components for rec in td.log if rec.round >= 2}
    last = max((rec.round for rec in td.log), default=1)
    violations = []
    checked = 0
    for n in range(1, last + 1):
        stage = spec.stage(n, t)
        for v in t.sorted(stage.vertices):
            if entry.get(v, 10 ** 9) <= n:
                continue
            # the recursion starts at round 2 (stages are monotone, so a
            # stage-1 vertex is also a stage-2 vertex)
            n_eff = max(n, 2)
            comp = next((c for c in comps_at.get(n_eff, ())
                         if v in c.vertices), None)
            if comp is None:
                continue
            deadline = n_eff + comp.order - 1
            if deadline > last:
                continue  # not observable within the built rounds
            checked += 1
            if entry.get(v, 10 ** 9) > deadline:
                violations.append({"vertex": str(v), "stage": n,
                                   "deadline": deadline,
                                   "entered": entry.get(v)})
    return violations, checked


def check_separator_realization(td, oracle=None):
    """On each displayed end's window ray, every edge e is followed by an
    edge f (possibly e itself, when the minimum is realized right there)
    whose adhesion set is a minimum separator between V_e and the end:
    returns (violations, checked)."""
    from .ends import component_of_end

    oracle = oracle or td.oracle
    t = td.t
    etm = end_tree_map(td, oracle)
    spec = td.spec
    violations = []
    checked = 0
    for eps in spec.psi(t):
        edges = etm.ray_image.get(eps.id, ())
        comps = {}
        for f in edges:
            try:
                comps[f] = component_of_end(t, td.adhesion(f), eps, oracle).vertices
            except HorizonError:
                pass
        for idx, e in enumerate(edges):
            ve = td.adhesion(e)
            try:
                smin = min_end_separator(t, ve, eps, oracle=oracle)
            except HorizonError:
                continue
            # observable only when the prefix already passes the minimum
            # separator: some later end-component avoids it entirely
            observable = any(
                f in comps and not (comps[f] & smin) for f in edges[idx:])
            if not observable:
                continue
            hit = False
            for f in edges[idx:]:
                vf = td.adhesion(f)
                if len(vf) != len(smin) or f not in comps:
                    continue
                if not (comps[f] & (ve - vf)):
                    hit = True
                    break
            checked += 1
            if not hit:
                violations.append({"end": eps.id, "edge": e,
                                   "needed_order": len(smin)})
    return violations, checked


def check_region_edges(td):
    """Every region recorded on an edge either reappears on the next edge's
    region set or is exactly the part strictly above some later edge:
    returns (violations, checked)."""
    violations = []
    checked = 0
    for c in td.edge_ids():
        for d, eid in td.region_sets.get(c, ()):
            checked += 1
            realized = False
            for f in td.subtree(c):
                if f == c or td.parent.get(f) is None:
                    continue
                if td.strictly_above(f) == d.vertices:
                    realized = True
                    break
            carried = any(
                d.vertices == q.vertices
                for ch in td.children.get(c, [])
                for q, _ in td.region_sets.get(ch, ()))
            pending_hit = any(
                d.vertices <= comp.vertices for _, comp in td.pending)
            if not (realized or carried or pending_hit):
                violations.append({"edge": c, "end": eid,
                                   "region_size": len(d.vertices)})
    return violations, checked
