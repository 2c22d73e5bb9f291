"""Built-in graph families and their end oracles.

Each family documents its end data (canonical rays, anchor slices, degrees,
dominators) and the derivation of its stabilization certificate.  Vertices
are tuples whose first entry tags the zone, so identifiers stay hashable and
families can be mixed in tests without collisions.
"""

from __future__ import annotations

import json
import random

from .errors import FamilyError
from .graph_core import GraphFamily
from .ends import EndHandle, EndOracle


# -- half grid [k] x N ---------------------------------------------------------


def half_grid(k=4):
    """Rows 1..k, columns 1,2,...; root (1,1).

    Single end of degree k (the k rows are disjoint rays), no dominators.
    Certificate: a minimum separator of order <= m between a set within
    depth d and the end consists of vertices each on a shortest detour
    around the set, so it sits within depth d + m; +2 margin.
    """

    def gen(v):
        i, j = v
        out = []
        if j > 1:
            out.append((i, j - 1))
        out.append((i, j + 1))
        if i > 1:
            out.append((i - 1, j))
        if i < k:
            out.append((i + 1, j))
        return out

    def ray(h):
        return tuple((1, j) for j in range(1, h + 2))

    def anchor(n):
        return tuple((i, n) for i in range(1, k + 1))

    end = EndHandle("end", k, frozenset(), 0, ray, anchor)
    oracle = EndOracle("half_grid", lambda h: (end,), lambda m, d: d + m + 2)
    return GraphFamily("half_grid", gen, (1, 1), {"k": k}, oracle)


# -- full grid N x N -----------------------------------------------------------


def grid():
    """The quarter grid on pairs (i, j), i, j >= 1; root (1, 1).

    Single end of infinite degree (degree None); anchors are whole depth
    slices.  Certificate: minimum cuts of order <= m hug the source set.
    """

    def gen(v):
        i, j = v
        out = [(i, j + 1), (i + 1, j)]
        if j > 1:
            out.append((i, j - 1))
        if i > 1:
            out.append((i - 1, j))
        return out

    def ray(h):
        return tuple((1, j) for j in range(1, h + 2))

    end = EndHandle("end", None, frozenset(), 0, ray, None)
    oracle = EndOracle("grid", lambda h: (end,), lambda m, d: d + m + 3)
    return GraphFamily("grid", gen, (1, 1), {}, oracle)


# -- infinite binary tree ------------------------------------------------------


def binary_tree():
    """Vertices are 0/1 strings, root the empty string.

    The end space is uncountable; the oracle declares a three-branch sample
    and flags it.  Each sampled end has degree 1, no dominators; tree
    separators are single vertices on the branch, within depth d + 1.
    """

    def gen(v):
        out = []
        if v:
            out.append(v[:-1])
        out.append(v + "0")
        out.append(v + "1")
        return out

    def branch_end(eid, bit_fn):
        def prefix(n):
            return "".join(bit_fn(i) for i in range(n))

        def ray(h):
            return tuple(prefix(n) for n in range(h + 1))

        def anchor(n):
            return (prefix(n),)

        return EndHandle(eid, 1, frozenset(), 0, ray, anchor)

    ends = (
        branch_end("left", lambda i: "0"),
        branch_end("right", lambda i: "1"),
        branch_end("zigzag", lambda i: "01"[i % 2]),
    )
    oracle = EndOracle("binary_tree", lambda h: ends,
                       lambda m, d: d + 3, sampled=True)
    return GraphFamily("binary_tree", gen, "", {}, oracle)


# -- comb (tooth rays at every spine vertex) -----------------------------------


def _comb_generator(apex_span):
    def gen(v):
        if v == ("a",):
            return [("s", j) for j in range(apex_span)]
        kind = v[0]
        if kind == "s":
            j = v[1]
            out = []
            if j > 0:
                out.append(("s", j - 1))
            out.append(("s", j + 1))
            out.append(("t", j, 1))
            if apex_span and j < apex_span:
                out.append(("a",))
            return out
        _, j, i = v
        out = [("t", j, i + 1)]
        if i > 1:
            out.append(("t", j, i - 1))
        else:
            out.append(("s", j))
        return out

    return gen


def _comb_ends(horizon_margin, spine_dom, spine_depth):
    def spine_ray(h):
        return tuple(("s", j) for j in range(h + 1))

    def tooth_end(j):
        def ray(h):
            return tuple(("t", j, i) for i in range(1, max(1, h - spine_depth(j)) + 1))

        return EndHandle(f"tooth_{j}", 1, frozenset(), spine_depth(j), ray,
                         lambda n, j=j: (("t", j, n),))

    spine = EndHandle("spine", 1, spine_dom, 0, spine_ray,
                      lambda n: (("s", n),))

    def ends(h):
        out = [spine]
        out.extend(tooth_end(j) for j in range(0, max(0, h - horizon_margin)))
        return tuple(out)

    return ends


def comb():
    """Spine ray with a tooth ray hanging at every spine vertex; root the
    spine start.  Ends: the spine end plus one end per tooth (the oracle
    lists the teeth the window certifies and is flagged as sampled)."""
    gen = _comb_generator(0)
    ends = _comb_ends(4, frozenset(), lambda j: j)
    oracle = EndOracle("comb", ends, lambda m, d: d + 3, sampled=True)
    return GraphFamily("comb", gen, ("s", 0), {}, oracle)


def comb_apex(span=48):
    """Comb plus an apex joined to every spine vertex.

    A dominating vertex has infinite degree, so no BFS presentation can carry
    the true object; this family presents the apex adjacent to the first
    `span` spine vertices and caps the usable horizon well below the span.
    The oracle declares the intended infinite object: the spine end is
    dominated by the apex (star witness: the apex-spine edges themselves),
    keeps degree 1, and every tooth end is undominated.
    """
    gen = _comb_generator(span)
    spine_dom = frozenset({("a",)})
    ends = _comb_ends(5, spine_dom, lambda j: min(j, 2))
    oracle = EndOracle("comb_apex", ends, lambda m, d: d + 3, sampled=True)
    return GraphFamily("comb_apex", gen, ("s", 0), {"span": span}, oracle,
                       max_horizon=span // 3)


# -- the rung-gadget graph from the connected-parts counterexample -------------


def appendix_gadget(drop_s1_g3=False):
    """A [4] x N host grid with a gadget glued along every rung.

    Rung j of the host is (1,j),(2,j),(3,j),s1=(4,j).  Gadget j adds fresh
    vertices y1, y2, s2, a degree-3 half-grid attached to {s1, s2}, and a
    degree-4 half-grid attached to {y1, y2, s2}; y1 and y2 are joined to the
    first three rung vertices.  Ends: the host end `psi` (degree 4) and two
    per gadget, `eps3_j` (degree 3) and `eps4_j` (degree 4); all undominated.

    `drop_s1_g3=True` removes the s1-to-inner-grid edges of every gadget, an
    adversarial mutation that changes the minimum rung-to-eps3 separator.

    Certificate: gadgets attach only along their own rung, so minimum
    separators of order <= m for sets within depth d stay within d + m + 4.
    """

    def gen(v):
        kind = v[0]
        if kind == "h":
            _, i, j = v
            out = []
            if j > 1:
                out.append(("h", i, j - 1))
            out.append(("h", i, j + 1))
            if i > 1:
                out.append(("h", i - 1, j))
            if i < 4:
                out.append(("h", i + 1, j))
            if i in (1, 2, 3):
                out.append(("gy", j, 1))
                out.append(("gy", j, 2))
            if i == 4 and not drop_s1_g3:
                out.extend(("g3", j, ii, 1) for ii in (1, 2, 3))
            return out
        if kind == "gy":
            _, j, _l = v
            out = [("h", i, j) for i in (1, 2, 3)]
            out.extend(("g4", j, ii, 1) for ii in (1, 2, 3, 4))
            return out
        if kind == "gs2":
            _, j = v
            out = [("g3", j, ii, 1) for ii in (1, 2, 3)]
            out.extend(("g4", j, ii, 1) for ii in (1, 2, 3, 4))
            return out
        if kind == "g3":
            _, j, i, m = v
            out = []
            if m > 1:
                out.append(("g3", j, i, m - 1))
            out.append(("g3", j, i, m + 1))
            if i > 1:
                out.append(("g3", j, i - 1, m))
            if i < 3:
                out.append(("g3", j, i + 1, m))
            if m == 1:
                if not drop_s1_g3:
                    out.append(("h", 4, j))
                out.append(("gs2", j))
            return out
        if kind == "g4":
            _, j, i, m = v
            out = []
            if m > 1:
                out.append(("g4", j, i, m - 1))
            out.append(("g4", j, i, m + 1))
            if i > 1:
                out.append(("g4", j, i - 1, m))
            if i < 4:
                out.append(("g4", j, i + 1, m))
            if m == 1:
                out.append(("gy", j, 1))
                out.append(("gy", j, 2))
                out.append(("gs2", j))
            return out
        raise FamilyError(f"unknown vertex {v!r}")

    def psi_ray(h):
        return tuple(("h", 1, j) for j in range(1, h + 2))

    psi = EndHandle("psi", 4, frozenset(), 0, psi_ray,
                    lambda n: tuple(("h", i, n) for i in (1, 2, 3, 4)))

    def gadget_ends(j):
        def ray3(h):
            return tuple(("g3", j, 1, m) for m in range(1, max(1, h - j - 2) + 1))

        def ray4(h):
            return tuple(("g4", j, 1, m) for m in range(1, max(1, h - j - 1) + 1))

        e3 = EndHandle(f"eps3_{j}", 3, frozenset(), j + 2, ray3,
                       lambda n, j=j: tuple(("g3", j, i, n) for i in (1, 2, 3)))
        e4 = EndHandle(f"eps4_{j}", 4, frozenset(), j + 1, ray4,
                       lambda n, j=j: tuple(("g4", j, i, n) for i in (1, 2, 3, 4)))
        return e3, e4

    def ends(h):
        # gadget j is certified once its boundary ball plus an anchor slice
        # fit the window: both tubes need depth j + 15
        out = [psi]
        for j in range(1, max(1, h - 14)):
            out.extend(gadget_ends(j))
        return tuple(out)

    name = "appendix_gadget" + ("_mutated" if drop_s1_g3 else "")
    oracle = EndOracle(name, ends, lambda m, d: d + m + 4)
    return GraphFamily(name, gen, ("h", 1, 1),
                       {"drop_s1_g3": drop_s1_g3}, oracle)


def gadget_names(j):
    """Named vertices of gadget j: rung (Q_X), s1, s2, y1, y2."""
    rung = tuple(("h", i, j) for i in (1, 2, 3, 4))
    return {
        "rung": rung,
        "s1": ("h", 4, j),
        "s2": ("gs2", j),
        "y1": ("gy", j, 1),
        "y2": ("gy", j, 2),
    }


# -- half grid with a detour blob (exercises envelope avoidance) ---------------


def half_grid_blob(k=4):
    """half_grid(k) plus a three-vertex blob b1-b2-b3 attached at (1,3),
    (2,3) and (1,4).

    The blob is a 3-region whose closure contains no end; the canonical ray
    of the single end detours through it ((1,3) b1 b2 b3 (1,4) ...), so the
    base envelope of {the end} meets the blob and the avoidance formula has
    real work to do.
    """
    base = half_grid(k)
    base_gen = base.generator
    extra = {
        (1, 3): [("b", 1)],
        (2, 3): [("b", 2)],
        (1, 4): [("b", 3)],
    }

    def gen(v):
        if v[0] == "b":
            _, i = v
            out = []
            if i > 1:
                out.append(("b", i - 1))
            if i < 3:
                out.append(("b", i + 1))
            out.extend({1: [(1, 3)], 2: [(2, 3)], 3: [(1, 4)]}[i])
            return out
        return list(base_gen(v)) + extra.get(v, [])

    def ray(h):
        detour = [(1, 1), (1, 2), (1, 3), ("b", 1), ("b", 2), ("b", 3)]
        detour.extend((1, j) for j in range(4, h + 2))
        out = []
        for v in detour:
            out.append(v)
        return tuple(out)

    def anchor(n):
        return tuple((i, n + 4) for i in range(1, k + 1))

    end = EndHandle("end", k, frozenset(), 0, ray, anchor)
    # the blob only adds detours at depth <= 4, so cuts below that depth
    # behave like the plain half grid
    oracle = EndOracle("half_grid_blob", lambda h: (end,),
                       lambda m, d: max(d, 4) + m + 2)
    return GraphFamily("half_grid_blob", gen, (1, 1), {"k": k}, oracle)


# -- finite graphs from explicit data ------------------------------------------


def finite_family(data, name="finite"):
    """A finite graph given as {"vertices": [...], "edges": [[u, v], ...]}.

    Vertices may be ints or strings.  The root is data["root"] when present,
    else the smallest vertex by string order.  No ends; the truncation covers
    the root's component.
    """
    verts = list(data["vertices"])
    if not verts:
        raise FamilyError("finite graph needs at least one vertex")
    key = lambda v: (str(type(v)), str(v))
    adj = {v: [] for v in verts}
    for u, w in data["edges"]:
        if u not in adj or w not in adj:
            raise FamilyError(f"edge ({u!r}, {w!r}) mentions an unknown vertex")
        if u == w:
            raise FamilyError(f"loop at {u!r}; graphs here are simple")
        if w not in adj[u]:
            adj[u].append(w)
            adj[w].append(u)
    for v in adj:
        adj[v].sort(key=key)
    root = data.get("root", sorted(verts, key=key)[0])
    oracle = EndOracle(name, lambda h: (), lambda m, d: d)
    return GraphFamily(name, lambda v: adj[v], root, {"n": len(verts)}, oracle)


def finite_from_file(path):
    with open(path) as fh:
        return finite_family(json.load(fh))


# -- randomized planted-terminal hosts (ends are attached rays) ----------------


def planted(seed, n_core=8, n_rays=2, extra_edges=4):
    """A random connected core with `n_rays` infinite rays planted on it.

    Deterministic in `seed`.  Each planted ray is one end of degree 1; the
    certificate is d + n_core + 2 since every separator that matters lies in
    the core or on a ray stub.
    """
    rng = random.Random(seed)
    core = [("c", i) for i in range(n_core)]
    adj = {v: set() for v in core}
    for i in range(1, n_core):
        j = rng.randrange(i)
        adj[core[i]].add(core[j])
        adj[core[j]].add(core[i])
    for _ in range(extra_edges):
        a, b = rng.sample(range(n_core), 2)
        adj[core[a]].add(core[b])
        adj[core[b]].add(core[a])
    attach = [rng.randrange(n_core) for _ in range(n_rays)]

    def gen(v):
        if v[0] == "c":
            out = sorted(adj[v], key=lambda w: w[1])
            for m, a in enumerate(attach):
                if v == ("c", a):
                    out.append(("r", m, 1))
            return out
        _, m, i = v
        out = [("r", m, i + 1)]
        if i > 1:
            out.append(("r", m, i - 1))
        else:
            out.append(("c", attach[m]))
        return out

    def ray_end(m):
        def ray(h):
            return tuple(("r", m, i) for i in range(1, h + 1))

        return EndHandle(f"ray_{m}", 1, frozenset(), n_core, ray,
                         lambda n, m=m: (("r", m, n),))

    ends = tuple(ray_end(m) for m in range(n_rays))
    oracle = EndOracle(f"planted_{seed}", lambda h: ends,
                       lambda m, d: d + n_core + 2)
    return GraphFamily(f"planted_{seed}", gen, ("c", 0),
                       {"seed": seed, "n_core": n_core, "n_rays": n_rays}, oracle)


# -- registry ------------------------------------------------------------------


def make_family(name, **params):
    """CLI-facing family constructor."""
    builders = {
        "half_grid": lambda: half_grid(int(params.get("k", 4))),
        "grid": grid,
        "binary_tree": binary_tree,
        "comb": comb,
        "comb_apex": lambda: comb_apex(int(params.get("span", 48))),
        "appendix_gadget": lambda: appendix_gadget(
            bool(params.get("drop_s1_g3", False))),
        "half_grid_blob": lambda: half_grid_blob(int(params.get("k", 4))),
        "planted": lambda: planted(int(params.get("seed", 0))),
    }
    if name == "finite":
        path = params.get("input")
        if not path:
            raise FamilyError("family 'finite' needs --input FILE")
        return finite_from_file(path)
    if name not in builders:
        raise FamilyError(f"unknown family {name!r}; see the `families` command")
    return builders[name]()


FAMILY_HELP = {
    "half_grid": "rows 1..k times N; one end of degree k (param k, default 4)",
    "grid": "quarter grid N x N; one end of infinite degree",
    "binary_tree": "infinite binary tree; sampled end set (3 branches)",
    "comb": "spine with a tooth ray per spine vertex; sampled tooth ends",
    "comb_apex": "comb plus a dominating apex; spine end dominated (param span)",
    "appendix_gadget": "[4] x N host with a separator gadget on every rung",
    "half_grid_blob": "half_grid(k) with a 3-region detour blob on the ray",
    "finite": "finite graph from a JSON file (--input FILE)",
    "planted": "random core with planted rays as ends (param seed)",
}
