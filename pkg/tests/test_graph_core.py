import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkedtd.errors import FamilyError, HorizonError
from linkedtd.families import appendix_gadget, comb_apex, gadget_names, half_grid
from linkedtd.graph_core import (GraphFamily, components_minus, expand, nested,
                                 region_of, touch)

from conftest import finite_family_from
from oracles import bfs_ball, brute_components, half_grid_adj, random_graph


def test_zero_radius_ball(hg4):
    t = expand(hg4, 0)
    assert t.vertices == frozenset({(1, 1)})
    assert t.edges == set()
    assert t.frontier == frozenset({(1, 1)})


def test_half_grid_ball_matches_bfs_oracle(hg4):
    # independent enumeration of the [4] x N adjacency, BFS to radius 3
    adj = half_grid_adj(4, 30)
    depth = bfs_ball(adj, (1, 1), 3)
    t = expand(hg4, 3)
    assert t.vertices == frozenset(depth)
    assert len(t.vertices) == 10
    assert all(t.depth[v] == depth[v] for v in depth)


def test_expansion_monotone_and_idempotent(hg4):
    t5 = expand(hg4, 5)
    t8 = expand(hg4, 8)
    assert t5.vertices <= t8.vertices
    for v in t5.verts:
        assert t5.depth[v] == t8.depth[v]
        if v not in t5.frontier:
            assert t5.neighbors(v) == t8.neighbors(v)
    again = expand(hg4, 5)
    assert again.vertices == t5.vertices and again.verts == t5.verts


def test_gadget_window_membership(gadget):
    # depths derived by hand from the gluing rules: y1, y2 hang off the rung
    # at depth 1, the inner-grid gates s1 = (4,1) and s2 sit at depth 3
    t2 = expand(gadget, 2)
    names = gadget_names(1)
    assert names["y1"] in t2.vertices and names["y2"] in t2.vertices
    assert names["s1"] not in t2.vertices and names["s2"] not in t2.vertices
    t3 = expand(gadget, 3)
    assert set(names["rung"]) <= t3.vertices
    assert names["s2"] in t3.vertices


def test_asymmetric_generator_rejected():
    adj = {"a": ["b"], "b": []}
    fam = finite_family_from(adj, root="a", name="broken")
    with pytest.raises(FamilyError, match="asymmetric"):
        expand(fam, 2)


def test_nonfinite_signal_rejected():
    fam = GraphFamily("inf", lambda v: None, 0, {}, None)
    with pytest.raises(FamilyError, match="non-finite"):
        expand(fam, 1)


def test_horizon_cap_enforced():
    fam = comb_apex(span=24)
    with pytest.raises(HorizonError):
        expand(fam, fam.max_horizon + 1)


def test_components_single_cut_vertex():
    fam = finite_family_from({"a": ["b"], "b": ["a", "c"], "c": ["b"]}, root="a")
    t = expand(fam, 5)
    regions = components_minus(t, {"b"})
    assert sorted(sorted(r.vertices) for r in regions) == [["a"], ["c"]]
    assert all(r.neighborhood == frozenset({"b"}) for r in regions)


def test_components_rung_split(hg4):
    t = expand(hg4, 8)
    rung3 = frozenset((i, 3) for i in range(1, 5))
    regions = components_minus(t, rung3)
    assert len(regions) == 2
    finite_side = next(r for r in regions if (1, 1) in r.vertices)
    infinite_side = next(r for r in regions if (1, 8) in r.vertices)
    assert not finite_side.touches_frontier
    assert infinite_side.touches_frontier
    assert finite_side.vertices == frozenset(
        (i, j) for i in range(1, 5) for j in (1, 2) if t.depth.get((i, j)) is not None)
    assert finite_side.neighborhood <= rung3


def test_components_gadget_gate_pair(gadget, gadget_t16):
    names = gadget_names(1)
    S = frozenset({names["s1"], names["s2"]})
    regions = components_minus(gadget_t16, S)
    inner = next(r for r in regions if ("g3", 1, 1, 1) in r.vertices)
    # the degree-3 grid is cut off from the rest of the rung by {s1, s2}
    assert inner.neighborhood == S
    assert all(v[0] == "g3" for v in inner.vertices)
    rung_rest = set(names["rung"]) - {names["s1"]}
    assert not (inner.vertices & rung_rest)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_components_partition_matches_oracle(seed):
    adj = random_graph(seed, 9, p=0.3)
    fam = finite_family_from(adj, root=0, name=f"rand{seed}")
    t = expand(fam, 12)
    removed = frozenset(v for v in adj if (seed >> v) & 1) & t.vertices
    regions = components_minus(t, removed)
    expected = [c for c in brute_components(adj, removed) if c <= t.vertices]
    assert sorted(map(sorted, (r.vertices for r in regions))) == sorted(
        map(sorted, expected))
    union = frozenset().union(*[r.vertices for r in regions]) if regions else frozenset()
    assert union | removed == t.vertices or union == t.vertices - removed
    for i, r in enumerate(regions):
        assert r.neighborhood <= removed
        for q in regions[i + 1:]:
            assert not touch(r, q)
            assert nested(r, q)


def test_touch_and_nested_basics(hg4):
    t = expand(hg4, 6)
    a = region_of(t, {(1, 1)})
    b = region_of(t, {(1, 3)})
    c = region_of(t, {(1, 3), (1, 4)})
    assert not touch(a, b)
    assert nested(a, b)
    assert touch(b, c) and nested(b, c)  # containment wins
    assert nested(b, b)
    d = region_of(t, {(1, 2)})
    assert touch(a, d) and not nested(a, d)
    assert touch(d, a) == touch(a, d)
    assert nested(a, b) == nested(b, a)


def test_region_of_rejects_disconnected(hg4):
    t = expand(hg4, 6)
    with pytest.raises(ValueError):
        region_of(t, {(1, 1), (1, 3)})
