from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkedtd.errors import AuditError
from linkedtd.families import gadget_names
from linkedtd.graph_core import components_minus, expand, region_of
from linkedtd.separation import (all_min_separators, is_linked_set,
                                 max_disjoint_paths, min_separator, separates,
                                 separator_order, star_from_regions,
                                 star_is_valid)
from linkedtd.ends import anchor_beyond

from conftest import finite_family_from
from oracles import (brute_all_min_separators, brute_min_separator_size,
                     has_path_avoiding, random_graph)


def _rand_instance(seed, n=8):
    adj = random_graph(seed, n)
    fam = finite_family_from(adj, root=0, name=f"rand{seed}")
    t = expand(fam, 16)
    verts = sorted(t.vertices)
    x = frozenset(verts[seed % 3:][:2 + seed % 3])
    y = frozenset(verts[-(2 + (seed // 7) % 3):])
    return adj, t, x, y


def test_trivial_identity_path(hg4_t14):
    pf = max_disjoint_paths(hg4_t14, {(2, 2)}, {(2, 2)})
    assert pf.paths == (((2, 2),),)


def test_path_endpoints_are_clean(hg4_t14):
    X = frozenset({(1, 1), (2, 1), (3, 1)})
    Y = frozenset({(1, 6), (2, 6), (3, 6), (4, 6)})
    pf = max_disjoint_paths(hg4_t14, X, Y)
    assert len(pf) == 3
    used = set()
    for p in pf.paths:
        assert p[0] in X and p[-1] in Y
        assert not (set(p[1:]) & X) and not (set(p[:-1]) & Y)
        assert not (set(p) & used)
        used |= set(p)
        for a, b in zip(p, p[1:]):
            assert hg4_t14.has_edge(a, b)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_menger_equality_against_bruteforce(seed):
    adj, t, x, y = _rand_instance(seed)
    flow = separator_order(t, x, y)
    brute = brute_min_separator_size(adj, x, y, max_size=5)
    assert brute is not None and flow == brute


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_min_separator_separates_and_is_fixpoint(seed):
    adj, t, x, y = _rand_instance(seed)
    for side in ("nearest_X", "nearest_Y"):
        S = min_separator(t, x, y, side=side)
        assert separates(t, S, x, y)
        assert not has_path_avoiding(adj, S, x, y)
        assert len(S) == separator_order(t, x, y)
    S = min_separator(t, x, y, side="nearest_X")
    # re-running the flow from the cut returns the cut itself
    assert min_separator(t, S, y, side="nearest_X") == S


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_all_min_separators_against_bruteforce(seed):
    adj, t, x, y = _rand_instance(seed, n=7)
    size = separator_order(t, x, y)
    mine = set(all_min_separators(t, x, y))
    brute = set(brute_all_min_separators(adj, x, y, size))
    assert mine == brute


def test_star_cuts_and_disconnected_terminals():
    fam = finite_family_from({0: [1, 2], 1: [0], 2: [0], 3: []}, root=0)
    t = expand(fam, 4)
    assert min_separator(t, {1}, {2}, side="nearest_X") == frozenset({1})
    assert min_separator(t, {1}, {2}, side="nearest_Y") == frozenset({2})
    assert frozenset({0}) in set(all_min_separators(t, {1}, {2}))
    # vertex 3 sits in another component: already separated
    assert min_separator(t, {1}, {3}, side="nearest_X") == frozenset()


def test_gadget_three_paths_and_dual_cut(gadget, gadget_t16):
    t = gadget_t16
    names = gadget_names(1)
    rung = frozenset(names["rung"])
    e4 = gadget.oracle.by_id(16, "eps4_1")
    deep = frozenset(anchor_beyond(t, e4, 11))
    pf = max_disjoint_paths(t, rung, deep)
    assert len(pf) == 3
    y_cut = frozenset({names["y1"], names["y2"], names["s2"]})
    assert separates(t, y_cut, rung, deep)


def test_half_grid_rung_cuts_bruteforced(hg4):
    t = expand(hg4, 8)
    rung1 = frozenset((i, 1) for i in range(1, 5))
    rung6 = frozenset((i, 6) for i in range(1, 5))
    assert separator_order(t, rung1, rung6) == 4
    # exhaustive check: no 3-subset of the window separates
    verts = sorted(t.vertices)
    assert all(not separates(t, frozenset(S), rung1, rung6)
               for S in combinations(verts, 3))
    near = min_separator(t, rung1, rung6, side="nearest_X")
    assert near == rung1
    rung2 = frozenset((i, 2) for i in range(1, 5))
    assert rung2 in set(all_min_separators(t, rung1, rung6))


def test_is_linked_set(hg4_t14):
    rung1 = frozenset((i, 1) for i in range(1, 5))
    rung6 = frozenset((i, 6) for i in range(1, 5))
    assert is_linked_set(hg4_t14, rung1, rung6)
    assert is_linked_set(hg4_t14, frozenset({(1, 2), (2, 2)}),
                         frozenset({(1, 2), (2, 2), (3, 3)}))  # X subset of Y
    assert not is_linked_set(hg4_t14, rung1 | {(1, 2)}, rung6)


def test_gadget_rung_not_linked_to_gate_side(gadget, gadget_t16):
    names = gadget_names(1)
    rung = frozenset(names["rung"])
    e3 = gadget.oracle.by_id(16, "eps3_1")
    deep = frozenset(anchor_beyond(gadget_t16, e3, 11))
    assert not is_linked_set(gadget_t16, rung, deep)
    assert separator_order(gadget_t16, rung, deep) == 2


def test_star_from_regions(hg4):
    t = expand(hg4, 8)
    empty = star_from_regions(t, [])
    assert empty.separations == () and empty.interior == t.vertices
    rung3 = frozenset((i, 3) for i in range(1, 5))
    regions = components_minus(t, rung3)
    star = star_from_regions(t, regions)
    assert star_is_valid(star)
    assert star.interior == rung3
    one = star_from_regions(t, [regions[0]])
    assert one.separations[0].separator == regions[0].neighborhood
    assert one.interior == t.vertices - regions[0].vertices
    touching = region_of(t, {(1, 1)})
    other = region_of(t, {(1, 2)})
    with pytest.raises(AuditError):
        star_from_regions(t, [touching, other])
