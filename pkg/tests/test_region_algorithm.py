from itertools import combinations

import pytest

from linkedtd.errors import AuditError
from linkedtd.families import appendix_gadget, comb, gadget_names, planted
from linkedtd.graph_core import (component_containing, components_minus,
                                 expand, nested, region_of, touch)
from linkedtd.separation import separates
from linkedtd.region_algorithm import audit_run, run, uncross
from linkedtd.ends import is_linked_to_end, tail_vertex

from conftest import tube_cross_family


def gadget_side_host(gadget, t):
    names = gadget_names(1)
    rung = frozenset(names["rung"])
    comps = components_minus(t, rung)
    side = next(c for c in comps if names["y1"] in c.vertices)
    return t.restrict(side.vertices | side.neighborhood), rung, names


def test_linked_input_terminates_immediately(hg4, hg4_t14):
    rung = frozenset((i, 1) for i in range(1, 5))
    rr = run(hg4_t14, rung, [], hg4.oracle)
    assert rr.output == []
    assert ("end", "linked to X") in rr.skipped


def test_gadget_side_run_emits_expected_regions(gadget, gadget_t16):
    host, rung, names = gadget_side_host(gadget, gadget_t16)
    rr = run(host, rung, [], gadget.oracle)
    assert [rr.per_region_end[i].id for i in range(len(rr.output))] == [
        "eps3_1", "eps4_1"]
    assert rr.orders == [2, 3]
    first, second = rr.output
    assert first.neighborhood == frozenset({names["s1"], names["s2"]})
    assert second.neighborhood in (
        frozenset({names["y1"], names["y2"], names["s1"]}),
        frozenset({names["y1"], names["y2"], names["s2"]}))
    assert first.vertices < second.vertices  # nested with increasing order
    audit = audit_run(rr, gadget.oracle, maximality=True)
    assert audit.passed, audit.to_json()


def test_comb_run_covers_every_tooth():
    fam = comb()
    t = expand(fam, 12)
    X = frozenset({("s", 0), ("s", 1)})
    rr = run(t, X, [], fam.oracle)
    audit = audit_run(rr, fam.oracle)
    assert audit.passed, audit.to_json()
    assert all(r.order == 1 for r in rr.output)
    # brute-force cross-check: every emitted separator is a true 1-separator
    for i, r in enumerate(rr.output):
        S = rr.separators[i]
        eps = rr.per_region_end[i]
        deep = eps.ray_fn(12)[-1]
        assert separates(t, S, X, frozenset({deep}))


def test_run_respects_inputs(gadget, gadget_t16):
    host, rung, names = gadget_side_host(gadget, gadget_t16)
    base = run(host, rung, [], gadget.oracle)
    inner = base.output[0]  # the 2-region for the inner grid end
    rr = run(host, rung, [inner], gadget.oracle)
    # the end living in the input is skipped; the other end's region must
    # still be nested with the input
    assert ("eps3_1", "lives in an input region") in rr.skipped
    assert all(nested(r, inner) for r in rr.output)
    audit = audit_run(rr, gadget.oracle)
    assert audit.passed


def test_input_audit_failures(gadget, gadget_t16):
    host, rung, names = gadget_side_host(gadget, gadget_t16)
    bad_meets_x = region_of(host, {names["y1"]})
    with pytest.raises(AuditError):
        run(host, rung, [region_of(host, set(rung) & host.vertices)],
            gadget.oracle)
    not_linked = region_of(
        host, {("g4", 1, 1, 2), ("g4", 1, 2, 2)})
    with pytest.raises(AuditError, match="end-linked"):
        run(host, rung, [not_linked], gadget.oracle)


def test_uncross_trivial_cases(gadget, gadget_t16):
    host, rung, names = gadget_side_host(gadget, gadget_t16)
    rr = run(host, rung, [], gadget.oracle)
    c0 = rr.output[0]
    e0 = rr.per_region_end[0]
    assert uncross(host, c0, [], e0, gadget.oracle) == c0
    assert uncross(host, c0, [rr.output[1]], e0, gadget.oracle) == c0


def test_uncross_resolves_touching_pair():
    fam = tube_cross_family()
    t = expand(fam, 16)
    grid_end = fam.oracle.by_id(16, "grid_end")
    tube_end = fam.oracle.by_id(16, "tube_end")
    tube = component_containing(t, {(4, 5), (4, 6)},
                                ("d", 5, 1))
    assert tube.order == 2
    assert is_linked_to_end(t, tube.neighborhood, tube_end)
    # grid region beyond rung 3, tube excluded: touches the tube via the
    # attachment edges without containing it
    grid_part = region_of(
        t, frozenset(v for v in t.vertices
                     if v[0] != "d" and v[1] >= 4))
    assert touch(grid_part, tube) and not nested(grid_part, tube)
    assert is_linked_to_end(t, grid_part.neighborhood, grid_end)
    fixed = uncross(t, grid_part, [tube], grid_end)
    assert nested(fixed, tube)
    assert fixed.order <= grid_part.order
    assert tail_vertex(t, grid_end) in fixed.vertices
    assert is_linked_to_end(t, fixed.neighborhood, grid_end)
    # brute-force comparison: no larger valid candidate exists over the
    # corner separator pool
    pool = sorted(grid_part.neighborhood | tube.neighborhood,
                  key=t.sort_key)
    best = None
    tailv = tail_vertex(t, grid_end)
    for size in range(1, grid_part.order + 1):
        for S in combinations(pool, size):
            if tailv in S:
                continue
            cand = component_containing(t, frozenset(S), tailv)
            if cand.order > grid_part.order:
                continue
            if not nested(cand, tube):
                continue
            if not is_linked_to_end(t, cand.neighborhood, grid_end):
                continue
            if best is None or len(cand.vertices) > len(best.vertices):
                best = cand
    assert best is not None and len(fixed.vertices) == len(best.vertices)


def test_planted_hosts_pass_run_audit():
    for seed in range(8):
        fam = planted(seed, n_core=7, n_rays=3)
        t = expand(fam, 22)
        X = frozenset({("c", 0), ("c", 1), ("c", 2)})
        rr = run(t, X, [], fam.oracle)
        audit = audit_run(rr, fam.oracle)
        assert audit.passed, (seed, audit.to_json())
        # orders equal true minimum separator sizes (exhaustive check)
        for i, r in enumerate(rr.output):
            eps = rr.per_region_end[i]
            deep = frozenset({eps.ray_fn(22)[-1]})
            too_small = [
                S for S in combinations(sorted(t.vertices, key=t.sort_key),
                                        r.order - 1)
                if separates(t, frozenset(S), X, deep)
            ] if r.order > 1 else []
            assert not too_small
