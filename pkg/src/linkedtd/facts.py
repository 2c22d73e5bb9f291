"""Regression facts of the rung-gadget graph, checked by two independent
routes: flow-based minimum-cut enumeration and exhaustive small-separator
search over a maximum disjoint path family (every minimum cut meets every
maximum family once per path, so that vertex pool is complete).
"""

from __future__ import annotations

from itertools import combinations, product

from .errors import HorizonError
from .families import appendix_gadget, gadget_names
from .graph_core import expand
from .separation import all_min_separators, max_disjoint_paths, separates
from .ends import anchor_beyond, min_end_separator, end_separator_order


def _sink_slice(t, eps, X):
    oracle = t.family.oracle
    D = oracle.stabilization_depth(len(X), t.max_depth(X))
    return frozenset(anchor_beyond(t, eps, D))


def _bruteforce_cuts(t, X, sinks, size):
    """All `size`-subsets of a maximum path family's vertices that separate
    X from the sinks (pure BFS check, no flow machinery)."""
    family = max_disjoint_paths(t, X, sinks)
    pools = [p for p in family.paths]
    found = set()
    if len(pools) != size:
        return found, family.value
    for combo in product(*pools):
        S = frozenset(combo)
        if len(S) == size and separates(t, S, X, sinks):
            found.add(S)
    return found, family.value


def gadget_facts(horizon=16, mutated=False):
    """Check the three separator facts of the gadget glued along rung 1.

    Returns a list of {"fact", "passed", "detail"} entries; raises
    HorizonError when the window cannot certify the computation.
    """
    fam = appendix_gadget(drop_s1_g3=mutated)
    t = expand(fam, horizon)
    names = gadget_names(1)
    rung = frozenset(names["rung"])
    oracle = fam.oracle
    try:
        e3 = oracle.by_id(horizon, "eps3_1")
        e4 = oracle.by_id(horizon, "eps4_1")
    except KeyError:
        raise HorizonError(
            f"gadget ends not certified at horizon {horizon}", required=16)
    results = []

    expected_s = frozenset({names["s1"], names["s2"]})
    sep3 = min_end_separator(t, rung, e3)
    sinks3 = _sink_slice(t, e3, rung)
    all3 = set(all_min_separators(t, rung, sinks3))
    brute3, _ = _bruteforce_cuts(t, rung, sinks3, len(sep3))
    ok1 = (sep3 == expected_s and all3 == {expected_s} and brute3 == {expected_s})
    results.append({
        "fact": "rung-to-eps3 separator is {s1, s2} and unique",
        "passed": ok1,
        "detail": f"nearest cut {sorted(map(str, sep3))}; "
                  f"{len(all3)} flow-enumerated / {len(brute3)} brute-forced minimum cuts",
    })

    order4 = end_separator_order(t, rung, e4)
    y = frozenset({names["y1"], names["y2"], names["s2"]})
    ok2 = order4 == 3 and separates(t, y, rung, _sink_slice(t, e4, rung))
    results.append({
        "fact": "rung-to-eps4 separators have order 3",
        "passed": ok2,
        "detail": f"flow value {order4}; {{y1, y2, s2}} separates: "
                  f"{separates(t, y, rung, _sink_slice(t, e4, rung))}",
    })

    expected4 = {
        frozenset({names["y1"], names["y2"], names["s1"]}),
        frozenset({names["y1"], names["y2"], names["s2"]}),
    }
    sinks4 = _sink_slice(t, e4, rung)
    all4 = set(all_min_separators(t, rung, sinks4))
    brute4, _ = _bruteforce_cuts(t, rung, sinks4, 3)
    gadget_zone = set(names["rung"]) | {names["y1"], names["y2"], names["s2"]}
    meeting = {s for s in all4 if s & gadget_zone}
    ok3 = all4 == expected4 and brute4 == expected4 and meeting == expected4
    results.append({
        "fact": "order-3 rung-to-eps4 separators are exactly "
                "{y1, y2, s1} and {y1, y2, s2}",
        "passed": ok3,
        "detail": f"flow-enumerated {sorted(sorted(map(str, s)) for s in all4)}; "
                  f"brute-forced {len(brute4)}",
    })
    return results
