import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linkedtd.families import appendix_gadget, half_grid
from linkedtd.graph_core import GraphFamily, expand
from linkedtd.ends import EndHandle, EndOracle


@pytest.fixture(scope="session")
def hg4():
    return half_grid(4)


@pytest.fixture(scope="session")
def hg4_t14(hg4):
    return expand(hg4, 14)


@pytest.fixture(scope="session")
def gadget():
    return appendix_gadget()


@pytest.fixture(scope="session")
def gadget_t16(gadget):
    return expand(gadget, 16)


def finite_family_from(adj, root=None, name="fixture"):
    """Wrap a plain adjacency dict as a GraphFamily with no ends."""
    oracle = EndOracle(name, lambda h: (), lambda m, d: d)
    r = root if root is not None else sorted(adj, key=str)[0]
    return GraphFamily(name, lambda v: list(adj[v]), r, {}, oracle)


def tube_cross_family():
    """half_grid(4) with a width-2 tube hanging down from row 4 at columns
    5 and 6; two ends (the grid end of degree 4, the tube end of degree 2).

    Built for the uncrossing tests: the region beyond rung 3 inside the grid
    touches the tube region without containing it.
    """

    def gen(v):
        if v[0] == "d":
            _, i, m = v
            out = [("d", i, m + 1)]
            if m > 1:
                out.append(("d", i, m - 1))
            else:
                out.append((4, i))
            out.append(("d", 11 - i, m))
            return out
        i, j = v
        out = []
        if j > 1:
            out.append((i, j - 1))
        out.append((i, j + 1))
        if i > 1:
            out.append((i - 1, j))
        if i < 4:
            out.append((i + 1, j))
        if i == 4 and j in (5, 6):
            out.append(("d", j, 1))
        return out

    def grid_ray(h):
        return tuple((1, j) for j in range(1, h + 2))

    def tube_ray(h):
        return tuple(("d", 5, m) for m in range(1, max(1, h - 7) + 1))

    grid_end = EndHandle("grid_end", 4, frozenset(), 0, grid_ray,
                         lambda n: tuple((i, n) for i in range(1, 5)))
    tube_end = EndHandle("tube_end", 2, frozenset(), 7, tube_ray,
                         lambda n: (("d", 5, n), ("d", 6, n)))
    oracle = EndOracle("tube_cross", lambda h: (grid_end, tube_end),
                       lambda m, d: d + m + 3)
    return GraphFamily("tube_cross", gen, (1, 1), {}, oracle)
