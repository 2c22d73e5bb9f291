import pytest

from linkedtd.errors import AuditError
from linkedtd.families import appendix_gadget, half_grid, half_grid_blob
from linkedtd.graph_core import expand, region_of
from linkedtd.envelope import (VertexEndSet, audit_envelope, envelope,
                               envelope_avoiding)
from linkedtd.ends import boundary_of


@pytest.fixture(scope="module")
def blob():
    fam = half_grid_blob()
    return fam, expand(fam, 16)


def test_finite_core_is_its_own_envelope(hg4_t14):
    core = frozenset({(2, 2), (3, 1), (1, 4)})
    res = envelope(hg4_t14, core)
    assert res.envelope == core
    assert res.boundary_witness == frozenset()
    assert audit_envelope(hg4_t14, res)


def test_end_core_yields_canonical_ray(hg4, hg4_t14):
    end = hg4.oracle.ends(14)[0]
    res = envelope(hg4_t14, VertexEndSet.of((), {end}))
    assert res.envelope == frozenset((1, j) for j in range(1, 16))
    assert {e.id for e in res.boundary_witness} == {"end"}
    # complement components carry their exact in-window neighbourhoods
    for comp in res.adhesion_witness:
        assert comp.neighborhood <= res.envelope


def test_envelope_rejects_undeclared_end(hg4_t14, gadget):
    stranger = gadget.oracle.by_id(16, "eps3_1")
    with pytest.raises(AuditError):
        envelope(hg4_t14, VertexEndSet.of((), {stranger}))


def test_envelope_idempotent_boundary(hg4, hg4_t14):
    end = hg4.oracle.ends(14)[0]
    res = envelope(hg4_t14, VertexEndSet.of((), {end}))
    again = envelope(hg4_t14, VertexEndSet.of(res.envelope, {end}))
    assert again.boundary_witness == res.boundary_witness


def test_deep_gadget_core_boundary(gadget):
    # one vertex per gadget marches along with the host row: the host end
    # lies in the closure of the core, and the envelope must witness it
    t = expand(gadget, 20)
    core = frozenset(("g3", j, 1, 1) for j in range(1, 17)
                     if ("g3", j, 1, 1) in t.vertices)
    res = envelope(t, core)
    assert {e.id for e in res.boundary_witness} == {"psi"}
    assert core <= res.envelope


def test_avoidance_formula_swaps_blob_for_neighbourhood(blob):
    fam, t = blob
    end = fam.oracle.ends(16)[0]
    blob_region = region_of(t, {("b", 1), ("b", 2), ("b", 3)})
    assert blob_region.order == 3
    base = envelope(t, VertexEndSet.of((), {end}))
    assert base.envelope & blob_region.vertices  # the detour ray meets it
    res = envelope_avoiding(t, VertexEndSet.of((), {end}), [blob_region])
    assert not (res.envelope & blob_region.vertices)
    # swapped: interiors out, neighbourhood in
    expected = (base.envelope - blob_region.vertices) | blob_region.neighborhood
    assert res.envelope == expected
    # boundary preserved through the swap
    assert res.boundary_witness == base.boundary_witness
    # the blob reappears as a complement component with matching neighbourhood
    comp = next(c for c in res.adhesion_witness
                if c.vertices == blob_region.vertices)
    assert comp.neighborhood == blob_region.neighborhood


def test_avoidance_empty_and_untouched_lists(blob):
    fam, t = blob
    end = fam.oracle.ends(16)[0]
    base = envelope(t, VertexEndSet.of((), {end}))
    assert envelope_avoiding(t, VertexEndSet.of((), {end}), []).envelope == base.envelope
    far = region_of(t, {(4, 8), (4, 9)})
    res = envelope_avoiding(t, VertexEndSet.of((), {end}), [far])
    assert res.envelope == base.envelope


def test_avoidance_precondition_audits(blob):
    fam, t = blob
    end = fam.oracle.ends(16)[0]
    blob_region = region_of(t, {("b", 1), ("b", 2), ("b", 3)})
    touching = region_of(t, {(2, 3), (3, 3)})
    with pytest.raises(AuditError, match="touch"):
        envelope_avoiding(t, VertexEndSet.of((), {end}),
                          [blob_region, touching])
    with pytest.raises(AuditError, match="meets the core"):
        envelope_avoiding(t, VertexEndSet.of({("b", 2)}, {end}), [blob_region])
    # a region whose closure holds the end cannot be avoided
    tail = region_of(t, frozenset(
        v for v in t.vertices if v[0] != "b" and v[1] > 6))
    with pytest.raises(AuditError, match="closure"):
        envelope_avoiding(t, VertexEndSet.of((), {end}), [tail])


def test_moreover_clause_on_clean_regions(blob):
    # regions whose closure avoids the core meet the base envelope finitely:
    # in-window, the blob contributes at most its three vertices
    fam, t = blob
    end = fam.oracle.ends(16)[0]
    base = envelope(t, VertexEndSet.of((), {end}))
    blob_region = region_of(t, {("b", 1), ("b", 2), ("b", 3)})
    inter = base.envelope & blob_region.vertices
    assert len(inter) <= 3
