import pytest

from planecarve.canonical import equivalent
from planecarve.decomposition import branch_width_exact, carving_width_exact
from planecarve.errors import Disconnected, Edgeless, SelfLoopContractImage
from planecarve.medial import (
    MedialDigraph,
    bilift,
    face_shading,
    medial,
    medial_digraph,
    minor_via_medial,
)
from planecarve.ops import contract_edge, delete_edge
from planecarve.planegraph import build_graph

from conftest import cycle_graph, figure_g, figure_g_prime, figure_h, k4, path_graph, self_loop, triangle


def test_medial_triangle(tri):
    m = medial(tri)
    assert len(m.vertices) == 3
    assert m.num_edges() == 6
    assert all(m.degree(v) == 4 for v in m.vertices)


def test_medial_self_loop():
    g = self_loop()
    m = medial(g)
    assert len(m.vertices) == 1
    assert m.num_edges() == 2
    assert all(m.is_self_loop(e) for e in m.edges)


def test_medial_euler(tetra):
    m = medial(tetra)
    ck = m.root_component()
    # faces of the medial = V(G) + F(G)
    assert len(m.component_faces(ck)) == 4 + 4


def test_medial_requires_connected():
    t1, t2 = triangle("a"), triangle("b")
    g = build_graph(
        dict(t1.rotation) | dict(t2.rotation),
        dict(t1.edges) | dict(t2.edges),
        nesting={"b0": ("a0", 0, 0)},
    )
    with pytest.raises(Disconnected):
        medial(g)
    with pytest.raises(Edgeless):
        medial(build_graph({"v": ()}, {}))


def test_medial_digraph_invariants(tri):
    md = medial_digraph(tri)
    m = md.graph
    for v in m.vertices:
        kinds = [m.direction_of(d) for d in m.rotation[v]]
        assert kinds in (["tail", "head"] * 2, ["head", "tail"] * 2)
    shades = md.shading
    # proper checkerboard: every face classified
    ck = m.root_component()
    assert len(shades) == len(m.component_faces(ck))
    # triangle: two vertexful triangles... 3 vertex faces and 2 face faces
    assert sorted(shades.values()).count("vertexful") == 3


def test_bilift_delete_matches_source(tri):
    md = medial_digraph(tri)
    for e in tri.edges:
        out = bilift(md, f"m_{e}", "delete")
        expect = medial_digraph(delete_edge(tri, e))
        assert equivalent(out.graph, expect.graph)


def test_bilift_contract_matches_source(tetra):
    md = medial_digraph(tetra)
    for e in list(tetra.edges)[:3]:
        out = bilift(md, f"m_{e}", "contract")
        expect = medial_digraph(contract_edge(tetra, e))
        assert equivalent(out.graph, expect.graph)


def test_bilift_contract_self_loop_rejected():
    g = self_loop()
    # attach a second edge so the medial is meaningful after ops
    rotation = {"v": ("l.a", "l.b", "e.a"), "w": ("e.b",)}
    edges = {"l": ("l.a", "l.b"), "e": ("e.a", "e.b")}
    g2 = build_graph(rotation, edges)
    md = medial_digraph(g2)
    with pytest.raises(SelfLoopContractImage):
        bilift(md, "m_l", "contract")


def test_bilift_commute_nonadjacent():
    c5 = cycle_graph(5)
    md = medial_digraph(c5)
    # vc0 and vc2 are non-adjacent edges of the cycle
    a = bilift(bilift(md, "m_vc0", "delete"), "m_vc2", "delete")
    b = bilift(bilift(md, "m_vc2", "delete"), "m_vc0", "delete")
    assert equivalent(a.graph, b.graph)


def test_medial_width_identity_small():
    for g in (triangle("t"), cycle_graph(4), path_graph(3)):
        bw = branch_width_exact(g)
        cw_m, _ = carving_width_exact(medial(g))
        assert 2 * bw == cw_m


def test_minor_via_medial_figure_one():
    g, h, gp = figure_g(), figure_h(), figure_g_prime()
    assert minor_via_medial(h, g)
    assert not minor_via_medial(h, gp)
    assert minor_via_medial(g, g)
