import pytest

from planecarve.canonical import equivalent
from planecarve.errors import (
    BadAddress,
    CrossingArc,
    DirectedMismatch,
    NotIncident,
    SelfLoopContract,
)
from planecarve.ops import (
    Op,
    contract_edge,
    delete_edge,
    delete_vertex,
    lift,
    parse_script,
    replay,
    serialize_script,
    subdivide,
)
from planecarve.planegraph import build_graph

from conftest import cycle_graph, figure_g, figure_h, k4, path_graph, self_loop, triangle


def test_figure_one_contraction():
    g = figure_g()
    h = contract_edge(g, "ac")
    assert equivalent(h, figure_h())


def test_contract_self_loop_rejected():
    with pytest.raises(SelfLoopContract):
        contract_edge(self_loop(), "l")


def test_contract_preserves_validity(tetra):
    g = contract_edge(tetra, "ab")
    assert len(g.vertices) == 3
    assert g.num_edges() == 5


def test_delete_edge_merges_faces(tetra):
    g = delete_edge(tetra, "ab")
    ck = g.root_component()
    assert len(g.component_faces(ck)) == 3


def test_delete_bridge_creates_nesting():
    # two triangles joined by a bridge: deleting the bridge nests one in the
    # face that held it
    t1, t2 = triangle("a"), triangle("b")
    rotation = dict(t1.rotation) | dict(t2.rotation)
    rotation["a0"] = rotation["a0"] + ("br.a",)
    rotation["b0"] = rotation["b0"] + ("br.b",)
    edges = dict(t1.edges) | dict(t2.edges) | {"br": ("br.a", "br.b")}
    g = build_graph(rotation, edges)
    g2 = delete_edge(g, "br")
    assert len(g2.components()) == 2
    assert len(g2.nesting) == 1
    assert len(g2.regions()) == 3


def test_delete_vertex_removes_star(tetra):
    g = delete_vertex(tetra, "d")
    assert sorted(g.vertices) == ["a", "b", "c"]
    assert g.num_edges() == 3
    assert equivalent(g, triangle())


def test_delete_vertex_isolates_neighbor():
    g = path_graph(2)
    g2 = delete_vertex(g, "v0")
    assert g2.vertices == ["v1"]
    assert g2.num_edges() == 0


def test_deletion_inside_loop_keeps_nesting():
    # triangle nested inside a self-loop; deleting the loop keeps the
    # triangle and the lone vertex in one region
    loop = self_loop()
    t = triangle("t")
    g = build_graph(
        dict(loop.rotation) | dict(t.rotation),
        dict(loop.edges) | dict(t.edges),
        nesting={"t0": ("v", 0, 0)},
    )
    g2 = delete_edge(g, "l")
    assert len(g2.components()) == 2
    assert len(g2.regions()) == 2


def test_subdivide_path():
    g = path_graph(2)
    g2 = subdivide(g, "p0", "w")
    assert sorted(g2.vertices) == ["v0", "v1", "w"]
    assert g2.num_edges() == 2
    assert equivalent(g2, path_graph(3))


def test_lift_degree_two_smooths():
    g = path_graph(3)
    g2 = lift(g, "v1", "p0", "p1", "ccw")
    assert "v1" not in g2.rotation
    assert equivalent(g2, path_graph(2))


def test_lift_at_k4_vertex(tetra):
    g = lift(tetra, "a", "ab", "ad", "ccw")
    assert g.degree("a") == 1
    assert g.num_edges() == 5
    ck = g.root_component()
    assert len(g.component_faces(ck)) == 3  # 4-5+3 = 2


def test_lift_crossing_arc_rejected(tetra):
    # at a, rotation is (ab, ad, ac): ab and ac are not ccw-adjacent
    with pytest.raises(CrossingArc):
        lift(tetra, "a", "ab", "ca", "ccw")


def test_lift_detaches_component():
    # star K_{1,3}: lifting two edges detaches a path from the center
    rotation = {
        "v": ("e1.a", "e2.a", "e3.a"),
        "u1": ("e1.b",),
        "u2": ("e2.b",),
        "u3": ("e3.b",),
    }
    edges = {f"e{i}": (f"e{i}.a", f"e{i}.b") for i in (1, 2, 3)}
    g = build_graph(rotation, edges)
    g2 = lift(g, "v", "e1", "e2", "ccw")
    assert len(g2.components()) == 2
    assert len(g2.regions()) == 1


def test_directed_lift_checks_orientation():
    text = (
        "directed\n"
        "vertex u : a\n"
        "vertex v : b c\n"
        "vertex w : d\n"
        "edge e1 : a b\n"
        "edge e2 : c d\n"
    )
    from planecarve.plg import parse_plg

    g = parse_plg(text)
    g2 = lift(g, "v", "e1", "e2", "ccw")
    assert g2.num_edges() == 1
    (e,) = g2.edges
    assert g2.direction_of(g2.edges[e][0]) == "tail"
    assert g2.dart_vertex[g2.edges[e][0]] == "u"
    with pytest.raises(DirectedMismatch):
        lift(g, "v", "e2", "e1", "ccw")


def test_script_roundtrip():
    script = parse_script("del-edge ab\ncontract bc\nlift v e1 e2 ccw\n")
    assert serialize_script(script) == "del-edge ab\ncontract bc\nlift v e1 e2 ccw\n"


def test_replay_bad_address(tetra):
    with pytest.raises(BadAddress):
        replay(tetra, parse_script("del-edge nope\n"))


def test_replay_figure_one():
    g = figure_g()
    out = replay(g, parse_script("contract ac\n"))
    assert equivalent(out, figure_h())


def test_outer_tracking_through_deletion(tetra):
    marked = tetra.replace(outer=("a", 0))
    g2 = delete_edge(marked, "ab")
    assert g2.outer is not None


def test_ops_keep_euler(tetra):
    g = tetra
    for op in [
        Op("del-edge", ("ab",)),
        Op("contract", ("cd",)),
        Op("del-vertex", ("d",)) if False else Op("del-edge", ("bc",)),
    ]:
        from planecarve.ops import apply_embedded_op

        g = apply_embedded_op(g, op)
        g.validate()


def test_lift_parallel_edges_keeps_island_inside():
    # parallel edges u=v with a triangle nested in the bigon; lifting at v
    # turns the bigon into a self-loop at u with the triangle still inside
    t = triangle("t")
    rotation = {
        "u": ("e1.b", "e2.b"),
        "v": ("e1.a", "e2.a"),
    } | dict(t.rotation)
    edges = {"e1": ("e1.a", "e1.b"), "e2": ("e2.a", "e2.b")} | dict(t.edges)
    g = build_graph(rotation, edges, nesting={"t0": ("u", 0, 0)})
    # find a bigon face between the two edges and nest the triangle there
    ck = "u"
    inner = None
    for i, w in enumerate(g.component_faces(ck)):
        if len(w) == 2 and len({g.dart_edge[d] for d in w}) == 2:
            inner = i
            break
    assert inner is not None
    g = build_graph(rotation, edges, nesting={"t0": (ck, inner, 0)})
    g2 = lift(g, "v", "e1", "e2", "ccw")
    assert "v" not in g2.rotation
    assert g2.num_edges() == 1 + 3
    loop_edge = next(e for e in g2.edges if g2.is_self_loop(e))
    # triangle must be nested in a face bounded by the loop, on the side that
    # was the old bigon interior
    assert len(g2.components()) == 2
    assert len(g2.nesting) == 1
    g2.validate()


def test_lift_empty_loop_with_edge():
    # self-loop at v plus pendant edge: directed lift merging loop into edge
    rotation = {"v": ("l.a", "l.b", "e.a"), "w": ("e.b",)}
    edges = {"l": ("l.a", "l.b"), "e": ("e.a", "e.b")}
    g = build_graph(rotation, edges)
    g2 = lift(g, "v", "l", "e", "ccw")
    g2.validate()
    assert g2.num_edges() == 1
    assert sorted(g2.vertices) == ["v", "w"]
