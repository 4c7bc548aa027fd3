import pytest

from planecarve.errors import BadTwin, NotPlanar, ParseError
from planecarve.planegraph import build_graph
from planecarve.plg import parse_plg, serialize_plg

from conftest import cycle_graph, figure_g, self_loop, triangle


def test_triangle_two_faces(tri):
    ck = tri.root_component()
    assert len(tri.component_faces(ck)) == 2


def test_self_loop_two_faces():
    g = self_loop()
    assert len(g.component_faces("v")) == 2


def test_twin_fixed_point_rejected():
    with pytest.raises(BadTwin):
        build_graph({"v": ("d", "d")}, {"e": ("d", "d")})


def test_dart_in_two_rotations_rejected():
    with pytest.raises(BadTwin):
        build_graph({"u": ("d1",), "v": ("d1", "d2")}, {"e": ("d1", "d2")})


def test_euler_violation_rejected():
    # one vertex with two interleaved loops is the torus map, not a sphere map
    rotation = {"v": ("a1", "b1", "a2", "b2")}
    edges = {"ea": ("a1", "a2"), "eb": ("b1", "b2")}
    with pytest.raises(NotPlanar):
        build_graph(rotation, edges)
    # nested loops are fine on the sphere
    build_graph({"v": ("a1", "b1", "b2", "a2")}, edges)


def test_c4_faces_degree_4(c4):
    faces = c4.component_faces(c4.root_component())
    assert sorted(len(w) for w in faces) == [4, 4]


def test_rotation_length_matches_edges(tetra):
    assert sum(len(ds) for ds in tetra.rotation.values()) == 2 * tetra.num_edges()


def test_face_tracing_is_permutation(tetra):
    darts = set(tetra.darts())
    seen = set()
    for w in tetra.component_faces(tetra.root_component()):
        seen.update(w)
    assert seen == darts


def test_nested_triangles_three_regions():
    t1 = triangle("a")
    t2 = triangle("b")
    rotation = dict(t1.rotation) | dict(t2.rotation)
    edges = dict(t1.edges) | dict(t2.edges)
    g = build_graph(rotation, edges, nesting={"b0": ("a0", 0, 0)})
    assert len(g.regions()) == 3


def test_plg_roundtrip(tetra):
    text = serialize_plg(tetra)
    g2 = parse_plg(text)
    assert serialize_plg(g2) == text


def test_plg_parse_errors():
    with pytest.raises(ParseError):
        parse_plg("vertex a\n")
    with pytest.raises(ParseError):
        parse_plg("frobnicate a : b\n")


def test_plg_directed():
    text = "directed\nvertex u : a\nvertex v : b\nedge e : a b\n"
    g = parse_plg(text)
    assert g.directed
    assert g.direction_of("a") == "tail"
    assert g.direction_of("b") == "head"


def test_plg_nest_and_outer_roundtrip():
    t1 = triangle("a")
    t2 = triangle("b")
    g = build_graph(
        dict(t1.rotation) | dict(t2.rotation),
        dict(t1.edges) | dict(t2.edges),
        nesting={"b0": ("a0", 1, 0)},
        outer=("a0", 0),
    )
    text = serialize_plg(g)
    g2 = parse_plg(text)
    assert serialize_plg(g2) == text
    assert g2.outer_region() == g.outer_region()


def test_dual_triangle(tri):
    from planecarve.planegraph import dual

    d = dual(tri)
    assert len(d.vertices) == 2
    assert d.num_edges() == 3


def test_dual_self_loop():
    from planecarve.planegraph import dual
    from conftest import self_loop, path_graph
    from planecarve.canonical import equivalent

    d = dual(self_loop())
    assert equivalent(d, path_graph(2))


def test_dual_dual_equivalent(tetra):
    from planecarve.planegraph import dual
    from planecarve.canonical import equivalent

    assert equivalent(dual(dual(tetra)), tetra)


def test_dual_g33_counts():
    from planecarve.planegraph import dual
    from planecarve.gridlib import grid

    g = grid(3).replace(outer=None)
    d = dual(g)
    assert len(d.vertices) == 5
    assert d.num_edges() == 12


def test_dual_disconnected_rejected():
    from planecarve.planegraph import dual
    from planecarve.errors import Disconnected
    from conftest import triangle
    from planecarve.planegraph import build_graph

    t1, t2 = triangle("a"), triangle("b")
    g = build_graph(
        dict(t1.rotation) | dict(t2.rotation),
        dict(t1.edges) | dict(t2.edges),
        nesting={"b0": ("a0", 0, 0)},
    )
    with pytest.raises(Disconnected):
        dual(g)


def test_trace_faces_nested_triangles():
    from planecarve.planegraph import build_graph, trace_faces
    from conftest import triangle

    t1, t2 = triangle("a"), triangle("b")
    g = build_graph(
        dict(t1.rotation) | dict(t2.rotation),
        dict(t1.edges) | dict(t2.edges),
        nesting={"b0": ("a0", 0, 0)},
    )
    faces = trace_faces(g)
    assert len(faces) == 3
    assert sorted(len(f.walks) for f in faces) == [1, 1, 2]
