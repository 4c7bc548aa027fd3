import random

from planecarve.canonical import canonical_form, equivalent, reflect
from planecarve.planegraph import build_graph

from conftest import cycle_graph, figure_g, figure_g_prime, figure_h, k4, triangle


def relabel_darts(g, suffix="_r"):
    m = {d: f"{d}{suffix}" for d in g.darts()}
    rotation = {v: tuple(m[d] for d in ds) for v, ds in g.rotation.items()}
    edges = {e: (m[a], m[b]) for e, (a, b) in g.edges.items()}
    nesting = g.nesting
    return build_graph(rotation, edges, directed=g.directed, nesting=nesting, outer=g.outer)


def test_relabel_invariance(tetra):
    assert canonical_form(tetra) == canonical_form(relabel_darts(tetra))


def test_rotation_cycle_point_invariance(tri):
    rot = {v: ds[1:] + ds[:1] for v, ds in tri.rotation.items()}
    g2 = build_graph(rot, tri.edges)
    assert canonical_form(tri) == canonical_form(g2)


def test_figure_one_not_equivalent():
    g, gp = figure_g(), figure_g_prime()
    assert not equivalent(g, gp)


def test_reflexive(tetra):
    assert equivalent(tetra, tetra)


def test_mirror_distinguished():
    # degree-3 vertex with three distinguishable neighbors: a path of pendants
    rotation = {
        "v": ("e1.a", "e2.a", "e3.a"),
        "a": ("e1.b",),
        "b": ("e2.b", "f.a"),
        "c": ("e3.b", "g.a", "g2.a"),
        "b2": ("f.b",),
        "c2": ("g.b",),
        "c3": ("g2.b",),
    }
    edges = {
        "e1": ("e1.a", "e1.b"),
        "e2": ("e2.a", "e2.b"),
        "e3": ("e3.a", "e3.b"),
        "f": ("f.a", "f.b"),
        "g": ("g.a", "g.b"),
        "g2": ("g2.a", "g2.b"),
    }
    g = build_graph(rotation, edges)
    m = reflect(g)
    assert not equivalent(g, m)
    assert canonical_form(g, allow_reflection=True) == canonical_form(
        m, allow_reflection=True
    )


def test_bare_triangle_mirror_equivalent(tri):
    assert equivalent(tri, reflect(tri))


def test_equivalence_is_equivalence_relation():
    rng = random.Random(7)
    graphs = [triangle("t"), k4(), cycle_graph(4), figure_g(), figure_h()]
    for g in graphs:
        assert equivalent(g, g)
    for g in graphs:
        for h in graphs:
            assert equivalent(g, h) == equivalent(h, g)


def test_nested_vs_sidebyside_triangles():
    t1, t2 = triangle("a"), triangle("b")
    rotation = dict(t1.rotation) | dict(t2.rotation)
    edges = dict(t1.edges) | dict(t2.edges)
    nested = build_graph(rotation, edges, nesting={"b0": ("a0", 0, 0)})
    # on the sphere, "side by side" is the same thing as nested: the second
    # triangle always sits inside one of the first one's two faces
    other_face = build_graph(rotation, edges, nesting={"b0": ("a0", 1, 0)})
    assert equivalent(nested, other_face)  # triangle faces are swappable


def test_host_reroot_invariance():
    t1, t2 = triangle("a"), triangle("b")
    rotation = dict(t1.rotation) | dict(t2.rotation)
    edges = dict(t1.edges) | dict(t2.edges)
    g1 = build_graph(rotation, edges, nesting={"b0": ("a0", 0, 0)})
    g2 = build_graph(rotation, edges, nesting={"a0": ("b0", 0, 0)})
    assert equivalent(g1, g2)


def test_outer_marker_matters(tetra):
    marked0 = tetra.replace(outer=(tetra.root_component(), 0))
    unmarked = tetra
    assert not equivalent(marked0, unmarked)
    # K4 faces are all alike: different face choices are equivalent
    marked1 = tetra.replace(outer=(tetra.root_component(), 1))
    assert equivalent(marked0, marked1)


def test_pendant_in_versus_out_marked():
    # in figure G the two pendant faces are swappable by a sphere rotation
    g = figure_g()
    fx = g.face_of_dart("ax.b")
    fd = g.face_of_dart("ad.b")
    assert fx != fd
    assert equivalent(g.replace(outer=fx), g.replace(outer=fd))
    # in figure G' both pendants share a face; marking it differs from
    # marking the empty face
    gp = figure_g_prime()
    crowded = gp.face_of_dart("ax.b")
    assert crowded == gp.face_of_dart("ad.b")
    empty = next(
        (gp.root_component(), i)
        for i in range(2)
        if (gp.root_component(), i) != crowded
    )
    assert not equivalent(gp.replace(outer=crowded), gp.replace(outer=empty))
