import pytest

from planecarve.canonical import equivalent
from planecarve.decomposition import carving_width_exact
from planecarve.errors import BadSize, BadWitness, NoOuterFace, TooLarge
from planecarve.gridlib import (
    WallWitness,
    add_sphere_marker,
    find_subdivided_wall,
    grid,
    grid_embed,
    hamiltonian_cycle,
    prepare_hamiltonian,
    unique_embedding_census,
    wall,
    wall_to_grid,
)
from planecarve.ops import replay, subdivide
from planecarve.planegraph import build_graph

from conftest import cycle_graph, figure_g, k4, path_graph, self_loop, triangle


def test_grid_2_is_c4():
    g = grid(2)
    assert equivalent(g.replace(outer=None), cycle_graph(4))


def test_grid_3_counts():
    g = grid(3)
    assert len(g.vertices) == 9
    assert g.num_edges() == 12
    ck = g.root_component()
    assert sorted(len(w) for w in g.component_faces(ck)) == [4, 4, 4, 4, 8]
    # outer face is the high-degree one
    assert g.outer is not None
    assert len(g.component_faces(ck)[g.outer[1]]) == 8


def test_grid_bad_size():
    with pytest.raises(BadSize):
        grid(0)
    with pytest.raises(BadSize):
        wall(3)


def test_wall_three_regular_mostly():
    w = wall(2)
    degs = sorted(w.degree(v) for v in w.vertices)
    assert max(degs) == 3
    assert set(degs) == {2, 3}


def test_census():
    assert unique_embedding_census(1)[0] == 1
    assert unique_embedding_census(2)[0] == 1
    assert unique_embedding_census(3) == (1, 1)


def test_census_cap():
    with pytest.raises(TooLarge):
        unique_embedding_census(5)


def test_find_wall_identity():
    w = wall(2)
    wit = find_subdivided_wall(w, 2)
    assert wit is not None
    assert set(wit.vertex_map) == set(wall(2).vertices)


def test_find_wall_subdivided():
    w = wall(2)
    sub = w
    for e in list(sorted(w.edges))[:4]:
        sub = subdivide(sub, e, f"x{e}")
    wit = find_subdivided_wall(sub, 2)
    assert wit is not None
    assert any(len(p) > 2 for p in wit.paths.values())


def test_find_wall_not_in_c6():
    assert find_subdivided_wall(cycle_graph(6), 2) is None


def test_wall_to_grid_identity():
    w = wall(2)
    wit = find_subdivided_wall(w, 2)
    script = wall_to_grid(w, wit, 1)
    out = replay(w, script)
    assert equivalent(out.replace(outer=None), grid(1).replace(outer=None))


def test_wall_to_grid_subdivided():
    w = wall(2)
    sub = w
    for e in list(sorted(w.edges))[:3]:
        sub = subdivide(sub, e, f"x{e}")
    wit = find_subdivided_wall(sub, 2)
    script = wall_to_grid(sub, wit, 1)
    out = replay(sub, script)
    assert equivalent(out.replace(outer=None), grid(1).replace(outer=None))


def test_wall_to_grid_bad_witness():
    w = wall(2)
    wit = find_subdivided_wall(w, 2)
    bad = WallWitness(4, wit.vertex_map, wit.paths)
    with pytest.raises(BadWitness):
        wall_to_grid(w, bad, 2)


def test_hamiltonian_cycle_c4():
    cyc = hamiltonian_cycle(cycle_graph(4))
    assert cyc is not None and len(cyc) == 4


def test_prepare_hamiltonian_c4():
    hp, cyc, back = prepare_hamiltonian(cycle_graph(4))
    assert len(cyc) == len(hp.vertices)
    # triangulated: all faces have degree 3
    ck = hp.root_component()
    assert all(len(w) == 3 for w in hp.component_faces(ck))
    out = replay(hp, back)
    assert equivalent(out, cycle_graph(4))


def test_prepare_hamiltonian_separating_triangle():
    # K4 plus a vertex inside one triangular face joined to its 3 corners:
    # the face triangle stays, but the K4 face containing it is separating
    g = k4()
    rotation = dict(g.rotation)
    edges = dict(g.edges)
    rotation["z"] = ("za.a", "zb.a", "zd.a")
    rotation["a"] = ("ab.a", "za.b", "ad.a", "ac.a")
    rotation["b"] = ("bc.a", "bd.a", "zb.b", "ab.b")
    rotation["d"] = ("ad.b", "zd.b", "bd.b", "cd.b")
    edges["za"] = ("za.a", "za.b")
    edges["zb"] = ("zb.a", "zb.b")
    edges["zd"] = ("zd.a", "zd.b")
    g2 = build_graph(rotation, edges)
    hp, cyc, back = prepare_hamiltonian(g2)
    out = replay(hp, back)
    assert equivalent(out, g2)
    assert len(hp.vertices) > len(g2.vertices)  # at least one insertion


def test_grid_embed_small_cases():
    for hg in (path_graph(2), triangle("t"), cycle_graph(4), self_loop()):
        n, script = grid_embed(hg)
        out = replay(grid(n), script)
        assert equivalent(out.replace(outer=None), hg.replace(outer=None))


def test_grid_embed_figure_g_preserves_embedding():
    from conftest import figure_g_prime

    g, gp = figure_g(), figure_g_prime()
    n, script = grid_embed(g)
    out = replay(grid(n), script)
    assert equivalent(out.replace(outer=None), g)
    assert not equivalent(out.replace(outer=None), gp)


def test_add_sphere_marker(tetra):
    marked = tetra.replace(outer=("a", 0))
    out = add_sphere_marker(marked)
    assert len(out.components()) == 2
    assert out.outer is None
    k, _ = carving_width_exact(grid(2).replace(outer=None))
    mk = out.induced({"mk_a", "mk_b", "mk_c", "mk_d"})
    kk, _ = carving_width_exact(mk)
    assert kk >= 2


def test_add_sphere_marker_requires_outer(tetra):
    with pytest.raises(NoOuterFace):
        add_sphere_marker(tetra)
