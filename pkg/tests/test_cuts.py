import random

import pytest

from planecarve.cuts import (
    blocks,
    connectivity_profile,
    cut,
    m_cut,
    m_cut_brute,
)
from planecarve.errors import Overlap, UnknownVertex
from planecarve.planegraph import build_graph

from conftest import bowtie, cycle_graph, k4, path_graph, self_loop, triangle


def test_cut_k4_single_vertex(tetra):
    assert len(cut(tetra, {"a"})) == 3


def test_cut_c4_antipodal(c4):
    assert len(cut(c4, {"v0", "v2"})) == 4


def test_cut_all_vertices_empty(tetra):
    assert cut(tetra, set(tetra.vertices)) == set()


def test_cut_ignores_self_loops():
    g = self_loop()
    assert cut(g, {"v"}) == set()


def test_cut_unknown_vertex(tetra):
    with pytest.raises(UnknownVertex):
        cut(tetra, {"zzz"})


def test_m_cut_bridge():
    g = path_graph(3)
    r = m_cut(g, {"v0"}, {"v2"})
    assert r.size == 1
    assert r.witness == frozenset({"v0"})


def test_m_cut_c4_antipodal(c4):
    r = m_cut(c4, {"v0"}, {"v2"})
    assert r.size == 2
    assert r.size == m_cut_brute(c4, {"v0"}, {"v2"})


def test_m_cut_parallel_edges():
    rotation = {"u": ("a1", "b1", "c1"), "v": ("c2", "b2", "a2")}
    edges = {"ea": ("a1", "a2"), "eb": ("b1", "b2"), "ec": ("c1", "c2")}
    g = build_graph(rotation, edges)
    assert m_cut(g, {"u"}, {"v"}).size == 3


def test_m_cut_overlap_rejected(c4):
    with pytest.raises(Overlap):
        m_cut(c4, {"v0"}, {"v0", "v2"})


def test_m_cut_oracle_random():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(3, 7)
        g = _random_connected(rng, n)
        vs = g.vertices
        a = {rng.choice(vs)}
        b_choices = [v for v in vs if v not in a]
        b = {rng.choice(b_choices)}
        assert m_cut(g, a, b, witness=False).size == m_cut_brute(g, a, b)


def _random_connected(rng, n):
    # random tree plus a few extra parallel-free edges, planar by construction
    # (built as an outerplanar-ish embedding: all vertices on one path)
    g = path_graph(n)
    rotation = {v: list(ds) for v, ds in g.rotation.items()}
    edges = dict(g.edges)
    for k in range(rng.randint(0, n - 2)):
        i = rng.randrange(0, n - 2)
        j = i + 2
        name = f"x{k}"
        # chord above the path: insert after the forward dart at i, before the
        # backward dart at j
        rotation[f"v{i}"].insert(0, f"{name}.a")
        rotation[f"v{j}"].append(f"{name}.b")
        edges[name] = (f"{name}.a", f"{name}.b")
    try:
        return build_graph(rotation, edges)
    except Exception:
        return g


def test_connectivity_profile_bowtie():
    p = connectivity_profile(bowtie())
    assert len(p.components) == 1
    assert p.cut_vertices == ["m"]
    assert not p.is_2vc


def test_connectivity_profile_c5(c5):
    p = connectivity_profile(c5)
    assert p.is_2vc


def test_connectivity_two_triangles():
    t1, t2 = triangle("a"), triangle("b")
    g = build_graph(
        dict(t1.rotation) | dict(t2.rotation),
        dict(t1.edges) | dict(t2.edges),
        nesting={"b0": ("a0", 0, 0)},
    )
    p = connectivity_profile(g)
    assert len(p.components) == 2
    assert p.cut_vertices == []


def test_blocks_bowtie():
    bs = blocks(bowtie())
    assert sorted(sorted(b) for b in bs) == [
        ["e1", "e2", "e3"],
        ["e4", "e5", "e6"],
    ]


def test_blocks_path_bridges():
    bs = blocks(path_graph(4))
    assert sorted(sorted(b) for b in bs) == [["p0"], ["p1"], ["p2"]]


def test_blocks_k4(tetra):
    bs = blocks(tetra)
    assert len(bs) == 1 and len(bs[0]) == 6


def test_blocks_loop_and_bridge():
    rotation = {"u": ("l.a", "l.b", "e.a"), "v": ("e.b",)}
    edges = {"l": ("l.a", "l.b"), "e": ("e.a", "e.b")}
    g = build_graph(rotation, edges)
    bs = blocks(g)
    assert sorted(sorted(b) for b in bs) == [["e"], ["l"]]
