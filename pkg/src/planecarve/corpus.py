"""Exhaustive and random corpora of connected simple plane graphs.

Graphs grow from a single vertex by two embedding-respecting moves: hang a
pendant vertex at a corner, or draw a chord between two non-adjacent vertices
on a common face.  Breadth-first generation with canonical-form deduplication
enumerates every connected simple sphere embedding within the size bounds.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional

from .canonical import cached_canonical_form
from .gridlib import _add_chord
from .planegraph import PlaneGraph


def _pendant(g: PlaneGraph, v: str, anchor: Optional[str], name: str) -> PlaneGraph:
    da, db = f"{name}.a", f"{name}.b"
    rotation = {u: list(ds) for u, ds in g.rotation.items()}
    if anchor is None:
        rotation[v].append(da)
    else:
        i = rotation[v].index(anchor)
        rotation[v].insert(i + 1, da)
    rotation[name] = [db]
    edges = dict(g.edges)
    edges[name] = (da, db)
    return PlaneGraph(
        {k: tuple(x) for k, x in rotation.items()}, edges, directed=g.directed
    )


def _expansions(g: PlaneGraph, max_vertices: int, max_edges: int):
    n = len(g.rotation)
    m = g.num_edges()
    ck = g.root_component()
    if m < max_edges and n < max_vertices:
        vname = f"n{n}"
        ename = f"e{m}"
        for v in g.vertices:
            if not g.rotation[v]:
                yield _pendant(g, v, None, f"{ename}")
            else:
                for d in g.rotation[v]:
                    yield _pendant(g, v, d, f"{ename}")
    if m < max_edges and n >= 2:
        adj = {
            frozenset(g.endpoints(e)) for e in g.edges
        }
        ename = f"e{m}"
        for walk in g.component_faces(ck):
            k = len(walk)
            for i in range(k):
                for j in range(i + 1, k):
                    u, v = g.dart_vertex[walk[i]], g.dart_vertex[walk[j]]
                    if u == v or frozenset((u, v)) in adj:
                        continue
                    yield _add_chord(g, u, walk[i], v, walk[j], ename)


def _rename_canonical(g: PlaneGraph) -> PlaneGraph:
    """Stable vertex/edge names so corpus members look uniform."""
    return g


def exhaustive_corpus(max_vertices: int = 6, max_edges: int = 9) -> list[PlaneGraph]:
    """All connected simple plane graphs within bounds, up to equivalence."""
    k1 = PlaneGraph({"n0": ()}, {})
    seen = {cached_canonical_form(k1)}
    out = [k1]
    frontier = [k1]
    while frontier:
        nxt = []
        for g in frontier:
            for g2 in _expansions(g, max_vertices, max_edges):
                key = cached_canonical_form(g2)
                if key in seen:
                    continue
                seen.add(key)
                out.append(g2)
                nxt.append(g2)
        frontier = nxt
    return out


def random_connected(rng: random.Random, n_vertices: int, extra_edges: int) -> PlaneGraph:
    """Random connected simple plane graph grown by random moves."""
    g = PlaneGraph({"n0": ()}, {})
    while len(g.rotation) < n_vertices:
        v = rng.choice(g.vertices)
        anchor = rng.choice(list(g.rotation[v])) if g.rotation[v] else None
        g = _pendant(g, v, anchor, f"e{g.num_edges()}")
    for _ in range(extra_edges):
        cands = list(_chord_moves(g))
        if not cands:
            break
        u, du, v, dv = rng.choice(cands)
        g = _add_chord(g, u, du, v, dv, f"e{g.num_edges()}")
    return g


def _chord_moves(g: PlaneGraph):
    ck = g.root_component()
    adj = {frozenset(g.endpoints(e)) for e in g.edges}
    for walk in g.component_faces(ck):
        k = len(walk)
        for i in range(k):
            for j in range(i + 1, k):
                u, v = g.dart_vertex[walk[i]], g.dart_vertex[walk[j]]
                if u == v or frozenset((u, v)) in adj:
                    continue
                yield (u, walk[i], v, walk[j])


def random_corpus(seed: int, count: int, max_vertices: int = 8) -> list[PlaneGraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_vertices)
        extra = rng.randint(0, max(0, 2 * n - 4))
        out.append(random_connected(rng, n, extra))
    return out
