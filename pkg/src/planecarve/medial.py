"""Medial graphs and digraphs, bilifts, and the minor-immersion bridge.

The medial has one vertex per source edge and one edge per face corner: along
each face walk, consecutive edge occurrences are joined.  Directing every such
edge from its 'a' end (face-walk successor side) makes faces that contain a
source vertex clockwise and the others counterclockwise, which is the
checkerboard orientation; a face is vertexful exactly when its boundary walk
consists of head darts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .canonical import equivalent
from .errors import (
    Disconnected,
    Edgeless,
    InternalInvariantError,
    SelfLoopContractImage,
)
from .ops import Op, apply_embedded_op, contract_edge, delete_edge, lift
from .planegraph import PlaneGraph


def _medial_parts(g: PlaneGraph):
    if not g.is_connected() or len(g.components()) != 1:
        raise Disconnected("medial needs a connected graph")
    if not g.edges:
        raise Edgeless("medial needs at least one edge")
    ck = g.root_component()
    phi = {}
    for walk in g.component_faces(ck):
        n = len(walk)
        for i, d in enumerate(walk):
            phi[d] = walk[(i + 1) % n]
    rotation = {}
    edges = {}
    for e in sorted(g.edges):
        d, dbar = g.edges[e]
        rotation[f"m_{e}"] = (
            f"{d}>a",
            f"{d}>b",
            f"{dbar}>a",
            f"{dbar}>b",
        )
    for x in g.darts():
        e = g.dart_edge[x]
        edges[f"me_{x}"] = (f"{x}>a", f"{phi[x]}>b")
    return rotation, edges


def medial(g: PlaneGraph) -> PlaneGraph:
    """Undirected medial graph on vertex set E(G)."""
    rotation, edges = _medial_parts(g)
    return PlaneGraph(rotation, edges, directed=False)


@dataclass
class MedialDigraph:
    graph: PlaneGraph  # directed 4-regular alternating plane digraph
    source_edge_of: dict  # medial vertex -> source edge
    source: Optional[PlaneGraph] = None

    @property
    def shading(self) -> dict:
        """(component, face) -> 'vertexful' | 'empty' checkerboard."""
        return face_shading(self.graph)


def face_shading(m: PlaneGraph) -> dict:
    out = {}
    for c in m.components():
        ck = min(c)
        for fi, walk in enumerate(m.component_faces(ck)):
            kinds = {m.direction_of(d) for d in walk}
            if kinds == {"head"}:
                out[(ck, fi)] = "vertexful"
            elif kinds == {"tail"}:
                out[(ck, fi)] = "empty"
            else:
                raise InternalInvariantError("face with mixed dart directions")
    return out


def medial_digraph(g: PlaneGraph) -> MedialDigraph:
    rotation, edges = _medial_parts(g)
    m = PlaneGraph(rotation, edges, directed=True)
    src = {f"m_{e}": e for e in g.edges}
    md = MedialDigraph(m, src, g)
    _check_medial(m)
    return md


def _check_medial(m: PlaneGraph):
    for v in m.vertices:
        rot = m.rotation[v]
        if len(rot) != 4:
            raise InternalInvariantError(f"medial vertex {v} has degree {len(rot)}")
        kinds = [m.direction_of(d) for d in rot]
        if kinds not in (["tail", "head"] * 2, ["head", "tail"] * 2):
            raise InternalInvariantError(f"in/out darts do not alternate at {v}")
    face_shading(m)  # raises on broken checkerboard


def _corner_face_kind(m: PlaneGraph, d: str) -> str:
    """Shading of the face owning the corner (d, successor(d))."""
    slot = m.face_of_dart(d)
    walk = m.component_faces(slot[0])[slot[1]]
    kinds = {m.direction_of(x) for x in walk}
    if kinds == {"head"}:
        return "vertexful"
    if kinds == {"tail"}:
        return "empty"
    raise InternalInvariantError("mixed face in medial digraph")


def bilift_plain(g: PlaneGraph, v: str, kind: str) -> PlaneGraph:
    """Two directed lifts at a 4-valent alternating vertex.

    kind 'delete' merges the pairs hugging the vertexful corners, 'contract'
    the pairs hugging the empty corners.
    """
    want = "vertexful" if kind in ("delete", "del") else "empty"
    rot = g.rotation[v]
    if len(rot) != 4:
        raise InternalInvariantError(f"bilift needs degree 4 at {v}")
    corner = None
    for i, d in enumerate(rot):
        if _corner_face_kind(g, d) == want:
            corner = (d, rot[(i + 1) % 4])
            break
    if corner is None:
        raise InternalInvariantError("no corner of the requested kind")
    x, y = corner
    if g.direction_of(x) == "head":
        cur = lift(g, v, g.dart_edge[x], g.dart_edge[y], "ccw")
    else:
        cur = lift(g, v, g.dart_edge[y], g.dart_edge[x], "cw")
    # second pair: the two remaining darts at v
    rot2 = cur.rotation.get(v, ())
    if len(rot2) != 2:
        raise InternalInvariantError("first bilift step left wrong degree")
    a, b = rot2
    if cur.direction_of(a) == "head":
        cur = lift(cur, v, cur.dart_edge[a], cur.dart_edge[b], "ccw")
    else:
        cur = lift(cur, v, cur.dart_edge[b], cur.dart_edge[a], "ccw")
    return cur


def bilift(md: MedialDigraph, v: str, kind: str) -> MedialDigraph:
    """Bilift mirroring a source deletion or contraction."""
    e = md.source_edge_of.get(v)
    if e is None:
        raise InternalInvariantError(f"{v} is not a tracked medial vertex")
    if kind == "contract" and md.source is not None and md.source.is_self_loop(e):
        raise SelfLoopContractImage(f"source edge {e} is a self-loop")
    out = bilift_plain(md.graph, v, kind)
    src = None
    if md.source is not None:
        src = (
            delete_edge(md.source, e) if kind in ("delete", "del") else contract_edge(md.source, e)
        )
    source_map = {k: x for k, x in md.source_edge_of.items() if k != v}
    return MedialDigraph(out, source_map, src)


def minor_via_medial(
    h: PlaneGraph, g: PlaneGraph, max_darts: int = 64, engine: str = "a"
) -> bool:
    """Embedded-minor test through directed immersion of the medials."""
    from .relations import embedded_immersion

    mh = medial_digraph(h).graph
    mg = medial_digraph(g).graph
    script = embedded_immersion(mh, mg, directed=True, engine=engine, max_darts=max_darts)
    return script is not None


def eulerian_unused_ok(m: PlaneGraph, witness) -> bool:
    """Unused medial edges must balance in/out at every vertex."""
    used = {m.dart_edge[d] for w in witness.walks.values() for d in w}
    unused = set(m.edges) - used
    bal: dict[str, int] = {}
    for e in unused:
        a, b = m.edges[e]
        bal[m.dart_vertex[a]] = bal.get(m.dart_vertex[a], 0) + 1
        bal[m.dart_vertex[b]] = bal.get(m.dart_vertex[b], 0) - 1
    return all(x == 0 for x in bal.values())
