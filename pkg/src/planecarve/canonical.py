"""Canonical forms and equivalence of sphere embeddings.

A connected map is canonized by breadth-first relabeling of its darts from
every possible starting dart, keeping the lexicographically minimal encoding.
Two encodings agree exactly when an orientation-preserving homeomorphism of
the sphere takes one embedding to the other.

Disconnected embeddings are canonized through their component-region tree:
regions (merged faces) and components alternate in a bipartite tree, which is
encoded bottom-up from every possible root region, again keeping the minimum.
Canonical face labels inside each component come from the same dart
relabeling, so nesting data participates in the minimization.
"""

from __future__ import annotations

from collections import deque

from .errors import InternalInvariantError
from .planegraph import PlaneGraph


def _encode_component(g: PlaneGraph, comp_darts: list[str], start: str):
    """Label darts BFS-first from ``start``; return (encoding, labeling)."""
    new_id: dict[str, int] = {}
    processed: set[str] = set()
    queue = deque([start])
    while queue:
        d = queue.popleft()
        v = g.dart_vertex[d]
        if v in processed:
            continue
        processed.add(v)
        ds = g.rotation[v]
        i = ds.index(d)
        ordered = ds[i:] + ds[:i]
        for w in ordered:
            new_id[w] = len(new_id)
        for w in ordered:
            queue.append(g.twin[w])
    if len(new_id) != len(comp_darts):
        raise InternalInvariantError("BFS did not reach all darts of the component")
    by_id = sorted(new_id, key=new_id.get)
    enc: list[int] = []
    for d in by_id:
        enc.append(new_id[g.twin[d]])
        enc.append(new_id[g.rotation_successor(d)])
        if g.directed:
            enc.append(0 if g.direction_of(d) == "tail" else 1)
    return tuple(enc), new_id


def _face_relabel(g: PlaneGraph, comp_key: str, new_id: dict[str, int]) -> dict[int, int]:
    """Original face index -> canonical face index under a dart labeling."""
    faces = g.component_faces(comp_key)
    if faces == [()]:
        return {0: 0}
    keyed = sorted(range(len(faces)), key=lambda i: min(new_id[d] for d in faces[i]))
    return {orig: rank for rank, orig in enumerate(keyed)}


class _Canonizer:
    def __init__(self, g: PlaneGraph):
        self.g = g
        self.regions = g.regions()
        self._region_cache: dict = {}

    def component_encodings(self, comp_key: str):
        """All (encoding, face_relabel) candidates for one component."""
        g = self.g
        comp = next(c for c in g.components() if min(c) == comp_key)
        comp_darts = sorted(d for d in g.dart_vertex if g.dart_vertex[d] in comp)
        if not comp_darts:
            yield ((len(comp),), {0: 0})
            return
        for start in comp_darts:
            enc, new_id = _encode_component(g, comp_darts, start)
            yield enc, _face_relabel(g, comp_key, new_id)

    def encode_region(self, anchor, parent_comp):
        key = (anchor, parent_comp)
        if key in self._region_cache:
            return self._region_cache[key]
        parts = []
        for ck, fi in self.regions[anchor]:
            if ck == parent_comp:
                continue
            parts.append(self.encode_comp_subtree(ck, fi))
        result = tuple(sorted(parts))
        self._region_cache[key] = result
        return result

    def encode_comp_subtree(self, comp_key: str, entry_face: int):
        g = self.g
        best = None
        nfaces = len(g.component_faces(comp_key))
        children = {}
        for fi in range(nfaces):
            if fi == entry_face:
                continue
            anchor = g.region_of(comp_key, fi)
            sub = self.encode_region(anchor, comp_key)
            if sub:
                children[fi] = sub
        for enc, relabel in self.component_encodings(comp_key):
            child_list = tuple(sorted((relabel[fi], sub) for fi, sub in children.items()))
            cand = (enc, relabel[entry_face], child_list)
            if best is None or cand < best:
                best = cand
        return best


def canonical_form(g: PlaneGraph, allow_reflection: bool = False) -> bytes:
    """Deterministic byte string; equal iff the embeddings are equivalent.

    Equivalence is orientation-preserving; ``allow_reflection`` also
    quotients by mirror images.
    """
    variants = [g]
    if allow_reflection:
        variants.append(reflect(g))
    return min(_canonical_one(v) for v in variants)


def _canonical_one(g: PlaneGraph) -> bytes:
    comps = [min(c) for c in g.components()]
    marked = g.outer is not None
    if len(comps) == 1 and not marked:
        if not comps:
            payload = ("E", g.directed)
        else:
            best = min(enc for enc, _ in _Canonizer(g).component_encodings(comps[0]))
            payload = ("C", g.directed, best)
        return repr(payload).encode()
    if not comps:
        return repr(("E", g.directed)).encode()
    canon = _Canonizer(g)
    if marked:
        candidates = [g.outer_region()]
    else:
        candidates = sorted(canon.regions)
    best = None
    for root in candidates:
        enc = canon.encode_region(root, None)
        if best is None or enc < best:
            best = enc
    return repr(("R", g.directed, marked, best)).encode()


def cached_canonical_form(g: PlaneGraph) -> bytes:
    if "canon" not in g._cache:
        g._cache["canon"] = canonical_form(g)
    return g._cache["canon"]


def equivalent(g1: PlaneGraph, g2: PlaneGraph, allow_reflection: bool = False) -> bool:
    """True iff an ambient isotopy of the sphere takes g1 to g2."""
    if g1.directed != g2.directed:
        return False
    if allow_reflection:
        return canonical_form(g1, True) == canonical_form(g2, True)
    return cached_canonical_form(g1) == cached_canonical_form(g2)


def reflect(g: PlaneGraph) -> PlaneGraph:
    """Mirror image: rotations reversed, nesting faces remapped."""
    rot = {v: tuple(reversed(ds)) for v, ds in g.rotation.items()}
    mirror = PlaneGraph(rot, g.edges, directed=g.directed, validate=False)

    def mirror_face(ck: str, fi: int) -> int:
        walk = g.component_faces(ck)[fi]
        if not walk:
            return 0
        target = g.twin[walk[0]]
        for i, w in enumerate(mirror.component_faces(ck)):
            if target in w:
                return i
        raise InternalInvariantError("mirror face not found")

    nesting = {
        child: (host, mirror_face(host, hf), mirror_face(child, cf))
        for child, (host, hf, cf) in g.nesting.items()
    }
    outer = None
    if g.outer is not None:
        outer = (g.outer[0], mirror_face(*g.outer))
    return PlaneGraph(rot, g.edges, directed=g.directed, nesting=nesting, outer=outer)
