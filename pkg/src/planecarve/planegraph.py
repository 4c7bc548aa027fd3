"""Sphere-embedded multigraphs as rotation systems over darts.

A graph is stored as a counterclockwise rotation (cyclic dart sequence) per
vertex plus a fixed-point-free dart involution pairing the two halves of each
edge.  Faces are traced with the interior-on-the-left rule: the successor of
dart ``d`` on its face is the rotation predecessor of ``twin(d)``.

Disconnected embeddings carry a nesting forest: every component except one
root is assigned to a face of a host component, together with the face of the
child that looks back at the host.  Merging faces along nesting entries yields
the regions of the full sphere embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    BadTwin,
    Disconnected,
    InternalInvariantError,
    NotPlanar,
    PlaneCarveError,
    UnknownVertex,
)


@dataclass(frozen=True)
class Dart:
    """One half of an edge, attached to a single vertex."""

    id: str
    vertex: str
    twin: str
    direction: Optional[str] = None  # "tail" | "head" for digraphs


@dataclass(frozen=True)
class Face:
    """A region of the sphere minus the graph.

    ``walks`` holds one boundary walk per component touching the region;
    ``boundary`` is their concatenation.  For a connected graph every face has
    a single walk.
    """

    id: int
    walks: tuple[tuple[str, ...], ...]

    @property
    def boundary(self) -> tuple[str, ...]:
        return tuple(d for w in self.walks for d in w)

    @property
    def degree(self) -> int:
        return sum(len(w) for w in self.walks)


class PlaneGraph:
    """Immutable sphere embedding; all operations return fresh graphs."""

    def __init__(
        self,
        rotation: Mapping[str, Sequence[str]],
        edges: Mapping[str, tuple[str, str]],
        directed: bool = False,
        nesting: Optional[Mapping[str, tuple[str, int, int]]] = None,
        outer: Optional[tuple[str, int]] = None,
        validate: bool = True,
    ):
        self.rotation: dict[str, tuple[str, ...]] = {
            v: tuple(ds) for v, ds in rotation.items()
        }
        self.edges: dict[str, tuple[str, str]] = {
            e: (a, b) for e, (a, b) in edges.items()
        }
        self.directed = directed
        self.nesting: dict[str, tuple[str, int, int]] = dict(nesting or {})
        self.outer = outer
        self._build_index()
        if validate:
            self.validate()

    # -- indexing ---------------------------------------------------------

    def _build_index(self):
        self.dart_vertex: dict[str, str] = {}
        for v, ds in self.rotation.items():
            for d in ds:
                if d in self.dart_vertex:
                    raise BadTwin(f"dart {d} appears in two rotation positions")
                self.dart_vertex[d] = v
        self.twin: dict[str, str] = {}
        self.dart_edge: dict[str, str] = {}
        for e, (a, b) in self.edges.items():
            if a == b:
                raise BadTwin(f"edge {e}: twin involution has fixed point {a}")
            for d in (a, b):
                if d in self.twin:
                    raise BadTwin(f"dart {d} used by two edges")
            self.twin[a] = b
            self.twin[b] = a
            self.dart_edge[a] = e
            self.dart_edge[b] = e
        self._cache: dict = {}

    # -- basic views ------------------------------------------------------

    @property
    def vertices(self) -> list[str]:
        return sorted(self.rotation)

    def darts(self) -> list[str]:
        return sorted(self.dart_vertex)

    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def endpoints(self, e: str) -> tuple[str, str]:
        a, b = self.edges[e]
        return self.dart_vertex[a], self.dart_vertex[b]

    def is_self_loop(self, e: str) -> bool:
        u, w = self.endpoints(e)
        return u == w

    def tail_dart(self, e: str) -> str:
        if not self.direction_of(self.edges[e][0]) == "tail":
            raise InternalInvariantError("undirected graph has no tail dart")
        return self.edges[e][0]

    def direction_of(self, d: str) -> Optional[str]:
        if not self.directed:
            return None
        a, b = self.edges[self.dart_edge[d]]
        return "tail" if d == a else "head"

    def dart(self, d: str) -> Dart:
        return Dart(d, self.dart_vertex[d], self.twin[d], self.direction_of(d))

    def rotation_successor(self, d: str) -> str:
        ds = self.rotation[self.dart_vertex[d]]
        return ds[(ds.index(d) + 1) % len(ds)]

    def rotation_predecessor(self, d: str) -> str:
        ds = self.rotation[self.dart_vertex[d]]
        return ds[(ds.index(d) - 1) % len(ds)]

    def face_successor(self, d: str) -> str:
        """Next dart on the face left of ``d``."""
        return self.rotation_predecessor(self.twin[d])

    # -- components -------------------------------------------------------

    def components(self) -> list[frozenset[str]]:
        """Connected components as vertex sets, sorted by their min vertex."""
        if "components" in self._cache:
            return self._cache["components"]
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], {v}
            seen.add(v)
            while stack:
                u = stack.pop()
                for d in self.rotation[u]:
                    w = self.dart_vertex[self.twin[d]]
                    if w not in comp:
                        comp.add(w)
                        seen.add(w)
                        stack.append(w)
            comps.append(frozenset(comp))
        comps.sort(key=lambda c: min(c))
        self._cache["components"] = comps
        return comps

    def component_key(self, v: str) -> str:
        for c in self.components():
            if v in c:
                return min(c)
        raise UnknownVertex(v)

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- face tracing -----------------------------------------------------

    def component_faces(self, comp_key: str) -> list[tuple[str, ...]]:
        """Faces of one component, each a walk starting at its min dart.

        Faces are ordered by their minimal dart; an edgeless component has a
        single empty face.
        """
        key = ("cfaces", comp_key)
        if key in self._cache:
            return self._cache[key]
        comp = next(c for c in self.components() if min(c) == comp_key)
        comp_darts = sorted(d for d in self.dart_vertex if self.dart_vertex[d] in comp)
        if not comp_darts:
            faces = [()]
        else:
            faces = []
            seen: set[str] = set()
            for d0 in comp_darts:
                if d0 in seen:
                    continue
                walk = [d0]
                seen.add(d0)
                d = self.face_successor(d0)
                while d != d0:
                    walk.append(d)
                    seen.add(d)
                    d = self.face_successor(d)
                m = walk.index(min(walk))
                faces.append(tuple(walk[m:] + walk[:m]))
            faces.sort(key=lambda w: w[0])
        self._cache[key] = faces
        return faces

    def component_face_count(self, comp_key: str) -> int:
        return len(self.component_faces(comp_key))

    def face_of_dart(self, d: str) -> tuple[str, int]:
        """(component key, face index) of the face whose walk contains d."""
        ck = self.component_key(self.dart_vertex[d])
        for i, w in enumerate(self.component_faces(ck)):
            if d in w:
                return (ck, i)
        raise InternalInvariantError(f"dart {d} on no face")

    # -- regions (merged faces of the full embedding) ----------------------

    def region_partition(self) -> dict[tuple[str, int], tuple[str, int]]:
        """Union-find map from (component, face) slots to region anchors."""
        if "regions" in self._cache:
            return self._cache["regions"]
        parent: dict[tuple[str, int], tuple[str, int]] = {}
        for c in self.components():
            ck = min(c)
            for i in range(len(self.component_faces(ck))):
                parent[(ck, i)] = (ck, i)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for child, (host, hf, cf) in self.nesting.items():
            a, b = find((host, hf)), find((child, cf))
            if a != b:
                parent[max(a, b)] = min(a, b)
        result = {slot: find(slot) for slot in parent}
        self._cache["regions"] = result
        return result

    def region_of(self, comp_key: str, face_idx: int) -> tuple[str, int]:
        return self.region_partition()[(comp_key, face_idx)]

    def regions(self) -> dict[tuple[str, int], list[tuple[str, int]]]:
        """Region anchor -> list of (component, face) slots it merges."""
        out: dict[tuple[str, int], list[tuple[str, int]]] = {}
        for slot, anchor in sorted(self.region_partition().items()):
            out.setdefault(anchor, []).append(slot)
        return out

    def outer_region(self) -> Optional[tuple[str, int]]:
        if self.outer is None:
            return None
        return self.region_of(*self.outer)

    # -- validation --------------------------------------------------------

    def validate(self):
        for d, t in self.twin.items():
            if d not in self.dart_vertex:
                raise BadTwin(f"edge dart {d} missing from rotations")
        for d in self.dart_vertex:
            if d not in self.twin:
                raise BadTwin(f"rotation dart {d} not paired by any edge")
        for c in self.components():
            ck = min(c)
            ne = sum(1 for e in self.edges if self.dart_vertex[self.edges[e][0]] in c)
            nf = len(self.component_faces(ck))
            if len(c) - ne + nf != 2:
                raise NotPlanar(
                    f"component {ck}: V-E+F = {len(c)}-{ne}+{nf} != 2"
                )
        self._validate_nesting()
        if self.outer is not None:
            ck, fi = self.outer
            if (ck, fi) not in self.region_partition():
                raise PlaneCarveError(f"outer face {self.outer} does not exist")

    def _validate_nesting(self):
        keys = {min(c) for c in self.components()}
        roots = keys - set(self.nesting)
        if len(keys) > 1 or self.nesting:
            if set(self.nesting) - keys:
                raise PlaneCarveError("nesting references unknown component")
            if len(roots) != 1:
                raise PlaneCarveError(
                    f"nesting must leave exactly one root component, got {sorted(roots)}"
                )
            for child, (host, hf, cf) in self.nesting.items():
                if host not in keys:
                    raise PlaneCarveError(f"nesting host {host} unknown")
                if hf >= len(self.component_faces(host)) or cf >= len(
                    self.component_faces(child)
                ):
                    raise PlaneCarveError("nesting references missing face")
            # acyclicity of the component forest
            for child in self.nesting:
                seen = {child}
                cur = child
                while cur in self.nesting:
                    cur = self.nesting[cur][0]
                    if cur in seen:
                        raise PlaneCarveError("nesting forest has a cycle")
                    seen.add(cur)

    def root_component(self) -> str:
        keys = {min(c) for c in self.components()}
        roots = keys - set(self.nesting)
        return min(roots)

    # -- construction helpers ----------------------------------------------

    def replace(self, **kw) -> "PlaneGraph":
        args = dict(
            rotation=self.rotation,
            edges=self.edges,
            directed=self.directed,
            nesting=self.nesting,
            outer=self.outer,
        )
        args.update(kw)
        return PlaneGraph(**args)

    def induced(self, vertices: Iterable[str]) -> "PlaneGraph":
        """Induced subgraph with inherited rotations; nesting dropped."""
        vs = set(vertices)
        keep_edges = {
            e: ab
            for e, ab in self.edges.items()
            if self.dart_vertex[ab[0]] in vs and self.dart_vertex[ab[1]] in vs
        }
        keep_darts = {d for ab in keep_edges.values() for d in ab}
        rot = {
            v: tuple(d for d in self.rotation[v] if d in keep_darts)
            for v in self.vertices
            if v in vs
        }
        return PlaneGraph(rot, keep_edges, directed=self.directed, validate=False)

    def __repr__(self):
        return (
            f"PlaneGraph(|V|={len(self.rotation)}, |E|={len(self.edges)},"
            f" directed={self.directed})"
        )


def build_graph(
    rotation: Mapping[str, Sequence[str]],
    edges: Mapping[str, tuple[str, str]],
    directed: bool = False,
    nesting: Optional[Mapping[str, tuple[str, int, int]]] = None,
    outer: Optional[tuple[str, int]] = None,
) -> PlaneGraph:
    """Validated constructor used by parsers and generators."""
    return PlaneGraph(rotation, edges, directed=directed, nesting=nesting, outer=outer)


def trace_faces(g: PlaneGraph) -> list[Face]:
    """Regions of the full embedding; nested components merge faces."""
    out = []
    for i, (anchor, slots) in enumerate(sorted(g.regions().items())):
        walks = tuple(g.component_faces(ck)[fi] for ck, fi in slots)
        out.append(Face(i, tuple(w for w in walks)))
    return out


def dual(g: PlaneGraph) -> PlaneGraph:
    """Dual map: vertices are faces, darts are reused, rotations are walks."""
    if not g.is_connected() or not g.rotation:
        raise Disconnected("dual needs a connected graph")
    ck = g.root_component()
    faces = g.component_faces(ck)
    rotation = {f"f{i}": tuple(w) for i, w in enumerate(faces)}
    return PlaneGraph(rotation, dict(g.edges), directed=False)
