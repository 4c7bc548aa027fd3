"""Embedded operations on sphere embeddings, and replayable scripts.

Every operation is a pure function returning a fresh validated graph.  The
nesting forest and the outer-face marker are carried through each operation:
after the rotation surgery, old regions are matched to new faces through the
darts they share, regions that merged geometrically are united, and the
nesting forest of the result is rebuilt from that partition.  A component cut
loose by a deletion therefore ends up nested in the face that contained it
before the split.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    BadAddress,
    CrossingArc,
    DirectedMismatch,
    InternalInvariantError,
    NotIncident,
    ParseError,
    SelfLoopContract,
)
from .planegraph import PlaneGraph


# ---------------------------------------------------------------------------
# region-aware reassembly


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            self.parent[x] = p = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _old_dart_regions(old: PlaneGraph) -> dict[str, tuple[str, int]]:
    out = {}
    regions = old.region_partition()
    for c in old.components():
        ck = min(c)
        for fi, walk in enumerate(old.component_faces(ck)):
            r = regions[(ck, fi)]
            for d in walk:
                out[d] = r
    return out


def _reassemble(
    old: PlaneGraph,
    rotation: dict,
    edges: dict,
    unseeded_rule=None,
) -> PlaneGraph:
    """Build the post-op graph, reconstructing nesting and the outer marker.

    Every surviving dart keeps the region immediately to its left, so new
    faces are matched to old regions through their darts; regions that share
    a new face have merged.  ``unseeded_rule(old_anchor, g2)`` places an old
    region whose boundary vanished entirely.
    """
    g2 = PlaneGraph(rotation, edges, directed=old.directed, validate=False)
    old_dart_region = _old_dart_regions(old)
    old_regions = old.region_partition()
    uf = _UnionFind()

    new_slots = []
    seeded_old: set = set()
    for c in g2.components():
        ck = min(c)
        faces = g2.component_faces(ck)
        for fi, walk in enumerate(faces):
            slot = (ck, fi)
            new_slots.append(slot)
            for d in walk:
                if d not in old_dart_region:
                    continue
                r = old_dart_region[d]
                uf.union(("N",) + slot, ("O",) + r)
                seeded_old.add(r)
        if not any(faces):
            pass
    # isolated vertices: anchor through their old surroundings
    for c in g2.components():
        ck = min(c)
        if g2.component_faces(ck) != [()]:
            continue
        v = ck  # single-vertex component
        if v in old.rotation and old.rotation[v]:
            d = old.rotation[v][0]
            r = old_dart_region[d]
        elif v in old.rotation:
            r = old_regions[(old.component_key(v), 0)]
        else:
            continue  # brand-new vertex: caller places it
        uf.union(("N", v, 0), ("O",) + r)
        seeded_old.add(r)

    for anchor in set(old_regions.values()):
        if anchor in seeded_old:
            continue
        if ("O",) + anchor not in uf.parent:
            uf.find(("O",) + anchor)
        if unseeded_rule is not None:
            slot = unseeded_rule(anchor, g2)
            if slot is not None:
                uf.union(("O",) + anchor, ("N",) + slot)

    # group new slots by region
    groups: dict = {}
    for slot in new_slots:
        groups.setdefault(uf.find(("N",) + slot), []).append(slot)
    # old anchors may glue two groups together even without a direct new slot
    # (handled by union-find transitivity already)

    nesting = _nesting_from_groups(g2, list(groups.values()))
    outer = None
    if old.outer is not None and g2.rotation:
        old_anchor = old.region_of(*old.outer)
        root = uf.find(("O",) + old_anchor)
        slots = [s for s in new_slots if uf.find(("N",) + s) == root]
        if slots:
            outer = min(slots)
        else:
            outer = min(new_slots) if new_slots else None
    return PlaneGraph(rotation, edges, directed=old.directed, nesting=nesting, outer=outer)


def _nesting_from_groups(g2: PlaneGraph, groups) -> dict:
    comps = sorted(min(c) for c in g2.components())
    if len(comps) <= 1:
        return {}
    slot_group: dict = {}
    for gid, slots in enumerate(groups):
        for s in slots:
            if s in slot_group:
                raise InternalInvariantError("slot in two regions")
            slot_group[s] = gid
    nesting: dict = {}
    placed = {comps[0]}
    visited_groups: set[int] = set()
    queue = [comps[0]]
    while queue:
        h = queue.pop(0)
        for fi in range(len(g2.component_faces(h))):
            gid = slot_group.get((h, fi))
            if gid is None or gid in visited_groups:
                continue
            visited_groups.add(gid)
            for c, cf in sorted(groups[gid]):
                if c == h:
                    if cf != fi:
                        raise InternalInvariantError(
                            "two faces of one component share a region"
                        )
                    continue
                if c in placed:
                    raise InternalInvariantError("region structure has a cycle")
                nesting[c] = (h, fi, cf)
                placed.add(c)
                queue.append(c)
    if placed != set(comps):
        raise InternalInvariantError("could not place all components in regions")
    return nesting


# ---------------------------------------------------------------------------
# the operations


def delete_edge(g: PlaneGraph, e: str) -> PlaneGraph:
    if e not in g.edges:
        raise BadAddress(f"no edge {e}")
    d1, d2 = g.edges[e]
    rotation = {
        v: tuple(d for d in ds if d not in (d1, d2)) for v, ds in g.rotation.items()
    }
    edges = {k: v for k, v in g.edges.items() if k != e}

    def unseeded(anchor, g2):
        # a face bounded only by e collapses onto the far side of e
        for d in (d1, d2):
            other = g.face_of_dart(g.twin[d])
            target_darts = [
                x for x in g.component_faces(other[0])[other[1]] if x not in (d1, d2)
            ]
            for x in target_darts:
                return g2.face_of_dart(x)
        # both sides bounded only by e: its endpoints are now isolated and
        # everything merges around them
        u = g.dart_vertex[d1]
        return (g2.component_key(u), 0)

    return _reassemble(g, rotation, edges, unseeded_rule=unseeded)


def delete_vertex(g: PlaneGraph, v: str) -> PlaneGraph:
    if v not in g.rotation:
        raise BadAddress(f"no vertex {v}")
    cur = g
    while cur.rotation[v]:
        cur = delete_edge(cur, cur.dart_edge[cur.rotation[v][0]])
    # v is now an isolated component (key = v itself)
    rotation = {u: ds for u, ds in cur.rotation.items() if u != v}
    nesting = dict(cur.nesting)
    host_slot: Optional[tuple[str, int]] = None
    if v in nesting:
        host, hf, _ = nesting.pop(v)
        host_slot = (host, hf)
    children = sorted(c for c, (h, _, _) in nesting.items() if h == v)
    promoted: Optional[tuple[str, int]] = None
    if children:
        if host_slot is None:
            new_root = children[0]
            rcf = nesting[new_root][2]
            del nesting[new_root]
            promoted = (new_root, rcf)
            for c in children[1:]:
                _, _, cf = nesting[c]
                nesting[c] = (new_root, rcf, cf)
        else:
            for c in children:
                _, _, cf = nesting[c]
                nesting[c] = (host_slot[0], host_slot[1], cf)
    outer = cur.outer
    if outer is not None and outer[0] == v:
        outer = host_slot or promoted
    g2 = PlaneGraph(
        rotation, cur.edges, directed=g.directed, nesting=nesting, outer=outer, validate=False
    )
    g2.validate()
    return g2


def contract_edge(g: PlaneGraph, e: str) -> PlaneGraph:
    if e not in g.edges:
        raise BadAddress(f"no edge {e}")
    d1, d2 = g.edges[e]
    u, w = g.dart_vertex[d1], g.dart_vertex[d2]
    if u == w:
        raise SelfLoopContract(f"edge {e} is a self-loop")
    m = min(u, w)
    ru = g.rotation[u]
    rw = g.rotation[w]
    iu = ru.index(d1)
    iw = rw.index(d2)
    merged = (ru[iu + 1 :] + ru[:iu]) + (rw[iw + 1 :] + rw[:iw])
    rotation = {x: ds for x, ds in g.rotation.items() if x not in (u, w)}
    rotation[m] = merged
    edges = {k: v for k, v in g.edges.items() if k != e}

    def unseeded(anchor, g2):
        if merged:
            return g2.face_of_dart(merged[0])
        return (g2.component_key(m), 0)

    return _reassemble(g, rotation, edges, unseeded_rule=unseeded)


def subdivide(g: PlaneGraph, e: str, new_vertex: str) -> PlaneGraph:
    if e not in g.edges:
        raise BadAddress(f"no edge {e}")
    if new_vertex in g.rotation:
        raise BadAddress(f"vertex {new_vertex} already exists")
    a, b = g.edges[e]
    da, db = f"{new_vertex}.a", f"{new_vertex}.b"
    rotation = dict(g.rotation)
    rotation[new_vertex] = (da, db)
    edges = {k: v for k, v in g.edges.items() if k != e}
    edges[f"{e}.1"] = (a, da)
    edges[f"{e}.2"] = (db, b)
    g2 = _reassemble(g, rotation, edges)
    return g2


def lift(g: PlaneGraph, v: str, e1: str, e2: str, side: str = "ccw") -> PlaneGraph:
    """Merge edges e1, e2 at v along the chosen arc of a small disc around v."""
    if v not in g.rotation:
        raise BadAddress(f"no vertex {v}")
    for e in (e1, e2):
        if e not in g.edges:
            raise BadAddress(f"no edge {e}")
    if e1 == e2:
        raise NotIncident("cannot lift an edge with itself")
    if side not in ("ccw", "cw"):
        raise ParseError(f"bad lift side {side!r}")

    def darts_at(e):
        return [d for d in g.edges[e] if g.dart_vertex[d] == v]

    c1, c2 = darts_at(e1), darts_at(e2)
    if not c1 or not c2:
        raise NotIncident(f"{e1} and {e2} must both be incident to {v}")
    if g.directed:
        c1 = [d for d in c1 if g.direction_of(d) == "head"]
        c2 = [d for d in c2 if g.direction_of(d) == "tail"]
        if not c1 or not c2:
            raise DirectedMismatch(f"need head({e1}) = {v} = tail({e2})")

    rot = g.rotation[v]
    chosen = None
    for d1 in sorted(c1):
        for d2 in sorted(c2):
            if side == "ccw" and g.rotation_successor(d1) == d2:
                chosen = (d1, d2)
            elif side == "cw" and g.rotation_predecessor(d1) == d2:
                chosen = (d1, d2)
            if chosen:
                break
        if chosen:
            break
    if chosen is None:
        raise CrossingArc(
            f"edges {e1},{e2} are not adjacent around {v} on the {side} side"
        )
    d1, d2 = chosen
    far1, far2 = g.twin[d1], g.twin[d2]
    if far1 == d2:
        # e1 is a loop whose other dart is d2: merging would close a circle
        raise NotIncident("lift would produce an edgeless circle")

    rotation = dict(g.rotation)
    rotation[v] = tuple(d for d in rot if d not in (d1, d2))
    removed_vertex = False
    if not rotation[v]:
        del rotation[v]
        removed_vertex = True
    edges = {k: val for k, val in g.edges.items() if k not in (e1, e2)}
    em = f"({e1}~{e2})"
    while em in edges:
        em += "'"
    # d1 is e1's head dart in the directed case, so far1 is its tail dart and
    # (far1, far2) keeps the tail-first convention
    edges[em] = (far1, far2)

    def unseeded(anchor, g2):
        # only an empty loop-inside face (walk (d1) or (d2)) can lose all its
        # darts; it ends up on the matching side of the merged edge
        ck, fi = anchor
        walk = g.component_faces(ck)[fi]
        if walk == (d1,):
            return g2.face_of_dart(far2)
        if walk == (d2,):
            return g2.face_of_dart(far1)
        raise InternalInvariantError(f"lift left region {anchor} unseeded")

    g2 = _reassemble(g, rotation, edges, unseeded_rule=unseeded)
    if removed_vertex and v in g2.rotation:
        raise InternalInvariantError("degree-2 lift failed to delete the vertex")
    return g2


# ---------------------------------------------------------------------------
# scripts


@dataclass(frozen=True)
class Op:
    kind: str  # del-edge | del-vertex | contract | subdivide | lift | bilift
    args: tuple

    def __str__(self):
        return " ".join((self.kind,) + tuple(str(a) for a in self.args))


OpScript = tuple  # tuple[Op, ...]


def apply_embedded_op(g: PlaneGraph, op: Op) -> PlaneGraph:
    if op.kind == "del-edge":
        return delete_edge(g, op.args[0])
    if op.kind == "del-vertex":
        return delete_vertex(g, op.args[0])
    if op.kind == "contract":
        return contract_edge(g, op.args[0])
    if op.kind == "subdivide":
        return subdivide(g, op.args[0], op.args[1])
    if op.kind == "lift":
        return lift(g, op.args[0], op.args[1], op.args[2], op.args[3])
    if op.kind == "bilift":
        from .medial import bilift_plain

        return bilift_plain(g, op.args[0], op.args[1])
    raise ParseError(f"unknown op kind {op.kind!r}")


def replay(g: PlaneGraph, script) -> PlaneGraph:
    cur = g
    for op in script:
        cur = apply_embedded_op(cur, op)
    return cur


def serialize_script(script) -> str:
    return "\n".join(str(op) for op in script) + ("\n" if script else "")


def parse_script(text: str):
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        arity = {
            "del-edge": 1,
            "del-vertex": 1,
            "contract": 1,
            "subdivide": 2,
            "lift": 4,
            "bilift": 2,
        }.get(kind)
        if arity is None:
            raise ParseError(f"line {lineno}: unknown op {kind!r}")
        if len(parts) - 1 != arity:
            raise ParseError(f"line {lineno}: {kind} expects {arity} arguments")
        ops.append(Op(kind, tuple(parts[1:])))
    return tuple(ops)
