"""Disc certificates: simple closed curves realizing displayed bipartitions.

A cut (V1, V2) of an embedded graph has the disc property when a Jordan curve
meets the graph exactly in the cut edges, once each, with V1 strictly inside
and V2 strictly outside.  Combinatorially the curve decomposes into arcs, one
per crossing pair, drawn inside regions of the embedding; an arc starts at the
midpoint of a cut edge on its V1-endpoint face and ends at a midpoint on a
V2-endpoint face.  The search enumerates, per region, the perfect matchings of
arc endpoints that can be drawn disjointly (maintained by splicing the
region's boundary cycles as arcs are inserted), requires every resulting zone
to touch only one side's material, places the hanging pure chunks, and finally
demands that arcs and crossings close into a single loop.

Tokens on a boundary cycle are ('occ', dart) for crossing points and
('col', color, anchor) for material stretches; anchors let the leaving-graph
builder recover which zone a floating component was assigned to.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalInvariantError
from .planegraph import PlaneGraph


@dataclass(frozen=True)
class CurveCert:
    """gamma for one bipartition: crossings in curve order, V1 on the left."""

    inside: frozenset[str]  # the vertex set enclosed by the curve
    crossings: tuple  # tuple of (region_anchor, edge) pairs, cyclic
    region: tuple  # region holding the curve when there are no crossings
    placements: tuple = ()  # (component_key, zone_ref) for floating chunks

    @property
    def edge_order(self):
        return tuple(e for _, e in self.crossings)


def region_tree(g: PlaneGraph):
    """Bipartite adjacency between components and region anchors."""
    comp_regions: dict[str, set] = {}
    region_comps: dict[tuple, set] = {}
    part = g.region_partition()
    for (ck, fi), anchor in part.items():
        comp_regions.setdefault(ck, set()).add(anchor)
        region_comps.setdefault(anchor, set()).add(ck)
    return comp_regions, region_comps


def chunk_vertices(g: PlaneGraph, comp: str, away_from: tuple) -> set[str]:
    """Vertices of ``comp`` and everything behind it, seen from a region."""
    comp_regions, region_comps = region_tree(g)
    seen_c = {comp}
    seen_r = {away_from}
    stack = [comp]
    while stack:
        c = stack.pop()
        for r in comp_regions[c]:
            if r in seen_r:
                continue
            seen_r.add(r)
            for c2 in region_comps[r]:
                if c2 not in seen_c:
                    seen_c.add(c2)
                    stack.append(c2)
    out: set[str] = set()
    comp_sets = {min(c): c for c in g.components()}
    for c in seen_c:
        out |= comp_sets[c]
    return out


def find_curve(g: PlaneGraph, side1, side2) -> Optional[CurveCert]:
    """Search for a Jordan curve isolating side1 (inside) from side2."""
    s1, s2 = frozenset(side1), frozenset(side2)
    if s1 | s2 != set(g.rotation) or (s1 & s2):
        raise InternalInvariantError("sides must partition V(G)")
    color = {v: ("A" if v in s1 else "B") for v in g.rotation}
    cut_edges = sorted(
        e
        for e, (d1, d2) in g.edges.items()
        if color[g.dart_vertex[d1]] != color[g.dart_vertex[d2]]
    )
    comp_regions, region_comps = region_tree(g)

    def chunk_color(comp, region):
        vs = chunk_vertices(g, comp, region)
        cols = {color[v] for v in vs}
        return cols.pop() if len(cols) == 1 else None

    if not cut_edges:
        if not s1 or not s2:
            anchor = sorted(region_comps)[0] if region_comps else None
            return CurveCert(s1, (), anchor)
        for anchor in sorted(region_comps):
            ok = all(chunk_color(c, anchor) is not None for c in region_comps[anchor])
            if ok:
                return CurveCert(s1, (), anchor)
        return None

    occ_kind: dict[str, str] = {}
    occ_region: dict[str, tuple] = {}
    for e in cut_edges:
        for d in g.edges[e]:
            occ_kind[d] = "exit" if color[g.dart_vertex[d]] == "A" else "entry"
            occ_region[d] = g.region_of(*g.face_of_dart(d))

    regions_active: dict[tuple, list[str]] = {}
    for d, r in occ_region.items():
        regions_active.setdefault(r, []).append(d)

    mixed_comps = set()
    for c in g.components():
        if len({color[v] for v in c}) > 1:
            mixed_comps.add(min(c))

    # orient the region tree away from the mixed core: each pure component is
    # a hanging chunk checked at the region through which the core sees it
    parent_region: dict[str, tuple] = {}
    seen_r: set = set()
    frontier: list = []
    for ck in sorted(mixed_comps):
        for r in sorted(comp_regions[ck]):
            if r not in seen_r:
                seen_r.add(r)
                frontier.append(r)
    seen_c = set(mixed_comps)
    while frontier:
        r = frontier.pop(0)
        for c in sorted(region_comps[r]):
            if c in seen_c:
                continue
            seen_c.add(c)
            parent_region[c] = r
            for r2 in sorted(comp_regions[c]):
                if r2 not in seen_r:
                    seen_r.add(r2)
                    frontier.append(r2)

    for c in sorted(parent_region):
        if chunk_color(c, parent_region[c]) is None:
            return None  # impure hanging chunk

    region_cycles: dict[tuple, list] = {}
    region_items: dict[tuple, list] = {}  # (color, item_id) floats
    part = g.region_partition()
    for anchor in sorted(region_comps):
        cycles = []
        items = []
        mixed_here = False
        for ck, fi in sorted(slot for slot, a in part.items() if a == anchor):
            walk = g.component_faces(ck)[fi]
            ports = [d for d in walk if d in occ_kind]
            if ck not in mixed_comps:
                if parent_region.get(ck) == anchor:
                    items.append((chunk_color(ck, anchor), ("chunk", ck)))
                continue
            mixed_here = True
            if not ports:
                mat = {color[g.dart_vertex[d]] for d in walk} or {"A"}
                if len(mat) != 1:
                    raise InternalInvariantError("portless walk with mixed material")
                items.append((mat.pop(), ("hole", ck, fi)))
                continue
            cyc = []
            for d in walk:
                if d not in occ_kind:
                    continue
                cyc.append(("occ", d))
                cyc.append(
                    ("col", color[g.dart_vertex[g.twin[d]]], ("half", d))
                )
            cycles.append(cyc)
        region_cycles[anchor] = cycles
        region_items[anchor] = items
        if anchor not in regions_active and mixed_here:
            cols = {c for c, _ in items}
            for cyc in cycles:
                cols |= {t[1] for t in cyc if t[0] == "col"}
            if len(cols) > 1:
                return None

    for anchor, ds in regions_active.items():
        n_exit = sum(1 for d in ds if occ_kind[d] == "exit")
        if 2 * n_exit != len(ds):
            return None

    per_region: dict[tuple, list] = {}
    for anchor in sorted(regions_active):
        ms = _region_matchings(region_cycles[anchor], region_items[anchor], occ_kind)
        if not ms:
            return None
        per_region[anchor] = ms

    order = sorted(per_region)

    def combine(i, chosen, placements):
        if i == len(order):
            return _close_loop(g, chosen, s1, placements)
        for matching, placed in per_region[order[i]]:
            res = combine(i + 1, chosen + [(order[i], matching)], placements + placed)
            if res is not None:
                return res
        return None

    return combine(0, [], [])


def _zone_ref(zone):
    """A locator for one final zone: a material anchor or its portal set."""
    for cyc in zone:
        for t in cyc:
            if t[0] == "col" and t[2] is not None and t[2][0] == "half":
                return t[2]
    darts = set()
    for cyc in zone:
        for t in cyc:
            if t[0] == "col" and t[2] is not None and t[2][0] == "arc":
                darts.update(t[2][1:])
    return ("corner", frozenset(darts))


def _region_matchings(cycles, items, occ_kind):
    """All drawable arc matchings of one region with float placements.

    Returns a list of (matching dict exit->entry, placements) where
    placements assign each floating chunk item a zone reference.
    """
    out = []
    init_zone = [list(c) for c in cycles]

    def occs_of(zone):
        return [t[1] for cyc in zone for t in cyc if t[0] == "occ"]

    def rec(zones, matching):
        pend_idx = next((i for i, z in enumerate(zones) if occs_of(z)), None)
        if pend_idx is None:
            zone_colors = []
            for z in zones:
                cols = set()
                for cyc in z:
                    cols |= {t[1] for t in cyc if t[0] == "col"}
                if len(cols) > 1:
                    return
                zone_colors.append(cols.pop() if cols else None)
            placements = []
            for col, item_id in items:
                zi = next(
                    (i for i, zc in enumerate(zone_colors) if zc == col), None
                )
                if zi is None:
                    return
                if item_id[0] == "chunk":
                    placements.append((item_id[1], _zone_ref(zones[zi])))
            out.append((dict(matching), placements))
            return
        zone = zones[pend_idx]
        exits = sorted(d for d in occs_of(zone) if occ_kind[d] == "exit")
        entries = sorted(d for d in occs_of(zone) if occ_kind[d] == "entry")
        if not exits or len(exits) != len(entries):
            return
        x = exits[0]
        for y in entries:
            for new_zones in _splice(zone, x, y):
                rec(zones[:pend_idx] + new_zones + zones[pend_idx + 1 :], matching + [(x, y)])

    rec([init_zone], [])
    return out


def _splice(zone, x, y):
    """Insert the arc x->y into a zone; yield resulting zone lists.

    A same-cycle arc splits the zone in two (other cycles choose sides); a
    two-cycle arc merges the cycles.  Side A lies left of the arc, so the
    piece after x up to y gets a B flank and the rest an A flank.
    """
    cyc_x = next(i for i, c in enumerate(zone) if ("occ", x) in c)
    cyc_y = next(i for i, c in enumerate(zone) if ("occ", y) in c)
    if cyc_x == cyc_y:
        c = zone[cyc_x]
        i = c.index(("occ", x))
        rot = c[i + 1 :] + c[:i]
        jj = rot.index(("occ", y))
        p1 = rot[:jj]
        p2 = rot[jj + 1 :]
        c1 = p1 + [("col", "B", ("arc", x, y))]
        c2 = p2 + [("col", "A", ("arc", x, y))]
        others = [zone[k] for k in range(len(zone)) if k != cyc_x]
        for assign in itertools.product((0, 1), repeat=len(others)):
            z1 = [c1] + [o for o, a in zip(others, assign) if a == 0]
            z2 = [c2] + [o for o, a in zip(others, assign) if a == 1]
            yield [z1, z2]
    else:
        cx, cy = zone[cyc_x], zone[cyc_y]
        i = cx.index(("occ", x))
        j = cy.index(("occ", y))
        px = cx[i + 1 :] + cx[:i]
        py = cy[j + 1 :] + cy[:j]
        merged = (
            px
            + [("col", "A", ("arc", x, y))]
            + py
            + [("col", "B", ("arc", x, y))]
        )
        rest = [zone[k] for k in range(len(zone)) if k not in (cyc_x, cyc_y)]
        yield [[merged] + rest]


def _close_loop(g, chosen, s1, placements):
    """Glue arcs and crossings; return the certificate iff a single loop."""
    arc_from: dict[str, tuple[str, tuple]] = {}
    for anchor, matching in chosen:
        for x, y in matching.items():
            arc_from[x] = (y, anchor)
    exits = sorted(arc_from)
    start = exits[0]
    seq = []
    cur = start
    for _ in range(len(exits)):
        y, anchor = arc_from[cur]
        seq.append((anchor, g.dart_edge[y]))
        cur = g.twin[y]
    if cur != start or len({e for _, e in seq}) != len(exits):
        return None
    return CurveCert(frozenset(s1), tuple(seq), seq[0][0], tuple(placements))


@dataclass
class DiscCertificateSet:
    per_edge: dict  # tree edge -> CurveCert

    def __bool__(self):
        return True


def certify_disc(g: PlaneGraph, t, table=None):
    """Disc certificates for every tree edge, or the first violation."""
    from .decomposition import Violation, widths

    table = table or widths(g, t)
    per_edge = {}
    for e, (side1, side2, _, _) in sorted(table.entries.items()):
        cert = find_curve(g, side1, side2)
        if cert is None:
            return Violation("disc", (e,))
        per_edge[e] = cert
    return DiscCertificateSet(per_edge)
