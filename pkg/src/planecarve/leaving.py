"""Leaving graphs: one side of a disc-certified cut drawn on a disc.

The interior keeps the graph induced on the displayed side plus one stub
vertex per cut edge; stubs are circularly ordered by the certificate's curve
(counterclockwise as seen from the inside).  For comparisons the disc is
closed into a sphere by a hub vertex joined to every stub; the hub rotation is
the reversed boundary order, and in the directed case each spoke continues its
stub's direction.  Floating components of the interior are re-hosted using the
zone placements recorded in the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .decomposition import CarvingTree, EdgeWidthTable, widths
from .disccert import CurveCert, DiscCertificateSet, find_curve
from .errors import InternalInvariantError, NoCertificate, Unrooted
from .ops import delete_vertex, subdivide
from .planegraph import PlaneGraph

HUB = "hub~"


def stub_name(edge: str) -> str:
    return f"s~{edge}"


def spoke_name(edge: str) -> str:
    return f"k~{edge}"


@dataclass
class LeavingGraph:
    interior: PlaneGraph  # displayed side plus degree-1 stub vertices
    boundary: tuple  # stub names, ccw seen from inside
    hub: PlaneGraph  # sphere closure with the hub vertex

    def boundary_size(self) -> int:
        return len(self.boundary)


def leaving_graph(
    g: PlaneGraph,
    t: CarvingTree,
    e: tuple,
    certs: Optional[DiscCertificateSet] = None,
    table: Optional[EdgeWidthTable] = None,
) -> LeavingGraph:
    """Leaving graph of tree edge ``e`` (the side away from the root)."""
    if t.root is None:
        raise Unrooted("leaving graphs need a rooted tree")
    table = table or widths(g, t)
    e = tuple(sorted(e))
    root_edge = tuple(sorted((t.root, t.adj[t.root][0])))
    if e == root_edge:
        side = frozenset(g.vertices)
    else:
        path = t._node_path(e, root_edge)
        toward_root = path[0]
        away = e[0] if toward_root == e[1] else e[1]
        side = t.side_labels(e, away)
    cert = None
    if certs is not None:
        cert = certs.per_edge.get(e)
    if cert is None or cert.inside != side:
        cert = find_curve(g, side, frozenset(g.vertices) - side)
    if cert is None:
        raise NoCertificate(f"edge {e} has no disc certificate")
    return extract_leaving(g, side, cert)


def extract_leaving(g: PlaneGraph, side, cert: CurveCert) -> LeavingGraph:
    side = frozenset(side)
    order = cert.edge_order
    cur = g
    for ce in sorted(set(order)):
        cur = subdivide(cur, ce, stub_name(ce))
    # remember which subdivided half survives on the inside
    for v in sorted(set(g.rotation) - side):
        cur = delete_vertex(cur, v)
    interior = cur
    boundary = tuple(stub_name(ce) for ce in order)
    hub = _close_hub(g, interior, cert, boundary, order)
    return LeavingGraph(interior, boundary, hub)


def _close_hub(g, interior, cert, boundary, order) -> PlaneGraph:
    rotation = {v: tuple(ds) for v, ds in interior.rotation.items()}
    edges = dict(interior.edges)
    directed = interior.directed
    hub_darts = []
    for ce in order:
        s = stub_name(ce)
        dh, ds = f"{spoke_name(ce)}.h", f"{spoke_name(ce)}.s"
        hub_darts.append(dh)
        rotation[s] = rotation[s] + (ds,)
        if directed:
            # continue the cut edge's direction through the stub
            inward = _stub_points_in(g, ce, cert.inside)
            edges[spoke_name(ce)] = (dh, ds) if inward else (ds, dh)
        else:
            edges[spoke_name(ce)] = (dh, ds)
    rotation[HUB] = tuple(reversed(hub_darts))

    nesting = {}
    placements = dict(cert.placements)
    hub_graph = PlaneGraph(rotation, edges, directed=directed, validate=False)
    hub_comp = hub_graph.component_key(HUB)

    def face_of_half(dart):
        # dart names a cut-edge dart of g; its midpoint-side half survives
        ce = g.dart_edge[dart]
        a, b = g.edges[ce]
        half = f"{stub_name(ce)}.b" if dart == a else f"{stub_name(ce)}.a"
        return hub_graph.face_of_dart(half)

    def resolve(ref):
        if ref[0] == "half":
            return face_of_half(ref[1])
        # corner zone: the hub face visiting exactly these stubs, no material
        want = {stub_name(g.dart_edge[d]) for d in ref[1]}
        for fi, walk in enumerate(hub_graph.component_faces(hub_comp)):
            verts = {hub_graph.dart_vertex[d] for d in walk}
            stubs = {v for v in verts if v.startswith("s~")}
            others = verts - stubs - {HUB}
            if not others and stubs == want:
                return (hub_comp, fi)
        raise InternalInvariantError("corner zone face not found")

    for comp in interior.components():
        ck = min(comp)
        new_ck = hub_graph.component_key(ck)
        if new_ck == hub_comp:
            continue
        if ck in placements:
            host = resolve(placements[ck])
            cf = interior.nesting.get(ck, (None, 0, 0))[2]
            nesting[new_ck] = (host[0], host[1], cf)
        elif ck in interior.nesting:
            host, hf, cf = interior.nesting[ck]
            host_new = hub_graph.component_key(host) if host in hub_graph.rotation else host
            if host_new == hub_comp:
                walk = interior.component_faces(host)[hf]
                if not walk:
                    raise InternalInvariantError("cannot anchor float on bare host")
                slot = hub_graph.face_of_dart(walk[0])
                nesting[new_ck] = (slot[0], slot[1], cf)
            else:
                nesting[new_ck] = (host_new, hf, cf)
        else:
            # root float without placement: w = 0 curve, host at its region
            if cert.crossings == () and cert.region is not None:
                rk, rf = cert.region
                hostslot = None
                if rk in interior.rotation or any(
                    rk == min(c) for c in interior.components()
                ):
                    walk = interior.component_faces(rk)[rf] if rk in {
                        min(c) for c in interior.components()
                    } else ()
                    if walk:
                        hostslot = hub_graph.face_of_dart(walk[0])
                if hostslot is not None and hostslot[0] != new_ck:
                    nesting[new_ck] = (hostslot[0], hostslot[1], 0)
    # hub placement for crossing-free certificates: nest the hub component
    if cert.crossings == () and interior.rotation:
        rk, rf = cert.region if cert.region else (None, None)
        anchor = None
        comp_keys = {min(c) for c in interior.components()}
        if rk in comp_keys:
            walk = interior.component_faces(rk)[rf]
            anchor = (rk, rf) if not walk else hub_graph.face_of_dart(walk[0])
        if anchor is None:
            for slot, a in sorted(g.region_partition().items()):
                if a == cert.region and slot[0] in comp_keys:
                    walk = interior.component_faces(slot[0])[slot[1]]
                    anchor = (
                        slot if not walk else hub_graph.face_of_dart(walk[0])
                    )
                    break
        if anchor is not None:
            nesting[hub_comp] = (anchor[0], anchor[1], 0)

    out = PlaneGraph(rotation, edges, directed=directed, nesting=nesting)
    return out


def _stub_points_in(g: PlaneGraph, ce: str, inside) -> bool:
    """True when the directed cut edge enters the inside."""
    a, b = g.edges[ce]
    return g.dart_vertex[b] in inside


def leq_leaving(l1: LeavingGraph, l2: LeavingGraph, directed: bool = False,
                max_darts: int = 10**9) -> bool:
    """The boundary-respecting embedded immersion quasi-order on discs."""
    from .relations import ordered_immersion

    w = l1.boundary_size()
    if w != l2.boundary_size():
        return False
    h1, h2 = l1.hub, l2.hub
    if w == 0:
        from .canonical import equivalent

        if equivalent(h1, h2):
            return True
        wit = ordered_immersion(
            h1, h2, require_tangent=True, directed=directed, max_darts=max_darts,
            pins={HUB: HUB},
        )
        return wit is not None
    for shift in range(w):
        pins = {HUB: HUB}
        edge_pins = {}
        ok = True
        for i, s in enumerate(l1.boundary):
            s2 = l2.boundary[(i + shift) % w]
            pins[s] = s2
            e1 = spoke_name(s[2:])
            e2 = spoke_name(s2[2:])
            if directed:
                d1 = h1.edges[e1]
                d2 = h2.edges[e2]
                if (h1.dart_vertex[d1[0]] == HUB) != (h2.dart_vertex[d2[0]] == HUB):
                    ok = False
                    break
            edge_pins[e1] = e2
        if not ok:
            continue
        wit = ordered_immersion(
            h1,
            h2,
            require_tangent=True,
            directed=directed,
            max_darts=max_darts,
            pins=pins,
            edge_pins=edge_pins,
        )
        if wit is not None:
            return True
    return False
