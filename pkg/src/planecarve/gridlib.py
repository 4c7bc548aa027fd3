"""Grids, walls, and the constructions embedding any plane graph in a grid.

The pipeline subdivides a graph until simple, triangulates it, removes
separating triangles by the vertex-insertion trick, finds a Hamiltonian cycle
exhaustively, lays the cycle out along the grid diagonal with one connected
blob per cycle vertex, wires non-cycle edges right of the diagonal (inside of
the cycle) or left (outside), and emits the whole thing as a replayable
script on the grid: delete unused parts, contract each blob, then undo the
preprocessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .canonical import cached_canonical_form, canonical_form, equivalent, reflect
from .errors import (
    BadSize,
    BadWitness,
    InternalInvariantError,
    NoOuterFace,
    TooLarge,
)
from .ops import Op, apply_embedded_op, replay
from .planegraph import PlaneGraph, build_graph


def _gname(i, j):
    return f"g{i}_{j}"


def grid(n: int) -> PlaneGraph:
    """Plane n-by-n grid with the high-degree face marked outer."""
    if n < 1:
        raise BadSize("grid needs n >= 1")
    rotation = {}
    edges = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ds = []
            if j < n:
                ds.append(f"h{i}_{j}.a")
                edges[f"h{i}_{j}"] = (f"h{i}_{j}.a", f"h{i}_{j}.b")
            if i < n:
                ds.append(f"v{i}_{j}.a")
                edges[f"v{i}_{j}"] = (f"v{i}_{j}.a", f"v{i}_{j}.b")
            if j > 1:
                ds.append(f"h{i}_{j-1}.b")
            if i > 1:
                ds.append(f"v{i-1}_{j}.b")
            rotation[_gname(i, j)] = tuple(ds)
    g = PlaneGraph(rotation, edges)
    return _mark_high_degree_face(g)


def _mark_high_degree_face(g: PlaneGraph) -> PlaneGraph:
    ck = g.root_component()
    faces = g.component_faces(ck)
    best = max(range(len(faces)), key=lambda i: (len(faces[i]), -i))
    return g.replace(outer=(ck, best))


def wall(n: int) -> PlaneGraph:
    """Plane wall of (even) height n, high-degree face outer."""
    if n < 2 or n % 2:
        raise BadSize("wall needs even n >= 2")
    exists = (
        lambda i, j: 1 <= i <= n + 1
        and 1 <= j <= 2 * n + 2
        and (i, j) not in ((1, 2 * n + 2), (n + 1, 1))
    )
    rotation = {}
    edges = {}
    for i in range(1, n + 2):
        for j in range(1, 2 * n + 3):
            if not exists(i, j):
                continue
            ds = []
            if exists(i, j + 1):
                ds.append(f"h{i}_{j}.a")
                edges[f"h{i}_{j}"] = (f"h{i}_{j}.a", f"h{i}_{j}.b")
            if exists(i + 1, j) and (i + j) % 2 == 0:
                ds.append(f"v{i}_{j}.a")
                edges[f"v{i}_{j}"] = (f"v{i}_{j}.a", f"v{i}_{j}.b")
            if exists(i, j - 1):
                ds.append(f"h{i}_{j-1}.b")
            if exists(i - 1, j) and (i - 1 + j) % 2 == 0:
                ds.append(f"v{i-1}_{j}.b")
            rotation[f"w{i}_{j}"] = tuple(ds)
    g = PlaneGraph(rotation, edges)
    return _mark_high_degree_face(g)


# ---------------------------------------------------------------------------
# embedding census


def unique_embedding_census(n: int, max_n: int = 4):
    """Count sphere embeddings of the abstract n-by-n grid, deduplicated.

    Returns (count, count_up_to_reflection) from brute enumeration of all
    rotation systems passing the Euler check.
    """
    if n > max_n:
        raise TooLarge(f"census capped at n = {max_n}")
    if n == 1:
        return 1, 1
    base = grid(n)
    verts = base.vertices
    dart_at = {v: list(base.rotation[v]) for v in verts}
    all_darts = sorted(base.dart_vertex)
    didx = {d: i for i, d in enumerate(all_darts)}
    twin = [didx[base.twin[d]] for d in all_darts]
    nd = len(all_darts)
    ne = base.num_edges()
    nv = len(verts)

    per_vertex_orders = []
    for v in verts:
        ds = dart_at[v]
        if len(ds) <= 2:
            per_vertex_orders.append([tuple(ds)])
        else:
            first = ds[0]
            per_vertex_orders.append(
                [(first,) + p for p in itertools.permutations(ds[1:])]
            )

    forms = set()
    forms_ref = set()
    for combo in itertools.product(*per_vertex_orders):
        succ = [0] * nd
        pred = [0] * nd
        for rot in combo:
            k = len(rot)
            for a in range(k):
                i, j = didx[rot[a]], didx[rot[(a + 1) % k]]
                succ[i] = j
                pred[j] = i
        # face count from phi = pred(twin(d))
        seen = [False] * nd
        nf = 0
        for d0 in range(nd):
            if seen[d0]:
                continue
            nf += 1
            d = d0
            while not seen[d]:
                seen[d] = True
                d = pred[twin[d]]
        if nv - ne + nf != 2:
            continue
        g = PlaneGraph(
            {v: combo[i] for i, v in enumerate(verts)},
            base.edges,
            validate=False,
        )
        cf = canonical_form(g)
        forms.add(cf)
        forms_ref.add(canonical_form(g, allow_reflection=True))
    return len(forms), len(forms_ref)


# ---------------------------------------------------------------------------
# wall search and wall-to-grid extraction


@dataclass
class WallWitness:
    height: int
    vertex_map: dict  # wall vertex -> G vertex
    paths: dict  # wall edge -> tuple of G vertices (endpoints included)


def find_subdivided_wall(g: PlaneGraph, h: int, max_vertices: int = 40):
    """Exhaustive subgraph search for a subdivision of wall(h)."""
    if len(g.vertices) > max_vertices:
        raise TooLarge("wall search cap exceeded")
    w = wall(h)
    pattern_adj: dict[str, list[str]] = {
        v: sorted(w.dart_vertex[w.twin[d]] for d in w.rotation[v]) for v in w.vertices
    }
    pedges = sorted((min(a, b), max(a, b)) for a, b in (w.endpoints(e) for e in w.edges))
    g_adj = {
        v: sorted(g.dart_vertex[g.twin[d]] for d in g.rotation[v]) for v in g.vertices
    }

    order = _wall_edge_order(w)
    vmap: dict[str, str] = {}
    used_vertices: set[str] = set()
    used_edges: set[str] = set()
    paths: dict = {}

    def candidates(u):
        if u in vmap:
            return [vmap[u]]
        return [
            x
            for x in g.vertices
            if x not in used_vertices and len(g_adj[x]) >= len(pattern_adj[u])
        ]

    def find_paths(gu, gv):
        out = []

        def dfs(path, at):
            if len(out) >= 4000:
                return
            if at == gv and len(path) > 1:
                out.append(tuple(path))
                return
            for d in g.rotation[at]:
                e = g.dart_edge[d]
                nxt = g.dart_vertex[g.twin[d]]
                if e in used_edges or nxt in path:
                    continue
                if nxt != gv and (nxt in used_vertices or nxt in vmap.values()):
                    continue
                path.append(nxt)
                used_edges.add(e)
                dfs(path, nxt)
                used_edges.discard(e)
                path.pop()

        dfs([gu], gu)
        return out

    def rec(i):
        if i == len(order):
            return dict(vmap), dict(paths)
        u, v = order[i]
        if (u, v) in paths:
            return rec(i + 1)
        for gu in candidates(u):
            placed_u = u not in vmap
            vmap[u] = gu
            used_vertices.add(gu)
            for gv in candidates(v):
                if gv == gu:
                    continue
                placed_v = v not in vmap
                vmap[v] = gv
                used_vertices.add(gv)
                for path in find_paths(gu, gv):
                    inner = set(path[1:-1])
                    if inner & used_vertices or inner & set(vmap.values()):
                        continue
                    enames = _path_edge_names(g, path)
                    paths[(u, v)] = path
                    used_vertices.update(inner)
                    used_edges.update(enames)
                    res = rec(i + 1)
                    if res:
                        return res
                    used_edges.difference_update(enames)
                    used_vertices.difference_update(inner)
                    del paths[(u, v)]
                if placed_v:
                    del vmap[v]
                    used_vertices.discard(gv)
            if placed_u:
                del vmap[u]
                used_vertices.discard(gu)
        return None

    res = rec(0)
    if res is None:
        return None
    vm, ps = res
    return WallWitness(h, vm, {k: tuple(v) for k, v in ps.items()})


def _path_edge_names(g: PlaneGraph, path):
    names = []
    for a, b in zip(path, path[1:]):
        for d in g.rotation[a]:
            if g.dart_vertex[g.twin[d]] == b and g.dart_edge[d] not in names:
                names.append(g.dart_edge[d])
                break
    return names


def _wall_edge_order(w: PlaneGraph):
    out = []
    seen = set()
    for e in sorted(w.edges, key=lambda e: sorted(w.endpoints(e))):
        u, v = w.endpoints(e)
        out.append((u, v))
    # BFS-ish: sort so edges touching already-seen vertices come early
    ordered = []
    remaining = list(out)
    seen_v: set[str] = set()
    while remaining:
        nxt = None
        for k, (u, v) in enumerate(remaining):
            if u in seen_v or v in seen_v or not seen_v:
                nxt = k
                break
        if nxt is None:
            nxt = 0
        u, v = remaining.pop(nxt)
        ordered.append((u, v))
        seen_v.update((u, v))
    return ordered


def wall_to_grid(g: PlaneGraph, witness: WallWitness, n: int):
    """Script reducing a subdivided wall of height 2n in g to grid(n)."""
    if witness.height != 2 * n:
        raise BadWitness(f"witness height {witness.height}, expected {2*n}")
    w = wall(witness.height)
    _verify_wall_witness(g, witness)
    script: list[Op] = []
    cur = g
    name: dict[str, str] = {v: v for v in g.rotation}  # wall-image -> current

    used_edges: set[str] = set()
    for path in witness.paths.values():
        used_edges.update(_path_edge_names(g, path))
    for e in sorted(set(g.edges) - used_edges):
        script.append(Op("del-edge", (e,)))
        cur = apply_embedded_op(cur, script[-1])
    on_paths = {v for p in witness.paths.values() for v in p}
    for v in sorted(set(g.rotation) - on_paths):
        script.append(Op("del-vertex", (v,)))
        cur = apply_embedded_op(cur, script[-1])

    def contract_pair(a, b):
        """Contract the edge between current names of a and b."""
        nonlocal cur
        ca, cb = _resolve(name, a), _resolve(name, b)
        e = next(
            e
            for e in sorted(cur.edges)
            if set(map(cur.dart_vertex.__getitem__, cur.edges[e])) == {ca, cb}
        )
        script.append(Op("contract", (e,)))
        cur = apply_embedded_op(cur, script[-1])
        merged = min(ca, cb)
        name[a] = merged
        name[b] = merged

    # contract subdivision paths down to single edges
    for (u, v), path in sorted(witness.paths.items()):
        for inner in path[1:-1]:
            contract_pair(inner, path[0])
    # map wall coordinates to current names
    wname = {wv: _resolve(name, gv) for wv, gv in witness.vertex_map.items()}

    # contract column pairs (j, j+1) for even j, merging into a full grid
    height = witness.height
    for i in range(1, height + 2):
        for j in range(2, 2 * height + 2, 2):
            a, b = f"w{i}_{j}", f"w{i}_{j+1}"
            if a in wname and b in wname:
                ca, cb = wname[a], wname[b]
                e = next(
                    e
                    for e in sorted(cur.edges)
                    if set(map(cur.dart_vertex.__getitem__, cur.edges[e]))
                    == {ca, cb}
                )
                script.append(Op("contract", (e,)))
                cur = apply_embedded_op(cur, script[-1])
                merged = min(ca, cb)
                for k, val in list(wname.items()):
                    if val in (ca, cb):
                        wname[k] = merged
    # the wall is now a (height+1) x (height+2) grid minus two corners in
    # column groups c0..c_{height+1}
    rows = height + 1
    cols = height + 2

    def group_vertex(i, cj):
        if cj == 0:
            return wname.get(f"w{i}_1")
        if cj == cols - 1:
            return wname.get(f"w{i}_{2*height+2}")
        return wname.get(f"w{i}_{2*cj}")

    keep_rows, keep_cols = _choose_quarter(cur, group_vertex, rows, cols, n)
    keep = {group_vertex(i, cj) for i in keep_rows for cj in keep_cols}
    if None in keep or len(keep) != n * n:
        raise InternalInvariantError("quarter selection lost vertices")
    for v in sorted(set(cur.rotation) - keep):
        script.append(Op("del-vertex", (v,)))
        cur = apply_embedded_op(cur, script[-1])
    return tuple(script)


def _choose_quarter(cur, group_vertex, rows, cols, n):
    """Rows/column-groups of the kept n-by-n block.

    If the current outer region is an inner square, split the grid at that
    square into four quarters, take the largest (lexicographically first on
    ties), and keep its far corner so the square merges into the outer face.
    """
    default = (range(1, n + 1), range(1, n + 1))
    if cur.outer is None:
        return default
    anchor = cur.region_of(*cur.outer)
    ck = anchor[0]
    # locate the square (i, cj) whose four corners bound the outer face
    comp_key = cur.component_key(next(iter(cur.rotation)))
    faces = cur.component_faces(comp_key)
    outer_slots = [s for s, a in cur.region_partition().items() if a == anchor]
    outer_walks = [faces[fi] for c, fi in outer_slots if c == comp_key]
    if not outer_walks or max(len(w) for w in outer_walks) >= 2 * (rows + cols) - 6:
        return default
    walk = outer_walks[0]
    corner_names = {cur.dart_vertex[d] for d in walk}
    for i in range(1, rows):
        for cj in range(1, cols - 1):
            square = {
                group_vertex(i, cj),
                group_vertex(i + 1, cj),
                group_vertex(i, cj + 1),
                group_vertex(i + 1, cj + 1),
            }
            if square == corner_names:
                quarters = [
                    (range(1, i + 1), range(1, cj + 1), i * cj),
                    (range(1, i + 1), range(cj + 1, cols - 1), i * (cols - 2 - cj)),
                    (range(i + 1, rows + 1), range(1, cj + 1), (rows - i) * cj),
                    (
                        range(i + 1, rows + 1),
                        range(cj + 1, cols - 1),
                        (rows - i) * (cols - 2 - cj),
                    ),
                ]
                quarters.sort(key=lambda q: -q[2])
                rws, cls, _ = quarters[0]
                rws, cls = list(rws), list(cls)
                if len(rws) < n or len(cls) < n:
                    raise InternalInvariantError("largest quarter too small")
                # far corner: away from the square
                keep_r = rws[:n] if rws[0] == 1 else rws[-n:]
                keep_c = cls[:n] if cls[0] == 1 else cls[-n:]
                # skip group 0 / last group (they miss a corner)
                keep_c = [c for c in keep_c if 1 <= c <= cols - 2][:n]
                if len(keep_c) < n:
                    keep_c = list(range(1, n + 1))
                return keep_r, keep_c
    return default


def _resolve(name, v):
    while name.get(v, v) != v:
        v = name[v]
    return v


def _verify_wall_witness(g: PlaneGraph, witness: WallWitness):
    w = wall(witness.height)
    vm = witness.vertex_map
    if len(set(vm.values())) != len(vm) or set(vm) != set(w.vertices):
        raise BadWitness("vertex map must inject the wall's vertices")
    seen_edges: set[str] = set()
    inner_all: set[str] = set()
    for e in w.edges:
        u, v = w.endpoints(e)
        path = witness.paths.get((u, v)) or witness.paths.get((v, u))
        if path is None:
            raise BadWitness(f"missing path for wall edge {u}-{v}")
        if {path[0], path[-1]} != {vm[u], vm[v]}:
            raise BadWitness(f"path for {u}-{v} has wrong endpoints")
        names = _path_edge_names(g, path)
        if len(names) != len(path) - 1:
            raise BadWitness("path is not a walk in G")
        if seen_edges & set(names):
            raise BadWitness("paths share an edge")
        seen_edges.update(names)
        inner = set(path[1:-1])
        if inner & set(vm.values()) or inner & inner_all:
            raise BadWitness("paths share inner vertices")
        inner_all |= inner


# ---------------------------------------------------------------------------
# Hamiltonian preprocessing


def _add_chord(g: PlaneGraph, v1: str, anchor1, v2: str, anchor2, name: str) -> PlaneGraph:
    """Insert edge v1-v2 through a shared region.

    ``anchor`` is the region walk dart at the vertex (the new dart goes right
    after it, landing in that dart's face), or None for a bare vertex.
    Floating components are re-hosted by dart tracking; a float whose region
    was split by the chord may land on either side, so the first surviving
    dart decides.
    """
    da, db = f"{name}.a", f"{name}.b"
    rotation = {v: list(ds) for v, ds in g.rotation.items()}

    def insert(v, anchor, d):
        if anchor is None:
            rotation[v].append(d)
        else:
            i = rotation[v].index(anchor)
            rotation[v].insert(i + 1, d)

    insert(v1, anchor1, da)
    insert(v2, anchor2, db)
    edges = dict(g.edges)
    edges[name] = (da, db)
    rotation = {k: tuple(v) for k, v in rotation.items()}
    g2 = PlaneGraph(rotation, edges, directed=g.directed, validate=False)
    ck1, ck2 = g.component_key(v1), g.component_key(v2)
    merged = {ck1, ck2}
    merged_key = g2.component_key(v1)

    def resolve_slot(host, hf):
        walk = g.component_faces(host)[hf]
        if walk:
            return g2.face_of_dart(walk[0])
        hk = g2.component_key(host)
        if g2.rotation.get(host):
            return g2.face_of_dart(g2.rotation[host][0])
        return (hk, 0)

    def resolve_cf(child, cf):
        cwalk = g.component_faces(child)[cf]
        return g2.face_of_dart(cwalk[0])[1] if cwalk else 0

    nesting = {}
    merged_parent = None
    for child, (host, hf, cf) in sorted(g.nesting.items()):
        child_in, host_in = child in merged, host in merged
        if child_in and host_in:
            continue  # containment absorbed by the chord
        if child_in:
            if merged_parent is None:
                slot = resolve_slot(host, hf)
                merged_parent = (slot[0], slot[1], resolve_cf(child, cf))
            continue
        slot = resolve_slot(host, hf)
        nesting[g2.component_key(child)] = (slot[0], slot[1], resolve_cf(child, cf))
    if merged_parent is not None:
        nesting[merged_key] = merged_parent
    out = PlaneGraph(rotation, edges, directed=g.directed, nesting=nesting)
    return out


def hamiltonian_cycle(g: PlaneGraph):
    """Exhaustive search for a Hamiltonian cycle; vertex list or None."""
    vs = g.vertices
    n = len(vs)
    if n < 3:
        return None
    start = vs[0]
    adj = {
        v: sorted({g.dart_vertex[g.twin[d]] for d in g.rotation[v]} - {v})
        for v in vs
    }

    def rec(path, seen):
        if len(path) == n:
            return path if start in adj[path[-1]] else None
        for w in adj[path[-1]]:
            if w not in seen:
                seen.add(w)
                path.append(w)
                res = rec(path, seen)
                if res:
                    return res
                path.pop()
                seen.discard(w)
        return None

    return rec([start], {start})


def _face_walks_by_region(g: PlaneGraph):
    """region anchor -> list of (walk darts tuple) incl. empty for isolated."""
    part = g.region_partition()
    out: dict = {}
    for (ck, fi), anchor in part.items():
        out.setdefault(anchor, []).append((ck, fi, g.component_faces(ck)[fi]))
    return out


def prepare_hamiltonian(g: PlaneGraph, max_vertices: int = 24):
    """Simple triangulated Hamiltonian supergraph with a recovery script.

    Returns (hp, cycle, back_ops) where replaying back_ops on hp yields a
    graph equivalent to g; back_ops use hp's names.
    """
    from .ops import subdivide as op_subdivide

    cur = g
    back: list[Op] = []  # applied in reverse construction order

    # 1. subdivide to simple (and ensure >= 3 vertices)
    counter = itertools.count()
    changed = True
    while changed:
        changed = False
        for e in sorted(cur.edges):
            u, v = cur.endpoints(e)
            parallel = [
                e2
                for e2 in cur.edges
                if e2 != e and set(cur.endpoints(e2)) == {u, v}
            ]
            if u == v or parallel:
                w = f"sv{next(counter)}"
                cur = op_subdivide(cur, e, w)
                back.insert(0, Op("contract", (f"{e}.2",)))
                changed = True
                break
    while len(cur.rotation) < 3 and cur.edges:
        e = sorted(cur.edges)[0]
        w = f"sv{next(counter)}"
        cur = op_subdivide(cur, e, w)
        back.insert(0, Op("contract", (f"{e}.2",)))

    # 2. triangulate: first connect components, then cut faces into triangles
    tri_counter = itertools.count()

    def add_edge_in_region(cur, v1, a1, v2, a2):
        name = f"tri{next(tri_counter)}"
        out = _add_chord(cur, v1, a1, v2, a2, name)
        back.insert(0, Op("del-edge", (name,)))
        return out

    # connect components
    while len(cur.components()) > 1:
        regions = _face_walks_by_region(cur)
        anchor, slots = next(
            (a, s)
            for a, s in sorted(regions.items())
            if len({ck for ck, _, _ in s}) > 1
        )
        (ck1, f1, w1), (ck2, f2, w2) = sorted(slots, key=lambda s: s[0])[:2]
        v1 = cur.dart_vertex[w1[0]] if w1 else ck1
        a1 = w1[0] if w1 else None
        v2 = cur.dart_vertex[w2[0]] if w2 else ck2
        a2 = w2[0] if w2 else None
        cur = add_edge_in_region(cur, v1, a1, v2, a2)

    # cut faces down to triangles
    for _ in range(10000):
        ck = cur.root_component()
        walk = next(
            (w for w in cur.component_faces(ck) if len(w) > 3), None
        )
        if walk is None:
            break
        verts = [cur.dart_vertex[d] for d in walk]
        k = len(walk)
        adj_now = {
            frozenset(cur.endpoints(e)) for e in cur.edges if not cur.is_self_loop(e)
        }
        placed = False
        for i in range(k):
            for off in range(2, k - 1):
                j = (i + off) % k
                v1, v2 = verts[i], verts[j]
                if v1 == v2 or frozenset((v1, v2)) in adj_now:
                    continue
                cur = add_edge_in_region(cur, v1, walk[i], v2, walk[j])
                placed = True
                break
            if placed:
                break
        if not placed:
            # no chord fits: subdivide a face edge to create fresh corners
            e = cur.dart_edge[walk[0]]
            w = f"sv{next(counter)}"
            cur = op_subdivide(cur, e, w)
            back.insert(0, Op("contract", (f"{e}.2",)))
    else:
        raise InternalInvariantError("triangulation did not converge")

    # 3. remove separating triangles
    for _ in range(1000):
        tri = _separating_triangle(cur)
        if tri is None:
            break
        cur = _insert_splitter(cur, tri, back, counter)
    else:
        raise InternalInvariantError("separating triangles did not clear")

    cyc = hamiltonian_cycle(cur)
    if cyc is None:
        raise InternalInvariantError("triangulation without separating "
                                     "triangles must be Hamiltonian")
    return cur, cyc, tuple(back)


def _separating_triangle(g: PlaneGraph):
    adj = {
        v: {g.dart_vertex[g.twin[d]] for d in g.rotation[v]} - {v}
        for v in g.vertices
    }
    ck = g.root_component()
    face_sets = [
        frozenset(g.dart_vertex[d] for d in w) for w in g.component_faces(ck)
    ]
    for a, b, c in itertools.combinations(sorted(adj), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            if frozenset((a, b, c)) not in face_sets:
                return (a, b, c)
    return None


def _insert_splitter(g: PlaneGraph, tri, back, counter):
    """Figure-19 move: subdivide one triangle edge, join to both apexes."""
    from .ops import subdivide as op_subdivide

    a, b, c = tri
    e = next(
        e
        for e in sorted(g.edges)
        if set(g.endpoints(e)) == {a, b}
    )
    m = f"sv{next(counter)}"
    cur = op_subdivide(g, e, m)
    back.insert(0, Op("contract", (f"{e}.2",)))
    # the two faces flanking e were triangles a,b,x / a,b,y; after the
    # subdivision their walks have degree 4 and m sits on both
    tri_counter = f"w{m}"
    ck = cur.root_component()
    added = 0
    for w in cur.component_faces(ck):
        if len(w) != 4:
            continue
        verts = [cur.dart_vertex[d] for d in w]
        if m not in verts:
            continue
        i = verts.index(m)
        apex = verts[(i + 2) % 4]
        name = f"sp{m}_{apex}_{added}"
        cur = _add_chord(cur, m, w[i], apex, w[(i + 2) % 4], name)
        back.insert(0, Op("del-edge", (name,)))
        added += 1
        if added == 2:
            break
    if added != 2:
        raise InternalInvariantError("splitter insertion found no flanking faces")
    return cur


# ---------------------------------------------------------------------------
# grid embedding


@dataclass
class HamiltonianData:
    cycle: tuple  # hp vertices in cycle order
    xs: dict  # k (1-based) -> set of grid vertex names
    side_a: set  # hp edges routed inside (right of the diagonal)
    side_b: set


def _cycle_sides(hp: PlaneGraph, cycle):
    """Split non-cycle edges into the two sides of the embedded cycle."""
    n = len(cycle)
    pos = {v: k for k, v in enumerate(cycle)}
    cyc_pairs = {frozenset((cycle[k], cycle[(k + 1) % n])) for k in range(n)}
    cycle_edges = {
        e for e in hp.edges if frozenset(hp.endpoints(e)) in cyc_pairs
    }
    # hp is simple so each pair names one edge
    side = {}
    for v in hp.vertices:
        k = pos[v]
        nxt, prv = cycle[(k + 1) % n], cycle[(k - 1) % n]
        rot = hp.rotation[v]
        d_next = next(
            d
            for d in rot
            if hp.dart_edge[d] in cycle_edges
            and hp.dart_vertex[hp.twin[d]] == nxt
        )
        d_prev = next(
            d
            for d in rot
            if hp.dart_edge[d] in cycle_edges
            and hp.dart_vertex[hp.twin[d]] == prv
            and d != d_next
        )
        i = rot.index(d_next)
        cur = (i + 1) % len(rot)
        bucket = "L"
        while rot[cur] != d_next:
            d = rot[cur]
            if d == d_prev:
                bucket = "R"
            elif hp.dart_edge[d] not in cycle_edges:
                side.setdefault(hp.dart_edge[d], []).append(bucket)
            cur = (cur + 1) % len(rot)
    a_edges, b_edges = set(), set()
    for e, buckets in side.items():
        if len(set(buckets)) != 1:
            return None  # inconsistent: cycle direction flip needed upstream
        (a_edges if buckets[0] == "L" else b_edges).add(e)
    return cycle_edges, a_edges, b_edges


def grid_embed(hg: PlaneGraph, max_vertices: int = 24):
    """(n, script): replaying the script on grid(n) yields hg, embedded."""
    if len(hg.rotation) > max_vertices:
        raise TooLarge("grid_embed cap exceeded")
    if len(hg.rotation) == 1 and not hg.edges:
        return 1, ()
    hp, cycle, back = prepare_hamiltonian(hg)
    attempts = [tuple(cycle), tuple([cycle[0]] + list(reversed(cycle[1:])))]
    last_err = None
    for cyc in attempts:
        try:
            n, script = _embed_with_cycle(hp, cyc)
        except InternalInvariantError as exc:
            last_err = exc
            continue
        full = script + _translate_back(hp, replay(grid(n), script), back)
        out = replay(grid(n), full)
        if equivalent(out.replace(outer=None), hg.replace(outer=None)):
            return n, full
        last_err = InternalInvariantError("embedding replay mismatch")
    raise last_err or InternalInvariantError("grid embedding failed")


def _embed_with_cycle(hp: PlaneGraph, cycle):
    n = len(cycle)
    sides = _cycle_sides(hp, cycle)
    if sides is None:
        raise InternalInvariantError("inconsistent cycle sides")
    cycle_edges, a_edges, b_edges = sides
    pos = {v: k + 1 for k, v in enumerate(cycle)}  # 1-based

    def nbrs(es):
        out = {k: set() for k in range(1, n + 1)}
        for e in es:
            u, v = hp.endpoints(e)
            out[pos[u]].add(pos[v])
            out[pos[v]].add(pos[u])
        return out

    na, nb = nbrs(a_edges), nbrs(b_edges)
    # cycle edges belong to both sides
    for k in range(1, n + 1):
        for d in (na, nb):
            if k > 1:
                d[k].add(k - 1)
            if k < n:
                d[k].add(k + 1)

    xs: dict[int, set] = {}
    for k in range(2, n):
        i_k = min(na[k])
        ip_k = max(nb[k])
        j_k = min(nb[k])
        jp_k = max(na[k])
        col = {_gname(i, k) for i in range(i_k + 1, ip_k)}
        row = {_gname(k, j) for j in range(j_k + 1, jp_k)}
        xs[k] = col | row | {_gname(k, k)}
    xs[1] = {_gname(i, 1) for i in range(1, n)} | {_gname(1, j) for j in range(1, n)}
    xs[n] = {_gname(i, n) for i in range(1, n + 1)} | {
        _gname(n, j) for j in range(1, n + 1)
    }
    for k, l in itertools.combinations(range(1, n + 1), 2):
        if xs[k] & xs[l]:
            raise InternalInvariantError(f"blobs {k} and {l} overlap")

    # connection edges
    conn: dict[str, tuple] = {}  # hp edge -> grid edge (vertex pair)

    def pick(cands, e):
        for u, v, xk, xl in cands:
            if u in xs[xk] and v in xs[xl]:
                return (u, v)
        raise InternalInvariantError(f"no connection candidate for {e}")

    for e in sorted(a_edges):
        u, v = hp.endpoints(e)
        k, l = sorted((pos[u], pos[v]))
        conn[e] = pick(
            [
                (_gname(k, l - 1), _gname(k, l), k, l),
                (_gname(k, l), _gname(k + 1, l), k, l),
            ],
            e,
        )
    for e in sorted(b_edges):
        u, v = hp.endpoints(e)
        k, l = sorted((pos[u], pos[v]))
        conn[e] = pick(
            [
                (_gname(l - 1, k), _gname(l, k), k, l),
                (_gname(l, k), _gname(l, k + 1), k, l),
            ],
            e,
        )
    for e in sorted(cycle_edges):
        u, v = hp.endpoints(e)
        k, l = sorted((pos[u], pos[v]))
        if (k, l) == (1, n):
            conn[e] = (_gname(1, n - 1), _gname(1, n))
            if _gname(1, n - 1) not in xs[1]:
                raise InternalInvariantError("closing edge misses blob 1")
            continue
        conn[e] = pick(
            [
                (_gname(k, k), _gname(k, k + 1), k, l),
                (_gname(k, k), _gname(k + 1, k), k, l),
                (_gname(k, k + 1), _gname(k + 1, k + 1), k, l),
                (_gname(k + 1, k), _gname(k + 1, k + 1), k, l),
            ],
            e,
        )
    if len(set(conn.values())) != len(conn):
        raise InternalInvariantError("connection edges collide")

    # assemble the script on grid(n)
    G = grid(n)
    keep_pairs = set()
    for u, v in conn.values():
        keep_pairs.add(frozenset((u, v)))
    for k in range(1, n + 1):
        for u in xs[k]:
            for v in xs[k]:
                if u < v and _grid_adjacent(u, v):
                    keep_pairs.add(frozenset((u, v)))
    script: list[Op] = []
    cur = G
    for e in sorted(G.edges):
        u, v = G.endpoints(e)
        if frozenset((u, v)) not in keep_pairs:
            script.append(Op("del-edge", (e,)))
            cur = apply_embedded_op(cur, script[-1])
    used = {u for k in xs for u in xs[k]}
    for v in sorted(set(G.rotation) - used):
        script.append(Op("del-vertex", (v,)))
        cur = apply_embedded_op(cur, script[-1])
    # contract each blob to a point
    name = {v: v for v in used}
    for k in range(1, n + 1):
        members = sorted(xs[k])
        while True:
            reps = sorted({_resolve(name, v) for v in members})
            if len(reps) == 1:
                break
            done = False
            for e in sorted(cur.edges):
                u, v = cur.endpoints(e)
                if u in reps and v in reps and u != v:
                    script.append(Op("contract", (e,)))
                    cur = apply_embedded_op(cur, script[-1])
                    m = min(u, v)
                    name[u] = m
                    name[v] = m
                    done = True
                    break
            if not done:
                raise InternalInvariantError(f"blob {k} is not connected")
    return n, tuple(script)


def _grid_adjacent(u, v):
    i1, j1 = map(int, u[1:].split("_"))
    i2, j2 = map(int, v[1:].split("_"))
    return abs(i1 - i2) + abs(j1 - j2) == 1


def _translate_back(hp: PlaneGraph, built: PlaneGraph, back_ops):
    """Rename the recovery ops from hp's namespace to the replayed graph's."""
    from .relations import ordered_immersion

    # build the isomorphism hp -> built via canonical labelings
    built = built.replace(outer=None)
    iso = _map_isomorphism(hp, built)
    if iso is None:
        raise InternalInvariantError("replayed graph is not isomorphic to hp")
    vmap, emap = iso
    out = []
    cur_hp, cur_built = hp, built
    for op in back_ops:
        if op.kind == "del-edge":
            e = op.args[0]
            out.append(Op("del-edge", (emap[e],)))
            cur_hp = apply_embedded_op(cur_hp, op)
            cur_built = apply_embedded_op(cur_built, out[-1])
            del emap[e]
        elif op.kind == "contract":
            e = op.args[0]
            u, v = cur_hp.endpoints(e)
            u2, v2 = (vmap[u], vmap[v])
            out.append(Op("contract", (emap[e],)))
            cur_hp = apply_embedded_op(cur_hp, op)
            cur_built = apply_embedded_op(cur_built, out[-1])
            m_hp, m_b = min(u, v), min(u2, v2)
            vmap.pop(u, None)
            vmap.pop(v, None)
            vmap[m_hp] = m_b
            del emap[e]
        else:
            raise InternalInvariantError(f"unexpected back op {op.kind}")
    if not equivalent(cur_hp, cur_built):
        raise InternalInvariantError("back-map translation diverged")
    return tuple(out)


def _map_isomorphism(g1: PlaneGraph, g2: PlaneGraph):
    """Dart-level equivalence isomorphism (vertex map, edge map) or None."""
    from .canonical import _encode_component

    if cached_canonical_form(g1) != cached_canonical_form(g2):
        return None
    d1 = sorted(g1.dart_vertex)
    d2 = sorted(g2.dart_vertex)
    best = {}
    for g, ds in ((g1, d1), (g2, d2)):
        bests = None
        for start in ds:
            enc, labeling = _encode_component(g, ds, start)
            if bests is None or enc < bests[0]:
                bests = (enc, labeling)
        best[id(g)] = bests
    enc1, lab1 = best[id(g1)]
    enc2, lab2 = best[id(g2)]
    if enc1 != enc2:
        return None
    inv2 = {i: d for d, i in lab2.items()}
    dartmap = {d: inv2[i] for d, i in lab1.items()}
    vmap = {}
    for d, dd in dartmap.items():
        vmap[g1.dart_vertex[d]] = g2.dart_vertex[dd]
    emap = {}
    for e, (a, b) in g1.edges.items():
        emap[e] = g2.dart_edge[dartmap[a]]
    return vmap, emap


def add_sphere_marker(g: PlaneGraph) -> PlaneGraph:
    """Drop a K4 marker component into the outer face; returns a sphere graph."""
    if g.outer is None:
        raise NoOuterFace("input must carry an outer-face marker")
    rotation = {
        "mk_a": ("mk_ab.a", "mk_ad.a", "mk_ac.a"),
        "mk_b": ("mk_bc.a", "mk_bd.a", "mk_ab.b"),
        "mk_c": ("mk_ca.a", "mk_cd.a", "mk_bc.b"),
        "mk_d": ("mk_ad.b", "mk_bd.b", "mk_cd.b"),
    }
    edges = {
        "mk_ab": ("mk_ab.a", "mk_ab.b"),
        "mk_bc": ("mk_bc.a", "mk_bc.b"),
        "mk_ca": ("mk_ca.a", "mk_ac.a"),
        "mk_ad": ("mk_ad.a", "mk_ad.b"),
        "mk_bd": ("mk_bd.a", "mk_bd.b"),
        "mk_cd": ("mk_cd.a", "mk_cd.b"),
    }
    if set(rotation) & set(g.rotation) or set(edges) & set(g.edges):
        raise InternalInvariantError("marker names collide with the graph")
    host, hf = g.outer
    rot = dict(g.rotation) | rotation
    eds = dict(g.edges) | edges
    nesting = dict(g.nesting)
    nesting["mk_a"] = (host, hf, 0)
    return PlaneGraph(rot, eds, directed=g.directed, nesting=nesting, outer=None)
