"""Embedded minor and immersion deciders with replayable witnesses.

Edge images are walks: dart sequences chaining through shared vertices,
edge-disjoint across the family, never passing through image vertices, and
free to revisit other vertices tangentially.  A family is transverse at a
vertex when two of its visit chords interlace in the rotation there (chords of
the same walk included) or an inner vertex of one walk is an endpoint of
another; it is tangent otherwise, and tangent families are exactly the ones a
sequence of embedded lifts can realize.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .canonical import cached_canonical_form, equivalent
from .errors import (
    InternalInvariantError,
    NotEdgeDisjoint,
    TooLarge,
    UndirectedAmbiguity,
)
from .ops import Op, apply_embedded_op, lift, replay
from .planegraph import PlaneGraph

DEFAULT_DART_CAP = 14


@dataclass(frozen=True)
class PathFamily:
    walks: tuple  # tuple of dart tuples
    directed: bool = False


def walk_endpoints(g: PlaneGraph, walk) -> tuple[str, str]:
    return g.dart_vertex[walk[0]], g.dart_vertex[g.twin[walk[-1]]]


def _check_family(g: PlaneGraph, fam: PathFamily):
    used = set()
    for walk in fam.walks:
        for d in walk:
            e = g.dart_edge[d]
            if e in used:
                raise NotEdgeDisjoint(f"edge {e} used twice")
            used.add(e)
        for a, b in zip(walk, walk[1:]):
            if g.dart_vertex[g.twin[a]] != g.dart_vertex[b]:
                raise InternalInvariantError("walk darts do not chain")
        if fam.directed and g.directed:
            for d in walk:
                if g.direction_of(d) != "tail":
                    raise InternalInvariantError("directed walk must follow tails")


def _visits(g: PlaneGraph, fam: PathFamily):
    """Per-vertex pass-through chords: (vertex, walk idx, arrive, depart)."""
    out = []
    for i, walk in enumerate(fam.walks):
        for a, b in zip(walk, walk[1:]):
            arr = g.twin[a]
            out.append((g.dart_vertex[arr], i, arr, b))
    return out


def _interlaced(rotation, c1, c2) -> bool:
    a1, b1 = c1
    a2, b2 = c2
    idx = {d: i for i, d in enumerate(rotation)}
    i, j = idx[a1], idx[b1]
    arc = set()
    k = (i + 1) % len(rotation)
    while k != j:
        arc.add(rotation[k])
        k = (k + 1) % len(rotation)
    return (a2 in arc) != (b2 in arc)


def classify_family(g: PlaneGraph, fam: PathFamily):
    """('tangent', None) or ('transverse', vertex) at the first bad vertex."""
    _check_family(g, fam)
    visits = _visits(g, fam)
    by_vertex: dict[str, list] = {}
    for v, i, arr, dep in visits:
        by_vertex.setdefault(v, []).append((i, arr, dep))
    endpoints: dict[str, set] = {}
    for i, walk in enumerate(fam.walks):
        s, t = walk_endpoints(g, walk)
        endpoints.setdefault(s, set()).add(i)
        endpoints.setdefault(t, set()).add(i)
    for v in sorted(set(by_vertex) | set(endpoints)):
        chords = by_vertex.get(v, [])
        enders = endpoints.get(v, set())
        for i, _, _ in chords:
            if enders - {i} or (i in enders):
                return ("transverse", v)
        rot = g.rotation[v]
        for (i1, a1, d1), (i2, a2, d2) in itertools.combinations(chords, 2):
            if _interlaced(rot, (a1, d1), (a2, d2)):
                return ("transverse", v)
    return ("tangent", None)


# ---------------------------------------------------------------------------
# path swaps (the circular word algorithm)


def word_reduce(word):
    """Reduce a circular word of +i / -i letters by swaps and cancellations.

    Greedy rounds: scan left to right swapping each (i, j^-1) adjacency by
    exchanging j^-1 with i^-1, then cancel all adjacent inverse pairs; repeat.
    Returns the list of states, starting with the input and ending empty.
    """
    w = list(word)
    states = [tuple(w)]

    def find_swap():
        n = len(w)
        for t in range(n):
            a, b = w[t], w[(t + 1) % n]
            if a > 0 and b < 0 and b != -a:
                return t
        return None

    for _ in range(len(w) * len(w) + 1):
        t = find_swap()
        if t is not None:
            n = len(w)
            j_pos = (t + 1) % n
            i_inv = -w[t]
            i_pos = w.index(i_inv)
            w[j_pos], w[i_pos] = w[i_pos], w[j_pos]
            states.append(tuple(w))
            continue
        # cancellation cascade
        changed = True
        while changed and w:
            changed = False
            n = len(w)
            for t in range(n):
                if w[t] == -w[(t + 1) % n]:
                    for k in sorted(((t + 1) % n, t), reverse=True):
                        del w[k]
                    states.append(tuple(w))
                    changed = True
                    break
        if find_swap() is None:
            break
    if w:
        raise InternalInvariantError(f"word did not reduce: {w}")
    return states


def make_tangent(g: PlaneGraph, fam: PathFamily, v: str) -> PathFamily:
    """Path-swap the family until its visits at v are non-interlaced."""
    _check_family(g, fam)
    walks = [list(w) for w in fam.walks]
    if not fam.directed:
        oriented = []
        for w in walks:
            s, t = walk_endpoints(g, tuple(w))
            if s == t:
                raise UndirectedAmbiguity(
                    "closed walk needs an explicit direction for path swaps"
                )
            if t < s:
                w = [g.twin[d] for d in reversed(w)]
            oriented.append(w)
        walks = oriented

    for _ in range(4 * sum(len(w) for w in walks) ** 2 + 4):
        visits = []
        for i, w in enumerate(walks):
            for p in range(len(w) - 1):
                arr = g.twin[w[p]]
                if g.dart_vertex[arr] == v:
                    visits.append((i, p, arr, w[p + 1]))
        rot = g.rotation[v]
        # word around v: visit k contributes +k at its arrive dart and -k at
        # its depart dart
        letter = {}
        for k, (i, p, arr, dep) in enumerate(visits, start=1):
            letter[arr] = k
            letter[dep] = -k
        word = [letter[d] for d in rot if d in letter]
        swap = None
        n = len(word)
        for t in range(n):
            a, b = word[t], word[(t + 1) % n]
            if a > 0 and b < 0 and b != -a:
                swap = (a, -b)
                break
        if swap is None:
            break
        ki, kj = swap
        i1, p1, _, _ = visits[ki - 1]
        i2, p2, _, _ = visits[kj - 1]
        if i1 == i2:
            w = walks[i1]
            lo, hi = sorted((p1, p2))
            walks[i1] = w[: lo + 1] + w[hi + 1 :]
        else:
            w1, w2 = walks[i1], walks[i2]
            walks[i1] = w1[: p1 + 1] + w2[p2 + 1 :]
            walks[i2] = w2[: p2 + 1] + w1[p1 + 1 :]
    out = PathFamily(tuple(tuple(w) for w in walks), fam.directed)
    _check_family(g, out)
    return out


# ---------------------------------------------------------------------------
# ordered immersion search


@dataclass
class ImmersionWitness:
    vertex_map: dict
    walks: dict  # H edge -> dart tuple in G


def _dart_count(g: PlaneGraph) -> int:
    return len(g.dart_vertex)


def ordered_immersion(
    h: PlaneGraph,
    g: PlaneGraph,
    require_tangent: bool = False,
    directed: bool = False,
    max_darts: int = DEFAULT_DART_CAP,
    pins: Optional[dict] = None,
    edge_pins: Optional[dict] = None,
) -> Optional[ImmersionWitness]:
    """Exhaustive search for an order-respecting edge-disjoint immersion."""
    if max_darts is not None and _dart_count(h) + _dart_count(g) > 2 * max_darts:
        raise TooLarge("dart cap exceeded")
    if directed and not (h.directed and g.directed):
        raise InternalInvariantError("directed search needs digraphs")
    if len(h.edges) > len(g.edges) or len(h.rotation) > len(g.rotation):
        return None

    hedges = _bfs_edge_order(h)
    pins = dict(pins or {})
    edge_pins = dict(edge_pins or {})

    gverts = g.vertices
    state_map: dict = dict(pins)
    used_edges: set = set()
    inner_vertices: set = set()
    walks: dict = {}

    def candidates(u):
        if u in state_map:
            return [state_map[u]]
        taken = set(state_map.values())
        return [
            x
            for x in gverts
            if x not in taken
            and x not in inner_vertices
            and g.degree(x) >= h.degree(u)
        ]

    def rotation_ok(u):
        gv = state_map[u]
        hdarts = h.rotation[u]
        mapped = []
        for d in hdarts:
            e = h.dart_edge[d]
            if e not in walks:
                return True  # incomplete; checked again later
            walk = walks[e]
            a, b = h.edges[e]
            if h.is_self_loop(e):
                # two darts at u: dartA maps to walk start, dartB to its end
                gd = walk[0] if d == a else g.twin[walk[-1]]
            elif d == a:
                gd = walk[0]
            else:
                gd = g.twin[walk[-1]]
            mapped.append(gd)
        rot = g.rotation[gv]
        pos = []
        for gd in mapped:
            if gd not in rot:
                return False
            pos.append(rot.index(gd))
        if len(set(pos)) != len(pos):
            return False
        if len(pos) <= 2:
            return True
        k = pos.index(min(pos))
        arranged = pos[k:] + pos[:k]
        return all(a < b for a, b in zip(arranged, arranged[1:]))

    def walk_candidates(e):
        a, b = h.edges[e]
        u, v = h.dart_vertex[a], h.dart_vertex[b]
        gu, gv = state_map[u], state_map[v]
        if e in edge_pins:
            ge = edge_pins[e]
            d1, d2 = g.edges[ge]
            if ge in used_edges:
                return
            if g.dart_vertex[d1] == gu and g.dart_vertex[d2] == gv:
                yield (d1,)
            elif not directed and g.dart_vertex[d2] == gu and g.dart_vertex[d1] == gv:
                yield (d2,)
            return
        # DFS over dart sequences from gu to gv
        budget = len(g.edges) - len(used_edges)

        def extend(path, at, used_local):
            if at == gv and path:
                yield tuple(path)
                return  # continuing would pass through an image vertex
            if len(path) >= budget:
                return
            for d in g.rotation[at]:
                e2 = g.dart_edge[d]
                if e2 in used_edges or e2 in used_local:
                    continue
                if directed and g.direction_of(d) != "tail":
                    continue
                nxt = g.dart_vertex[g.twin[d]]
                if nxt != gv and nxt in state_map.values():
                    continue  # walks may not pass through image vertices
                path.append(d)
                used_local.add(e2)
                yield from extend(path, nxt, used_local)
                used_local.discard(e2)
                path.pop()

        yield from extend([], gu, set())

    def tangency_ok(final=False):
        fam = PathFamily(tuple(walks[e] for e in sorted(walks)), directed)
        try:
            kind, _ = classify_family(g, fam)
        except NotEdgeDisjoint:
            return False
        return kind == "tangent"

    def rec(ei):
        if ei == len(hedges):
            for u in h.rotation:
                if u not in state_map:
                    for x in candidates(u):
                        state_map[u] = x
                        res = rec(ei)
                        if res:
                            return res
                        del state_map[u]
                    return None
            for u in h.rotation:
                if not rotation_ok(u):
                    return None
            if require_tangent and not tangency_ok(final=True):
                return None
            return ImmersionWitness(dict(state_map), dict(walks))
        e = hedges[ei]
        a, b = h.edges[e]
        u, v = h.dart_vertex[a], h.dart_vertex[b]
        for gu in candidates(u):
            placed_u = u not in state_map
            state_map[u] = gu
            for gv in candidates(v) if v != u else [gu]:
                placed_v = v not in state_map
                state_map[v] = gv
                for walk in walk_candidates(e):
                    inter = {
                        g.dart_vertex[d]
                        for d in walk[1:]
                    }
                    inter -= {state_map[v]}
                    if inter & set(state_map.values()):
                        continue
                    walks[e] = walk
                    used_edges.update(g.dart_edge[d] for d in walk)
                    added_inner = inter - inner_vertices
                    inner_vertices.update(added_inner)
                    ok = rotation_ok(u) and rotation_ok(v)
                    if ok and require_tangent:
                        ok = tangency_ok()
                    if ok:
                        res = rec(ei + 1)
                        if res:
                            return res
                    used_edges.difference_update(g.dart_edge[d] for d in walk)
                    inner_vertices.difference_update(added_inner)
                    del walks[e]
                if placed_v:
                    del state_map[v]
            if placed_u:
                del state_map[u]
        return None

    return rec(0)


def _bfs_edge_order(h: PlaneGraph):
    seen_v: set = set()
    out = []
    remaining = set(h.edges)
    for start in h.vertices:
        if start in seen_v:
            continue
        seen_v.add(start)
        queue = [start]
        while queue:
            x = queue.pop(0)
            for d in h.rotation[x]:
                e = h.dart_edge[d]
                if e in remaining:
                    remaining.discard(e)
                    out.append(e)
                    y = h.dart_vertex[h.twin[d]]
                    if y not in seen_v:
                        seen_v.add(y)
                        queue.append(y)
    return out


# ---------------------------------------------------------------------------
# embedded immersion: two engines


def embedded_immersion(
    h: PlaneGraph,
    g: PlaneGraph,
    directed: bool = False,
    engine: str = "a",
    max_darts: int = DEFAULT_DART_CAP,
):
    """OpScript of deletions and lifts taking g to h, or None.

    Engine 'a' compiles an ordered-immersion witness with a tangent family;
    engine 'b' searches lift/deletion sequences with canonical memoization.
    """
    if engine == "a":
        witness = ordered_immersion(
            h, g, require_tangent=True, directed=directed, max_darts=max_darts
        )
        if witness is None:
            return None
        return _compile_witness(h, g, witness, directed)
    if engine == "b":
        return _op_search(
            h,
            g,
            ops_for=lambda st: _immersion_ops(st, directed),
            target=lambda st: equivalent(st, h),
            max_darts=max_darts,
        )
    raise InternalInvariantError(f"unknown engine {engine!r}")


def _compile_witness(h, g, witness, directed) -> tuple:
    """Turn a tangent ordered-immersion witness into deletions and lifts."""
    used = {g.dart_edge[d] for w in witness.walks.values() for d in w}
    images = set(witness.vertex_map.values())
    script = []
    cur = g
    for e in sorted(set(g.edges) - used):
        script.append(Op("del-edge", (e,)))
        cur = apply_embedded_op(cur, script[-1])
    for v in sorted(set(g.rotation) - images):
        if v in cur.rotation and not cur.rotation[v]:
            script.append(Op("del-vertex", (v,)))
            cur = apply_embedded_op(cur, script[-1])
    # walks as current edge-name sequences
    cur_walks = {}
    for he, w in witness.walks.items():
        cur_walks[he] = [g.dart_edge[d] for d in w]

    def lift_once():
        nonlocal cur
        for he in sorted(cur_walks):
            seq = cur_walks[he]
            if len(seq) <= 1:
                continue
            # find a rotation-adjacent consecutive pair
            for i in range(len(seq) - 1):
                e1, e2 = seq[i], seq[i + 1]
                shared = [
                    v
                    for v in cur.rotation
                    if v not in images
                    and any(cur.dart_edge[d] == e1 for d in cur.rotation[v])
                    and any(cur.dart_edge[d] == e2 for d in cur.rotation[v])
                ]
                for v in shared:
                    d1s = [d for d in cur.edges[e1] if cur.dart_vertex[d] == v]
                    d2s = [d for d in cur.edges[e2] if cur.dart_vertex[d] == v]
                    if directed:
                        d1s = [d for d in d1s if cur.direction_of(d) == "head"]
                        d2s = [d for d in d2s if cur.direction_of(d) == "tail"]
                    for d1 in d1s:
                        for d2 in d2s:
                            if cur.rotation_successor(d1) == d2:
                                side = "ccw"
                            elif cur.rotation_predecessor(d1) == d2:
                                side = "cw"
                            else:
                                continue
                            op = Op("lift", (v, e1, e2, side))
                            cur = apply_embedded_op(cur, op)
                            script.append(op)
                            # deterministic merged name from ops.lift
                            name = f"({e1}~{e2})"
                            while name not in cur.edges:
                                name += "'"
                            cur_walks[he] = seq[:i] + [name] + seq[i + 2 :]
                            return True
        return False

    for _ in range(2 * len(g.edges) + 2):
        if not lift_once():
            break
    if not equivalent(cur, h):
        raise InternalInvariantError("witness compilation did not reach H")
    return tuple(script)


def _immersion_ops(state: PlaneGraph, directed: bool):
    ops = []
    for e in sorted(state.edges):
        ops.append(Op("del-edge", (e,)))
    for v in state.vertices:
        ops.append(Op("del-vertex", (v,)))
    for v in state.vertices:
        rot = state.rotation[v]
        for i, d1 in enumerate(rot):
            d2 = rot[(i + 1) % len(rot)]
            if d1 == d2:
                continue
            e1, e2 = state.dart_edge[d1], state.dart_edge[d2]
            if e1 == e2:
                continue
            if directed:
                if state.direction_of(d1) != "head" or state.direction_of(d2) != "tail":
                    continue
            ops.append(Op("lift", (v, e1, e2, "ccw")))
    return ops


def _minor_ops(state: PlaneGraph):
    ops = []
    for e in sorted(state.edges):
        ops.append(Op("del-edge", (e,)))
        if not state.is_self_loop(e):
            ops.append(Op("contract", (e,)))
    for v in state.vertices:
        ops.append(Op("del-vertex", (v,)))
    return ops


def _op_search(h, g, ops_for, target, max_darts, key=None):
    """Breadth-first memoized search over op sequences from g toward h."""
    if max_darts is not None and _dart_count(h) + _dart_count(g) > 2 * max_darts:
        raise TooLarge("dart cap exceeded")
    key = key or cached_canonical_form
    if target(g):
        return ()
    seen = {key(g)}
    frontier = [(g, ())]
    he, hv = len(h.edges), len(h.rotation)
    while frontier:
        nxt = []
        for state, script in frontier:
            for op in ops_for(state):
                try:
                    new = apply_embedded_op(state, op)
                except Exception:
                    continue
                if len(new.edges) < he or len(new.rotation) < hv:
                    continue
                k = key(new)
                if k in seen:
                    continue
                seen.add(k)
                new_script = script + (op,)
                if target(new):
                    return new_script
                nxt.append((new, new_script))
        frontier = nxt
    return None


def embedded_minor(h: PlaneGraph, g: PlaneGraph, max_darts: int = DEFAULT_DART_CAP):
    """OpScript of deletions and embedded contractions taking g to h."""
    return _op_search(
        h,
        g,
        ops_for=_minor_ops,
        target=lambda st: equivalent(st, h),
        max_darts=max_darts,
    )


def abstract_minor(h: PlaneGraph, g: PlaneGraph, max_darts: int = 10**9) -> bool:
    """Minor test ignoring the embeddings (isomorphism target)."""
    res = _op_search(
        h,
        g,
        ops_for=_minor_ops,
        target=lambda st: abstract_isomorphic(st, h),
        max_darts=max_darts,
    )
    return res is not None


def abstract_isomorphic(g1: PlaneGraph, g2: PlaneGraph) -> bool:
    """Multigraph isomorphism by backtracking on degree-sorted vertices."""
    if len(g1.rotation) != len(g2.rotation) or len(g1.edges) != len(g2.edges):
        return False

    def edge_counter(g):
        c: Counter = Counter()
        for e in g.edges:
            u, v = g.endpoints(e)
            c[frozenset((u, v)) if u != v else frozenset((u,))] += 1
        return c

    c1, c2 = edge_counter(g1), edge_counter(g2)
    if sorted(g1.degree(v) for v in g1.vertices) != sorted(
        g2.degree(v) for v in g2.vertices
    ):
        return False
    vs1 = sorted(g1.vertices, key=lambda v: (-g1.degree(v), v))
    vs2 = g2.vertices

    def rec(i, mapping):
        if i == len(vs1):
            return True
        u = vs1[i]
        for x in vs2:
            if x in mapping.values() or g2.degree(x) != g1.degree(u):
                continue
            mapping[u] = x
            ok = True
            for pair, k in c1.items():
                if not (pair <= set(mapping)):
                    continue
                img = frozenset(mapping[p] for p in pair)
                if c2.get(img, 0) != k:
                    ok = False
                    break
            if ok and rec(i + 1, mapping):
                return True
            del mapping[u]
        return False

    return rec(0, {})
