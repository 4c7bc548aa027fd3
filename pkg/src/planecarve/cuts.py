"""Cuts, minimum separating cuts via augmenting paths, and connectivity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import Overlap, UnknownVertex
from .planegraph import PlaneGraph


def cut(g: PlaneGraph, a: Iterable[str]) -> set[str]:
    """Edges with exactly one endpoint in ``a``; self-loops never count."""
    aset = set(a)
    unknown = aset - set(g.rotation)
    if unknown:
        raise UnknownVertex(sorted(unknown)[0])
    out = set()
    for e, (d1, d2) in g.edges.items():
        u, w = g.dart_vertex[d1], g.dart_vertex[d2]
        if (u in aset) != (w in aset):
            out.add(e)
    return out


def cut_between(g: PlaneGraph, a: Iterable[str], b: Iterable[str]) -> set[str]:
    aset, bset = set(a), set(b)
    out = set()
    for e, (d1, d2) in g.edges.items():
        u, w = g.dart_vertex[d1], g.dart_vertex[d2]
        if (u in aset and w in bset) or (u in bset and w in aset):
            out.add(e)
    return out


def directed_cut(g: PlaneGraph, a: Iterable[str]) -> set[str]:
    """Directed edges leaving ``a``."""
    aset = set(a)
    out = set()
    for e, (d1, d2) in g.edges.items():
        u, w = g.dart_vertex[d1], g.dart_vertex[d2]
        if u in aset and w not in aset:
            out.add(e)
    return out


def _max_flow_value(g: PlaneGraph, a: set[str], b: set[str], directed: bool) -> int:
    """Unit-capacity max flow between contracted A and contracted B."""
    # residual capacities on arcs (u, v) keyed per edge instance
    arcs: dict[str, list] = {v: [] for v in g.rotation}
    # each entry: [target, cap, reverse-entry]
    for e, (d1, d2) in g.edges.items():
        u, w = g.dart_vertex[d1], g.dart_vertex[d2]
        if u == w:
            continue
        fwd = [w, 1, None]
        bwd = [u, 1 if not directed else 0, None]
        fwd[2] = bwd
        bwd[2] = fwd
        arcs[u].append(fwd)
        arcs[w].append(bwd)

    def contract(v):
        if v in a:
            return "__S"
        if v in b:
            return "__T"
        return v

    flow = 0
    while True:
        # BFS from A-side to B-side in the residual graph
        parent: dict[str, tuple] = {"__S": None}
        queue = deque(["__S"])
        found = False
        while queue and not found:
            x = queue.popleft()
            reals = a if x == "__S" else ({x} if x not in ("__S", "__T") else set())
            for r in sorted(reals):
                for arc in arcs[r]:
                    if arc[1] <= 0:
                        continue
                    y = contract(arc[0])
                    if y == "__S" or y in parent:
                        continue
                    parent[y] = (x, arc)
                    if y == "__T":
                        found = True
                        break
                    queue.append(y)
                if found:
                    break
        if not found:
            return flow
        y = "__T"
        while parent[y] is not None:
            x, arc = parent[y]
            arc[1] -= 1
            arc[2][1] += 1
            y = x
        flow += 1


@dataclass
class MCutResult:
    size: int
    witness: frozenset[str]


def m_cut(
    g: PlaneGraph,
    a: Iterable[str],
    b: Iterable[str],
    directed: bool = False,
    witness: bool = True,
) -> MCutResult:
    """Minimum cut separating A from B: min over A <= X <= V-B of |E(X)|.

    The size comes from unit-capacity max flow (Menger); the witness, when
    requested, is the minimizing X with the lexicographically smallest sorted
    vertex tuple, found by enumeration over the free vertices.
    """
    aset, bset = set(a), set(b)
    if aset & bset:
        raise Overlap(f"A and B share {sorted(aset & bset)}")
    unknown = (aset | bset) - set(g.rotation)
    if unknown:
        raise UnknownVertex(sorted(unknown)[0])
    if not aset or not bset:
        raise Overlap("A and B must be nonempty")
    size = _max_flow_value(g, aset, bset, directed)
    if not witness:
        return MCutResult(size, frozenset())

    free = sorted(set(g.rotation) - aset - bset)
    cut_fn = directed_cut if directed else cut
    best: Optional[tuple] = None
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            x = aset | set(extra)
            if len(cut_fn(g, x)) == size:
                cand = tuple(sorted(x))
                if best is None or cand < best:
                    best = cand
        if best is not None:
            break
    if best is None:
        # no subset achieves the flow value: cannot happen (max-flow/min-cut)
        raise AssertionError("flow value not achieved by any cut")
    return MCutResult(size, frozenset(best))


def m_cut_brute(g: PlaneGraph, a: Iterable[str], b: Iterable[str], directed=False) -> int:
    """Independent oracle: exhaustive minimum over all X with A <= X <= V-B."""
    aset, bset = set(a), set(b)
    if aset & bset:
        raise Overlap("overlap")
    free = sorted(set(g.rotation) - aset - bset)
    cut_fn = directed_cut if directed else cut
    best = None
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            val = len(cut_fn(g, aset | set(extra)))
            if best is None or val < best:
                best = val
    return best


@dataclass
class ConnectivityProfile:
    components: list[frozenset[str]]
    cut_vertices: list[str]
    is_2vc: bool


def connectivity_profile(g: PlaneGraph) -> ConnectivityProfile:
    """Components, cut vertices, and 2-vertex-connectivity.

    Graphs with fewer than 3 vertices report is_2vc False; the disc
    constructor special-cases them.
    """
    comps = g.components()
    cut_vertices = []
    for v in g.vertices:
        comp = next(c for c in comps if v in c)
        rest = comp - {v}
        if len(rest) <= 1:
            continue
        sub = g.induced(rest)
        if not sub.is_connected():
            cut_vertices.append(v)
    is_2vc = len(comps) == 1 and not cut_vertices and len(g.vertices) >= 3
    return ConnectivityProfile(comps, cut_vertices, is_2vc)


def blocks(g: PlaneGraph) -> list[set[str]]:
    """Biconnected pieces as edge sets (bridges and loops are singletons)."""
    import sys

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(g.rotation) + 100))
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack_edges: list[str] = []
    out: list[set[str]] = []
    loops_seen: set[str] = set()
    counter = [0]

    def dfs(v: str, in_edge):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        skipped = False
        for d in g.rotation[v]:
            e = g.dart_edge[d]
            w = g.dart_vertex[g.twin[d]]
            if w == v:
                if e not in loops_seen:
                    loops_seen.add(e)
                    out.append({e})
                continue
            if e == in_edge and not skipped:
                skipped = True
                continue
            if w not in index:
                stack_edges.append(e)
                dfs(w, e)
                low[v] = min(low[v], low[w])
                if low[w] >= index[v]:
                    piece = set()
                    while True:
                        f = stack_edges.pop()
                        piece.add(f)
                        if f == e:
                            break
                    out.append(piece)
            elif index[w] < index[v]:
                stack_edges.append(e)
                low[v] = min(low[v], index[w])

    for root in g.vertices:
        if root not in index:
            dfs(root, None)
    return out
