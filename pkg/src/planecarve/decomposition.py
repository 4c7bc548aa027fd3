"""Carving and branch decompositions: exact widths, certification, and the
constructive bond/linked machinery.

A carving tree is an unrooted tree whose internal vertices have degree 3 and
whose leaves carry an injective labeling by the graph's vertices; an optional
extra unlabeled leaf serves as a root.  Widths of tree edges are sizes of the
displayed edge cuts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .cuts import cut, cut_between, m_cut
from .errors import (
    DisconnectedAssumptionViolated,
    GraphMismatch,
    InternalInvariantError,
    LabelMismatch,
    LeafEndpoint,
    Not2VC,
    PairIsLinked,
    ParseError,
    TooLarge,
    Unrooted,
)
from .planegraph import PlaneGraph


@dataclass
class CarvingTree:
    adj: dict[int, tuple[int, ...]]
    label: dict[int, str]  # leaf node -> graph vertex
    root: Optional[int] = None  # unlabeled root leaf, if any

    def nodes(self):
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in self.adj:
            for v in self.adj[u]:
                if u < v:
                    out.append((u, v))
        return sorted(out)

    def leaves(self):
        return [n for n in self.nodes() if len(self.adj[n]) <= 1]

    def check(self, g: Optional[PlaneGraph] = None):
        for n, nbrs in self.adj.items():
            if len(nbrs) not in (0, 1, 3):
                raise InternalInvariantError(f"tree node {n} has degree {len(nbrs)}")
            for m in nbrs:
                if n not in self.adj[m]:
                    raise InternalInvariantError("asymmetric adjacency")
        labels = list(self.label.values())
        if len(set(labels)) != len(labels):
            raise LabelMismatch("labeling is not injective")
        for leaf in self.label:
            if len(self.adj[leaf]) > 1:
                raise LabelMismatch(f"labeled node {leaf} is not a leaf")
        unlabeled = [n for n in self.leaves() if n not in self.label]
        if self.root is not None and self.root not in unlabeled and len(self.adj) > 1:
            raise Unrooted(f"root {self.root} is not an unlabeled leaf")
        if g is not None and set(labels) != set(g.vertices):
            raise LabelMismatch("tree does not label exactly V(G)")

    def side_labels(self, edge: tuple[int, int], toward: int) -> frozenset[str]:
        """Labels in the component of tree-minus-edge containing ``toward``."""
        u, v = edge
        if toward not in (u, v):
            raise InternalInvariantError("toward must be an endpoint")
        away = u if toward == v else v
        seen = {away, toward}
        stack = [toward]
        out = []
        while stack:
            x = stack.pop()
            if x in self.label:
                out.append(self.label[x])
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(out)

    def path_edges(self, a: tuple[int, int], b: tuple[int, int]):
        """Edges on the minimal tree path containing both a and b."""
        if a == b:
            return [a]
        # BFS over nodes from a's endpoints to b
        target = set(b)
        parent = {a[0]: None, a[1]: None}
        queue = [a[0], a[1]]
        hit = None
        while queue:
            x = queue.pop(0)
            if x in target:
                # need the full edge b reached
                pass
            for y in self.adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        # walk back from whichever endpoint of b is farther
        # simpler: path between edge-midpoints: collect node path from a to b
        path = self._node_path(a, b)
        edges = [a]
        for i in range(len(path) - 1):
            edges.append(tuple(sorted((path[i], path[i + 1]))))
        edges.append(b)
        # dedupe while preserving order
        seen = set()
        out = []
        for e in edges:
            if e not in seen:
                seen.add(e)
                out.append(e)
        return out

    def _node_path(self, a, b):
        """Node path connecting edge a to edge b (possibly empty)."""
        bs = set(b)
        best = None
        for start in a:
            parent = {start: None}
            queue = [start]
            other = (set(a) - {start}).pop()
            while queue:
                x = queue.pop(0)
                for y in self.adj[x]:
                    if y == other and parent[x] is None:
                        continue  # do not walk through edge a itself
                    if y not in parent:
                        parent[y] = x
                        queue.append(y)
            for t in bs:
                if t in parent:
                    path = [t]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    if best is None or len(path) < len(best):
                        best = path
        if best is None:
            raise InternalInvariantError("edges not connected in tree")
        return best

    def copy(self) -> "CarvingTree":
        return CarvingTree(
            {k: tuple(v) for k, v in self.adj.items()}, dict(self.label), self.root
        )


@dataclass
class EdgeWidthTable:
    """Per tree edge: displayed vertex sets, cut edge set, and width."""

    entries: dict[tuple[int, int], tuple[frozenset[str], frozenset[str], frozenset[str], int]]

    def width(self, edge) -> int:
        return self.entries[edge][3]

    def max_width(self) -> int:
        return max((w for _, _, _, w in self.entries.values()), default=0)

    def cut_edges(self, edge) -> frozenset[str]:
        return self.entries[edge][2]


def widths(g: PlaneGraph, t: CarvingTree) -> EdgeWidthTable:
    t.check()
    labeled = set(t.label.values())
    if labeled != set(g.vertices):
        raise LabelMismatch("tree labels do not match V(G)")
    entries = {}
    for e in t.edges():
        u, v = e
        side1 = t.side_labels(e, u)
        side2 = t.side_labels(e, v)
        ce = frozenset(cut_between(g, side1, side2))
        entries[e] = (side1, side2, ce, len(ce))
    return EdgeWidthTable(entries)


# ---------------------------------------------------------------------------
# exact solvers (bitmask branch and bound)


def _prep_masks(g: PlaneGraph):
    vs = g.vertices
    idx = {v: i for i, v in enumerate(vs)}
    gedges = []
    for e in sorted(g.edges):
        u, w = g.endpoints(e)
        if u != w:
            gedges.append((1 << idx[u], 1 << idx[w]))
    return vs, idx, gedges


def _cut_size(mask: int, placed: int, gedges) -> int:
    other = placed & ~mask
    n = 0
    for mu, mv in gedges:
        if (mask & mu and other & mv) or (mask & mv and other & mu):
            n += 1
    return n


class _TreeBuilder:
    """Mutable rooted scratch tree for the exhaustive solvers."""

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.mask: dict[int, int] = {}
        self.children: dict[int, list[int]] = {}
        self.next_id = 0

    def new_node(self, parent, mask):
        n = self.next_id
        self.next_id += 1
        self.parent[n] = parent
        self.mask[n] = mask
        self.children[n] = []
        if parent is not None:
            self.children[parent].append(n)
        return n


def _enumerate_carving(g: PlaneGraph, leaf_items, item_mask, width_of_mask):
    """Shared exhaustive scan over leaf-labeled binary trees.

    Item 0 is the implicit root handle; shapes are nested pairs over items
    1..k-1, so each unrooted tree is generated exactly once ((2k-5)!! shapes).
    ``width_of_mask(mask, placed)`` scores a displayed side.  Returns
    (best_width, best_shape).
    """
    k = len(leaf_items)
    if k == 1:
        return 0, None
    best = [None, None]  # width, shape

    def insert_all(shape, i):
        """Yield shapes with item i attached at every edge."""
        yield (shape, i)
        if isinstance(shape, tuple):
            left, right = shape
            for s in insert_all(left, i):
                yield (s, right)
            for s in insert_all(right, i):
                yield (left, s)

    def max_width(shape, placed):
        """(max over edges of the subtree incl. its top edge, side mask)."""
        if isinstance(shape, int):
            m = item_mask[shape]
            return width_of_mask(m, placed), m
        w1, m1 = max_width(shape[0], placed)
        w2, m2 = max_width(shape[1], placed)
        m = m1 | m2
        return max(w1, w2, width_of_mask(m, placed)), m

    def rec(shape, placed, i):
        if i == k:
            w, _ = max_width(shape, placed)
            if best[0] is None or w < best[0]:
                best[0], best[1] = w, shape
            return
        new_placed = placed | item_mask[i]
        for s in insert_all(shape, i):
            if best[0] is not None:
                w, _ = max_width(s, new_placed)
                if w >= best[0]:
                    continue
            rec(s, new_placed, i + 1)

    rec(1, item_mask[0] | item_mask[1], 2)
    return best[0], best[1]


def _shape_to_tree(shape, leaf_items) -> CarvingTree:
    """Nested-pair shape over items 1.. plus the implicit item 0."""
    adj: dict[int, list[int]] = {}
    label: dict[int, str] = {}
    counter = itertools.count()

    def build(s):
        n = next(counter)
        adj[n] = []
        if isinstance(s, int):
            label[n] = leaf_items[s]
        else:
            for part in s:
                c = build(part)
                adj[n].append(c)
                adj[c].append(n)
        return n

    zero = next(counter)
    adj[zero] = []
    label[zero] = leaf_items[0]
    if shape is not None:
        top = build(shape)
        adj[zero].append(top)
        adj[top].append(zero)
    t = CarvingTree({k: tuple(v) for k, v in adj.items()}, label)
    return _smooth(t)


def _smooth(t: CarvingTree) -> CarvingTree:
    """Merge edges at degree-2 nodes; drop isolated unlabeled nodes."""
    adj = {k: list(v) for k, v in t.adj.items()}
    label = dict(t.label)
    changed = True
    while changed:
        changed = False
        for n in list(adj):
            if len(adj[n]) == 2 and n not in label and n != t.root:
                a, b = adj[n]
                adj[a] = [x if x != n else b for x in adj[a]]
                adj[b] = [x if x != n else a for x in adj[b]]
                del adj[n]
                changed = True
                break
    return CarvingTree({k: tuple(v) for k, v in adj.items()}, label, t.root)


def carving_width_exact(g: PlaneGraph, max_vertices: int = 12):
    """Exhaustive optimal carving decomposition (branch and bound)."""
    vs = g.vertices
    n = len(vs)
    if n > max_vertices:
        raise TooLarge(f"{n} vertices exceeds cap {max_vertices}")
    if n == 0:
        raise LabelMismatch("carving width needs at least one vertex")
    if n == 1:
        t = CarvingTree({0: ()}, {0: vs[0]})
        return 0, t
    order = sorted(vs, key=lambda v: (-g.degree(v), v))
    _, idx, gedges = _prep_masks(g)
    item_mask = [1 << idx[v] for v in order]

    def width_of(mask, placed):
        return _cut_size(mask, placed, gedges)

    w, shape = _enumerate_carving(g, order, item_mask, width_of)
    tree = _shape_to_tree(shape, order)
    tree.check(g)
    return w, tree


def branch_width_exact(g: PlaneGraph, max_edges: int = 12) -> int:
    """Exact branch-width over edge-labeled binary trees."""
    es = sorted(g.edges)
    if not es:
        raise LabelMismatch("branch width needs at least one edge")
    if len(es) > max_edges:
        raise TooLarge(f"{len(es)} edges exceeds cap {max_edges}")
    if len(es) == 1:
        return 0
    vs, vidx, _ = _prep_masks(g)
    ends = []
    for e in es:
        u, w = g.endpoints(e)
        ends.append((1 << vidx[u]) | (1 << vidx[w]))
    item_mask = [1 << i for i in range(len(es))]

    def width_of(mask, placed):
        # vertices incident to placed edges on both sides
        inside = 0
        outside = 0
        for i in range(len(es)):
            if not (placed >> i) & 1:
                continue
            if (mask >> i) & 1:
                inside |= ends[i]
            else:
                outside |= ends[i]
        return bin(inside & outside).count("1")

    w, _ = _enumerate_carving(g, es, item_mask, width_of)
    return w


# ---------------------------------------------------------------------------
# certification


@dataclass
class Violation:
    kind: str  # "bond" | "linked" | "disc"
    detail: tuple

    def __bool__(self):
        return False


@dataclass
class Certificate:
    kind: str
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return True


def certify_bond(g: PlaneGraph, t: CarvingTree, table: Optional[EdgeWidthTable] = None):
    table = table or widths(g, t)
    for e, (s1, s2, _, _) in sorted(table.entries.items()):
        for side in (s1, s2):
            if side and not g.induced(side).is_connected():
                return Violation("bond", (e, side))
    return Certificate("bond")


def certify_linked(g: PlaneGraph, t: CarvingTree, table: Optional[EdgeWidthTable] = None):
    table = table or widths(g, t)
    edges = t.edges()
    for a, b in itertools.combinations(edges, 2):
        au, av = a
        bu, bv = b
        # side of a away from b, and vice versa
        path = t.path_edges(a, b)
        a_side = _away_side(t, a, b)
        b_side = _away_side(t, b, a)
        if not a_side or not b_side:
            continue
        size = m_cut(g, a_side, b_side, witness=False).size
        minw = min(table.width(e) for e in path)
        if size < minw:
            return Violation("linked", (a, b, size, minw))
        if size > minw:
            raise InternalInvariantError("m-cut exceeded path minimum")
    return Certificate("linked")


def _away_side(t: CarvingTree, a, b) -> frozenset[str]:
    """Labels displayed by ``a`` on the side not containing edge ``b``."""
    path = t._node_path(a, b)
    # path starts at an endpoint of a that leads toward b
    toward_b = path[0]
    away = a[0] if toward_b == a[1] else a[1]
    return t.side_labels(a, away)


def certify(g: PlaneGraph, t: CarvingTree, prop: str):
    """Certify bond, linked, or disc for a carving decomposition."""
    table = widths(g, t)
    if prop == "bond":
        return certify_bond(g, t, table)
    if prop == "linked":
        return certify_linked(g, t, table)
    if prop == "disc":
        from .disccert import certify_disc

        return certify_disc(g, t, table)
    raise ParseError(f"unknown property {prop!r}")


# ---------------------------------------------------------------------------
# the <_w order


def _profile(g: PlaneGraph, t: CarvingTree):
    """(E_k, C_k) per weight k, from the width table."""
    table = widths(g, t)
    maxw = table.max_width()
    prof = []
    for k in range(maxw, -1, -1):
        sub = [e for e in t.edges() if table.width(e) >= k]
        ek = len(sub)
        nodes = {x for e in sub for x in e}
        # count components of the subforest
        seen = set()
        ck = 0
        adj: dict[int, list[int]] = {x: [] for x in nodes}
        for u, v in sub:
            adj[u].append(v)
            adj[v].append(u)
        for x in nodes:
            if x in seen:
                continue
            ck += 1
            stack = [x]
            seen.add(x)
            while stack:
                y = stack.pop()
                for z in adj[y]:
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
        prof.append((k, ek, ck))
    return prof


def order_lt_w(g: PlaneGraph, t1: CarvingTree, t2: CarvingTree) -> str:
    """Compare decompositions: 'less', 'greater', or 'incomparable-or-equal'."""
    if set(t1.label.values()) != set(g.vertices) or set(t2.label.values()) != set(
        g.vertices
    ):
        raise GraphMismatch("both trees must decompose G")
    p1 = {k: (e, c) for k, e, c in _profile(g, t1)}
    p2 = {k: (e, c) for k, e, c in _profile(g, t2)}
    top = max(max(p1, default=0), max(p2, default=0))
    for k in range(top, -1, -1):
        e1, c1 = p1.get(k, (0, 0))
        e2, c2 = p2.get(k, (0, 0))
        if (e1, c1) == (e2, c2):
            continue
        if e1 < e2 or (e1 == e2 and c1 > c2):
            return "less"
        return "greater"
    return "incomparable-or-equal"


def profile_key(g: PlaneGraph, t: CarvingTree):
    """Total-order key equivalent to scanning <_w from the top weight.

    Aligned over k = |E(G)| .. 0 so keys of different trees of the same
    graph compare lexicographically; smaller E_k is better, then larger C_k.
    """
    prof = {k: (e, c) for k, e, c in _profile(g, t)}
    key = []
    for k in range(len(g.edges), -1, -1):
        e, c = prof.get(k, (0, 0))
        key.append((e, -c))
    return tuple(key)


# ---------------------------------------------------------------------------
# linked improvement


def _splits(x: set, sets) -> int:
    n = 0
    for y in sets:
        if y - x and y & x:
            n += 1
    return n


def linked_improvement_step(g: PlaneGraph, t: CarvingTree, pair) -> CarvingTree:
    """One application of the T-hat construction for a non-linked pair."""
    a, b = pair
    a = tuple(sorted(a))
    b = tuple(sorted(b))
    table = widths(g, t)
    aset = _away_side(t, a, b)
    bset = _away_side(t, b, a)
    path = t.path_edges(a, b)
    minw = min(table.width(e) for e in path)
    target = m_cut(g, aset, bset, witness=False).size
    if target >= minw:
        raise PairIsLinked(f"{a} and {b} are already linked")

    displayed = []
    for e in t.edges():
        s1, s2, _, _ = table.entries[e]
        displayed.append(set(s1))
        displayed.append(set(s2))
    free = sorted(set(g.vertices) - aset - bset)
    best = None
    for k in range(len(free) + 1):
        for extra in itertools.combinations(free, k):
            x = set(aset) | set(extra)
            if len(cut(g, x)) != target:
                continue
            cand = (_splits(x, displayed), tuple(sorted(x)))
            if best is None or cand < best:
                best = cand
    if best is None:
        raise InternalInvariantError("no X achieves the m-cut value")
    x = set(best[1])

    # copy side of b containing a, and side of a containing b
    new_adj: dict[int, list[int]] = {}
    new_label: dict[int, str] = {}
    counter = itertools.count()

    def copy_side(edge, away_node):
        """Copy the subtree on the ``away_node`` side; return attachment."""
        mapping: dict[int, int] = {}
        u, v = edge
        keep = {away_node}
        stack = [away_node]
        block = u if away_node == v else v
        while stack:
            nd = stack.pop()
            for nb in t.adj[nd]:
                if nb == block and nd == away_node:
                    continue
                if nb not in keep:
                    keep.add(nb)
                    stack.append(nb)
        for nd in sorted(keep):
            mapping[nd] = next(counter)
            new_adj[mapping[nd]] = []
        for nd in sorted(keep):
            for nb in t.adj[nd]:
                if nb in keep and not (nd == away_node and nb == block):
                    if mapping[nb] not in new_adj[mapping[nd]]:
                        new_adj[mapping[nd]].append(mapping[nb])
        for nd in sorted(keep):
            if nd in t.label:
                new_label[mapping[nd]] = t.label[nd]
        return mapping[away_node], mapping

    # T2(b): side of b containing a
    b_path = t._node_path(b, a)
    b_toward_a = b_path[0]
    attach_b, map_b = copy_side(b, b_toward_a)
    a_path = t._node_path(a, b)
    a_toward_b = a_path[0]
    attach_a, map_a = copy_side(a, a_toward_b)

    # restrict labels
    for nd, lab in list(new_label.items()):
        in_b_copy = nd in map_b.values()
        if in_b_copy and lab not in x:
            del new_label[nd]
        elif not in_b_copy and lab in x:
            del new_label[nd]
    new_adj[attach_b].append(attach_a)
    new_adj[attach_a].append(attach_b)

    t_hat = CarvingTree({k: tuple(v) for k, v in new_adj.items()}, new_label)
    t_hat = prune_unlabeled(t_hat)
    t_hat.check(g)
    if order_lt_w(g, t_hat, t) != "less":
        raise InternalInvariantError("improvement step did not decrease <_w")
    return t_hat


def prune_unlabeled(t: CarvingTree) -> CarvingTree:
    """Recursively drop unlabeled leaves (except the root), then smooth."""
    adj = {k: list(v) for k, v in t.adj.items()}
    label = dict(t.label)
    changed = True
    while changed:
        changed = False
        for n in list(adj):
            if len(adj[n]) <= 1 and n not in label and n != t.root and len(adj) > 1:
                for m in adj[n]:
                    adj[m].remove(n)
                del adj[n]
                changed = True
    out = CarvingTree({k: tuple(v) for k, v in adj.items()}, label, t.root)
    return _smooth(out)


def find_linked_violation(g: PlaneGraph, t: CarvingTree):
    res = certify_linked(g, t)
    if isinstance(res, Violation):
        return res.detail[0], res.detail[1]
    return None


def make_linked(g: PlaneGraph, start: Optional[CarvingTree] = None, max_vertices=12):
    """Iterate improvement steps from an optimal tree to a linked one."""
    if start is None:
        _, t = carving_width_exact(g, max_vertices)
    else:
        t = prune_unlabeled(start.copy())
    for _ in range(100000):
        pair = find_linked_violation(g, t)
        if pair is None:
            return t
        t = linked_improvement_step(g, t, pair)
    raise InternalInvariantError("make_linked failed to terminate")


# ---------------------------------------------------------------------------
# rebranching and the potential


def rebranch(t: CarvingTree, s: tuple[int, int], pairing: str = "direct") -> CarvingTree:
    """Regroup the four subtrees hanging off an internal edge.

    ``pairing`` 'direct' joins (u1,v1)+(u2,v2); 'swap' joins (u1,v2)+(u2,v1),
    where u1,u2 and v1,v2 are the other neighbors of the endpoints in
    adjacency-list order.  Applying 'direct' twice restores the original.
    """
    u, v = s
    if v not in t.adj.get(u, ()):
        raise InternalInvariantError(f"{s} is not a tree edge")
    if len(t.adj[u]) != 3 or len(t.adj[v]) != 3:
        raise LeafEndpoint("rebranch needs both endpoints internal")
    u1, u2 = [x for x in t.adj[u] if x != v]
    v1, v2 = [x for x in t.adj[v] if x != u]
    if pairing == "swap":
        v1, v2 = v2, v1
    adj = {k: list(vs) for k, vs in t.adj.items()}

    def rewire(node, old, new):
        adj[node] = [new if x == old else x for x in adj[node]]

    adj[u] = [u1, v1, v]
    adj[v] = [u2, v2, u]
    rewire(u1, u, u)
    rewire(v1, v, u)
    rewire(u2, u, v)
    rewire(v2, v, v)
    return CarvingTree({k: tuple(vs) for k, vs in adj.items()}, dict(t.label), t.root)


def mu_vertex(g: PlaneGraph, t: CarvingTree, v: int) -> int:
    if len(t.adj[v]) != 3:
        raise InternalInvariantError(f"{v} is not internal")
    parts = []
    for nb in t.adj[v]:
        parts.append(t.side_labels(tuple(sorted((v, nb))), nb))
    empties = []
    for i, j in itertools.combinations(range(3), 2):
        if not cut_between(g, parts[i], parts[j]):
            empties.append((i, j))
    if len(empties) > 1:
        raise DisconnectedAssumptionViolated(
            "two empty pairwise cuts at an internal vertex"
        )
    if not empties:
        return 0
    i, j = empties[0]
    k = ({0, 1, 2} - {i, j}).pop()
    return len(parts[k]) - 1


def mu(g: PlaneGraph, t: CarvingTree) -> int:
    return sum(mu_vertex(g, t, v) for v in t.nodes() if len(t.adj[v]) == 3)


def _all_carving_trees(g: PlaneGraph):
    """Every normalized carving tree of G (exhaustive; small graphs only)."""
    vs = g.vertices
    if len(vs) == 1:
        yield CarvingTree({0: ()}, {0: vs[0]})
        return

    def shapes(items):
        if len(items) == 1:
            yield items[0]
            return
        first, rest = items[0], items[1:]
        for s in shapes(rest):
            yield from _insert_everywhere(s, first)

    def _insert_everywhere(shape, item):
        yield (shape, item)
        if isinstance(shape, tuple):
            left, right = shape
            for s in _insert_everywhere(left, item):
                yield (s, right)
            for s in _insert_everywhere(right, item):
                yield (left, s)

    items = list(range(1, len(vs)))
    for s in shapes(items) if items else [None]:
        yield _shape_to_tree(s, vs)


def make_bond_linked(g: PlaneGraph, max_vertices: int = 12) -> CarvingTree:
    """Bond-linked carving decomposition of optimal width for 2VC graphs."""
    from .cuts import connectivity_profile

    prof = connectivity_profile(g)
    if not prof.is_2vc:
        raise Not2VC("graph must be 2-vertex-connected")
    k, _ = carving_width_exact(g, max_vertices)
    t = make_linked(g, max_vertices=max_vertices)
    globally_minimal = False
    for _ in range(100000):
        if mu(g, t) == 0:
            table = widths(g, t)
            if table.max_width() != k:
                raise InternalInvariantError("bond-linked tree width is not cw")
            return t
        t2 = _bond_step(g, t, k)
        if t2 is not None:
            t = t2
            continue
        if globally_minimal:
            t2 = _exhaustive_bond_linked(g, k)
            if t2 is None:
                raise InternalInvariantError("no bond-linked tree found")
            return t2
        # restart from the globally <_w-minimal, mu-minimal tree
        t = min(
            _all_carving_trees(g),
            key=lambda tt: (profile_key(g, tt), mu(g, tt)),
        )
        globally_minimal = True
    raise InternalInvariantError("make_bond_linked failed to terminate")


def _bond_step(g: PlaneGraph, t: CarvingTree, k: int) -> Optional[CarvingTree]:
    """One width-safe, linkedness-preserving rebranch; None if unavailable."""
    table = widths(g, t)
    candidates = []
    for u in t.nodes():
        if len(t.adj[u]) != 3:
            continue
        m = mu_vertex(g, t, u)
        if m > 0:
            candidates.append((m, u))
    if not candidates:
        return None
    candidates.sort()
    _, u = candidates[0]
    parts = {}
    for nb in t.adj[u]:
        parts[nb] = t.side_labels(tuple(sorted((u, nb))), nb)
    empt = None
    for n1, n2 in itertools.combinations(t.adj[u], 2):
        if not cut_between(g, parts[n1], parts[n2]):
            empt = (n1, n2)
    if empt is None:
        raise InternalInvariantError("mu positive but no empty cut")
    na1, na2 = empt
    (nv,) = [x for x in t.adj[u] if x not in empt]
    if len(t.adj[nv]) != 3:
        return None  # X side is a leaf: cannot rebranch here
    a1, a2 = parts[na1], parts[na2]
    s = tuple(sorted((u, nv)))
    bparts = {}
    for nb in t.adj[nv]:
        if nb != u:
            bparts[nb] = t.side_labels(tuple(sorted((nv, nb))), nb)
    (nb1, nb2) = sorted(bparts)
    b1, b2 = bparts[nb1], bparts[nb2]
    a = a1 | a2
    if not cut_between(g, b1, a) or not cut_between(g, b2, a):
        raise InternalInvariantError("mu-minimal vertex violates the B-side cuts")
    # choose the valid pairing minimizing the new edge width
    options = []
    for (x1, x2), (y1, y2, pairing_for) in (
        ((a1, a2), (b1, b2, None)),
        ((a1, a2), (b2, b1, None)),
        ((a2, a1), (b1, b2, None)),
        ((a2, a1), (b2, b1, None)),
    ):
        if cut_between(g, x1, y1) and cut_between(g, x2, y2):
            w_new = len(cut(g, set(x1) | set(y1)))
            options.append((w_new, x1 is a2, y1 is b2))
    if not options:
        raise InternalInvariantError("no valid rebranch orientation")
    options.sort()
    w_new, a_swapped, b_swapped = options[0]
    if w_new > k:
        return None
    w_s = table.width(s)
    # map the chosen grouping onto rebranch's list-order convention
    first_u = na2 if a_swapped else na1
    first_v = nb2 if b_swapped else nb1
    u_others = [x for x in t.adj[u] if x != nv]
    v_others = [x for x in t.adj[nv] if x != u]
    pairing = (
        "direct"
        if (first_u == u_others[0]) == (first_v == v_others[0])
        else "swap"
    )
    t2 = rebranch(t, (u, nv), pairing)
    t2.check(g)
    if mu(g, t2) >= mu(g, t):
        raise InternalInvariantError("rebranch did not decrease the potential")
    if w_new > w_s:
        return t2  # linkedness preserved by construction
    # degenerate tie: accept only if linkedness survived
    if find_linked_violation(g, t2) is None:
        return t2
    return None


def _exhaustive_bond_linked(g: PlaneGraph, k: int) -> Optional[CarvingTree]:
    for t in _all_carving_trees(g):
        table = widths(g, t)
        if table.max_width() != k:
            continue
        if isinstance(certify_bond(g, t, table), Violation):
            continue
        if isinstance(certify_linked(g, t, table), Violation):
            continue
        return t
    return None


# ---------------------------------------------------------------------------
# roots and ancestry


def add_root(t: CarvingTree) -> CarvingTree:
    """Subdivide the lexicographically first edge and hang the root there."""
    if t.root is not None:
        return t
    adj = {k: list(v) for k, v in t.adj.items()}
    label = dict(t.label)
    nid = max(adj, default=-1) + 1
    if not t.edges():
        # single node: attach the root directly
        root = nid
        adj[root] = []
        if adj:
            only = min(adj.keys() - {root})
            adj[root].append(only)
            adj[only].append(root)
        out = CarvingTree({k: tuple(v) for k, v in adj.items()}, label, root)
        out.check()
        return out
    u, v = t.edges()[0]
    mid, root = nid, nid + 1
    adj[u] = [mid if x == v else x for x in adj[u]]
    adj[v] = [mid if x == u else x for x in adj[v]]
    adj[mid] = [u, v, root]
    adj[root] = [mid]
    out = CarvingTree({k: tuple(v) for k, v in adj.items()}, label, root)
    out.check()
    return out


def ancestor(g: PlaneGraph, t: CarvingTree, a, b) -> bool:
    """True iff a lies on the root->b path with all widths >= w(a) = w(b)."""
    if t.root is None:
        raise Unrooted("ancestor needs a rooted tree")
    a = tuple(sorted(a))
    b = tuple(sorted(b))
    table = widths(g, t)
    if table.width(a) != table.width(b):
        return False
    if a == b:
        return True
    root_edge = tuple(sorted((t.root, t.adj[t.root][0])))
    # a must lie on the path from the root edge to b
    path = t.path_edges(root_edge, b)
    if a not in path:
        return False
    seg = t.path_edges(a, b)
    return all(table.width(e) >= table.width(a) for e in seg)


# ---------------------------------------------------------------------------
# serialization (s-expressions)


def serialize_tree(t: CarvingTree) -> str:
    if len(t.adj) == 1:
        (n,) = t.adj
        return t.label.get(n, "_")

    def emit(node, parent):
        kids = [x for x in t.adj[node] if x != parent]
        if not kids:
            return t.label.get(node, "_")
        parts = sorted(emit(k, node) for k in kids)
        return "( " + " ".join(parts) + " )"

    if t.root is not None:
        start = t.root
    else:
        start = min(t.label, key=t.label.get) if t.label else min(t.adj)
    body = emit(t.adj[start][0], start) if t.adj[start] else ""
    head = t.label.get(start, "_")
    return f"( {head} {body} )" if body else head


def parse_tree(text: str) -> CarvingTree:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()

    def parse(pos):
        if tokens[pos] == "(":
            items = []
            pos += 1
            while tokens[pos] != ")":
                node, pos = parse(pos)
                items.append(node)
            return tuple(items), pos + 1
        return tokens[pos], pos + 1

    if not tokens:
        raise ParseError("empty tree")
    tree, pos = parse(0)
    if pos != len(tokens):
        raise ParseError("trailing tokens after tree")

    adj: dict[int, list[int]] = {}
    label: dict[int, str] = {}
    counter = itertools.count()
    root_holder = []

    def build(node):
        n = next(counter)
        adj[n] = []
        if isinstance(node, str):
            if node == "_":
                root_holder.append(n)
            else:
                label[n] = node
        else:
            for part in node:
                c = build(part)
                adj[n].append(c)
                adj[c].append(n)
        return n

    build(tree)
    root = root_holder[0] if root_holder else None
    t = CarvingTree({k: tuple(v) for k, v in adj.items()}, label, root)
    return _smooth(t)


# ---------------------------------------------------------------------------
# disc decompositions


def _restrict_to_edges(g: PlaneGraph, edge_set) -> PlaneGraph:
    keep_darts = {d for e in edge_set for d in g.edges[e]}
    vs = {g.dart_vertex[d] for d in keep_darts}
    rot = {v: tuple(d for d in g.rotation[v] if d in keep_darts) for v in sorted(vs)}
    edges = {e: g.edges[e] for e in edge_set}
    return PlaneGraph(rot, edges, directed=g.directed)


def _renumber(t: CarvingTree, offset: int) -> CarvingTree:
    m = {n: n + offset for n in t.adj}
    return CarvingTree(
        {m[n]: tuple(m[x] for x in xs) for n, xs in t.adj.items()},
        {m[n]: lab for n, lab in t.label.items()},
        None if t.root is None else m[t.root],
    )


def _merge_at_cut_vertex(t1: CarvingTree, t2: CarvingTree, v: str) -> CarvingTree:
    """Identify the v-leaves, making the junction internal with a new v-leaf."""
    off = max(t1.adj) + 1
    t2r = _renumber(t2, off)
    l1 = next(n for n, lab in t1.label.items() if lab == v)
    l2 = next(n for n, lab in t2r.label.items() if lab == v)
    adj = {k: list(x) for k, x in t1.adj.items()}
    for k, x in t2r.adj.items():
        adj[k] = list(x)
    label = dict(t1.label) | dict(t2r.label)
    # absorb l2 into l1
    for nb in t2r.adj[l2]:
        adj[nb] = [l1 if x == l2 else x for x in adj[nb]]
        adj[l1].append(nb)
    del adj[l2]
    del label[l2]
    del label[l1]
    new_leaf = max(adj) + 1
    adj[new_leaf] = [l1]
    adj[l1].append(new_leaf)
    label[new_leaf] = v
    out = CarvingTree({k: tuple(x) for k, x in adj.items()}, label)
    out.check()
    return out


def _disc_tree_connected(g: PlaneGraph, comp: frozenset, max_vertices: int) -> CarvingTree:
    from .cuts import blocks

    sub_edges = {
        e
        for e, (d1, d2) in g.edges.items()
        if g.dart_vertex[d1] in comp
    }
    if len(comp) == 1 and not sub_edges:
        return CarvingTree({0: ()}, {0: min(comp)})
    sub = _restrict_to_edges(g, sub_edges)
    if set(sub.vertices) != set(comp):
        # isolated vertex inside a component cannot happen (connected)
        raise InternalInvariantError("component restriction lost vertices")
    pieces = blocks(sub)
    # cyclic pieces (>= 2 edges) are 2-connected and loop-free; bridges and
    # self-loops stay as single-edge pieces so that every merge at a cut
    # vertex attaches a piece living in one face of the rest
    trees: list[tuple[set, CarvingTree]] = []
    for b in sorted(pieces, key=sorted):
        pg = _restrict_to_edges(sub, b)
        pvs = set(pg.vertices)
        if len(b) >= 2 and len(pvs) == 2:
            t = CarvingTree({0: (1,), 1: (0,)}, {0: pg.vertices[0], 1: pg.vertices[1]})
        elif len(b) >= 2:
            t = make_bond_linked(pg, max_vertices)
        elif len(pvs) == 2:  # bridge
            t = CarvingTree({0: (1,), 1: (0,)}, {0: pg.vertices[0], 1: pg.vertices[1]})
        else:  # self-loop
            t = CarvingTree({0: ()}, {0: pg.vertices[0]})
        trees.append((pvs, t))
    # merge pieces at shared cut vertices
    while len(trees) > 1:
        merged = False
        for i in range(len(trees)):
            for j in range(i + 1, len(trees)):
                shared = trees[i][0] & trees[j][0]
                if shared:
                    v = min(shared)
                    if len(trees[j][0]) == 1:
                        t = trees[i][1]
                    elif len(trees[i][0]) == 1:
                        t = trees[j][1]
                    else:
                        t = _merge_at_cut_vertex(trees[i][1], trees[j][1], v)
                    keep = trees[i][0] | trees[j][0]
                    trees = [
                        trees[k] for k in range(len(trees)) if k not in (i, j)
                    ] + [(keep, t)]
                    merged = True
                    break
            if merged:
                break
        if not merged:
            raise InternalInvariantError("cut-vertex merge found no shared vertex")
    return trees[0][1]


def _is_cyclic_piece(pg: PlaneGraph) -> bool:
    return len(pg.edges) >= 2 and not any(pg.is_self_loop(e) for e in pg.edges)


def _region_boundary_vertices(g: PlaneGraph, ck: str, anchor) -> list[str]:
    part = g.region_partition()
    out = set()
    for (c, fi), a in part.items():
        if c != ck or a != anchor:
            continue
        walk = g.component_faces(c)[fi]
        if not walk:
            comp = next(cc for cc in g.components() if min(cc) == c)
            out |= set(comp)
        for d in walk:
            out.add(g.dart_vertex[d])
    return sorted(out)


def _join_component_trees(t1: CarvingTree, v1: str, t2: CarvingTree, v2: str):
    """Width-0 join: subdivide the leaf edges at v1, v2 and bridge them."""
    off = max(t1.adj) + 1
    t2r = _renumber(t2, off)
    adj = {k: list(x) for k, x in t1.adj.items()}
    for k, x in t2r.adj.items():
        adj[k] = list(x)
    label = dict(t1.label) | dict(t2r.label)
    nid = itertools.count(max(adj) + 1)

    def attach_point(tree, leaf_map, v):
        leaf = next(n for n, lab in leaf_map.items() if lab == v)
        if not adj[leaf]:
            return leaf  # single-node tree: attach directly
        (u,) = adj[leaf]
        mid = next(nid)
        adj[mid] = [u, leaf]
        adj[u] = [mid if x == leaf else x for x in adj[u]]
        adj[leaf] = [mid]
        return mid

    p1 = attach_point(t1, t1.label, v1)
    p2 = attach_point(t2r, t2r.label, v2)
    adj[p1].append(p2)
    adj[p2].append(p1)
    out = CarvingTree({k: tuple(x) for k, x in adj.items()}, label)
    out.check()
    return out


def make_disc(g: PlaneGraph, max_vertices: int = 12):
    """Disc (linked + Jordan-realizable) carving decomposition of width cw."""
    from .disccert import certify_disc, region_tree

    if not g.rotation:
        raise LabelMismatch("empty graph")
    if len(g.vertices) > max_vertices:
        raise TooLarge(f"{len(g.vertices)} vertices exceeds cap {max_vertices}")
    comp_trees: dict[str, CarvingTree] = {}
    for comp in g.components():
        comp_trees[min(comp)] = _disc_tree_connected(g, comp, max_vertices)
    if len(comp_trees) > 1:
        comp_regions, region_comps = region_tree(g)
        root = g.root_component()
        placed = {root}
        merged_of = {root: root}  # component -> merged-tree representative
        queue = [root]
        while queue:
            h = queue.pop(0)
            for anchor in sorted(comp_regions[h]):
                for c in sorted(region_comps[anchor]):
                    if c in placed:
                        continue
                    placed.add(c)
                    queue.append(c)
                    rep = merged_of[h]
                    v1 = _region_boundary_vertices(g, h, anchor)[0]
                    v2 = _region_boundary_vertices(g, c, anchor)[0]
                    t = _join_component_trees(comp_trees[rep], v1, comp_trees[c], v2)
                    comp_trees[rep] = t
                    del comp_trees[c]
                    merged_of[c] = rep
        (tree,) = comp_trees.values()
    else:
        (tree,) = comp_trees.values()
    tree.check(g)
    certs = certify_disc(g, tree)
    if isinstance(certs, Violation):
        tree = _exhaustive_disc(g)
        certs = certify_disc(g, tree)
        if isinstance(certs, Violation):
            raise InternalInvariantError("no disc decomposition found")
    return tree, certs


def _exhaustive_disc(g: PlaneGraph) -> CarvingTree:
    """Last-resort scan for a disc+linked tree of optimal width."""
    from .disccert import certify_disc as _cd

    k, _ = carving_width_exact(g)
    for t in _all_carving_trees(g):
        table = widths(g, t)
        if table.max_width() != k:
            continue
        if isinstance(certify_linked(g, t, table), Violation):
            continue
        if isinstance(_cd(g, t, table), Violation):
            continue
        return t
    raise InternalInvariantError("no disc decomposition exists at optimal width")
