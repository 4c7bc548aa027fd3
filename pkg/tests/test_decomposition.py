import pytest

from planecarve.cuts import cut_between
from planecarve.decomposition import (
    CarvingTree,
    Violation,
    add_root,
    ancestor,
    branch_width_exact,
    carving_width_exact,
    certify,
    certify_bond,
    certify_linked,
    linked_improvement_step,
    make_bond_linked,
    make_linked,
    mu,
    mu_vertex,
    order_lt_w,
    parse_tree,
    rebranch,
    serialize_tree,
    widths,
)
from planecarve.errors import LabelMismatch, LeafEndpoint, Not2VC, TooLarge
from planecarve.planegraph import build_graph

from conftest import bowtie, cycle_graph, k4, path_graph, triangle


def caterpillar_tree(pairs):
    """Tree grouping the given leaf-label pairs: ((a b) (c d)) etc."""
    text = "( " + " ".join(f"( {x} {y} )" for x, y in pairs[1:]) + " )"
    # build a balanced pairing: simpler to express via parse_tree
    parts = [f"( {x} {y} )" for x, y in pairs]
    while len(parts) > 1:
        parts = ["( " + parts[0] + " " + parts[1] + " )"] + parts[2:]
    return parse_tree(parts[0])


def test_widths_c4_adjacent_pairs(c4):
    t = caterpillar_tree([("v0", "v1"), ("v2", "v3")])
    table = widths(c4, t)
    assert table.max_width() == 2


def test_widths_c4_antipodal_pairs(c4):
    t = caterpillar_tree([("v0", "v2"), ("v1", "v3")])
    table = widths(c4, t)
    assert table.max_width() == 4


def test_widths_single_edge():
    g = path_graph(2)
    t = parse_tree("( v0 v1 )")
    assert widths(g, t).max_width() == 1


def test_widths_label_mismatch(c4):
    t = parse_tree("( v0 v1 )")
    with pytest.raises(LabelMismatch):
        widths(c4, t)


def test_cw_c4(c4):
    w, t = carving_width_exact(c4)
    assert w == 2
    assert widths(c4, t).max_width() == 2


def test_cw_single_edge():
    w, t = carving_width_exact(path_graph(2))
    assert w == 1


def test_cw_single_vertex():
    g = build_graph({"v": ()}, {})
    w, t = carving_width_exact(g)
    assert w == 0


def test_cw_k4(tetra):
    w, _ = carving_width_exact(tetra)
    # K4: every vertex has degree 3 and the balanced split cuts 4 edges
    assert w == 4


def test_cw_too_large():
    g = cycle_graph(13)
    with pytest.raises(TooLarge):
        carving_width_exact(g)


def test_bw_single_edge():
    assert branch_width_exact(path_graph(2)) == 0


def test_bw_c3(tri):
    assert branch_width_exact(tri) == 2


def test_bw_c5(c5):
    assert branch_width_exact(c5) == 2


def test_certify_bond_c4(c4):
    good = caterpillar_tree([("v0", "v1"), ("v2", "v3")])
    bad = caterpillar_tree([("v0", "v2"), ("v1", "v3")])
    assert certify_bond(c4, good)
    res = certify_bond(c4, bad)
    assert isinstance(res, Violation)


def test_certify_bond_bowtie_violation():
    g = bowtie()
    w, t = carving_width_exact(g)
    # any tree has a bond violation at the cut vertex's leaf edge side or
    # elsewhere: the graph is not 2VC
    found = any(isinstance(certify_bond(g, tt), Violation) for tt in [t])
    # a specific tree separating the two triangle interiors:
    t2 = parse_tree("( ( a b ) ( m ( x y ) ) )")
    assert isinstance(certify_bond(g, t2), Violation) or found


def test_order_lt_w_c4(c4):
    good = caterpillar_tree([("v0", "v1"), ("v2", "v3")])
    bad = caterpillar_tree([("v0", "v2"), ("v1", "v3")])
    assert order_lt_w(c4, good, bad) == "less"
    assert order_lt_w(c4, bad, good) == "greater"
    assert order_lt_w(c4, good, good) == "incomparable-or-equal"


def test_improvement_step_descends(c4):
    bad = caterpillar_tree([("v0", "v2"), ("v1", "v3")])
    res = certify_linked(c4, bad)
    if isinstance(res, Violation):
        a, b = res.detail[0], res.detail[1]
        t2 = linked_improvement_step(c4, bad, (a, b))
        assert order_lt_w(c4, t2, bad) == "less"
        assert widths(c4, t2).max_width() <= widths(c4, bad).max_width()


def test_make_linked_c5(c5):
    t = make_linked(c5)
    assert widths(c5, t).max_width() == 2
    assert certify_linked(c5, t)


def test_make_linked_k4(tetra):
    t = make_linked(tetra)
    assert widths(tetra, t).max_width() == carving_width_exact(tetra)[0]
    assert certify_linked(tetra, t)


def test_rebranch_involution(c4):
    w, t = carving_width_exact(c4)
    internal = [e for e in t.edges() if len(t.adj[e[0]]) == 3 and len(t.adj[e[1]]) == 3]
    if internal:
        s = internal[0]
        t2 = rebranch(rebranch(t, s, "direct"), s, "direct")

        def sides(tt):
            return sorted(
                sorted((tuple(sorted(s1)), tuple(sorted(s2))))
                for s1, s2, _, _ in widths(c4, tt).entries.values()
            )

        # same displayed bipartitions: isomorphic decompositions
        assert sides(t2) == sides(t)
        # and the swap pairing gives a genuinely different decomposition
        t3 = rebranch(t, s, "swap")
        assert sides(t3) != sides(t)


def test_rebranch_leaf_endpoint(c4):
    w, t = carving_width_exact(c4)
    leaf_edge = next(e for e in t.edges() if len(t.adj[e[0]]) == 1 or len(t.adj[e[1]]) == 1)
    with pytest.raises(LeafEndpoint):
        rebranch(t, leaf_edge)


def test_mu_path4():
    g = path_graph(4)
    # tree displaying {v0},{v3},{v1,v2} at one internal vertex
    t = parse_tree("( ( v0 v3 ) ( v1 v2 ) )")
    vals = [mu_vertex(g, t, v) for v in t.nodes() if len(t.adj[v]) == 3]
    assert 1 in vals  # E({v0},{v3}) is empty and |{v1,v2}|-1 = 1


def test_mu_zero_iff_bond(c4, c5):
    for g in (c4, c5):
        for seed_tree in [make_linked(g)]:
            assert (mu(g, seed_tree) == 0) == bool(certify_bond(g, seed_tree))


def test_make_bond_linked_c5(c5):
    t = make_bond_linked(c5)
    assert widths(c5, t).max_width() == 2
    assert certify_bond(c5, t)
    assert certify_linked(c5, t)


def test_make_bond_linked_k4(tetra):
    t = make_bond_linked(tetra)
    assert widths(tetra, t).max_width() == carving_width_exact(tetra)[0]
    assert certify_bond(tetra, t)
    assert certify_linked(tetra, t)


def test_make_bond_linked_bowtie_rejected():
    with pytest.raises(Not2VC):
        make_bond_linked(bowtie())


def test_ancestor_basics(c4):
    w, t = carving_width_exact(c4)
    t = add_root(t)
    edges = t.edges()
    for e in edges:
        assert ancestor(c4, t, e, e)


def test_tree_serialization_roundtrip(c4):
    w, t = carving_width_exact(c4)
    text = serialize_tree(t)
    t2 = parse_tree(text)
    assert serialize_tree(t2) == text
    assert widths(c4, t2).max_width() == w


def test_rooted_tree_serialization(c4):
    w, t = carving_width_exact(c4)
    t = add_root(t)
    text = serialize_tree(t)
    t2 = parse_tree(text)
    assert t2.root is not None
    assert serialize_tree(t2) == text
