"""Command-line frontend over the PLG / tree / script text formats.

Exit codes: 0 success (or relation holds), 1 relation does not hold,
2 input error, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import plg
from .canonical import canonical_form, equivalent
from .decomposition import (
    add_root,
    branch_width_exact,
    carving_width_exact,
    certify,
    make_bond_linked,
    make_disc,
    make_linked,
    parse_tree,
    serialize_tree,
    widths,
    Violation,
)
from .errors import ParseError, PlaneCarveError, TooLarge
from .gridlib import grid, grid_embed, unique_embedding_census
from .leaving import leaving_graph
from .medial import medial, medial_digraph
from .ops import parse_script, replay, serialize_script
from .planegraph import dual, trace_faces
from .relations import (
    abstract_minor,
    embedded_immersion,
    embedded_minor,
    ordered_immersion,
)

OK, NO, BADINPUT, TOOBIG = 0, 1, 2, 3


def _load(path):
    try:
        return plg.load_plg(path)
    except FileNotFoundError as exc:
        raise ParseError(str(exc))


def _emit(args, pairs):
    if args.format == "machine":
        for k, v in pairs:
            print(f"{k} {v}")
    else:
        width = max((len(k) for k, _ in pairs), default=0)
        for k, v in pairs:
            print(f"{k:<{width}}  {v}")


def cmd_validate(args):
    g = _load(args.plg)
    _emit(
        args,
        [
            ("vertices", len(g.vertices)),
            ("edges", g.num_edges()),
            ("components", len(g.components())),
            ("faces", len(trace_faces(g))),
        ],
    )
    return OK


def cmd_faces(args):
    g = _load(args.plg)
    rows = []
    for f in trace_faces(g):
        rows.append((f"face {f.id}", " ".join("|".join(w) for w in f.walks) or "-"))
    _emit(args, rows)
    return OK


def cmd_dual(args):
    g = _load(args.plg)
    sys.stdout.write(plg.serialize_plg(dual(g)))
    return OK


def cmd_cw(args):
    g = _load(args.plg)
    k, t = carving_width_exact(g, args.max_vertices)
    _emit(args, [("cw", k), ("tree", serialize_tree(t))])
    return OK


def cmd_bw(args):
    g = _load(args.plg)
    k = branch_width_exact(g, args.max_vertices)
    _emit(args, [("bw", k)])
    return OK


def cmd_decompose(args):
    g = _load(args.plg)
    if args.mode == "linked":
        t = make_linked(g, max_vertices=args.max_vertices)
    elif args.mode == "bond-linked":
        t = make_bond_linked(g, args.max_vertices)
    else:
        t, _ = make_disc(g, args.max_vertices)
    table = widths(g, t)
    rows = [("tree", serialize_tree(t)), ("width", table.max_width())]
    for e in t.edges():
        s1, _, _, w = table.entries[e]
        rows.append((f"edge {e[0]}-{e[1]}", f"width {w} side1 {' '.join(sorted(s1))}"))
    _emit(args, rows)
    return OK


def cmd_verify(args):
    g = _load(args.plg)
    with open(args.tree, "r", encoding="utf-8") as fh:
        t = parse_tree(fh.read())
    checks = args.check.split(",")
    table = widths(g, t)
    rows = [("width", table.max_width())]
    failed = False
    for c in checks:
        if c == "width":
            continue
        res = certify(g, t, c)
        ok = not isinstance(res, Violation)
        failed = failed or not ok
        rows.append((c, "ok" if ok else f"violation {res.detail}"))
    _emit(args, rows)
    return NO if failed else OK


def cmd_leaving(args):
    g = _load(args.plg)
    with open(args.tree, "r", encoding="utf-8") as fh:
        t = parse_tree(fh.read())
    if t.root is None:
        t = add_root(t)
    u, v = args.edge.split("-")
    lg = leaving_graph(g, t, (int(u), int(v)))
    _emit(args, [("boundary", " ".join(lg.boundary) or "-")])
    sys.stdout.write(plg.serialize_plg(lg.interior))
    return OK


def cmd_medial(args):
    g = _load(args.plg)
    if args.directed:
        md = medial_digraph(g)
        text = plg.serialize_plg(md.graph)
        lines = [text.rstrip("\n")]
        for mv in sorted(md.source_edge_of):
            lines.append(f"# source-edge {mv} {md.source_edge_of[mv]}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(plg.serialize_plg(medial(g)))
    return OK


def cmd_check_minor(args):
    h = _load(args.h)
    g = _load(args.g)
    if args.abstract:
        return OK if abstract_minor(h, g, max_darts=args.max_darts) else NO
    script = embedded_minor(h, g, max_darts=args.max_darts)
    if script is None:
        return NO
    sys.stdout.write(serialize_script(script) or "# empty script\n")
    return OK


def cmd_check_immersion(args):
    h = _load(args.h)
    g = _load(args.g)
    if args.ordered_only:
        wit = ordered_immersion(
            h, g, require_tangent=False, directed=args.directed, max_darts=args.max_darts
        )
        return OK if wit is not None else NO
    script = embedded_immersion(
        h, g, directed=args.directed, engine=args.engine, max_darts=args.max_darts
    )
    if script is None:
        return NO
    sys.stdout.write(serialize_script(script) or "# empty script\n")
    return OK


def cmd_replay(args):
    g = _load(args.plg)
    with open(args.script, "r", encoding="utf-8") as fh:
        script = parse_script(fh.read())
    out = replay(g, script)
    sys.stdout.write(plg.serialize_plg(out))
    return OK


def cmd_grid_embed(args):
    g = _load(args.plg)
    n, script = grid_embed(g, max_vertices=args.max_vertices)
    print(f"target grid {n}")
    sys.stdout.write(serialize_script(script))
    return OK


def cmd_iso(args):
    a = _load(args.a)
    b = _load(args.b)
    return OK if equivalent(a, b, allow_reflection=args.allow_reflection) else NO


def cmd_census_grid(args):
    count, refl = unique_embedding_census(args.n)
    _emit(args, [("embeddings", count), ("up-to-reflection", refl)])
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="planecarve")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--max-darts", type=int, default=14)
    p.add_argument("--max-vertices", type=int, default=12)
    p.add_argument("--allow-reflection", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("validate")
    sp.add_argument("plg")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("faces")
    sp.add_argument("plg")
    sp.set_defaults(fn=cmd_faces)

    sp = sub.add_parser("dual")
    sp.add_argument("plg")
    sp.set_defaults(fn=cmd_dual)

    sp = sub.add_parser("cw")
    sp.add_argument("plg")
    sp.set_defaults(fn=cmd_cw)

    sp = sub.add_parser("bw")
    sp.add_argument("plg")
    sp.set_defaults(fn=cmd_bw)

    sp = sub.add_parser("decompose")
    sp.add_argument("plg")
    sp.add_argument("--mode", choices=("linked", "bond-linked", "disc"), default="disc")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("verify")
    sp.add_argument("plg")
    sp.add_argument("tree")
    sp.add_argument("--check", default="width,bond,linked,disc")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("leaving")
    sp.add_argument("plg")
    sp.add_argument("tree")
    sp.add_argument("edge", help="tree edge as u-v node ids")
    sp.set_defaults(fn=cmd_leaving)

    sp = sub.add_parser("medial")
    sp.add_argument("plg")
    sp.add_argument("--directed", action="store_true")
    sp.set_defaults(fn=cmd_medial)

    sp = sub.add_parser("check-minor")
    sp.add_argument("h")
    sp.add_argument("g")
    sp.add_argument("--abstract", action="store_true")
    sp.set_defaults(fn=cmd_check_minor)

    sp = sub.add_parser("check-immersion")
    sp.add_argument("h")
    sp.add_argument("g")
    sp.add_argument("--directed", action="store_true")
    sp.add_argument("--ordered-only", action="store_true")
    sp.add_argument("--engine", choices=("a", "b"), default="a")
    sp.set_defaults(fn=cmd_check_immersion)

    sp = sub.add_parser("replay")
    sp.add_argument("plg")
    sp.add_argument("script")
    sp.set_defaults(fn=cmd_replay)

    sp = sub.add_parser("grid-embed")
    sp.add_argument("plg")
    sp.set_defaults(fn=cmd_grid_embed)

    sp = sub.add_parser("iso")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(fn=cmd_iso)

    sp = sub.add_parser("census-grid")
    sp.add_argument("n", type=int)
    sp.set_defaults(fn=cmd_census_grid)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return TOOBIG
    except (PlaneCarveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BADINPUT


if __name__ == "__main__":
    sys.exit(main())
