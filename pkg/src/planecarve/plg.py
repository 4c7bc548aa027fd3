"""PLG text format: line-oriented description of a rotation system.

    # comment
    directed
    vertex <name> : <dart> <dart> ...
    edge <name> : <dartA> <dartB>
    nest <component-vertex>[.<child-face>] in <other-vertex>.<face-index>
    outer <face-index>

Rotations are counterclockwise.  In directed files ``dartA`` is the tail.
``nest`` without a child face defaults to the child's face 0.  ``outer``
refers to a face index of the root (outermost) component.
"""

from __future__ import annotations

from .errors import ParseError
from .planegraph import PlaneGraph


def parse_plg(text: str) -> PlaneGraph:
    rotation: dict[str, list[str]] = {}
    edges: dict[str, tuple[str, str]] = {}
    nest_lines: list[tuple[str, int | None, str, int]] = []
    outer_idx: int | None = None
    directed = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "directed":
                directed = True
            elif kind == "vertex":
                if len(parts) < 3 or parts[2] != ":":
                    raise ParseError(f"line {lineno}: expected 'vertex <name> : ...'")
                name = parts[1]
                if name in rotation:
                    raise ParseError(f"line {lineno}: duplicate vertex {name}")
                rotation[name] = parts[3:]
            elif kind == "edge":
                if len(parts) != 5 or parts[2] != ":":
                    raise ParseError(f"line {lineno}: expected 'edge <name> : <a> <b>'")
                name = parts[1]
                if name in edges:
                    raise ParseError(f"line {lineno}: duplicate edge {name}")
                edges[name] = (parts[3], parts[4])
            elif kind == "nest":
                if len(parts) != 4 or parts[2] != "in":
                    raise ParseError(f"line {lineno}: expected 'nest <v> in <w>.<k>'")
                child, cf = _split_face_ref(parts[1], lineno, default=None)
                host, hf = _split_face_ref(parts[3], lineno, default=None)
                if hf is None:
                    raise ParseError(f"line {lineno}: host face index required")
                nest_lines.append((child, cf, host, hf))
            elif kind == "outer":
                if len(parts) != 2:
                    raise ParseError(f"line {lineno}: expected 'outer <face-index>'")
                outer_idx = int(parts[1])
            else:
                raise ParseError(f"line {lineno}: unknown directive {kind!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc

    try:
        g = PlaneGraph(rotation, edges, directed=directed, validate=False)
    except Exception as exc:
        raise type(exc)(str(exc)) from exc

    nesting = {}
    for child, cf, host, hf in nest_lines:
        if child not in rotation:
            raise ParseError(f"nest: unknown vertex {child}")
        if host not in rotation:
            raise ParseError(f"nest: unknown vertex {host}")
        ck = g.component_key(child)
        hk = g.component_key(host)
        nesting[ck] = (hk, hf, 0 if cf is None else cf)

    outer = None
    if outer_idx is not None:
        g2 = PlaneGraph(rotation, edges, directed=directed, nesting=nesting, validate=False)
        outer = (g2.root_component(), outer_idx)

    return PlaneGraph(rotation, edges, directed=directed, nesting=nesting, outer=outer)


def _split_face_ref(token: str, lineno: int, default):
    if "." in token:
        name, idx = token.rsplit(".", 1)
        try:
            return name, int(idx)
        except ValueError:
            raise ParseError(f"line {lineno}: bad face index in {token!r}")
    return token, default


def serialize_plg(g: PlaneGraph) -> str:
    lines = []
    if g.directed:
        lines.append("directed")
    for v in g.vertices:
        lines.append(f"vertex {v} : {' '.join(g.rotation[v])}".rstrip())
    for e in sorted(g.edges):
        a, b = g.edges[e]
        lines.append(f"edge {e} : {a} {b}")
    for child in sorted(g.nesting):
        host, hf, cf = g.nesting[child]
        lines.append(f"nest {child}.{cf} in {host}.{hf}")
    if g.outer is not None:
        ck, fi = g.outer
        root = g.root_component()
        if ck != root:
            # anchor the outer region on the root component
            region = g.region_of(ck, fi)
            for slot in sorted(g.region_partition()):
                if g.region_partition()[slot] == region and slot[0] == root:
                    ck, fi = slot
                    break
        lines.append(f"outer {fi}")
    return "\n".join(lines) + "\n"


def load_plg(path: str) -> PlaneGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_plg(fh.read())
