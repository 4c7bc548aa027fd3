import pytest

from planecarve.planegraph import build_graph


def cycle_graph(n, prefix="v"):
    """Plane cycle v0-v1-...-v(n-1)-v0 with the standard embedding."""
    rotation = {}
    edges = {}
    for i in range(n):
        v = f"{prefix}{i}"
        nxt = f"{prefix}c{i}"
        prv = f"{prefix}c{(i - 1) % n}"
        rotation[v] = (f"{nxt}.a", f"{prv}.b")
        edges[nxt] = (f"{nxt}.a", f"{nxt}.b")
    return build_graph(rotation, edges)


def path_graph(n, prefix="v"):
    rotation = {}
    edges = {}
    for i in range(n):
        v = f"{prefix}{i}"
        ds = []
        if i < n - 1:
            ds.append(f"p{i}.a")
            edges[f"p{i}"] = (f"p{i}.a", f"p{i}.b")
        if i > 0:
            ds.append(f"p{i-1}.b")
        rotation[v] = tuple(ds)
    return build_graph(rotation, edges)


def triangle(prefix="t"):
    return cycle_graph(3, prefix)


def k4():
    """Tetrahedral embedding: outer triangle a,b,c with d inside."""
    rotation = {
        "a": ("ab.a", "ad.a", "ac.a"),
        "b": ("bc.a", "bd.a", "ab.b"),
        "c": ("ca.a", "cd.a", "bc.b"),
        "d": ("ad.b", "bd.b", "cd.b"),
    }
    edges = {
        "ab": ("ab.a", "ab.b"),
        "bc": ("bc.a", "bc.b"),
        "ca": ("ca.a", "ac.a"),
        "ad": ("ad.a", "ad.b"),
        "bd": ("bd.a", "bd.b"),
        "cd": ("cd.a", "cd.b"),
    }
    return build_graph(rotation, edges)


def self_loop():
    return build_graph({"v": ("l.a", "l.b")}, {"l": ("l.a", "l.b")})


def bowtie():
    """Two triangles sharing the cut vertex m."""
    rotation = {
        "a": ("e1.b", "e2.a"),
        "b": ("e2.b", "e3.a"),
        "m": ("e1.a", "e3.b", "e4.a", "e6.b"),
        "x": ("e4.b", "e5.a"),
        "y": ("e5.b", "e6.a"),
    }
    edges = {
        "e1": ("e1.a", "e1.b"),
        "e2": ("e2.a", "e2.b"),
        "e3": ("e3.a", "e3.b"),
        "e4": ("e4.a", "e4.b"),
        "e5": ("e5.a", "e5.b"),
        "e6": ("e6.a", "e6.b"),
    }
    return build_graph(rotation, edges)


def figure_g():
    """Triangle a,b,c with pendant d inside and pendant x outside at a."""
    rotation = {
        "a": ("ab.a", "ad.a", "ac.a", "ax.a"),
        "b": ("bc.a", "ab.b"),
        "c": ("ac.b", "bc.b"),
        "d": ("ad.b",),
        "x": ("ax.b",),
    }
    edges = {
        "ab": ("ab.a", "ab.b"),
        "bc": ("bc.a", "bc.b"),
        "ac": ("ac.a", "ac.b"),
        "ad": ("ad.a", "ad.b"),
        "ax": ("ax.a", "ax.b"),
    }
    return build_graph(rotation, edges)


def figure_g_prime():
    """Same abstract graph, both pendants inside the triangle."""
    rotation = {
        "a": ("ab.a", "ad.a", "ax.a", "ac.a"),
        "b": ("bc.a", "ab.b"),
        "c": ("ac.b", "bc.b"),
        "d": ("ad.b",),
        "x": ("ax.b",),
    }
    edges = {
        "ab": ("ab.a", "ab.b"),
        "bc": ("bc.a", "bc.b"),
        "ac": ("ac.a", "ac.b"),
        "ad": ("ad.a", "ad.b"),
        "ax": ("ax.a", "ax.b"),
    }
    return build_graph(rotation, edges)


def figure_h():
    """Doubled edge a-b with pendant d inside the bigon, pendant x outside."""
    rotation = {
        "a": ("p.a", "ad.a", "q.a", "ax.a"),
        "b": ("q.b", "p.b"),
        "d": ("ad.b",),
        "x": ("ax.b",),
    }
    edges = {
        "p": ("p.a", "p.b"),
        "q": ("q.a", "q.b"),
        "ad": ("ad.a", "ad.b"),
        "ax": ("ax.a", "ax.b"),
    }
    return build_graph(rotation, edges)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def tetra():
    return k4()
