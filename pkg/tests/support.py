"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from vkdescent.finset import FinMap, FinSet, pushout_square
from vkdescent.graphs import FinGraph, GraphHom


def fmap(dom, cod, table) -> FinMap:
    return FinMap(FinSet(dom), FinSet(cod), table)


def example1_legs():
    L = FinSet("xyzw")
    a = FinMap(L, FinSet(["A1", "A2"]), dict(x="A1", z="A1", y="A2", w="A2"))
    r = FinMap(L, FinSet(["R1", "R2"]), dict(z="R1", w="R1", x="R2", y="R2"))
    return a, r


def example1_bottom():
    return pushout_square(*example1_legs())


def example3_legs():
    L = FinSet(["l1", "l2", "l3"])
    a = FinMap(L, FinSet(["A1", "A2"]), dict(l1="A1", l2="A1", l3="A2"))
    r = FinMap(L, FinSet(["R1", "R2"]), dict(l1="R1", l2="R2", l3="R2"))
    return a, r


def hom(G: FinGraph, T: FinGraph, v, e) -> GraphHom:
    return GraphHom(G, T, FinMap(G.vertices, T.vertices, v), FinMap(G.edges, T.edges, e))


def looped_example1():
    """Example-1 kernels on vertices, one loop per vertex carried along."""
    L = FinGraph.build("xyzw", {f"e{x}": (x, x) for x in "xyzw"})
    A = FinGraph.build(["A1", "A2"], {"eA1": ("A1", "A1"), "eA2": ("A2", "A2")})
    R = FinGraph.build(["R1", "R2"], {"eR1": ("R1", "R1"), "eR2": ("R2", "R2")})
    av = dict(x="A1", z="A1", y="A2", w="A2")
    rv = dict(z="R1", w="R1", x="R2", y="R2")
    a = hom(L, A, av, {f"e{k}": "e" + v for k, v in av.items()})
    r = hom(L, R, rv, {f"e{k}": "e" + v for k, v in rv.items()})
    return a, r


def names(prefix: str, n: int):
    return [f"{prefix}{i}" for i in range(n)]


@st.composite
def finmaps(draw, max_dom: int = 6, max_cod: int = 6, dom=None, cod=None, min_cod: int = 0):
    if dom is None:
        # only the empty set maps into an empty codomain
        top = 0 if cod is not None and not len(cod) else max_dom
        dom = FinSet(names("d", draw(st.integers(0, top))))
    if cod is None:
        lo = max(min_cod, 1 if len(dom) else 0)
        cod = FinSet(names("c", draw(st.integers(lo, max(lo, max_cod)))))
    table = {x: draw(st.sampled_from(cod.elements)) for x in dom}
    return FinMap(dom, cod, table)


@st.composite
def surjections(draw, max_dom: int = 6, dom=None):
    if dom is None:
        dom = FinSet(names("d", draw(st.integers(0, max_dom))))
    n = len(dom)
    labels = [draw(st.integers(0, max(0, n - 1))) for _ in range(n)]
    used = sorted(set(labels))
    cod = FinSet(names("c", len(used)))
    return FinMap(dom, cod, {x: f"c{used.index(l)}" for x, l in zip(dom, labels)})


@st.composite
def cospans(draw, max_size: int = 5):
    C = FinSet(names("c", draw(st.integers(0, max_size))))
    if not len(C):
        f = FinMap(FinSet(names("x", 0)), C, {})
        return f, f
    f = draw(finmaps(max_dom=max_size, cod=C))
    g = draw(finmaps(max_dom=max_size, cod=C))
    g = FinMap(FinSet(["y" + x[1:] for x in g.dom]), C, {"y" + x[1:]: v for x, v in g.items()})
    return f, g


@st.composite
def spans_of_maps(draw, max_size: int = 5):
    L = FinSet(names("l", draw(st.integers(0, max_size))))
    a = draw(finmaps(dom=L, max_cod=max_size))
    r = draw(finmaps(dom=L, max_cod=max_size))
    r = FinMap(L, FinSet(["r" + y[1:] for y in r.cod]), {x: "r" + y[1:] for x, y in r.items()})
    return a, r


@st.composite
def descent_data(draw, max_base: int = 5, max_fiber: int = 3):
    """Valid descent data: random base, equal fibre sizes per kernel block, random transports."""
    from vkdescent.descent import from_transports
    from vkdescent.finset import kernel_pair

    base = draw(finmaps(max_dom=max_base, max_cod=max_base))
    table, transports = {}, {}
    for block in kernel_pair(base).blocks:
        n = draw(st.integers(0, max_fiber))
        e0 = block[0]
        for e in block:
            for k in range(n):
                table[f"{e}.{k}"] = e
            perm = draw(st.permutations(range(n)))
            transports[(e0, e)] = {f"{e0}.{k}": f"{e}.{perm[k]}" for k in range(n)}
    carrier = FinMap(FinSet(table), base.dom, table)
    return from_transports(carrier, base, transports)


@st.composite
def epi_pullbacks(draw, max_size: int = 4):
    """The chosen pullback ``(gamma, q, alpha, p)`` of some ``alpha`` along a surjection ``p``."""
    from vkdescent.finset import pullback_square

    p = draw(surjections(max_dom=max_size))
    alpha = draw(finmaps(max_dom=max_size if len(p.cod) else 0, cod=p.cod))
    return pullback_square(p, alpha)
