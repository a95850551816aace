"""Directed multigraphs and their homomorphisms, with (co)limits taken componentwise.

A graph is a pair of finite sets with source and target maps; loops and
parallel edges are allowed.  Every square of graph homomorphisms splits into a
vertex square and an edge square of finite-set maps, and the Van Kampen test
and the amalgamation procedure are run on both components.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .finset import (
    CommutingSquare,
    FinMap,
    FinSet,
    FinSetError,
    NotAPushout,
    NotCommuting,
    ShapeMismatch,
    compose,
    is_pullback,
    is_pushout,
    pair,
    pullback,
    pushout,
)
from .vankampen import (
    DomainCycle,
    MalformedSpan,
    PullbackSpan,
    amalgamate,
    find_domain_cycle,
)


class ComponentMismatch(FinSetError):
    """Vertex and edge amalgamations do not fit together into a graph."""


@dataclass(frozen=True)
class FinGraph:
    vertices: FinSet
    edges: FinSet
    src: FinMap
    tgt: FinMap

    def __post_init__(self):
        for m in (self.src, self.tgt):
            if m.dom != self.edges or m.cod != self.vertices:
                raise FinSetError("source and target must map edges to vertices")

    @classmethod
    def build(cls, vertices, edges: Mapping[str, Tuple[str, str]]) -> "FinGraph":
        V, E = FinSet(vertices), FinSet(edges)
        return cls(V, E, FinMap(E, V, {e: st[0] for e, st in edges.items()}), FinMap(E, V, {e: st[1] for e, st in edges.items()}))

    @classmethod
    def discrete(cls, vertices) -> "FinGraph":
        return cls.build(vertices, {})

    def __repr__(self) -> str:
        es = ", ".join(f"{e}:{self.src(e)}->{self.tgt(e)}" for e in self.edges)
        return f"FinGraph(V={{{', '.join(self.vertices)}}}, E={{{es}}})"


@dataclass(frozen=True)
class GraphHom:
    dom: FinGraph
    cod: FinGraph
    on_vertices: FinMap
    on_edges: FinMap

    def __post_init__(self):
        v, e = self.on_vertices, self.on_edges
        if v.dom != self.dom.vertices or v.cod != self.cod.vertices:
            raise ShapeMismatch("vertex component does not match the graphs")
        if e.dom != self.dom.edges or e.cod != self.cod.edges:
            raise ShapeMismatch("edge component does not match the graphs")
        for x in self.dom.edges:
            if self.cod.src(e(x)) != v(self.dom.src(x)) or self.cod.tgt(e(x)) != v(self.dom.tgt(x)):
                raise NotCommuting(f"homomorphism does not respect source/target at edge {x!r}", witness=x)

    @classmethod
    def identity(cls, G: FinGraph) -> "GraphHom":
        return cls(G, G, FinMap.identity(G.vertices), FinMap.identity(G.edges))

    def then(self, g: "GraphHom") -> "GraphHom":
        return compose_hom(g, self)


def compose_hom(g: GraphHom, f: GraphHom) -> GraphHom:
    if f.cod != g.dom:
        raise ShapeMismatch("cannot compose graph homomorphisms")
    return GraphHom(f.dom, g.cod, compose(g.on_vertices, f.on_vertices), compose(g.on_edges, f.on_edges))


def _hom_from_components(dom: FinGraph, cod: FinGraph, v: FinMap, e: FinMap) -> GraphHom:
    return GraphHom(dom, cod, FinMap(dom.vertices, cod.vertices, v.as_dict()), FinMap(dom.edges, cod.edges, e.as_dict()))


def graph_pushout(f: GraphHom, g: GraphHom) -> Tuple[FinGraph, GraphHom, GraphHom]:
    if f.dom != g.dom:
        raise ShapeMismatch("pushout of graph homomorphisms with different domains")
    pv = pushout(f.on_vertices, g.on_vertices)
    pe = pushout(f.on_edges, g.on_edges)
    src: Dict[str, str] = {}
    tgt: Dict[str, str] = {}
    for inj_e, inj_v, G in ((pe.inj1, pv.inj1, f.cod), (pe.inj2, pv.inj2, g.cod)):
        for x in G.edges:
            k = inj_e(x)
            for table, end in ((src, G.src), (tgt, G.tgt)):
                v = inj_v(end(x))
                if table.setdefault(k, v) != v:
                    raise AssertionError("pushout source/target ill defined")
    P = FinGraph(pv.apex, pe.apex, FinMap(pe.apex, pv.apex, src), FinMap(pe.apex, pv.apex, tgt))
    return P, GraphHom(f.cod, P, pv.inj1, pe.inj1), GraphHom(g.cod, P, pv.inj2, pe.inj2)


def graph_pullback(f: GraphHom, g: GraphHom) -> Tuple[FinGraph, GraphHom, GraphHom]:
    """Chosen pullback; vertices and edges are the matched pairs of each component."""
    if f.cod != g.cod:
        raise ShapeMismatch("pullback of graph homomorphisms with different codomains")
    pv = pullback(f.on_vertices, g.on_vertices)
    pe = pullback(f.on_edges, g.on_edges)
    src = {x: pair(f.dom.src(pe.proj1(x)), g.dom.src(pe.proj2(x))) for x in pe.apex}
    tgt = {x: pair(f.dom.tgt(pe.proj1(x)), g.dom.tgt(pe.proj2(x))) for x in pe.apex}
    P = FinGraph(pv.apex, pe.apex, FinMap(pe.apex, pv.apex, src), FinMap(pe.apex, pv.apex, tgt))
    return P, GraphHom(P, f.dom, pv.proj1, pe.proj1), GraphHom(P, g.dom, pv.proj2, pe.proj2)


@dataclass(frozen=True)
class GraphSquare:
    left: GraphHom
    top: GraphHom
    right: GraphHom
    bottom: GraphHom

    def __post_init__(self):
        # the component squares carry the shape and commutation checks
        self.vertex_square()
        self.edge_square()

    def vertex_square(self) -> CommutingSquare:
        return CommutingSquare(
            self.left.on_vertices, self.top.on_vertices, self.right.on_vertices, self.bottom.on_vertices
        )

    def edge_square(self) -> CommutingSquare:
        return CommutingSquare(self.left.on_edges, self.top.on_edges, self.right.on_edges, self.bottom.on_edges)


def is_graph_pullback(sq: GraphSquare) -> bool:
    return is_pullback(sq.vertex_square()) and is_pullback(sq.edge_square())


def is_graph_pushout(sq: GraphSquare) -> bool:
    return is_pushout(sq.vertex_square()) and is_pushout(sq.edge_square())


def graph_pushout_square(a: GraphHom, r: GraphHom) -> GraphSquare:
    _, i1, i2 = graph_pushout(a, r)
    return GraphSquare(left=a, top=r, right=i2, bottom=i1)


def graph_domain_cycles(sq: GraphSquare) -> Tuple[Optional[DomainCycle], Optional[DomainCycle]]:
    """Domain cycles of the vertex and edge components of ``(left, top)``."""
    return (
        find_domain_cycle(sq.left.on_vertices, sq.top.on_vertices),
        find_domain_cycle(sq.left.on_edges, sq.top.on_edges),
    )


def is_van_kampen_graph(sq: GraphSquare) -> bool:
    if not is_graph_pushout(sq):
        raise NotAPushout("the Van Kampen criterion applies to pushout squares")
    vc, ec = graph_domain_cycles(sq)
    return vc is None and ec is None


@dataclass(frozen=True)
class GraphPullbackSpan:
    a: GraphHom
    r: GraphHom
    carrier: GraphHom
    left: GraphSquare
    right: GraphSquare

    def __post_init__(self):
        for name, sq, leg in (("left", self.left, self.a), ("right", self.right, self.r)):
            if sq.left != self.carrier or sq.bottom != leg:
                raise MalformedSpan(f"{name} face does not fit the carrier and base leg")
            if not is_graph_pullback(sq):
                raise MalformedSpan(f"{name} face is not a pullback")

    def vertex_span(self) -> PullbackSpan:
        return PullbackSpan(
            self.a.on_vertices, self.r.on_vertices, self.carrier.on_vertices,
            self.left.vertex_square(), self.right.vertex_square(),
        )

    def edge_span(self) -> PullbackSpan:
        return PullbackSpan(
            self.a.on_edges, self.r.on_edges, self.carrier.on_edges,
            self.left.edge_square(), self.right.edge_square(),
        )


@dataclass(frozen=True)
class GraphInstanceCube:
    span: GraphPullbackSpan
    bottom: GraphSquare
    sigma: GraphHom
    s_top: GraphHom
    abar_top: GraphHom
    rbar_top: GraphHom

    @property
    def front(self) -> GraphSquare:
        return GraphSquare(self.span.left.right, self.rbar_top, self.sigma, self.bottom.bottom)

    @property
    def side(self) -> GraphSquare:
        return GraphSquare(self.span.right.right, self.abar_top, self.sigma, self.bottom.right)

    @property
    def top(self) -> GraphSquare:
        return GraphSquare(self.span.left.top, self.span.right.top, self.abar_top, self.rbar_top)

    def failures(self) -> List[str]:
        out = []
        if not is_graph_pullback(self.front):
            out.append("front face is not a pullback")
        if not is_graph_pullback(self.side):
            out.append("side face is not a pullback")
        if not is_graph_pushout(self.top):
            out.append("top face is not a pushout")
        return out


def amalgamate_graph(span: GraphPullbackSpan, bottom: GraphSquare) -> Optional[GraphInstanceCube]:
    if not is_graph_pushout(bottom):
        raise NotAPushout("amalgamation needs a pushout bottom square")
    vcube = amalgamate(span.vertex_span(), bottom.vertex_square())
    ecube = amalgamate(span.edge_span(), bottom.edge_square())
    if vcube is None or ecube is None:
        return None
    src: Dict[str, str] = {}
    tgt: Dict[str, str] = {}
    J, H = span.left.right.dom, span.right.right.dom
    for G, e_leg, v_leg in ((J, ecube.rbar_top, vcube.rbar_top), (H, ecube.abar_top, vcube.abar_top)):
        for x in G.edges:
            k = e_leg(x)
            for table, end in ((src, G.src), (tgt, G.tgt)):
                v = v_leg(end(x))
                if table.setdefault(k, v) != v:
                    raise ComponentMismatch(f"edge {k!r} of the amalgamated instance has two endpoints")
    KV, KE = vcube.sigma.dom, ecube.sigma.dom
    K = FinGraph(KV, KE, FinMap(KE, KV, src), FinMap(KE, KV, tgt))
    S = bottom.bottom.cod
    I = span.carrier.dom
    sigma = GraphHom(K, S, vcube.sigma, ecube.sigma)
    cube = GraphInstanceCube(
        span,
        bottom,
        sigma,
        GraphHom(I, K, vcube.s_top, ecube.s_top),
        GraphHom(H, K, vcube.abar_top, ecube.abar_top),
        GraphHom(J, K, vcube.rbar_top, ecube.rbar_top),
    )
    bad = cube.failures()
    if bad:
        raise AssertionError("amalgamated graph cube is unsound: " + "; ".join(bad))
    return cube


def graph_pb_cube(sigma: GraphHom, bottom: GraphSquare) -> GraphInstanceCube:
    """Pull ``sigma: K -> S`` back along the bottom square."""
    a, r, abar, rbar = bottom.left, bottom.top, bottom.right, bottom.bottom
    s = compose_hom(abar, r)
    I, gamma, s_top = graph_pullback(s, sigma)
    J, tau, rbar_top = graph_pullback(rbar, sigma)
    H, beta, abar_top = graph_pullback(abar, sigma)
    a_top = GraphHom(
        I, J,
        FinMap(I.vertices, J.vertices, {i: pair(a.on_vertices(gamma.on_vertices(i)), s_top.on_vertices(i)) for i in I.vertices}),
        FinMap(I.edges, J.edges, {i: pair(a.on_edges(gamma.on_edges(i)), s_top.on_edges(i)) for i in I.edges}),
    )
    r_top = GraphHom(
        I, H,
        FinMap(I.vertices, H.vertices, {i: pair(r.on_vertices(gamma.on_vertices(i)), s_top.on_vertices(i)) for i in I.vertices}),
        FinMap(I.edges, H.edges, {i: pair(r.on_edges(gamma.on_edges(i)), s_top.on_edges(i)) for i in I.edges}),
    )
    span = GraphPullbackSpan(a, r, gamma, GraphSquare(gamma, a_top, tau, a), GraphSquare(gamma, r_top, beta, r))
    return GraphInstanceCube(span, bottom, sigma, s_top, abar_top, rbar_top)


# -- constructions -----------------------------------------------------------


def _graph_over(V: FinMap, E: FinMap, base: FinGraph, src: Mapping[str, str], tgt: Mapping[str, str]) -> GraphHom:
    """Graph with vertices ``V.dom`` and edges ``E.dom``, typed over ``base`` by ``(V, E)``."""
    G = FinGraph(V.dom, E.dom, FinMap(E.dom, V.dom, dict(src)), FinMap(E.dom, V.dom, dict(tgt)))
    return GraphHom(G, base, V, E)


def _empty_map(cod: FinSet) -> FinMap:
    return FinMap(FinSet(()), cod, {})


def uniform_graph_span(a: GraphHom, r: GraphHom) -> GraphPullbackSpan:
    """Two copies of every vertex and edge, lifted identically along both legs."""
    def doubled(G: FinGraph) -> GraphHom:
        V = FinMap(FinSet(pair(b, x) for b in "01" for x in G.vertices), G.vertices,
                   {pair(b, x): x for b in "01" for x in G.vertices})
        E = FinMap(FinSet(pair(b, x) for b in "01" for x in G.edges), G.edges,
                   {pair(b, x): x for b in "01" for x in G.edges})
        src = {pair(b, e): pair(b, G.src(e)) for b in "01" for e in G.edges}
        tgt = {pair(b, e): pair(b, G.tgt(e)) for b in "01" for e in G.edges}
        return _graph_over(V, E, G, src, tgt)

    def lift(f: GraphHom, dom: GraphHom, cod: GraphHom) -> GraphHom:
        v = {pair(b, x): pair(b, f.on_vertices(x)) for b in "01" for x in f.dom.vertices}
        e = {pair(b, x): pair(b, f.on_edges(x)) for b in "01" for x in f.dom.edges}
        return _hom_from_components(dom.dom, cod.dom, FinMap(dom.dom.vertices, cod.dom.vertices, v),
                                    FinMap(dom.dom.edges, cod.dom.edges, e))

    gamma, tau, beta = doubled(a.dom), doubled(a.cod), doubled(r.cod)
    left = GraphSquare(gamma, lift(a, gamma, tau), tau, a)
    right = GraphSquare(gamma, lift(r, gamma, beta), beta, r)
    return GraphPullbackSpan(a, r, gamma, left, right)


def unreachable_graph_span(a: GraphHom, r: GraphHom) -> Optional[GraphPullbackSpan]:
    """A rear span that no instance over the pushout reaches; ``None`` if both components are separated.

    A vertex cycle is lifted to instances without edges, an edge cycle to
    instances whose vertex fibres are singletons.
    """
    from .vankampen import proper_subcycle, unreachable_span_for_cycle

    vc = find_domain_cycle(a.on_vertices, r.on_vertices)
    if vc is not None:
        if not vc.proper:
            vc = proper_subcycle(vc, a.on_vertices, r.on_vertices)
        sp = unreachable_span_for_cycle(a.on_vertices, r.on_vertices, vc)
        none = FinSet(())

        def discrete(inst: FinMap, base: FinGraph) -> GraphHom:
            return GraphHom(FinGraph.discrete(inst.dom), base, inst, _empty_map(base.edges))

        gamma, tau, beta = discrete(sp.carrier, a.dom), discrete(sp.tau, a.cod), discrete(sp.beta, r.cod)
        top_a = GraphHom(gamma.dom, tau.dom, sp.a_top, _empty_map(none))
        top_r = GraphHom(gamma.dom, beta.dom, sp.r_top, _empty_map(none))
    else:
        ec = find_domain_cycle(a.on_edges, r.on_edges)
        if ec is None:
            return None
        if not ec.proper:
            ec = proper_subcycle(ec, a.on_edges, r.on_edges)
        sp = unreachable_span_for_cycle(a.on_edges, r.on_edges, ec)

        def thin(inst: FinMap, base: FinGraph) -> GraphHom:
            src = {e: base.src(inst(e)) for e in inst.dom}
            tgt = {e: base.tgt(inst(e)) for e in inst.dom}
            return _graph_over(FinMap.identity(base.vertices), inst, base, src, tgt)

        gamma, tau, beta = thin(sp.carrier, a.dom), thin(sp.tau, a.cod), thin(sp.beta, r.cod)
        top_a = GraphHom(gamma.dom, tau.dom, a.on_vertices, sp.a_top)
        top_r = GraphHom(gamma.dom, beta.dom, r.on_vertices, sp.r_top)
    return GraphPullbackSpan(a, r, gamma, GraphSquare(gamma, top_a, tau, a), GraphSquare(gamma, top_r, beta, r))
