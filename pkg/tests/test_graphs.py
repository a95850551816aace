import pytest
from hypothesis import given, settings

from vkdescent.finset import FinMap, FinSet, NotAPushout, NotCommuting, ShapeMismatch, pushout_square
from vkdescent.graph_oracle import brute_reachable_graph, graph_spans_isomorphic
from vkdescent.graphs import (
    FinGraph,
    GraphHom,
    GraphSquare,
    amalgamate_graph,
    compose_hom,
    graph_domain_cycles,
    graph_pb_cube,
    graph_pullback,
    graph_pushout,
    graph_pushout_square,
    is_graph_pullback,
    is_graph_pushout,
    is_van_kampen_graph,
    uniform_graph_span,
    unreachable_graph_span,
)
from vkdescent.oracle import SearchBudget
from vkdescent.vankampen import amalgamate, is_van_kampen

from .support import example1_legs, hom, looped_example1, spans_of_maps

EDGE = FinGraph.build(["s", "t"], {"e": ("s", "t")})
POINT = FinGraph.discrete(["p"])
EMPTY = FinGraph.discrete([])


def discrete_hom(f: FinMap) -> GraphHom:
    return GraphHom(FinGraph.discrete(f.dom), FinGraph.discrete(f.cod), f, FinMap(FinSet(()), FinSet(()), {}))


def example1_discrete():
    a, r = example1_legs()
    return discrete_hom(a), discrete_hom(r)


# -- graphs and homomorphisms --------------------------------------------------


def test_src_and_tgt_must_land_in_vertices():
    with pytest.raises(Exception):
        FinGraph.build(["s"], {"e": ("s", "t")})


def test_homomorphisms_must_respect_endpoints():
    flip = FinGraph.build(["s", "t"], {"e": ("t", "s")})
    with pytest.raises(NotCommuting) as info:
        hom(EDGE, flip, {"s": "s", "t": "t"}, {"e": "e"})
    assert info.value.witness == "e"
    assert hom(EDGE, flip, {"s": "t", "t": "s"}, {"e": "e"}).cod == flip


def test_composition_and_identity():
    loop = FinGraph.build(["v"], {"l": ("v", "v")})
    f = hom(EDGE, loop, {"s": "v", "t": "v"}, {"e": "l"})
    assert compose_hom(GraphHom.identity(loop), f) == f
    assert f.then(GraphHom.identity(loop)) == f
    with pytest.raises(ShapeMismatch):
        compose_hom(f, f)


# -- colimits and limits -------------------------------------------------------


def test_pushout_of_identities_is_the_codomain():
    idE = GraphHom.identity(EDGE)
    P, i1, i2 = graph_pushout(idE, idE)
    assert len(P.vertices) == 2 and len(P.edges) == 1
    assert i1 == i2


def test_pushout_over_the_empty_graph_is_a_disjoint_union():
    f = GraphHom(EMPTY, EDGE, FinMap(FinSet(()), EDGE.vertices, {}), FinMap(FinSet(()), EDGE.edges, {}))
    P, _, _ = graph_pushout(f, f)
    assert len(P.vertices) == 4 and len(P.edges) == 2


def test_gluing_two_edges_at_one_vertex():
    f = hom(POINT, EDGE, {"p": "t"}, {})
    g = hom(POINT, EDGE, {"p": "s"}, {})
    P, i1, i2 = graph_pushout(f, g)
    assert len(P.vertices) == 3 and len(P.edges) == 2
    assert P.tgt(i1.on_edges("e")) == P.src(i2.on_edges("e"))


def test_pushout_needs_a_common_domain():
    with pytest.raises(ShapeMismatch):
        graph_pushout(GraphHom.identity(EDGE), GraphHom.identity(POINT))


def test_pullback_along_identity_is_a_copy():
    idE = GraphHom.identity(EDGE)
    P, p1, p2 = graph_pullback(idE, idE)
    assert len(P.vertices) == 2 and len(P.edges) == 1
    assert P.src(P.edges.elements[0]) == "(s,s)"


def test_pullback_of_disjoint_images_is_empty():
    two = FinGraph.discrete(["u", "v"])
    f = hom(POINT, two, {"p": "u"}, {})
    g = hom(POINT, two, {"p": "v"}, {})
    P, _, _ = graph_pullback(f, g)
    assert len(P.vertices) == 0 and len(P.edges) == 0


def test_pullback_over_a_type_vertex_is_the_instance_fibre():
    typ = FinGraph.build(["T", "U"], {"tt": ("T", "T"), "tu": ("T", "U")})
    inst = FinGraph.build(["a", "b", "c"], {"ab": ("a", "b"), "ac": ("a", "c"), "aa": ("a", "a")})
    sigma = hom(inst, typ, {"a": "T", "b": "T", "c": "U"}, {"ab": "tt", "aa": "tt", "ac": "tu"})
    loopT = FinGraph.build(["T"], {"tt": ("T", "T")})
    point = hom(loopT, typ, {"T": "T"}, {"tt": "tt"})
    P, _, proj = graph_pullback(point, sigma)
    assert sorted(proj.on_vertices.image()) == ["a", "b"]
    assert sorted(proj.on_edges.image()) == ["aa", "ab"]


def test_pullback_needs_a_common_codomain():
    with pytest.raises(ShapeMismatch):
        graph_pullback(GraphHom.identity(EDGE), GraphHom.identity(POINT))


def test_chosen_limits_pass_their_checks():
    a, r = looped_example1()
    sq = graph_pushout_square(a, r)
    assert is_graph_pushout(sq)
    s = compose_hom(sq.right, sq.top)
    P, p1, p2 = graph_pullback(s, s)
    assert is_graph_pullback(GraphSquare(p1, p2, s, s))


@settings(max_examples=40, deadline=None)
@given(spans_of_maps(max_size=4))
def test_discrete_graph_colimits_match_sets(legs):
    a, r = legs
    sq = graph_pushout_square(discrete_hom(a), discrete_hom(r))
    assert sq.vertex_square() == pushout_square(a, r)
    assert is_van_kampen_graph(sq) == is_van_kampen(pushout_square(a, r))


# -- Van Kampen decision -------------------------------------------------------


def test_monic_components_are_van_kampen():
    f = hom(POINT, EDGE, {"p": "t"}, {})
    g = hom(POINT, EDGE, {"p": "s"}, {})
    assert is_van_kampen_graph(graph_pushout_square(f, g))


def test_example1_kernels_on_vertices_are_not_van_kampen():
    sq = graph_pushout_square(*example1_discrete())
    vc, ec = graph_domain_cycles(sq)
    assert vc is not None and ec is None
    assert not is_van_kampen_graph(sq)


def test_edge_cycle_alone_breaks_van_kampen():
    # two parallel edges collapsed by both legs, vertices kept apart
    L = FinGraph.build(["s", "t"], {"e1": ("s", "t"), "e2": ("s", "t")})
    collapse = hom(L, EDGE, {"s": "s", "t": "t"}, {"e1": "e", "e2": "e"})
    sq = graph_pushout_square(collapse, collapse)
    vc, ec = graph_domain_cycles(sq)
    assert vc is None and ec is not None
    assert not is_van_kampen_graph(sq)


def test_van_kampen_needs_a_pushout():
    f = hom(POINT, EDGE, {"p": "s"}, {})
    bigger = FinGraph.build(["s", "t", "z"], {"e": ("s", "t")})
    inc = hom(EDGE, bigger, {"s": "s", "t": "t"}, {"e": "e"})
    idP = GraphHom.identity(POINT)
    sq = GraphSquare(idP, f, inc, compose_hom(inc, f))
    with pytest.raises(NotAPushout):
        is_van_kampen_graph(sq)


# -- amalgamation --------------------------------------------------------------


def test_discrete_amalgamation_matches_sets():
    a, r = example1_legs()
    from vkdescent.vankampen import uniform_span

    ga, gr = example1_discrete()
    bottom = graph_pushout_square(ga, gr)
    span = uniform_graph_span(ga, gr)
    cube = amalgamate_graph(span, bottom)
    set_cube = amalgamate(uniform_span(a, r), pushout_square(a, r))
    assert len(cube.sigma.dom.vertices) == len(set_cube.sigma.dom) == 2
    assert len(cube.sigma.dom.edges) == 0


def test_uniform_looped_span_amalgamates():
    a, r = looped_example1()
    bottom = graph_pushout_square(a, r)
    span = uniform_graph_span(a, r)
    cube = amalgamate_graph(span, bottom)
    K = cube.sigma.dom
    assert len(K.vertices) == 2 and len(K.edges) == 2
    assert all(K.src(e) == K.tgt(e) for e in K.edges)
    assert cube.failures() == []
    assert graph_spans_isomorphic(graph_pb_cube(cube.sigma, bottom).span, span)


def test_twisted_vertex_component_does_not_amalgamate():
    ga, gr = example1_discrete()
    bottom = graph_pushout_square(ga, gr)
    span = unreachable_graph_span(ga, gr)
    assert amalgamate_graph(span, bottom) is None
    assert brute_reachable_graph(span, bottom, SearchBudget(max_apex_size=4)) is None


def test_twisted_looped_span_does_not_amalgamate():
    a, r = looped_example1()
    bottom = graph_pushout_square(a, r)
    span = unreachable_graph_span(a, r)
    assert amalgamate_graph(span, bottom) is None


def test_twisted_edge_component_does_not_amalgamate():
    L = FinGraph.build(["s", "t"], {"e1": ("s", "t"), "e2": ("s", "t")})
    collapse = hom(L, EDGE, {"s": "s", "t": "t"}, {"e1": "e", "e2": "e"})
    bottom = graph_pushout_square(collapse, collapse)
    span = unreachable_graph_span(collapse, collapse)
    assert amalgamate_graph(span, bottom) is None
    assert brute_reachable_graph(span, bottom) is None


def test_separated_pairs_have_no_unreachable_span():
    f = hom(POINT, EDGE, {"p": "t"}, {})
    assert unreachable_graph_span(f, f) is None


def test_amalgamation_needs_a_pushout():
    a, r = looped_example1()
    sq = graph_pushout_square(a, r)
    span = uniform_graph_span(a, r)
    K = sq.bottom.cod
    bigger = FinGraph.build(list(K.vertices) + ["junk"], {e: (K.src(e), K.tgt(e)) for e in K.edges})
    inc = hom(K, bigger, {v: v for v in K.vertices}, {e: e for e in K.edges})
    bad = GraphSquare(a, r, compose_hom(inc, sq.right), compose_hom(inc, sq.bottom))
    with pytest.raises(NotAPushout):
        amalgamate_graph(span, bad)
