import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vkdescent.finset import (
    CommutingSquare,
    FinMap,
    FinSet,
    FinSetError,
    NotCommuting,
    Partition,
    ShapeMismatch,
    classify,
    coequalizer,
    compose,
    epi_mono_factorize,
    is_pullback,
    is_pushout,
    join,
    kernel_pair,
    pair,
    pullback,
    pullback_square,
    pushout,
    pushout_square,
)

from .support import cospans, example1_legs, finmaps, fmap, names, spans_of_maps


def all_maps(dom: FinSet, cod: FinSet):
    for img in itertools.product(cod.elements, repeat=len(dom)):
        yield FinMap(dom, cod, dict(zip(dom, img)))


# -- basic objects -------------------------------------------------------------


def test_finset_is_canonical_and_rejects_duplicates():
    assert FinSet(["b", "a"]) == FinSet(["a", "b"])
    assert FinSet(["b", "a"]).elements == ("a", "b")
    with pytest.raises(FinSetError):
        FinSet(["a", "a"])


def test_finmap_must_be_total_and_land_in_codomain():
    with pytest.raises(FinSetError):
        fmap("xy", "c", {"x": "c"})
    with pytest.raises(FinSetError):
        fmap("x", "c", {"x": "d"})


def test_empty_sets_and_maps_are_legal():
    empty = FinSet(())
    f = FinMap(empty, FinSet("ab"), {})
    assert classify(f) == (True, False, False)
    assert pullback(f, f).apex == empty
    assert len(pushout(f, f).apex) == 4


# -- compose and classify ------------------------------------------------------


@given(finmaps())
def test_identity_laws(f):
    assert compose(FinMap.identity(f.cod), f) == f
    assert compose(f, FinMap.identity(f.dom)) == f


@given(st.data())
def test_composition_is_associative(data):
    f = data.draw(finmaps(max_dom=4, max_cod=4))
    g = data.draw(finmaps(dom=f.cod, max_cod=4))
    h = data.draw(finmaps(dom=g.cod, max_cod=4))
    assert compose(compose(h, g), f) == compose(h, compose(g, f))


def test_compose_rejects_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(fmap("a", "b", {"a": "b"}), fmap("a", "b", {"a": "b"}))


def test_classify_examples():
    assert classify(FinMap.identity(FinSet("ab"))) == (True, True, True)
    assert classify(fmap(["1", "2"], ["c"], {"1": "c", "2": "c"})) == (False, True, False)
    assert classify(FinMap.inclusion(FinSet(["1"]), FinSet(["1", "2"]))) == (True, False, False)


def test_epi_mono_examples():
    e, m = epi_mono_factorize(fmap(["1", "2"], ["a", "b"], {"1": "a", "2": "a"}))
    assert e.cod == FinSet(["a"]) and m == FinMap.inclusion(FinSet(["a"]), FinSet(["a", "b"]))
    f = fmap("pqrs", "abc", dict(p="a", q="b", r="a", s="b"))
    assert len(epi_mono_factorize(f)[1].dom) == 2
    inj = fmap("pq", "abc", dict(p="c", q="a"))
    e, m = epi_mono_factorize(inj)
    assert classify(e).iso and compose(m, e) == inj


@given(finmaps())
def test_epi_mono_factorization_property(f):
    e, m = epi_mono_factorize(f)
    assert compose(m, e) == f
    assert classify(e).epi and classify(m).mono


# -- pullbacks -----------------------------------------------------------------


def test_pullback_examples():
    c = FinSet(["c"])
    assert len(pullback(FinMap.identity(c), FinMap.identity(c)).apex) == 1
    f = fmap(["a1", "a2"], ["c"], {"a1": "c", "a2": "c"})
    g = fmap(["b1"], ["c"], {"b1": "c"})
    assert pullback(f, g).apex.elements == ("(a1,b1)", "(a2,b1)")
    h = fmap("xyz", "pq", dict(x="p", y="p", z="q"))
    pb = pullback(h, h)
    assert {(pb.proj1(i), pb.proj2(i)) for i in pb.apex} == set(kernel_pair(h).pairs())


def test_pullback_rejects_mismatched_codomains():
    with pytest.raises(ShapeMismatch):
        pullback(fmap("a", "b", {"a": "b"}), fmap("a", "c", {"a": "c"}))


def test_is_pullback_detects_duplicates_and_gaps():
    f = fmap(["a1", "a2"], ["c"], {"a1": "c", "a2": "c"})
    g = fmap(["b1"], ["c"], {"b1": "c"})
    sq = pullback_square(f, g)
    assert is_pullback(sq)
    # an extra copy of (a1,b1) makes the comparison non-injective
    tl = FinSet(list(sq.left.dom) + ["dup"])
    left = FinMap(tl, f.dom, {**sq.left.as_dict(), "dup": "a1"})
    top = FinMap(tl, g.dom, {**sq.top.as_dict(), "dup": "b1"})
    assert not is_pullback(CommutingSquare(left, top, g, f))
    # dropping (a2,b1) makes it non-surjective
    tl = FinSet(["(a1,b1)"])
    left = FinMap(tl, f.dom, {"(a1,b1)": "a1"})
    top = FinMap(tl, g.dom, {"(a1,b1)": "b1"})
    assert not is_pullback(CommutingSquare(left, top, g, f))


def test_non_commuting_square_reports_witness():
    f = fmap("x", "ab", {"x": "a"})
    g = fmap("x", "ab", {"x": "b"})
    idx = FinMap.identity(FinSet("x"))
    ida = FinMap.identity(FinSet("ab"))
    with pytest.raises(NotCommuting) as info:
        CommutingSquare(idx, f, ida, g)
    assert info.value.witness == "x"


def mediators(cone_l: FinMap, cone_t: FinMap, sq: CommutingSquare):
    """Every map from the cone apex into the square's corner through which the cone factors."""
    return [
        u for u in all_maps(cone_l.dom, sq.left.dom)
        if compose(sq.left, u) == cone_l and compose(sq.top, u) == cone_t
    ]


@settings(max_examples=40, deadline=None)
@given(cospans(max_size=3), st.integers(0, 2))
def test_pullback_universal_property(cospan, n):
    f, g = cospan
    sq = pullback_square(f, g)
    X = FinSet(names("u", n))
    # every commuting cone from X factors through the apex exactly once
    for cl in all_maps(X, f.dom):
        for ct in all_maps(X, g.dom):
            if all(f(cl(x)) == g(ct(x)) for x in X):
                assert len(mediators(cl, ct, sq)) == 1


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_pullbacks_preserve_epis(data):
    f = data.draw(finmaps(max_dom=5, max_cod=4))
    g = data.draw(finmaps(max_dom=5, cod=f.cod))
    if classify(g).epi:
        assert classify(pullback(f, g).proj1).epi


# -- pushouts and coequalizers -------------------------------------------------


def test_pushout_examples():
    X = FinSet("pq")
    po = pushout(FinMap.identity(X), FinMap.identity(X))
    assert len(po.apex) == 2 and classify(po.inj1).iso
    empty = FinSet(())
    po = pushout(FinMap(empty, FinSet("ab"), {}), FinMap(empty, FinSet("c"), {}))
    assert po.apex.elements == ("L:a", "L:b", "R:c")
    a, r = example1_legs()
    assert pushout(a, r).apex.elements == ("L:A1",)


def test_is_pushout_detects_extra_and_collapsed_elements():
    a = fmap("x", "ab", {"x": "a"})
    r = fmap("x", "c", {"x": "c"})
    sq = pushout_square(a, r)
    assert is_pushout(sq)
    S = sq.bottom.cod
    bigger = FinSet(list(S) + ["junk"])
    inc = FinMap.inclusion(S, bigger)
    assert not is_pushout(CommutingSquare(a, r, compose(inc, sq.right), compose(inc, sq.bottom)))
    one = FinSet(["*"])
    to_one = FinMap(S, one, {s: "*" for s in S})
    assert not is_pushout(CommutingSquare(a, r, compose(to_one, sq.right), compose(to_one, sq.bottom)))


@settings(max_examples=40, deadline=None)
@given(spans_of_maps(max_size=3))
def test_pushout_universal_property(span):
    a, r = span
    sq = pushout_square(a, r)
    T = FinSet(["t0", "t1"])
    # every cocone into T factors through the apex exactly once
    for u in all_maps(a.cod, T):
        for v in all_maps(r.cod, T):
            if compose(u, a) != compose(v, r):
                continue
            ms = [
                m for m in all_maps(sq.bottom.cod, T)
                if compose(m, sq.bottom) == u and compose(m, sq.right) == v
            ]
            assert len(ms) == 1


def test_coequalizer_examples():
    f = fmap("pq", "ab", dict(p="a", q="b"))
    assert classify(coequalizer(f, f)).iso
    c = coequalizer(fmap("p", ["1", "2"], {"p": "1"}), fmap("p", ["1", "2"], {"p": "2"}))
    assert len(c.cod) == 1
    with pytest.raises(ShapeMismatch):
        coequalizer(f, fmap("pq", "abc", dict(p="a", q="b")))


@given(finmaps())
def test_equivalence_relations_are_effective(h):
    pb = pullback(h, h)
    c = coequalizer(pb.proj1, pb.proj2)
    assert kernel_pair(c) == kernel_pair(h)
    e, _ = epi_mono_factorize(h)
    assert len(c.cod) == len(e.cod)


# -- partitions ----------------------------------------------------------------


def test_kernel_pair_examples():
    assert kernel_pair(fmap("xyz", "abc", dict(x="a", y="b", z="c"))) == Partition.discrete(FinSet("xyz"))
    assert kernel_pair(fmap("xyz", "a", dict(x="a", y="a", z="a"))) == Partition.indiscrete(FinSet("xyz"))
    a, _ = example1_legs()
    assert kernel_pair(a).blocks == (("w", "y"), ("x", "z"))


def test_join_examples():
    L = FinSet("xyzw")
    p = Partition(L, [("x", "z"), ("y", "w")])
    q = Partition(L, [("z", "w"), ("x", "y")])
    assert join(p, Partition.discrete(L)) == p
    assert join(p, p) == p
    assert join(p, q) == Partition.indiscrete(L)
    with pytest.raises(ShapeMismatch):
        join(p, Partition.discrete(FinSet("xy")))


def partitions_of(carrier: FinSet):
    from vkdescent.families import set_partitions

    for blocks in set_partitions(list(carrier)):
        yield Partition(carrier, blocks)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_join_is_least_upper_bound(data):
    L = FinSet(names("l", data.draw(st.integers(0, 5))))
    p = kernel_pair(data.draw(finmaps(dom=L, max_cod=4)))
    q = kernel_pair(data.draw(finmaps(dom=L, max_cod=4)))
    j = join(p, q)
    assert p.refines(j) and q.refines(j)
    for upper in partitions_of(L):
        if p.refines(upper) and q.refines(upper):
            assert j.refines(upper)


def test_partition_validation():
    with pytest.raises(FinSetError):
        Partition(FinSet("xy"), [("x",), ("x", "y")])
    with pytest.raises(FinSetError):
        Partition(FinSet("xy"), [("x",)])


def test_pair_encoding():
    assert pair("a", "b") == "(a,b)"
