"""Brute-force reachability and Van Kampen checks for squares of graphs.

Reachability is decided by trying every graph ``K`` over the pushout apex
that the fibre sizes allow, pulling it back, and looking for an isomorphism of
rear spans.  No kernels or descent data are consulted.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .finset import FinMap, FinSet, NotAPushout, ShapeMismatch, kernel_pair, pair
from .graphs import (
    FinGraph,
    GraphHom,
    GraphPullbackSpan,
    GraphSquare,
    graph_pb_cube,
    graph_pushout,
    is_graph_pushout,
)
from .oracle import SearchBudget, _Clock

# A diagram is given by objects (element lists with a fibre label per element)
# and named arrows between objects.
Obj = Dict[str, str]          # element -> label it must keep
Arrow = Tuple[str, str, Mapping[str, str]]  # (source object, target object, table)


def find_diagram_isomorphism(
    objs1: Mapping[str, Obj], arrows1: Mapping[str, Arrow],
    objs2: Mapping[str, Obj], arrows2: Mapping[str, Arrow],
) -> Optional[Dict[str, Dict[str, str]]]:
    """Label-preserving bijections, one per object, commuting with every arrow."""
    if objs1.keys() != objs2.keys() or arrows1.keys() != arrows2.keys():
        raise ShapeMismatch("diagrams have different shapes")
    for o in objs1:
        if sorted(objs1[o].values()) != sorted(objs2[o].values()):
            return None
    out_arrows: Dict[str, List[str]] = {o: [] for o in objs1}
    for name, (s, _, _) in arrows1.items():
        out_arrows[s].append(name)
    phi: Dict[str, Dict[str, str]] = {o: {} for o in objs1}
    used: Dict[str, set] = {o: set() for o in objs1}
    order = [(o, x) for o in objs1 for x in objs1[o]]

    def assign(o: str, x: str, y: str, log: List[Tuple[str, str]]) -> bool:
        stack = [(o, x, y)]
        while stack:
            o, x, y = stack.pop()
            cur = phi[o].get(x)
            if cur is not None:
                if cur != y:
                    return False
                continue
            if y in used[o] or objs1[o][x] != objs2[o][y]:
                return False
            phi[o][x] = y
            used[o].add(y)
            log.append((o, x))
            for name in out_arrows[o]:
                _, t, f1 = arrows1[name]
                stack.append((t, f1[x], arrows2[name][2][y]))
        return True

    def undo(log: List[Tuple[str, str]]) -> None:
        for o, x in log:
            used[o].discard(phi[o].pop(x))

    def search(pos: int) -> bool:
        while pos < len(order) and order[pos][1] in phi[order[pos][0]]:
            pos += 1
        if pos == len(order):
            return True
        o, x = order[pos]
        for y in objs2[o]:
            if y in used[o]:
                continue
            log: List[Tuple[str, str]] = []
            if assign(o, x, y, log) and search(pos + 1):
                return True
            undo(log)
        return False

    return phi if search(0) else None


def _span_diagram(span: GraphPullbackSpan) -> Tuple[Dict[str, Obj], Dict[str, Arrow]]:
    I, J, H = span.carrier.dom, span.left.right.dom, span.right.right.dom
    gamma, tau, beta = span.carrier, span.left.right, span.right.right
    a_top, r_top = span.left.top, span.right.top
    objs = {
        "IE": gamma.on_edges.as_dict(), "IV": gamma.on_vertices.as_dict(),
        "JE": tau.on_edges.as_dict(), "JV": tau.on_vertices.as_dict(),
        "HE": beta.on_edges.as_dict(), "HV": beta.on_vertices.as_dict(),
    }
    arrows: Dict[str, Arrow] = {
        "a_E": ("IE", "JE", a_top.on_edges.as_dict()), "a_V": ("IV", "JV", a_top.on_vertices.as_dict()),
        "r_E": ("IE", "HE", r_top.on_edges.as_dict()), "r_V": ("IV", "HV", r_top.on_vertices.as_dict()),
    }
    for tag, G in (("I", I), ("J", J), ("H", H)):
        arrows[f"src{tag}"] = (f"{tag}E", f"{tag}V", G.src.as_dict())
        arrows[f"tgt{tag}"] = (f"{tag}E", f"{tag}V", G.tgt.as_dict())
    return objs, arrows


def graph_spans_isomorphic(s1: GraphPullbackSpan, s2: GraphPullbackSpan) -> bool:
    if s1.a != s2.a or s1.r != s2.r:
        return False
    o1, a1 = _span_diagram(s1)
    o2, a2 = _span_diagram(s2)
    return find_diagram_isomorphism(o1, a1, o2, a2) is not None


# -- reachability ------------------------------------------------------------


def _forced_counts(tau: FinMap, beta: FinMap, rbar: FinMap, abar: FinMap, cap: int) -> Optional[List[Sequence[int]]]:
    S = rbar.cod
    forced: Dict[str, set] = {t: set() for t in S}
    for y, xs in tau.fibers().items():
        forced[rbar(y)].add(len(xs))
    for y, xs in beta.fibers().items():
        forced[abar(y)].add(len(xs))
    out: List[Sequence[int]] = []
    for t in S:
        if len(forced[t]) > 1:
            return None
        out.append(tuple(forced[t]) if forced[t] else range(cap + 1))
    return out


def _instances_over(S: FinGraph, vcounts: Sequence[int], ecounts: Sequence[int]) -> Iterator[GraphHom]:
    """Graphs over ``S`` with the given fibre sizes; parallel edges in one fibre are interchangeable."""
    v_tab: Dict[str, str] = {}
    fib: Dict[str, List[str]] = {}
    for t, c in zip(S.vertices, vcounts):
        fib[t] = []
        for _ in range(c):
            name = f"kv{len(v_tab):02d}"
            v_tab[name] = t
            fib[t].append(name)
    per_edge = []
    for u, c in zip(S.edges, ecounts):
        ends = list(itertools.product(fib[S.src(u)], fib[S.tgt(u)]))
        per_edge.append([(u, combo) for combo in itertools.combinations_with_replacement(ends, c)])
    KV = FinSet(v_tab)
    for choice in itertools.product(*per_edge):
        e_tab, src, tgt = {}, {}, {}
        for u, combo in choice:
            for s, t in combo:
                name = f"ke{len(e_tab):02d}"
                e_tab[name], src[name], tgt[name] = u, s, t
        KE = FinSet(e_tab)
        K = FinGraph(KV, KE, FinMap(KE, KV, src), FinMap(KE, KV, tgt))
        yield GraphHom(K, S, FinMap(KV, S.vertices, v_tab), FinMap(KE, S.edges, e_tab))


def brute_reachable_graph(
    span: GraphPullbackSpan, bottom: GraphSquare, budget: SearchBudget = SearchBudget()
) -> Optional[GraphHom]:
    if bottom.left != span.a or bottom.top != span.r:
        raise ShapeMismatch("span legs do not match the bottom square")
    clock = _Clock(budget)
    S = bottom.bottom.cod
    vopts = _forced_counts(
        span.left.right.on_vertices, span.right.right.on_vertices,
        bottom.bottom.on_vertices, bottom.right.on_vertices, budget.max_apex_size,
    )
    eopts = _forced_counts(
        span.left.right.on_edges, span.right.right.on_edges,
        bottom.bottom.on_edges, bottom.right.on_edges, budget.max_apex_size,
    )
    if vopts is None or eopts is None:
        return None
    o1, a1 = _span_diagram(span)
    # cheap first guess: the instance induced on the pushout of the top legs
    guess = _induced_instance(span, bottom)
    if sum(len(x) for x in (guess.dom.vertices, guess.dom.edges)) <= budget.max_apex_size:
        o2, a2 = _span_diagram(graph_pb_cube(guess, bottom).span)
        if find_diagram_isomorphism(o1, a1, o2, a2) is not None:
            return guess
    truncated = False
    for vc in itertools.product(*vopts):
        for ec in itertools.product(*eopts):
            if sum(vc) + sum(ec) > budget.max_apex_size:
                truncated = True
                continue
            for sigma in _instances_over(S, vc, ec):
                clock.tick()
                o2, a2 = _span_diagram(graph_pb_cube(sigma, bottom).span)
                if find_diagram_isomorphism(o1, a1, o2, a2) is not None:
                    return sigma
    if truncated:
        from .oracle import BudgetExceeded

        raise BudgetExceeded("an admissible apex exceeds max_apex_size")
    return None


def _induced_instance(span: GraphPullbackSpan, bottom: GraphSquare) -> GraphHom:
    K, i1, i2 = graph_pushout(span.left.top, span.right.top)
    v: Dict[str, str] = {}
    e: Dict[str, str] = {}
    for inj, leg, base in ((i1, span.left.right, bottom.bottom), (i2, span.right.right, bottom.right)):
        for x in inj.dom.vertices:
            v[inj.on_vertices(x)] = base.on_vertices(leg.on_vertices(x))
        for x in inj.dom.edges:
            e[inj.on_edges(x)] = base.on_edges(leg.on_edges(x))
    S = bottom.bottom.cod
    return GraphHom(K, S, FinMap(K.vertices, S.vertices, v), FinMap(K.edges, S.edges, e))


# -- span enumeration --------------------------------------------------------


def _sizes(f: FinMap, g: FinMap, max_fiber: int) -> Iterator[Dict[str, int]]:
    kf, kg = kernel_pair(f), kernel_pair(g)
    for sizes in itertools.product(range(max_fiber + 1), repeat=len(f.dom)):
        n = dict(zip(f.dom, sizes))
        if all(len({n[x] for x in b}) == 1 for k in (kf, kg) for b in k.blocks):
            yield n


def _extra_sizes(unreached: Sequence[str], max_fiber: int) -> Iterator[Dict[str, int]]:
    for c in itertools.product(range(max_fiber + 1), repeat=len(unreached)):
        yield dict(zip(unreached, c))


def _layer(leg: FinMap, n: Mapping[str, int], extra: Mapping[str, int]) -> Dict[str, str]:
    """Elements ``(j,t)`` over the codomain of ``leg``: ``n`` pulled along ``leg``, plus ``extra``."""
    over = {leg(x): n[x] for x in leg.dom}
    over.update(extra)
    return {pair(str(j), t): t for t, c in over.items() for j in range(c)}


def _relabel_maps(leg: FinMap, n: Mapping[str, int], perms: Optional[Mapping[str, Sequence[int]]] = None) -> Dict[str, str]:
    perms = perms or {}
    return {
        pair(str(j), x): pair(str(perms[x][j] if x in perms else j), leg(x))
        for x in leg.dom
        for j in range(n[x])
    }


def _endpoints(
    edges: Mapping[str, str], fixed: set, vert_fib: Mapping[str, List[str]], G: FinGraph
) -> Iterator[Tuple[Dict[str, str], Dict[str, str]]]:
    """Source/target tables for ``edges`` (edge -> base edge).

    Edges in ``fixed`` are chosen one by one.  The rest are interchangeable
    within a base edge, so their endpoint pairs are chosen as a multiset.
    """
    slots: List[List[List[Tuple[str, str, str]]]] = []
    loose: Dict[str, List[str]] = {}
    for e, u in edges.items():
        ends = list(itertools.product(vert_fib[G.src(u)], vert_fib[G.tgt(u)]))
        if e in fixed:
            slots.append([[(e, s, t)] for s, t in ends])
        else:
            loose.setdefault(u, []).append(e)
    for u, es in loose.items():
        ends = list(itertools.product(vert_fib[G.src(u)], vert_fib[G.tgt(u)]))
        slots.append([
            [(e, s, t) for e, (s, t) in zip(es, combo)]
            for combo in itertools.combinations_with_replacement(ends, len(es))
        ])
    for choice in itertools.product(*slots):
        src, tgt = {}, {}
        for group in choice:
            for e, s, t in group:
                src[e], tgt[e] = s, t
        yield src, tgt


def enumerate_graph_spans(a: GraphHom, r: GraphHom, max_fiber: int = 2) -> Iterator[GraphPullbackSpan]:
    """Every rear pullback span over ``(a, r)`` with fibres of size at most ``max_fiber``, up to repeats.

    Both components use the set-level normal form: ``a'`` sends ``(j,x)`` to
    ``(j,a(x))`` and ``r'`` is a fibrewise permutation away from the least
    element of each ``ker(r)`` block.  Endpoints of ``J`` and ``H`` edges are
    then chosen freely; those of ``I`` are forced by the left face and checked
    against the right face.
    """
    L, A, R = a.dom, a.cod, r.cod
    aV, aE, rV, rE = a.on_vertices, a.on_edges, r.on_vertices, r.on_edges

    def unreached(f: FinMap) -> List[str]:
        img = set(f.image())
        return [t for t in f.cod if t not in img]

    def perm_options(leg: FinMap, n: Mapping[str, int]) -> Iterator[Dict[str, Sequence[int]]]:
        k = kernel_pair(leg)
        free = [x for x in leg.dom if k.rep(x) != x and n[x] > 1]
        for choice in itertools.product(*[list(itertools.permutations(range(n[x]))) for x in free]):
            yield dict(zip(free, choice))

    for nv in _sizes(aV, rV, max_fiber):
        IV = {pair(str(j), v): v for v in L.vertices for j in range(nv[v])}
        for ne in _sizes(aE, rE, max_fiber):
            IE = {pair(str(j), e): e for e in L.edges for j in range(ne[e])}
            for xJV, xJE, xHV, xHE in itertools.product(
                _extra_sizes(unreached(aV), max_fiber), _extra_sizes(unreached(aE), max_fiber),
                _extra_sizes(unreached(rV), max_fiber), _extra_sizes(unreached(rE), max_fiber),
            ):
                JV, JE = _layer(aV, nv, xJV), _layer(aE, ne, xJE)
                HV, HE = _layer(rV, nv, xHV), _layer(rE, ne, xHE)
                JV_fib: Dict[str, List[str]] = {t: [] for t in A.vertices}
                for x, t in JV.items():
                    JV_fib[t].append(x)
                HV_fib: Dict[str, List[str]] = {t: [] for t in R.vertices}
                for x, t in HV.items():
                    HV_fib[t].append(x)
                aV_top, aE_top = _relabel_maps(aV, nv), _relabel_maps(aE, ne)
                hit_J = set(aE_top.values())
                left_sides = []
                for srcJ, tgtJ in _endpoints(JE, hit_J, JV_fib, A):
                    ends = _forced_carrier(IE, IV, aV_top, aE_top, srcJ, tgtJ, L, JV)
                    if ends is not None:
                        left_sides.append((srcJ, tgtJ, *ends))
                for pv in perm_options(rV, nv):
                    rV_top = _relabel_maps(rV, nv, pv)
                    for pe in perm_options(rE, ne):
                        rE_top = _relabel_maps(rE, ne, pe)
                        hit_H = set(rE_top.values())
                        free_HE = {x: t for x, t in HE.items() if x not in hit_H}
                        for srcJ, tgtJ, srcI, tgtI in left_sides:
                            base_H = _forced_H(IE, rE_top, rV_top, srcI, tgtI)
                            if base_H is None:
                                continue
                            for xs, xt in _endpoints(free_HE, set(), HV_fib, R):
                                yield _assemble(
                                    a, r, IV, IE, JV, JE, HV, HE, srcI, tgtI, srcJ, tgtJ,
                                    {**base_H[0], **xs}, {**base_H[1], **xt},
                                    aV_top, aE_top, rV_top, rE_top,
                                )


def _forced_carrier(IE, IV, aV_top, aE_top, srcJ, tgtJ, L: FinGraph, JV) -> Optional[Tuple[Dict[str, str], Dict[str, str]]]:
    # the left face is a vertex pullback, so each I edge has exactly one admissible endpoint
    back: Dict[Tuple[str, str], str] = {(IV[i], aV_top[i]): i for i in IV}
    srcI, tgtI = {}, {}
    for i, e in IE.items():
        j = aE_top[i]
        s = back.get((L.src(e), srcJ[j]))
        t = back.get((L.tgt(e), tgtJ[j]))
        if s is None or t is None:
            return None
        srcI[i], tgtI[i] = s, t
    return srcI, tgtI


def _forced_H(IE, rE_top, rV_top, srcI, tgtI) -> Optional[Tuple[Dict[str, str], Dict[str, str]]]:
    srcH: Dict[str, str] = {}
    tgtH: Dict[str, str] = {}
    for i in IE:
        h = rE_top[i]
        if srcH.setdefault(h, rV_top[srcI[i]]) != rV_top[srcI[i]]:
            return None
        if tgtH.setdefault(h, rV_top[tgtI[i]]) != rV_top[tgtI[i]]:
            return None
    return srcH, tgtH


def _graph(V: Mapping[str, str], E: Mapping[str, str], src: Mapping[str, str], tgt: Mapping[str, str]) -> FinGraph:
    VS, ES = FinSet(V), FinSet(E)
    return FinGraph(VS, ES, FinMap(ES, VS, dict(src)), FinMap(ES, VS, dict(tgt)))


def _assemble(a, r, IV, IE, JV, JE, HV, HE, srcI, tgtI, srcJ, tgtJ, srcH, tgtH, aV_top, aE_top, rV_top, rE_top):
    I, J, H = _graph(IV, IE, srcI, tgtI), _graph(JV, JE, srcJ, tgtJ), _graph(HV, HE, srcH, tgtH)

    def hom(G: FinGraph, T: FinGraph, v: Mapping[str, str], e: Mapping[str, str]) -> GraphHom:
        return GraphHom(G, T, FinMap(G.vertices, T.vertices, dict(v)), FinMap(G.edges, T.edges, dict(e)))

    gamma = hom(I, a.dom, IV, IE)
    tau = hom(J, a.cod, JV, JE)
    beta = hom(H, r.cod, HV, HE)
    left = GraphSquare(gamma, hom(I, J, aV_top, aE_top), tau, a)
    right = GraphSquare(gamma, hom(I, H, rV_top, rE_top), beta, r)
    return GraphPullbackSpan(a, r, gamma, left, right)


def brute_van_kampen_graph_counterexample(
    sq: GraphSquare, budget: SearchBudget = SearchBudget()
) -> Optional[GraphPullbackSpan]:
    if not is_graph_pushout(sq):
        raise NotAPushout("brute-force Van Kampen check needs a pushout square")
    clock = _Clock(budget)
    for span in enumerate_graph_spans(sq.left, sq.top, budget.max_fiber_size):
        clock.tick()
        if brute_reachable_graph(span, sq, budget) is None:
            return span
    return None


def brute_van_kampen_graph(sq: GraphSquare, budget: SearchBudget = SearchBudget()) -> bool:
    return brute_van_kampen_graph_counterexample(sq, budget) is None
