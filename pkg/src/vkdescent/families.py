"""Generators of small instances: partitions, spans of maps, pushout squares."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Sequence, Tuple

from .finset import CommutingSquare, FinMap, FinSet, pushout_square


def set_partitions(elements: Sequence[str]) -> Iterator[List[List[str]]]:
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def map_from_blocks(L: FinSet, blocks: Sequence[Sequence[str]], extra: int, prefix: str) -> FinMap:
    """Send block ``i`` to ``{prefix}{i}``; ``extra`` further codomain elements stay unreached."""
    ordered = sorted(sorted(b) for b in blocks)
    table = {x: f"{prefix}{i}" for i, b in enumerate(ordered) for x in b}
    cod = FinSet(f"{prefix}{i}" for i in range(len(ordered) + extra))
    return FinMap(L, cod, table)


def _growth(labels: Sequence[int]) -> Tuple[int, ...]:
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def leg_pairs(max_l: int = 4, max_a: int = 4, max_r: int = 4) -> Iterator[Tuple[FinMap, FinMap]]:
    """Spans ``A <- L -> R`` up to isomorphism, ``|L| <= max_l``, ``|A| <= max_a``, ``|R| <= max_r``."""
    for n in range(max_l + 1):
        names = [f"l{i}" for i in range(n)]
        L = FinSet(names)
        parts = [p for p in set_partitions(names)]
        legs_a = [(p, e) for p in parts for e in range(max_a - len(p) + 1) if len(p) + e >= (1 if n else 0)]
        legs_r = [(p, e) for p in parts for e in range(max_r - len(p) + 1) if len(p) + e >= (1 if n else 0)]
        if n == 0:
            legs_a = [([], e) for e in range(max_a + 1)]
            legs_r = [([], e) for e in range(max_r + 1)]
        seen = set()
        for (pa, ea), (pr, er) in itertools.product(legs_a, legs_r):
            lab_a = {x: i for i, b in enumerate(pa) for x in b}
            lab_r = {x: i for i, b in enumerate(pr) for x in b}
            key = min(
                (_growth([lab_a[names[p]] for p in perm]), ea, _growth([lab_r[names[p]] for p in perm]), er)
                for perm in itertools.permutations(range(n))
            )
            if key in seen:
                continue
            seen.add(key)
            yield map_from_blocks(L, pa, ea, "A"), map_from_blocks(L, pr, er, "R")


def pushout_bottoms(max_l: int = 4, max_a: int = 4, max_r: int = 4) -> Iterator[CommutingSquare]:
    for a, r in leg_pairs(max_l, max_a, max_r):
        yield pushout_square(a, r)


def random_map(rng: random.Random, dom: FinSet, cod: FinSet) -> FinMap:
    return FinMap(dom, cod, {x: rng.choice(cod.elements) for x in dom})


def random_leg_pair(rng: random.Random, n: int, max_cod: Optional[int] = None) -> Tuple[FinMap, FinMap]:
    L = FinSet(f"l{i}" for i in range(n))
    k = max_cod or n
    A = FinSet(f"A{i}" for i in range(rng.randint(1, k)))
    R = FinSet(f"R{i}" for i in range(rng.randint(1, k)))
    return random_map(rng, L, A), random_map(rng, L, R)


# -- graphs --------------------------------------------------------------------


def _edge_code(nv: int, edges: Sequence[Tuple[int, int]], perm: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted((perm[s], perm[t]) for s, t in edges))


def graph_shapes(max_v: int, max_e: int) -> List[Tuple[int, Tuple[Tuple[int, int], ...]]]:
    """Multigraphs up to isomorphism as ``(vertex count, sorted edge list)``, smallest first."""
    out = []
    for nv in range(max_v + 1):
        ends = [(s, t) for s in range(nv) for t in range(nv)]
        seen = set()
        for ne in range(max_e + 1):
            for es in itertools.combinations_with_replacement(ends, ne):
                code = min(_edge_code(nv, es, p) for p in itertools.permutations(range(nv)))
                if code not in seen:
                    seen.add(code)
                    out.append((nv, code))
    return out


def shape_graph(shape, prefix: str):
    from .graphs import FinGraph

    nv, edges = shape
    return FinGraph.build(
        [f"{prefix}{i}" for i in range(nv)],
        {f"{prefix}e{k}": (f"{prefix}{s}", f"{prefix}{t}") for k, (s, t) in enumerate(edges)},
    )


def graph_automorphisms(G) -> List[Tuple[dict, dict]]:
    """All ``(vertex permutation, edge permutation)`` pairs preserving source and target."""
    V, E = list(G.vertices), list(G.edges)
    out = []
    for img in itertools.permutations(V):
        pv = dict(zip(V, img))
        by_ends: dict = {}
        for e in E:
            by_ends.setdefault((G.src(e), G.tgt(e)), []).append(e)
        groups = []
        ok = True
        for (s, t), es in by_ends.items():
            target = by_ends.get((pv[s], pv[t]), [])
            if len(target) != len(es):
                ok = False
                break
            groups.append((es, target))
        if not ok:
            continue
        for choice in itertools.product(*[itertools.permutations(t) for _, t in groups]):
            pe = {}
            for (es, _), t in zip(groups, choice):
                pe.update(zip(es, t))
            out.append((pv, pe))
    return out


def graph_homs(G, T) -> Iterator[Tuple[dict, dict]]:
    """Homomorphisms ``G -> T`` as ``(vertex table, edge table)``."""
    V, E = list(G.vertices), list(G.edges)
    by_ends: dict = {}
    for e in T.edges:
        by_ends.setdefault((T.src(e), T.tgt(e)), []).append(e)
    for img in itertools.product(T.vertices, repeat=len(V)):
        v = dict(zip(V, img))
        opts = [by_ends.get((v[G.src(e)], v[G.tgt(e)]), []) for e in E]
        for choice in itertools.product(*opts):
            yield v, dict(zip(E, choice))


def graph_leg_pairs(max_v: int = 3, max_e: int = 3):
    """Graph spans ``A <- L -> R`` up to isomorphism, every graph within the bounds, smaller graphs first."""
    from .graphs import GraphHom

    shapes = graph_shapes(max_v, max_e)
    size = lambda sh: sh[0] + len(sh[1])
    triples = sorted(
        itertools.product(shapes, repeat=3), key=lambda t: (sum(size(x) for x in t), size(t[0]), t)
    )
    cache = {}

    def built(shape, prefix):
        key = (shape, prefix)
        if key not in cache:
            G = shape_graph(shape, prefix)
            cache[key] = (G, graph_automorphisms(G))
        return cache[key]

    for sl, sa, sr in triples:
        (L, autL), (A, autA), (R, autR) = built(sl, "l"), built(sa, "a"), built(sr, "r")
        homs_a = list(graph_homs(L, A))
        homs_r = list(graph_homs(L, R))
        if not homs_a or not homs_r:
            continue
        Lv, Le = list(L.vertices), list(L.edges)

        def code(v, e):
            return tuple(v[x] for x in Lv) + tuple(e[x] for x in Le)

        seen = set()
        for (av, ae), (rv, re) in itertools.product(homs_a, homs_r):
            if (code(av, ae), code(rv, re)) in seen:
                continue
            for gv, ge in autL:
                for hv, he in autA:
                    ca = code({x: hv[av[gv[x]]] for x in Lv}, {x: he[ae[ge[x]]] for x in Le})
                    for kv, ke in autR:
                        seen.add((ca, code({x: kv[rv[gv[x]]] for x in Lv}, {x: ke[re[ge[x]]] for x in Le})))
            yield (
                GraphHom(L, A, FinMap(L.vertices, A.vertices, av), FinMap(L.edges, A.edges, ae)),
                GraphHom(L, R, FinMap(L.vertices, R.vertices, rv), FinMap(L.edges, R.edges, re)),
            )


def graph_pushout_bottoms(max_v: int = 3, max_e: int = 3):
    from .graphs import graph_pushout_square

    for a, r in graph_leg_pairs(max_v, max_e):
        yield graph_pushout_square(a, r)
