"""Brute-force reference procedures for small instances.

Nothing here consults descent data or joins of kernels: reachability is
decided by searching instances over the pushout apex and comparing pulled
back spans up to isomorphism, witnesses by enumerating fibre bijections,
domain cycles by walking the kernels.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .descent import DescentData, kernel_indices, validate
from .finset import (
    CommutingSquare,
    FinMap,
    FinSet,
    NotAPushout,
    ShapeMismatch,
    compose,
    is_pushout,
    kernel_pair,
    pair,
    pushout_square,
)
from .vankampen import DomainCycle, PullbackSpan, pb_span


class BudgetExceeded(RuntimeError):
    """The search was cut short; the question is undecided, not answered."""


@dataclass(frozen=True)
class SearchBudget:
    max_apex_size: int = 16
    max_fiber_size: int = 2
    time_limit: float = 60.0

    def __post_init__(self):
        if self.max_apex_size <= 0 or self.max_fiber_size <= 0 or self.time_limit <= 0:
            raise ValueError("search bounds must be positive")


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.deadline = time.monotonic() + budget.time_limit

    def tick(self) -> None:
        if time.monotonic() > self.deadline:
            raise BudgetExceeded("time limit reached")


# -- span isomorphism --------------------------------------------------------


def find_span_isomorphism(s1: PullbackSpan, s2: PullbackSpan) -> Optional[Tuple[FinMap, FinMap, FinMap]]:
    """Bijections ``(I, J, H)`` over ``L``, ``A``, ``R`` commuting with both tops."""
    if s1.a != s2.a or s1.r != s2.r:
        raise ShapeMismatch("spans over different base legs")
    g1, g2 = s1.carrier.fibers(), s2.carrier.fibers()
    t1, t2 = s1.tau.fibers(), s2.tau.fibers()
    b1, b2 = s1.beta.fibers(), s2.beta.fibers()
    for f1, f2 in ((g1, g2), (t1, t2), (b1, b2)):
        if any(len(f1[x]) != len(f2[x]) for x in f1):
            return None

    order = [i for l in s1.a.dom for i in g1[l]]
    phi_i: Dict[str, str] = {}
    phi_j: Dict[str, str] = {}
    phi_h: Dict[str, str] = {}
    used_i, used_j, used_h = set(), set(), set()
    a1, a2, r1, r2 = s1.a_top, s2.a_top, s1.r_top, s2.r_top

    def assign(src: str, dst: str, phi: Dict[str, str], used: set, log: List) -> bool:
        if src in phi:
            return phi[src] == dst
        if dst in used:
            return False
        phi[src] = dst
        used.add(dst)
        log.append((phi, used, src, dst))
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        for cand in g2[s1.carrier(i)]:
            if cand in used_i:
                continue
            log: List = []
            ok = (
                assign(i, cand, phi_i, used_i, log)
                and assign(a1(i), a2(cand), phi_j, used_j, log)
                and assign(r1(i), r2(cand), phi_h, used_h, log)
            )
            if ok and search(pos + 1):
                return True
            for phi, used, src, dst in reversed(log):
                del phi[src]
                used.discard(dst)
        return False

    if not search(0):
        return None
    # elements outside the images of a', r' only need matching fibres
    for phi, used, f1, f2 in ((phi_j, used_j, t1, t2), (phi_h, used_h, b1, b2)):
        for t in f1:
            rest = [x for x in f2[t] if x not in used]
            for x in f1[t]:
                if x not in phi:
                    phi[x] = rest.pop(0)
    return (
        FinMap(s1.carrier.dom, s2.carrier.dom, phi_i),
        FinMap(s1.tau.dom, s2.tau.dom, phi_j),
        FinMap(s1.beta.dom, s2.beta.dom, phi_h),
    )


def spans_isomorphic(s1: PullbackSpan, s2: PullbackSpan) -> bool:
    return find_span_isomorphism(s1, s2) is not None


# -- reachability ------------------------------------------------------------


def _fiber_count_options(span: PullbackSpan, bottom: CommutingSquare, cap: int) -> Optional[List[Sequence[int]]]:
    """Admissible fibre sizes of ``sigma`` over each element of ``S``.

    A pulled-back instance has fibre ``|sigma^-1(rbar(t))|`` over ``t`` in ``A``
    (likewise over ``R``), so those sizes are forced; everything else is free.
    """
    S = bottom.bottom.cod
    forced: Dict[str, set] = {t: set() for t in S}
    for y, xs in span.tau.fibers().items():
        forced[bottom.bottom(y)].add(len(xs))
    for y, xs in span.beta.fibers().items():
        forced[bottom.right(y)].add(len(xs))
    options: List[Sequence[int]] = []
    for t in S:
        if len(forced[t]) > 1:
            return None
        options.append(tuple(forced[t]) if forced[t] else range(cap + 1))
    return options


def brute_reachable(
    span: PullbackSpan, bottom: CommutingSquare, budget: SearchBudget = SearchBudget()
) -> Optional[FinMap]:
    """First ``sigma: K -> S`` (``|K| <= max_apex_size``) whose pulled-back span is isomorphic to ``span``."""
    if bottom.left != span.a or bottom.top != span.r:
        raise ShapeMismatch("span legs do not match the bottom square")
    clock = _Clock(budget)
    S = bottom.bottom.cod
    options = _fiber_count_options(span, bottom, budget.max_apex_size)
    if options is None:
        return None
    truncated = False
    for counts in itertools.product(*options):
        clock.tick()
        if sum(counts) > budget.max_apex_size:
            truncated = True
            continue
        table = {}
        idx = 0
        for t, c in zip(S, counts):
            for _ in range(c):
                idx += 1
                table[f"k{idx:02d}"] = t
        sigma = FinMap(FinSet(table), S, table)
        if spans_isomorphic(span, pb_span(sigma, bottom)):
            return sigma
    if truncated:
        raise BudgetExceeded("an admissible apex exceeds max_apex_size")
    return None


# -- coherence witnesses -----------------------------------------------------


def _bijections(src: Sequence[str], tgt: Sequence[str]) -> List[Dict[str, str]]:
    if len(src) != len(tgt):
        return []
    return [dict(zip(src, perm)) for perm in itertools.permutations(tgt)]


def brute_witness(span: PullbackSpan, bottom: Optional[CommutingSquare] = None) -> List[DescentData]:
    """Every descent datum over ``s`` that restricts to both canonical families.

    Without a bottom square the chosen pushout of ``(a, r)`` supplies ``s``.
    """
    if bottom is None:
        bottom = pushout_square(span.a, span.r)
    s = compose(bottom.right, bottom.top)
    fib = span.carrier.fibers()
    ka, kr = kernel_pair(span.a), kernel_pair(span.r)
    xt, xb = span.xi_tau, span.xi_beta
    fixed: Dict[Tuple[str, str], Dict[str, str]] = {}
    free: List[Tuple[str, str]] = []
    for x, y in kernel_indices(s):
        pinned = []
        if ka.related(x, y):
            pinned.append(dict(xt.xi(x, y)))
        if kr.related(x, y):
            pinned.append(dict(xb.xi(x, y)))
        if pinned:
            if any(p != pinned[0] for p in pinned):
                return []
            fixed[(x, y)] = pinned[0]
        else:
            free.append((x, y))
    choices = [_bijections(fib[x], fib[y]) for x, y in free]
    found = []
    for combo in itertools.product(*choices):
        family = dict(fixed)
        family.update(zip(free, combo))
        dd = DescentData(span.carrier, s, family)
        if validate(dd) is None:
            found.append(dd)
    return found


# -- span enumeration --------------------------------------------------------


def _constant_on_blocks(n: Dict[str, int], f: FinMap) -> bool:
    return all(len({n[x] for x in blk}) == 1 for blk in kernel_pair(f).blocks)


def _extras(unreached: Sequence[str], max_fiber: int, up_to_symmetry: bool) -> Iterator[Dict[str, int]]:
    if up_to_symmetry:
        combos = itertools.combinations_with_replacement(range(max_fiber, -1, -1), len(unreached))
    else:
        combos = itertools.product(range(max_fiber + 1), repeat=len(unreached))
    for c in combos:
        yield dict(zip(unreached, c))


def enumerate_spans(
    a: FinMap, r: FinMap, max_fiber: int = 2, up_to_symmetry: bool = True
) -> Iterator[PullbackSpan]:
    """Rear pullback spans over ``(a, r)`` with fibres of size at most ``max_fiber``.

    One representative per isomorphism class is produced (a few classes may
    repeat).  ``a'`` is put in the normal form ``(j,l) -> (j,a(l))`` and ``r'`` is
    the identity on the least element of each ``ker(r)`` block.  With
    ``up_to_symmetry`` the fibres over elements outside the image of a leg are
    listed as multisets, which is exact for pushout squares where those
    elements can be permuted freely.
    """
    L = a.dom
    img_a, img_r = set(a.image()), set(r.image())
    un_a = [t for t in a.cod if t not in img_a]
    un_r = [t for t in r.cod if t not in img_r]
    kr = kernel_pair(r)
    for sizes in itertools.product(range(max_fiber + 1), repeat=len(L)):
        n = dict(zip(L, sizes))
        if not (_constant_on_blocks(n, a) and _constant_on_blocks(n, r)):
            continue
        I_tab = {pair(str(j), l): l for l in L for j in range(n[l])}
        I = FinSet(I_tab)
        gamma = FinMap(I, L, I_tab)
        over_a = {a(l): n[l] for l in L}
        over_r = {r(l): n[l] for l in L}
        free = [l for l in L if kr.rep(l) != l and n[l] > 1]
        perms = [list(itertools.permutations(range(n[l]))) for l in free]
        for ea in _extras(un_a, max_fiber, up_to_symmetry):
            J_tab = {pair(str(j), t): t for t, c in {**over_a, **ea}.items() for j in range(c)}
            J = FinSet(J_tab)
            tau = FinMap(J, a.cod, J_tab)
            a_top = FinMap(I, J, {pair(str(j), l): pair(str(j), a(l)) for l in L for j in range(n[l])})
            left = CommutingSquare(left=gamma, top=a_top, right=tau, bottom=a)
            for er in _extras(un_r, max_fiber, up_to_symmetry):
                H_tab = {pair(str(j), b): b for b, c in {**over_r, **er}.items() for j in range(c)}
                H = FinSet(H_tab)
                beta = FinMap(H, r.cod, H_tab)
                for choice in itertools.product(*perms):
                    pi = dict(zip(free, choice))
                    r_tab = {
                        pair(str(j), l): pair(str(pi[l][j] if l in pi else j), r(l))
                        for l in L
                        for j in range(n[l])
                    }
                    right = CommutingSquare(left=gamma, top=FinMap(I, H, r_tab), right=beta, bottom=r)
                    yield PullbackSpan(a, r, gamma, left, right)


def brute_van_kampen_counterexample(
    sq: CommutingSquare, budget: SearchBudget = SearchBudget()
) -> Optional[PullbackSpan]:
    """First rear span (fibres bounded by the budget) that no instance over ``S`` reaches."""
    if not is_pushout(sq):
        raise NotAPushout("brute-force Van Kampen check needs a pushout square")
    clock = _Clock(budget)
    for span in enumerate_spans(sq.left, sq.top, budget.max_fiber_size):
        clock.tick()
        if brute_reachable(span, sq, budget) is None:
            return span
    return None


def brute_van_kampen(sq: CommutingSquare, budget: SearchBudget = SearchBudget()) -> bool:
    return brute_van_kampen_counterexample(sq, budget) is None


# -- domain cycles by walking ------------------------------------------------


def walk_domain_cycle(a: FinMap, r: FinMap, max_length: Optional[int] = None) -> Optional[DomainCycle]:
    """Closed alternating walk of length at most ``max_length`` (default ``2|L|``).

    Searches walks ``x0, x1, ...`` stepping inside ``ker(a)`` from even and inside
    ``ker(r)`` from odd positions, never standing still, and closing with an
    ``r``-step back to ``x0``.  Walks may revisit elements.
    """
    if a.dom != r.dom:
        raise ShapeMismatch("a and r must share their domain")
    L = list(a.dom)
    bound = 2 * len(L) if max_length is None else max_length
    ka, kr = kernel_pair(a), kernel_pair(r)
    for x0 in L:
        prev: Dict[Tuple[str, int], Optional[Tuple[str, int]]] = {(x0, 0): None}
        frontier = [(x0, 0)]
        depth = 0
        while frontier and depth + 1 < bound:
            nxt_frontier = []
            for cur, parity in frontier:
                part = ka if parity == 0 else kr
                for z in part.block_of(cur):
                    state = (z, 1 - parity)
                    if z == cur or state in prev:
                        continue
                    prev[state] = (cur, parity)
                    if parity == 0 and z != x0 and r(z) == r(x0):
                        walk = []
                        st: Optional[Tuple[str, int]] = state
                        while st is not None:
                            walk.append(st[0])
                            st = prev[st]
                        return DomainCycle(tuple(walk[::-1]))
                    nxt_frontier.append(state)
            frontier = nxt_frontier
            depth += 1
    return None
