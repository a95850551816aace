"""Reachability of pullback spans and the Van Kampen test for pushouts.

Conventions follow the cube::

            I ---r'---> H
           /|          /|
         a' |  s'    ā' |
         /  γ        /  β
        J ---r̄'---> K   |
        |   L ---r--|-> R
        τ  /        σ  /
        | a         | ā
        A ---r̄---> S

A ``PullbackSpan`` holds the two rear faces ``(γ, a', τ, a)`` and
``(γ, r', β, r)``; the bottom face is a ``CommutingSquare`` with
``left=a, top=r, right=ā, bottom=r̄``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .descent import (
    DescentData,
    canonical_descent,
    check,
    kernel_of_realization,
    realize,
    restrict,
)
from .finset import (
    CommutingSquare,
    DisjointSet,
    FinMap,
    FinSet,
    FinSetError,
    NotAPushout,
    Partition,
    ShapeMismatch,
    compose,
    is_pullback,
    is_pushout,
    join,
    kernel_pair,
    pair,
    pullback,
    pushout,
)


class MalformedSpan(FinSetError):
    pass


class NotADomainCycle(FinSetError):
    pass


@dataclass(frozen=True)
class PullbackSpan:
    a: FinMap
    r: FinMap
    carrier: FinMap
    left: CommutingSquare
    right: CommutingSquare

    def __post_init__(self):
        if self.a.dom != self.r.dom:
            raise MalformedSpan("base legs must share their domain")
        for name, sq, leg in (("left", self.left, self.a), ("right", self.right, self.r)):
            if sq.left != self.carrier:
                raise MalformedSpan(f"{name} face does not use the shared carrier")
            if sq.bottom != leg:
                raise MalformedSpan(f"{name} face does not sit over its base leg")
            if not is_pullback(sq):
                raise MalformedSpan(f"{name} face is not a pullback")

    @property
    def a_top(self) -> FinMap:
        return self.left.top

    @property
    def tau(self) -> FinMap:
        return self.left.right

    @property
    def r_top(self) -> FinMap:
        return self.right.top

    @property
    def beta(self) -> FinMap:
        return self.right.right

    @cached_property
    def xi_tau(self) -> DescentData:
        return canonical_descent(self.left)

    @cached_property
    def xi_beta(self) -> DescentData:
        return canonical_descent(self.right)


@dataclass(frozen=True)
class InstanceCube:
    span: PullbackSpan
    bottom: CommutingSquare
    sigma: FinMap
    s_top: FinMap
    abar_top: FinMap
    rbar_top: FinMap

    @property
    def front(self) -> CommutingSquare:
        return CommutingSquare(left=self.span.tau, top=self.rbar_top, right=self.sigma, bottom=self.bottom.bottom)

    @property
    def side(self) -> CommutingSquare:
        return CommutingSquare(left=self.span.beta, top=self.abar_top, right=self.sigma, bottom=self.bottom.right)

    @property
    def top(self) -> CommutingSquare:
        return CommutingSquare(
            left=self.span.a_top, top=self.span.r_top, right=self.abar_top, bottom=self.rbar_top
        )

    @property
    def diagonal(self) -> CommutingSquare:
        s = compose(self.bottom.right, self.bottom.top)
        return CommutingSquare(left=self.span.carrier, top=self.s_top, right=self.sigma, bottom=s)

    def failures(self) -> List[str]:
        """Names of the faces that break the cube's contract (empty when sound)."""
        out = []
        try:
            faces = {"front": self.front, "side": self.side, "top": self.top, "diagonal": self.diagonal}
        except FinSetError as exc:
            return [f"commutation: {exc}"]
        for name in ("front", "side", "diagonal"):
            if not is_pullback(faces[name]):
                out.append(f"{name} face is not a pullback")
        if is_pushout(self.bottom) and not is_pushout(faces["top"]):
            out.append("top face is not a pushout")
        if compose(self.rbar_top, self.span.a_top) != self.s_top:
            out.append("s' differs from r̄' ∘ a'")
        return out


def _check_bottom(span: PullbackSpan, bottom: CommutingSquare) -> FinMap:
    if bottom.left != span.a or bottom.top != span.r:
        raise MalformedSpan("span legs do not match the bottom square")
    return compose(bottom.right, bottom.top)


# -- domain cycles -----------------------------------------------------------


@dataclass(frozen=True)
class DomainCycle:
    elements: Tuple[str, ...]

    def __post_init__(self):
        n = len(self.elements)
        if n < 2 or n % 2:
            raise NotADomainCycle("a domain cycle has positive even length")

    @property
    def k(self) -> int:
        return len(self.elements) // 2 - 1

    @property
    def proper(self) -> bool:
        return len(set(self.elements)) == len(self.elements)

    def is_cycle_of(self, a: FinMap, r: FinMap) -> bool:
        xs, n = self.elements, len(self.elements)
        for j in range(n):
            x, y = xs[j], xs[(j + 1) % n]
            if x == y or x not in a.dom:
                return False
            if (a(x) != a(y)) if j % 2 == 0 else (r(x) != r(y)):
                return False
        return True

    def as_sequence(self) -> "AlternatingSequence":
        return AlternatingSequence(self.elements + self.elements[:1], "a")


@dataclass(frozen=True)
class AlternatingSequence:
    elements: Tuple[str, ...]
    start_kernel: str = "a"

    def __post_init__(self):
        if self.start_kernel not in ("a", "r") or not self.elements:
            raise ValueError("alternating sequence needs elements and start kernel 'a' or 'r'")

    def kernels(self) -> Iterator[str]:
        other = "r" if self.start_kernel == "a" else "a"
        for i in range(len(self.elements) - 1):
            yield self.start_kernel if i % 2 == 0 else other

    def is_valid_for(self, a: FinMap, r: FinMap) -> bool:
        legs = {"a": a, "r": r}
        for i, kern in enumerate(self.kernels()):
            f = legs[kern]
            if f(self.elements[i]) != f(self.elements[i + 1]):
                return False
        return True

    def reversed(self) -> "AlternatingSequence":
        m = len(self.elements) - 1
        last = self.start_kernel if (m - 1) % 2 == 0 else ("r" if self.start_kernel == "a" else "a")
        return AlternatingSequence(self.elements[::-1], last if m else self.start_kernel)


def canonical_cycle(elements: Sequence[str]) -> Tuple[str, ...]:
    """Least representative under even rotations and reversal."""
    xs = tuple(elements)
    n = len(xs)
    rev = xs[::-1]
    forms = [xs[i:] + xs[:i] for i in range(0, n, 2)] + [rev[i:] + rev[:i] for i in range(0, n, 2)]
    return min(forms)


def same_cycle(c1: Sequence[str], c2: Sequence[str]) -> bool:
    return len(c1) == len(c2) and canonical_cycle(c1) == canonical_cycle(c2)


def incidence_multigraph(a: FinMap, r: FinMap) -> Tuple[List[str], List[str], List[Tuple[str, str, str]]]:
    """Nodes for the blocks of ``ker(a)`` and ``ker(r)``, one edge per element."""
    if a.dom != r.dom:
        raise ShapeMismatch("a and r must share their domain")
    ka, kr = kernel_pair(a), kernel_pair(r)
    nodes_a = ["a:" + b[0] for b in ka.blocks]
    nodes_r = ["r:" + b[0] for b in kr.blocks]
    edges = [(x, "a:" + ka.rep(x), "r:" + kr.rep(x)) for x in a.dom]
    return nodes_a, nodes_r, edges


def find_domain_cycle(a: FinMap, r: FinMap) -> Optional[DomainCycle]:
    """A proper domain cycle of ``(a, r)``, or ``None`` if the kernels are separated."""
    _, _, edges = incidence_multigraph(a, r)
    ds = DisjointSet()
    forest: Dict[str, List[Tuple[str, str]]] = {}
    for x, na, nr in edges:
        ds.add(na)
        ds.add(nr)
        if ds.find(na) == ds.find(nr):
            path = _forest_path(forest, na, nr)
            return DomainCycle(canonical_cycle([x] + path))
        ds.union(na, nr)
        forest.setdefault(na, []).append((nr, x))
        forest.setdefault(nr, []).append((na, x))
    return None


def _forest_path(forest: Dict[str, List[Tuple[str, str]]], start: str, goal: str) -> List[str]:
    """Edge labels along the unique forest path from ``start`` to ``goal``."""
    prev: Dict[str, Tuple[str, str]] = {start: ("", "")}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nxt, label in forest.get(node, ()):
            if nxt not in prev:
                prev[nxt] = (node, label)
                queue.append(nxt)
    labels = []
    node = goal
    while node != start:
        node, label = prev[node]
        labels.append(label)
    return labels[::-1]


def has_separated_kernels(a: FinMap, r: FinMap) -> bool:
    return find_domain_cycle(a, r) is None


def proper_domain_cycles(a: FinMap, r: FinMap) -> Iterator[DomainCycle]:
    """Every proper domain cycle, each rotation and direction listed separately.

    Exponential in the worst case; intended for small domains.
    """
    if a.dom != r.dom:
        raise ShapeMismatch("a and r must share their domain")
    ka, kr = kernel_pair(a), kernel_pair(r)
    for x0 in a.dom:
        path = [x0]
        seen = {x0}

        def extend() -> Iterator[DomainCycle]:
            cur = path[-1]
            odd = len(path) % 2 == 0
            if odd and cur != x0 and kr.related(cur, x0):
                yield DomainCycle(tuple(path))
            block = (kr if odd else ka).block_of(cur)
            for nxt in block:
                if nxt != cur and nxt not in seen:
                    path.append(nxt)
                    seen.add(nxt)
                    yield from extend()
                    seen.discard(nxt)
                    path.pop()

        yield from extend()


def proper_subcycle(cycle: DomainCycle, a: FinMap, r: FinMap) -> DomainCycle:
    """Shortest proper cycle on the elements of ``cycle``, earliest start first."""
    if not cycle.is_cycle_of(a, r):
        raise NotADomainCycle(f"{cycle.elements} is not a domain cycle of (a, r)")
    if cycle.proper:
        return cycle
    order = {}
    for i, x in enumerate(cycle.elements):
        order.setdefault(x, i)
    sub = FinSet(order)
    a_sub = FinMap(sub, a.cod, {x: a(x) for x in sub})
    r_sub = FinMap(sub, r.cod, {x: r(x) for x in sub})
    best = min(
        proper_domain_cycles(a_sub, r_sub),
        key=lambda c: (len(c.elements), order[c.elements[0]], [order[x] for x in c.elements]),
    )
    return best


def is_van_kampen(sq: CommutingSquare) -> bool:
    if not is_pushout(sq):
        raise NotAPushout("the Van Kampen criterion applies to pushout squares")
    return has_separated_kernels(sq.left, sq.top)


# -- coherence and amalgamation ---------------------------------------------


@dataclass(frozen=True, eq=False)
class CoherenceReport:
    witness: Optional[DescentData]
    over_pushout: bool
    lub: Partition
    # (join block, element of L, number of block members over it) for the first failure
    obstruction: Optional[Tuple[Tuple[str, ...], str, int]] = None

    @property
    def coherent(self) -> bool:
        return self.witness is not None


def check_coherence(span: PullbackSpan, bottom: CommutingSquare) -> CoherenceReport:
    """Join the kernels of ``a'`` and ``r'`` and test it for being descent data over ``s``."""
    s = _check_bottom(span, bottom)
    gamma = span.carrier
    lub = join(kernel_pair(span.a_top), kernel_pair(span.r_top))
    ker_s = kernel_pair(s)
    over_pushout = is_pushout(bottom)
    partner: Dict[Tuple[str, str], str] = {}
    for block in lub.blocks:
        over: Dict[str, List[str]] = {}
        for i in block:
            over.setdefault(gamma(i), []).append(i)
        for x in ker_s.block_of(gamma(block[0])):
            hits = over.get(x, [])
            if len(hits) != 1:
                return CoherenceReport(None, over_pushout, lub, (block, x, len(hits)))
            for i in block:
                partner[(i, x)] = hits[0]
    fib = gamma.fibers()
    family = {
        (x, x2): {i: partner[(i, x2)] for i in fib[x]}
        for blk in ker_s.blocks
        for x in blk
        for x2 in blk
    }
    witness = check(DescentData(gamma, s, family))
    if restrict(witness, span.a, bottom.bottom) != span.xi_tau or restrict(witness, span.r, bottom.right) != span.xi_beta:
        raise AssertionError("coherence witness does not restrict to the canonical descent data")
    return CoherenceReport(witness, over_pushout, lub)


def coherence_witness(span: PullbackSpan, bottom: CommutingSquare) -> Optional[DescentData]:
    return check_coherence(span, bottom).witness


def amalgamate(span: PullbackSpan, bottom: CommutingSquare) -> Optional[InstanceCube]:
    """Complete the span to a cube over the pushout ``bottom``, or ``None``."""
    if not is_pushout(bottom):
        raise NotAPushout("amalgamation needs a pushout bottom square")
    witness = coherence_witness(span, bottom)
    if witness is None:
        return None
    top = pushout(span.a_top, span.r_top)
    rbar_top, abar_top = top.inj1, top.inj2
    table: Dict[str, str] = {}
    for leg, inst, base in ((rbar_top, span.tau, bottom.bottom), (abar_top, span.beta, bottom.right)):
        for y in leg.dom:
            k, t = leg(y), base(inst(y))
            if table.setdefault(k, t) != t:
                raise AssertionError(f"top pushout does not map consistently to S at {k!r}")
    sigma = FinMap(top.apex, bottom.bottom.cod, table)
    s_top = compose(rbar_top, span.a_top)
    if kernel_pair(s_top) != kernel_of_realization(witness):
        raise AssertionError("glued witness and top pushout disagree on I")
    cube = InstanceCube(span, bottom, sigma, s_top, abar_top, rbar_top)
    bad = cube.failures()
    if bad:
        raise AssertionError("amalgamated cube is unsound: " + "; ".join(bad))
    return cube


def evaluate_alternating(span: PullbackSpan, seq: AlternatingSequence) -> Dict[str, str]:
    """Compose canonical fibre bijections along ``seq``: fibre of y0 -> fibre of ym."""
    if not seq.is_valid_for(span.a, span.r):
        raise ValueError(f"{seq.elements} is not an alternating sequence of (a, r)")
    xis = {"a": span.xi_tau, "r": span.xi_beta}
    ys = seq.elements
    current = {i: i for i in span.carrier.fiber(ys[0])}
    for step, kern in enumerate(seq.kernels()):
        m = xis[kern].xi(ys[step], ys[step + 1])
        current = {i: m[j] for i, j in current.items()}
    return current


def cycle_obstruction(span: PullbackSpan) -> Optional[Tuple[DomainCycle, Dict[str, str]]]:
    for cycle in proper_domain_cycles(span.a, span.r):
        m = evaluate_alternating(span, cycle.as_sequence())
        if any(x != y for x, y in m.items()):
            return cycle, m
    return None


def cycle_condition_holds(span: PullbackSpan) -> bool:
    return cycle_obstruction(span) is None


def shortest_alternating(a: FinMap, r: FinMap, x: str, y: str) -> Optional[AlternatingSequence]:
    if x == y:
        return AlternatingSequence((x,), "a")
    ka, kr = kernel_pair(a), kernel_pair(r)
    prev: Dict[Tuple[str, str], Optional[Tuple[str, str]]] = {}
    queue: deque = deque()
    for kern in ("a", "r"):
        prev[(x, kern)] = None
        queue.append((x, kern))
    while queue:
        cur, kern = queue.popleft()
        part = ka if kern == "a" else kr
        nxt_kern = "r" if kern == "a" else "a"
        for z in part.block_of(cur):
            if z == cur or (z, nxt_kern) in prev:
                continue
            prev[(z, nxt_kern)] = (cur, kern)
            if z == y:
                path, state = [z], (cur, kern)
                while state is not None:
                    path.append(state[0])
                    first = state[1]
                    state = prev[state]
                return AlternatingSequence(tuple(path[::-1]), first)
            queue.append((z, nxt_kern))
    return None


def path_family(span: PullbackSpan, bottom: CommutingSquare) -> DescentData:
    """Family over ``ker(s)`` from shortest alternating paths; coherent spans give the witness."""
    s = _check_bottom(span, bottom)
    family = {}
    for blk in kernel_pair(s).blocks:
        for x in blk:
            for y in blk:
                seq = shortest_alternating(span.a, span.r, x, y)
                if seq is not None:
                    family[(x, y)] = evaluate_alternating(span, seq)
    return DescentData(span.carrier, s, family)


# -- constructions -----------------------------------------------------------


def span_from_descent(a: FinMap, r: FinMap, xi_a: DescentData, xi_r: DescentData) -> PullbackSpan:
    if xi_a.carrier != xi_r.carrier or xi_a.base != a or xi_r.base != r:
        raise MalformedSpan("descent data must share a carrier and sit over a and r")
    return PullbackSpan(a, r, xi_a.carrier, realize(xi_a), realize(xi_r))


def two_copies(L: FinSet) -> FinMap:
    """The projection ``{0,1} x L -> L`` with elements ``(b,x)``."""
    dom = FinSet(pair(b, x) for b in "01" for x in L)
    return FinMap(dom, L, {pair(b, x): x for b in "01" for x in L})


def lifted_descent(carrier: FinMap, base: FinMap, flip=lambda x, x2: False) -> DescentData:
    """Descent data on ``{0,1} x L`` moving ``(b,x)`` to ``(b',x2)``, ``b' = b xor flip(x, x2)``."""
    family = {}
    for blk in kernel_pair(base).blocks:
        for x in blk:
            for x2 in blk:
                family[(x, x2)] = {
                    pair(b, x): pair(str(int(b) ^ int(bool(flip(x, x2)))), x2) for b in "01"
                }
    return DescentData(carrier, base, family)


def uniform_span(a: FinMap, r: FinMap) -> PullbackSpan:
    """Two copies of ``L`` lifted identically along both legs."""
    gamma = two_copies(a.dom)
    return span_from_descent(a, r, check(lifted_descent(gamma, a)), check(lifted_descent(gamma, r)))


def unreachable_span_for_cycle(a: FinMap, r: FinMap, cycle: DomainCycle) -> PullbackSpan:
    """Two copies of ``L`` with the ``a``-lift twisted once along the cycle."""
    if not cycle.is_cycle_of(a, r):
        raise NotADomainCycle(f"{cycle.elements} is not a domain cycle of (a, r)")
    if not cycle.proper:
        raise NotADomainCycle("cycle must be proper; extract one with proper_subcycle")
    x0, x1 = cycle.elements[0], cycle.elements[1]
    home = kernel_pair(a).block_of(x0)

    def twist(x: str) -> int:
        return int(x == x1)

    gamma = two_copies(a.dom)
    xi_a = lifted_descent(gamma, a, lambda x, x2: x in home and twist(x) ^ twist(x2))
    xi_r = lifted_descent(gamma, r)
    return span_from_descent(a, r, check(xi_a), check(xi_r))


def pb_cube(sigma: FinMap, bottom: CommutingSquare) -> InstanceCube:
    """Pull ``sigma: K -> S`` back along the bottom square into a full cube."""
    a, r, abar, rbar = bottom.left, bottom.top, bottom.right, bottom.bottom
    s = compose(abar, r)
    diag = pullback(s, sigma)
    front = pullback(rbar, sigma)
    side = pullback(abar, sigma)
    I = diag.apex
    a_top = FinMap(I, front.apex, {i: pair(a(diag.proj1(i)), diag.proj2(i)) for i in I})
    r_top = FinMap(I, side.apex, {i: pair(r(diag.proj1(i)), diag.proj2(i)) for i in I})
    span = PullbackSpan(
        a,
        r,
        diag.proj1,
        CommutingSquare(left=diag.proj1, top=a_top, right=front.proj1, bottom=a),
        CommutingSquare(left=diag.proj1, top=r_top, right=side.proj1, bottom=r),
    )
    return InstanceCube(span, bottom, sigma, diag.proj2, side.proj2, front.proj2)


def pb_span(sigma: FinMap, bottom: CommutingSquare) -> PullbackSpan:
    return pb_cube(sigma, bottom).span
