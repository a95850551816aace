"""Descent data over a base map, as families of fibre bijections.

A descent datum for ``gamma: I -> L`` relative to ``p: L -> B`` assigns to
every ``(e, e')`` with ``p(e) == p(e')`` a bijection from the fibre of
``gamma`` over ``e`` to the fibre over ``e'``; diagonal entries are
identities and the family is closed under composition.  Pullbacks along
``p`` and descent data determine each other: ``canonical_descent`` reads
the family off a pullback square, ``realize`` glues the fibres back together
with a coequalizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .finset import (
    CommutingSquare,
    FinMap,
    FinSet,
    FinSetError,
    NotAPullback,
    Partition,
    ShapeMismatch,
    coequalizer,
    compose,
    is_pullback,
    kernel_pair,
    pair,
)

Index = Tuple[str, str]
FiberMap = Dict[str, str]


class InvalidDescentData(FinSetError):
    def __init__(self, violation: "DescentViolation"):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class DescentViolation:
    kind: str  # not-total | not-bijective | neutrality | cocycle
    witness: Tuple[str, ...]
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} violation at {self.witness}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True, eq=False)
class DescentData:
    carrier: FinMap
    base: FinMap
    family: Mapping[Index, Mapping[str, str]]

    def __post_init__(self):
        if self.carrier.cod != self.base.dom:
            raise ShapeMismatch("carrier must land in the domain of the base map")

    def xi(self, e: str, e2: str) -> Mapping[str, str]:
        return self.family[(e, e2)]

    def fiber(self, e: str) -> Tuple[str, ...]:
        return fibers_of(self.carrier)[e]

    def indices(self) -> List[Index]:
        return kernel_indices(self.base)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DescentData):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.base == other.base
            and {k: dict(v) for k, v in self.family.items()} == {k: dict(v) for k, v in other.family.items()}
        )

    __hash__ = None  # type: ignore[assignment]


def fibers_of(f: FinMap) -> Dict[str, Tuple[str, ...]]:
    return f.fibers()


def kernel_indices(p: FinMap) -> List[Index]:
    """Ordered pairs of ``ker(p)`` in block-then-pair lexicographic order."""
    return [(e, e2) for block in kernel_pair(p).blocks for e in block for e2 in block]


def _blocks(p: FinMap) -> Iterator[Tuple[str, ...]]:
    return iter(kernel_pair(p).blocks)


def validate(dd: DescentData) -> Optional[DescentViolation]:
    """``None`` when ``dd`` is descent data, otherwise the first violation found."""
    fib = fibers_of(dd.carrier)
    ker = kernel_pair(dd.base)
    for idx in sorted(dd.family):
        e, e2 = idx
        if e not in ker.carrier or e2 not in ker.carrier or not ker.related(e, e2):
            return DescentViolation("not-total", idx, "index outside the kernel of the base map")
    for block in ker.blocks:
        for e in block:
            for e2 in block:
                idx = (e, e2)
                if idx not in dd.family:
                    return DescentViolation("not-total", idx, "missing fibre map")
                m = dd.family[idx]
                src, tgt = fib[e], fib[e2]
                if set(m) != set(src) or any(m[x] not in tgt for x in src):
                    return DescentViolation("not-total", idx, "not a map between the fibres")
                if len(set(m.values())) != len(tgt) or len(src) != len(tgt):
                    return DescentViolation("not-bijective", idx)
                if e == e2 and any(m[x] != x for x in src):
                    return DescentViolation("neutrality", idx)
        for e in block:
            for e1 in block:
                first = dd.family[(e, e1)]
                for e2 in block:
                    second = dd.family[(e1, e2)]
                    direct = dd.family[(e, e2)]
                    for x in fib[e]:
                        if second[first[x]] != direct[x]:
                            return DescentViolation("cocycle", (e, e1, e2), f"differs on {x!r}")
    return None


def check(dd: DescentData) -> DescentData:
    v = validate(dd)
    if v is not None:
        raise InvalidDescentData(v)
    return dd


def canonical_descent(sq: CommutingSquare) -> DescentData:
    """Descent data of a pullback square ``(gamma, q, alpha, p)``.

    ``xi[e, e'](x)`` is the unique ``y`` over ``e'`` with ``q(y) == q(x)``.
    """
    if not is_pullback(sq):
        raise NotAPullback("canonical descent data needs a pullback square")
    gamma, q, p = sq.left, sq.top, sq.bottom
    fib = fibers_of(gamma)
    family: Dict[Index, FiberMap] = {}
    for e, e2 in kernel_indices(p):
        by_q: Dict[str, List[str]] = {}
        for y in fib[e2]:
            by_q.setdefault(q(y), []).append(y)
        m: FiberMap = {}
        for x in fib[e]:
            ys = by_q.get(q(x), [])
            if len(ys) != 1:
                raise FinSetError(f"no unique partner for {x!r} over {e2!r}; corrupted pullback")
            m[x] = ys[0]
        family[(e, e2)] = m
    return DescentData(gamma, p, family)


def from_transports(carrier: FinMap, base: FinMap, transports: Mapping[Index, Mapping[str, str]]) -> DescentData:
    """Build a family from bijections out of each block's least element.

    ``transports[(e0, e)]`` maps the fibre over the block representative
    ``e0`` onto the fibre over ``e``; missing entries default to the identity
    on ``e0`` itself.  Every other entry is ``t[e'] ∘ t[e]⁻¹``.
    """
    fib = fibers_of(carrier)
    family: Dict[Index, FiberMap] = {}
    for block in _blocks(base):
        e0 = block[0]
        t: Dict[str, Dict[str, str]] = {}
        for e in block:
            if (e0, e) in transports:
                t[e] = dict(transports[(e0, e)])
            elif e == e0:
                t[e] = {x: x for x in fib[e0]}
            else:
                raise FinSetError(f"missing transport from {e0!r} to {e!r}")
        inv = {e: {v: k for k, v in t[e].items()} for e in block}
        for e in block:
            for e2 in block:
                family[(e, e2)] = {x: t[e2][inv[e][x]] for x in fib[e]}
    return check(DescentData(carrier, base, family))


def _relation_maps(dd: DescentData) -> Tuple[FinMap, FinMap]:
    """The parallel pair ``(xi, pi2): I x_B L -> I`` whose coequalizer glues fibres."""
    gamma = dd.carrier
    ker = kernel_pair(dd.base)
    xi_tab: Dict[str, str] = {}
    pi_tab: Dict[str, str] = {}
    for x in gamma.dom:
        e = gamma(x)
        for e2 in ker.block_of(e):
            key = pair(e2, x)
            xi_tab[key] = dd.family[(e, e2)][x]
            pi_tab[key] = x
    dom = FinSet(pi_tab)
    return FinMap(dom, gamma.dom, xi_tab), FinMap(dom, gamma.dom, pi_tab)


def realize(dd: DescentData) -> CommutingSquare:
    """Glue ``dd`` into a pullback square ``(gamma, c, alpha, p)``."""
    check(dd)
    xi, pi2 = _relation_maps(dd)
    c = coequalizer(xi, pi2)
    gamma, p = dd.carrier, dd.base
    alpha = FinMap(c.cod, p.cod, {c(x): p(gamma(x)) for x in gamma.dom})
    sq = CommutingSquare(left=gamma, top=c, right=alpha, bottom=p)
    if not is_pullback(sq):
        raise AssertionError("glued square is not a pullback")
    return sq


def kernel_of_realization(dd: DescentData) -> Partition:
    return kernel_pair(realize(dd).top)


def graph_relation(dd: DescentData) -> frozenset:
    """Union of the graphs of all fibre maps, as a set of pairs."""
    return frozenset((x, y) for m in dd.family.values() for x, y in m.items())


def restrict(dd: DescentData, f: FinMap, g: FinMap) -> DescentData:
    """Forget ``h``-descent data to ``f``-descent data, ``h = g ∘ f``."""
    if compose(g, f) != dd.base:
        raise ShapeMismatch("g ∘ f is not the base map of the descent data")
    family = {idx: dd.family[idx] for idx in kernel_indices(f)}
    return DescentData(dd.carrier, f, family)
