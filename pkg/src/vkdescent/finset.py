"""Finite sets, total maps, partitions and their chosen limits and colimits.

Elements are opaque strings.  Every construction is deterministic: sets are
kept in lexicographic order, pullback apexes use the pair encoding
``(x,y)``, pushouts tag the two summands with ``L:`` and ``R:`` and name
each class after its least member.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Tuple


class FinSetError(ValueError):
    """Base class for malformed finite-set data."""


class ShapeMismatch(FinSetError):
    """Domains or codomains do not line up."""


class NotCommuting(FinSetError):
    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message)
        self.witness = witness


class NotAPullback(FinSetError):
    pass


class NotAPushout(FinSetError):
    pass


def pair(x: str, y: str) -> str:
    return f"({x},{y})"


def tagged(tag: str, x: str) -> str:
    return f"{tag}:{x}"


class FinSet:
    __slots__ = ("elements", "_members")

    def __init__(self, elements: Iterable[str] = ()):
        elems = tuple(sorted(elements))
        members = frozenset(elems)
        if len(members) != len(elems):
            dup = next(e for i, e in enumerate(elems) if i and elems[i - 1] == e)
            raise FinSetError(f"duplicate element {dup!r}")
        for e in elems:
            if not isinstance(e, str):
                raise FinSetError(f"elements must be strings, got {e!r}")
        self.elements: Tuple[str, ...] = elems
        self._members = members

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return "FinSet({" + ", ".join(self.elements) + "})"

    def union(self, other: "FinSet") -> "FinSet":
        return FinSet(self._members | other._members)


class FinMap:
    """A total map between finite sets."""

    __slots__ = ("dom", "cod", "_table")

    def __init__(self, dom: FinSet, cod: FinSet, mapping: Mapping[str, str]):
        table = dict(mapping)
        if len(table) != len(dom) or any(x not in table for x in dom):
            missing = [x for x in dom if x not in table]
            extra = [x for x in table if x not in dom]
            raise FinSetError(f"assignment not total on domain (missing {missing}, extra {extra})")
        for x, y in table.items():
            if y not in cod:
                raise FinSetError(f"image {y!r} of {x!r} is not in the codomain")
        self.dom = dom
        self.cod = cod
        self._table = table

    @classmethod
    def from_function(cls, dom: FinSet, cod: FinSet, fn: Callable[[str], str]) -> "FinMap":
        return cls(dom, cod, {x: fn(x) for x in dom})

    @classmethod
    def identity(cls, X: FinSet) -> "FinMap":
        return cls(X, X, {x: x for x in X})

    @classmethod
    def inclusion(cls, sub: FinSet, X: FinSet) -> "FinMap":
        return cls(sub, X, {x: x for x in sub})

    def __call__(self, x: str) -> str:
        return self._table[x]

    def items(self) -> List[Tuple[str, str]]:
        return [(x, self._table[x]) for x in self.dom]

    def as_dict(self) -> Dict[str, str]:
        return {x: self._table[x] for x in self.dom}

    def image(self) -> FinSet:
        return FinSet(set(self._table.values()))

    def fiber(self, y: str) -> Tuple[str, ...]:
        return tuple(x for x in self.dom if self._table[x] == y)

    def fibers(self) -> Dict[str, Tuple[str, ...]]:
        out: Dict[str, List[str]] = {y: [] for y in self.cod}
        for x in self.dom:
            out[self._table[x]].append(x)
        return {y: tuple(xs) for y, xs in out.items()}

    @property
    def is_injective(self) -> bool:
        return len(set(self._table.values())) == len(self.dom)

    @property
    def is_surjective(self) -> bool:
        return len(set(self._table.values())) == len(self.cod)

    def then(self, g: "FinMap") -> "FinMap":
        return compose(g, self)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FinMap)
            and self.dom == other.dom
            and self.cod == other.cod
            and self._table == other._table
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, tuple(self._table[x] for x in self.dom)))

    def __repr__(self) -> str:
        body = ", ".join(f"{x}->{y}" for x, y in self.items())
        return f"FinMap({{{body}}})"


def compose(g: FinMap, f: FinMap) -> FinMap:
    """``g ∘ f``."""
    if f.cod != g.dom:
        raise ShapeMismatch(f"cannot compose: cod(f)={f.cod} but dom(g)={g.dom}")
    return FinMap(f.dom, g.cod, {x: g(f(x)) for x in f.dom})


class Classification(NamedTuple):
    mono: bool
    epi: bool
    iso: bool


def classify(f: FinMap) -> Classification:
    mono, epi = f.is_injective, f.is_surjective
    return Classification(mono, epi, mono and epi)


def epi_mono_factorize(f: FinMap) -> Tuple[FinMap, FinMap]:
    image = f.image()
    e = FinMap(f.dom, image, f.as_dict())
    m = FinMap.inclusion(image, f.cod)
    return e, m


class DisjointSet:
    """Union-find over string elements; the root of a class is its least member."""

    def __init__(self, elements: Iterable[str] = ()):
        self.parent: Dict[str, str] = {}
        for e in elements:
            self.parent[e] = e

    def add(self, e: str) -> None:
        self.parent.setdefault(e, e)

    def find(self, e: str) -> str:
        root = e
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[e] != root:
            self.parent[e], e = root, self.parent[e]
        return root

    def union(self, x: str, y: str) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # least element stays root so representatives come out canonical
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def classes(self) -> List[Tuple[str, ...]]:
        groups: Dict[str, List[str]] = {}
        for e in self.parent:
            groups.setdefault(self.find(e), []).append(e)
        return sorted(tuple(sorted(g)) for g in groups.values())


class Partition:
    """An equivalence relation on a finite set, stored as canonical blocks."""

    __slots__ = ("carrier", "blocks", "_rep")

    def __init__(self, carrier: FinSet, blocks: Iterable[Iterable[str]]):
        canon = sorted(tuple(sorted(b)) for b in blocks)
        rep: Dict[str, str] = {}
        for b in canon:
            if not b:
                raise FinSetError("empty block")
            for x in b:
                if x not in carrier:
                    raise FinSetError(f"{x!r} is not in the carrier")
                if x in rep:
                    raise FinSetError(f"blocks overlap at {x!r}")
                rep[x] = b[0]
        if len(rep) != len(carrier):
            raise FinSetError("blocks do not cover the carrier")
        self.carrier = carrier
        self.blocks: Tuple[Tuple[str, ...], ...] = tuple(canon)
        self._rep = rep

    @classmethod
    def from_pairs(cls, carrier: FinSet, pairs: Iterable[Tuple[str, str]]) -> "Partition":
        ds = DisjointSet(carrier)
        for x, y in pairs:
            ds.union(x, y)
        return cls(carrier, ds.classes())

    @classmethod
    def discrete(cls, carrier: FinSet) -> "Partition":
        return cls(carrier, [(x,) for x in carrier])

    @classmethod
    def indiscrete(cls, carrier: FinSet) -> "Partition":
        return cls(carrier, [tuple(carrier)] if len(carrier) else [])

    def rep(self, x: str) -> str:
        return self._rep[x]

    def block_of(self, x: str) -> Tuple[str, ...]:
        r = self._rep[x]
        return next(b for b in self.blocks if b[0] == r)

    def related(self, x: str, y: str) -> bool:
        return self._rep[x] == self._rep[y]

    def pairs(self) -> frozenset:
        return frozenset((x, y) for b in self.blocks for x in b for y in b)

    def refines(self, other: "Partition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        if self.carrier != other.carrier:
            raise ShapeMismatch("partitions live on different carriers")
        return all(len({other._rep[x] for x in b}) == 1 for b in self.blocks)

    def quotient_map(self) -> FinMap:
        reps = FinSet(b[0] for b in self.blocks)
        return FinMap(self.carrier, reps, self._rep)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self.carrier == other.carrier and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((self.carrier, self.blocks))

    def __repr__(self) -> str:
        return "Partition(" + " | ".join(",".join(b) for b in self.blocks) + ")"


def kernel_pair(f: FinMap) -> Partition:
    return Partition(f.dom, [xs for xs in f.fibers().values() if xs])


def join(p1: Partition, p2: Partition) -> Partition:
    """Least upper bound: the equivalence closure of the union."""
    if p1.carrier != p2.carrier:
        raise ShapeMismatch("join of partitions on different carriers")
    ds = DisjointSet(p1.carrier)
    for p in (p1, p2):
        for b in p.blocks:
            for x in b[1:]:
                ds.union(b[0], x)
    return Partition(p1.carrier, ds.classes())


@dataclass(frozen=True)
class ChosenPullback:
    apex: FinSet
    proj1: FinMap
    proj2: FinMap
    along: Tuple[FinMap, FinMap]


def pullback(f: FinMap, g: FinMap) -> ChosenPullback:
    """Apex ``{(x,y) | f(x) = g(y)}`` with the coordinate projections."""
    if f.cod != g.cod:
        raise ShapeMismatch("pullback of maps with different codomains")
    by_image: Dict[str, List[str]] = {}
    for y in g.dom:
        by_image.setdefault(g(y), []).append(y)
    p1: Dict[str, str] = {}
    p2: Dict[str, str] = {}
    for x in f.dom:
        for y in by_image.get(f(x), ()):
            xy = pair(x, y)
            if xy in p1:
                raise FinSetError(f"pair encoding {xy!r} is ambiguous")
            p1[xy] = x
            p2[xy] = y
    apex = FinSet(p1)
    return ChosenPullback(apex, FinMap(apex, f.dom, p1), FinMap(apex, g.dom, p2), (f, g))


class Pushout(NamedTuple):
    apex: FinSet
    inj1: FinMap
    inj2: FinMap


def pushout(f: FinMap, g: FinMap) -> Pushout:
    """Quotient of ``cod f ⊎ cod g`` by ``f(x) ~ g(x)``, tags ``L:`` and ``R:``."""
    if f.dom != g.dom:
        raise ShapeMismatch("pushout of maps with different domains")
    ds = DisjointSet([tagged("L", y) for y in f.cod] + [tagged("R", z) for z in g.cod])
    for x in f.dom:
        ds.union(tagged("L", f(x)), tagged("R", g(x)))
    apex = FinSet({ds.find(t) for t in ds.parent})
    inj1 = FinMap(f.cod, apex, {y: ds.find(tagged("L", y)) for y in f.cod})
    inj2 = FinMap(g.cod, apex, {z: ds.find(tagged("R", z)) for z in g.cod})
    return Pushout(apex, inj1, inj2)


def coequalizer(f: FinMap, g: FinMap) -> FinMap:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("coequalizer needs a parallel pair")
    return Partition.from_pairs(f.cod, ((f(x), g(x)) for x in f.dom)).quotient_map()


@dataclass(frozen=True)
class CommutingSquare:
    """``right ∘ top = bottom ∘ left``::

        TL --top--> TR
        |            |
       left        right
        v            v
        BL -bottom-> BR
    """

    left: FinMap
    top: FinMap
    right: FinMap
    bottom: FinMap

    def __post_init__(self):
        if self.left.dom != self.top.dom:
            raise ShapeMismatch("left and top must share their domain")
        if self.top.cod != self.right.dom or self.left.cod != self.bottom.dom:
            raise ShapeMismatch("square legs are not composable")
        if self.right.cod != self.bottom.cod:
            raise ShapeMismatch("right and bottom must share their codomain")
        for x in self.left.dom:
            if self.right(self.top(x)) != self.bottom(self.left(x)):
                raise NotCommuting(f"square does not commute at {x!r}", witness=x)


def pullback_comparison(sq: CommutingSquare) -> FinMap:
    pb = pullback(sq.bottom, sq.right)
    return FinMap(sq.left.dom, pb.apex, {x: pair(sq.left(x), sq.top(x)) for x in sq.left.dom})


def is_pullback(sq: CommutingSquare) -> bool:
    c = classify(pullback_comparison(sq))
    return c.iso


def pushout_comparison(sq: CommutingSquare) -> FinMap:
    po = pushout(sq.left, sq.top)
    table: Dict[str, str] = {}
    for y in sq.left.cod:
        table[po.inj1(y)] = sq.bottom(y)
    for z in sq.top.cod:
        table[po.inj2(z)] = sq.right(z)
    return FinMap(po.apex, sq.bottom.cod, table)


def is_pushout(sq: CommutingSquare) -> bool:
    return classify(pushout_comparison(sq)).iso


def pushout_square(a: FinMap, r: FinMap) -> CommutingSquare:
    """The chosen pushout of the span ``A <-a- L -r-> R`` as a square."""
    po = pushout(a, r)
    return CommutingSquare(left=a, top=r, right=po.inj2, bottom=po.inj1)


def pullback_square(f: FinMap, g: FinMap) -> CommutingSquare:
    """The chosen pullback of ``f`` (bottom) and ``g`` (right)."""
    pb = pullback(f, g)
    return CommutingSquare(left=pb.proj1, top=pb.proj2, right=g, bottom=f)


def disjoint_extension(f: FinMap, extra: Mapping[str, str]) -> FinMap:
    """Add fresh domain elements to ``f`` with the given images."""
    dom = FinSet(list(f.dom) + list(extra))
    table = f.as_dict()
    table.update(extra)
    return FinMap(dom, f.cod, table)
