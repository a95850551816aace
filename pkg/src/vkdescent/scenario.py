"""JSON scenario files: named sets, graphs, maps, squares, spans and cubes.

Schema (every section optional, all names share one namespace)::

    {
      "sets":    {"L": ["x", "y"]},
      "graphs":  {"G": {"vertices": ["u"], "edges": ["e"], "src": {"e": "u"}, "tgt": {"e": "u"}}},
      "maps":    {"a": {"dom": "L", "cod": "A", "map": {"x": "A1", "y": "A1"}}},
      "homs":    {"h": {"dom": "G", "cod": "H", "vertices": {...}, "edges": {...}}},
      "squares": {"bottom": {"left": "a", "top": "r", "right": "abar", "bottom": "rbar"}},
      "spans":   {"rear": {"left": "square over a", "right": "square over r"}},
      "cubes":   {"c": {"span": "rear", "bottom": "bottom", "sigma": "...",
                        "s_top": "...", "abar_top": "...", "rbar_top": "..."}},
      "target":  {"square": "bottom", "span": "rear", "legs": ["a", "r"]}
    }

Squares, spans and cubes are built from maps (finite sets) or from homs
(graphs), never a mixture.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from .finset import CommutingSquare, FinMap, FinSet, FinSetError, NotCommuting, pushout_square
from .graphs import (
    FinGraph,
    GraphHom,
    GraphInstanceCube,
    GraphPullbackSpan,
    GraphSquare,
    graph_pushout_square,
)
from .vankampen import InstanceCube, PullbackSpan

Square = Union[CommutingSquare, GraphSquare]
Span = Union[PullbackSpan, GraphPullbackSpan]
Cube = Union[InstanceCube, GraphInstanceCube]

SECTIONS = ("sets", "graphs", "maps", "homs", "squares", "spans", "cubes")


class ScenarioError(ValueError):
    def __init__(self, message: str, name: Optional[str] = None, line: Optional[int] = None):
        self.name, self.line = name, line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if name is not None:
            where.append(f"'{name}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class Scenario:
    sets: Dict[str, FinSet] = field(default_factory=dict)
    graphs: Dict[str, FinGraph] = field(default_factory=dict)
    maps: Dict[str, FinMap] = field(default_factory=dict)
    homs: Dict[str, GraphHom] = field(default_factory=dict)
    squares: Dict[str, Square] = field(default_factory=dict)
    spans: Dict[str, Span] = field(default_factory=dict)
    cubes: Dict[str, Cube] = field(default_factory=dict)
    target: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_graph(self) -> bool:
        return bool(self.graphs)

    def target_square(self) -> Optional[Square]:
        """The named target square, else the chosen pushout of the target legs."""
        if "square" in self.target:
            return self.squares[self.target["square"]]
        legs = self.target_legs()
        if legs is None:
            return None
        a, r = legs
        return graph_pushout_square(a, r) if isinstance(a, GraphHom) else pushout_square(a, r)

    def target_legs(self):
        if "legs" in self.target:
            a, r = self.target["legs"]
            return self._arrow(a), self._arrow(r)
        if "square" in self.target:
            sq = self.squares[self.target["square"]]
            return sq.left, sq.top
        if "span" in self.target:
            sp = self.spans[self.target["span"]]
            return sp.a, sp.r
        return None

    def target_span(self) -> Optional[Span]:
        return self.spans.get(self.target["span"]) if "span" in self.target else None

    def _arrow(self, name: str):
        return self.maps[name] if name in self.maps else self.homs[name]


def _line_of(text: str, name: str) -> Optional[int]:
    m = re.search(r'"%s"\s*:' % re.escape(name), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _no_duplicates(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for k, v in pairs:
        if k in out:
            raise ScenarioError("duplicate name", k)
        out[k] = v
    return out


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, line=exc.lineno) from None
    except ScenarioError as exc:
        raise ScenarioError("duplicate name", exc.name, _duplicate_line(text, exc.name)) from None
    if not isinstance(doc, dict):
        raise ScenarioError("a scenario must be a JSON object", line=1)
    return _Builder(text, doc).build()


def _duplicate_line(text: str, name: Optional[str]) -> Optional[int]:
    if name is None:
        return None
    hits = [m.start() for m in re.finditer(r'"%s"\s*:' % re.escape(name), text)]
    return text.count("\n", 0, hits[1]) + 1 if len(hits) > 1 else _line_of(text, name)


class _Builder:
    def __init__(self, text: str, doc: Dict[str, Any]):
        self.text, self.doc = text, doc
        self.sc = Scenario()
        self.owner: Dict[str, str] = {}

    def fail(self, message: str, name: str) -> ScenarioError:
        return ScenarioError(message, name, _line_of(self.text, name))

    def entries(self, section: str):
        body = self.doc.get(section, {})
        if not isinstance(body, dict):
            raise ScenarioError(f"section '{section}' must be an object", line=_line_of(self.text, section))
        for name, spec in body.items():
            if name in self.owner:
                raise self.fail(f"duplicate name (already declared in '{self.owner[name]}')", name)
            self.owner[name] = section
            yield name, spec

    def ref(self, table: Dict[str, Any], key: str, owner: str, kind: str):
        if not isinstance(key, str) or key not in table:
            raise self.fail(f"unknown {kind} {key!r}", owner)
        return table[key]

    def build(self) -> Scenario:
        unknown = set(self.doc) - set(SECTIONS) - {"target"}
        if unknown:
            name = sorted(unknown)[0]
            raise ScenarioError("unknown section", name, _line_of(self.text, name))
        self._sets_and_graphs()
        self._arrows()
        self._squares()
        self._spans()
        self._cubes()
        self._target()
        return self.sc

    def _sets_and_graphs(self) -> None:
        for name, elems in self.entries("sets"):
            try:
                self.sc.sets[name] = FinSet(elems)
            except (FinSetError, TypeError) as exc:
                raise self.fail(str(exc), name) from None
        for name, spec in self.entries("graphs"):
            try:
                V, E = FinSet(spec["vertices"]), FinSet(spec.get("edges", []))
                self.sc.graphs[name] = FinGraph(
                    V, E, FinMap(E, V, spec.get("src", {})), FinMap(E, V, spec.get("tgt", {}))
                )
            except (FinSetError, KeyError, TypeError) as exc:
                raise self.fail(f"malformed graph: {exc}", name) from None

    def _arrows(self) -> None:
        for name, spec in self.entries("maps"):
            dom = self.ref(self.sc.sets, spec.get("dom"), name, "set")
            cod = self.ref(self.sc.sets, spec.get("cod"), name, "set")
            try:
                self.sc.maps[name] = FinMap(dom, cod, spec.get("map", {}))
            except FinSetError as exc:
                raise self.fail(str(exc), name) from None
        for name, spec in self.entries("homs"):
            dom = self.ref(self.sc.graphs, spec.get("dom"), name, "graph")
            cod = self.ref(self.sc.graphs, spec.get("cod"), name, "graph")
            try:
                self.sc.homs[name] = GraphHom(
                    dom, cod,
                    FinMap(dom.vertices, cod.vertices, spec.get("vertices", {})),
                    FinMap(dom.edges, cod.edges, spec.get("edges", {})),
                )
            except FinSetError as exc:
                raise self.fail(str(exc), name) from None

    def _arrow(self, key: str, owner: str):
        if key in self.sc.maps:
            return self.sc.maps[key]
        if key in self.sc.homs:
            return self.sc.homs[key]
        raise self.fail(f"unknown map {key!r}", owner)

    def _squares(self) -> None:
        for name, spec in self.entries("squares"):
            sides = [self._arrow(spec.get(k), name) for k in ("left", "top", "right", "bottom")]
            kinds = {type(s) for s in sides}
            if len(kinds) != 1:
                raise self.fail("square mixes set maps and graph homomorphisms", name)
            cls = GraphSquare if GraphHom in kinds else CommutingSquare
            try:
                self.sc.squares[name] = cls(*sides)
            except NotCommuting as exc:
                raise self.fail(f"square does not commute: {exc} (witness {exc.witness!r})", name) from None
            except FinSetError as exc:
                raise self.fail(str(exc), name) from None

    def _spans(self) -> None:
        for name, spec in self.entries("spans"):
            left = self.ref(self.sc.squares, spec.get("left"), name, "square")
            right = self.ref(self.sc.squares, spec.get("right"), name, "square")
            cls = GraphPullbackSpan if isinstance(left, GraphSquare) else PullbackSpan
            try:
                self.sc.spans[name] = cls(left.bottom, right.bottom, left.left, left, right)
            except FinSetError as exc:
                raise self.fail(str(exc), name) from None

    def _cubes(self) -> None:
        for name, spec in self.entries("cubes"):
            span = self.ref(self.sc.spans, spec.get("span"), name, "span")
            bottom = self.ref(self.sc.squares, spec.get("bottom"), name, "square")
            parts = [self._arrow(spec.get(k), name) for k in ("sigma", "s_top", "abar_top", "rbar_top")]
            cls = GraphInstanceCube if isinstance(span, GraphPullbackSpan) else InstanceCube
            cube = cls(span, bottom, *parts)
            try:
                bad = cube.failures()
            except FinSetError as exc:
                bad = [str(exc)]
            if bad:
                raise self.fail("; ".join(bad), name)
            self.sc.cubes[name] = cube

    def _target(self) -> None:
        tgt = self.doc.get("target", {})
        if not isinstance(tgt, dict):
            raise ScenarioError("target must be an object", "target", _line_of(self.text, "target"))
        for key, table in (("square", self.sc.squares), ("span", self.sc.spans), ("cube", self.sc.cubes)):
            if key in tgt and tgt[key] not in table:
                raise ScenarioError(f"unknown {key} {tgt[key]!r}", "target", _line_of(self.text, "target"))
        if "legs" in tgt:
            legs = tgt["legs"]
            if not (isinstance(legs, list) and len(legs) == 2):
                raise ScenarioError("legs must name two maps", "target", _line_of(self.text, "target"))
            for leg in legs:
                if leg not in self.sc.maps and leg not in self.sc.homs:
                    raise ScenarioError(f"unknown map {leg!r}", "target", _line_of(self.text, "target"))
        self.sc.target = dict(tgt)


# -- writing -------------------------------------------------------------------


class DocumentWriter:
    """Accumulates named objects into a scenario document."""

    def __init__(self):
        self.doc: Dict[str, Dict[str, Any]] = {s: {} for s in SECTIONS}

    def _fresh(self, name: str) -> str:
        taken = {n for sec in self.doc.values() for n in sec}
        out, k = name, 1
        while out in taken:
            k += 1
            out = f"{name}{k}"
        return out

    def set(self, name: str, S: FinSet) -> str:
        for n, elems in self.doc["sets"].items():
            if elems == list(S.elements):
                return n
        name = self._fresh(name)
        self.doc["sets"][name] = list(S.elements)
        return name

    def graph(self, name: str, G: FinGraph) -> str:
        body = {
            "vertices": list(G.vertices.elements), "edges": list(G.edges.elements),
            "src": G.src.as_dict(), "tgt": G.tgt.as_dict(),
        }
        for n, b in self.doc["graphs"].items():
            if b == body:
                return n
        name = self._fresh(name)
        self.doc["graphs"][name] = body
        return name

    def arrow(self, name: str, f, dom: str = "", cod: str = "") -> str:
        if isinstance(f, GraphHom):
            body = {
                "dom": self.graph(dom or f"{name}_dom", f.dom), "cod": self.graph(cod or f"{name}_cod", f.cod),
                "vertices": f.on_vertices.as_dict(), "edges": f.on_edges.as_dict(),
            }
            section = "homs"
        else:
            body = {
                "dom": self.set(dom or f"{name}_dom", f.dom), "cod": self.set(cod or f"{name}_cod", f.cod),
                "map": f.as_dict(),
            }
            section = "maps"
        for n, b in self.doc[section].items():
            if b == body:
                return n
        name = self._fresh(name)
        self.doc[section][name] = body
        return name

    def square(self, name: str, sq: Square) -> str:
        body = {side: self.arrow(side, getattr(sq, side)) for side in ("left", "top", "right", "bottom")}
        for n, b in self.doc["squares"].items():
            if b == body:
                return n
        name = self._fresh(name)
        self.doc["squares"][name] = body
        return name

    def span(self, name: str, sp: Span) -> str:
        self._base(sp.a, sp.r)
        obj = self.graph if isinstance(sp, GraphPullbackSpan) else self.set
        for label, inst in (("I", sp.carrier.dom), ("J", sp.left.right.dom), ("H", sp.right.right.dom)):
            obj(label, inst)
        self.arrow("gamma", sp.carrier)
        self.arrow("tau", sp.left.right)
        self.arrow("beta", sp.right.right)
        self.arrow("a_top", sp.left.top)
        self.arrow("r_top", sp.right.top)
        left = self.square(f"{name}_left", sp.left)
        right = self.square(f"{name}_right", sp.right)
        name = self._fresh(name)
        self.doc["spans"][name] = {"left": left, "right": right}
        return name

    def _base(self, a, r) -> None:
        obj = self.graph if isinstance(a, GraphHom) else self.set
        obj("L", a.dom)
        obj("A", a.cod)
        obj("R", r.cod)
        self.arrow("a", a)
        self.arrow("r", r)

    def bottom(self, name: str, sq: Square) -> str:
        self._base(sq.left, sq.top)
        obj = self.graph if isinstance(sq, GraphSquare) else self.set
        obj("S", sq.bottom.cod)
        self.arrow("abar", sq.right)
        self.arrow("rbar", sq.bottom)
        return self.square(name, sq)

    def cube(self, name: str, cube: Cube) -> str:
        bottom = self.bottom("bottom", cube.bottom)
        span = self.span("rear", cube.span)
        obj = self.graph if isinstance(cube, GraphInstanceCube) else self.set
        obj("K", cube.sigma.dom)
        body = {
            "span": span,
            "bottom": bottom,
            "sigma": self.arrow("sigma", cube.sigma),
            "s_top": self.arrow("s_top", cube.s_top),
            "abar_top": self.arrow("abar_top", cube.abar_top),
            "rbar_top": self.arrow("rbar_top", cube.rbar_top),
        }
        name = self._fresh(name)
        self.doc["cubes"][name] = body
        return name

    def document(self, target: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        out = {k: v for k, v in self.doc.items() if v}
        if target:
            out["target"] = target
        return out


def dump(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def cube_document(cube: Cube, name: str = "cube") -> Dict[str, Any]:
    w = DocumentWriter()
    name = w.cube(name, cube)
    spec = w.doc["cubes"][name]
    return w.document({"cube": name, "span": spec["span"], "square": spec["bottom"]})


def span_document(span: Span, bottom: Optional[Square] = None, name: str = "rear") -> Dict[str, Any]:
    w = DocumentWriter()
    target: Dict[str, Any] = {}
    if bottom is not None:
        target["square"] = w.bottom("bottom", bottom)
    target["span"] = w.span(name, span)
    return w.document(target)


def square_document(sq: Square, name: str = "bottom") -> Dict[str, Any]:
    w = DocumentWriter()
    return w.document({"square": w.bottom(name, sq)})
