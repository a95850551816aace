"""Graphviz DOT text for cubes and for kernel incidence multigraphs."""

from __future__ import annotations

from typing import List, Optional, Sequence

from .finset import FinMap, kernel_pair
from .graphs import FinGraph, GraphHom
from .vankampen import incidence_multigraph


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _describe(obj) -> str:
    if isinstance(obj, FinGraph):
        return f"|V|={len(obj.vertices)} |E|={len(obj.edges)}"
    elems = list(obj)
    shown = ", ".join(elems) if len(elems) <= 8 else ", ".join(elems[:8]) + ", ..."
    return f"|{len(elems)}| {{{shown}}}"


def cube_dot(cube) -> str:
    """The rear span and instance on top, the bottom square below, joined by dashed typing maps."""
    span, bottom = cube.span, cube.bottom
    objs = {
        "I": span.carrier.dom, "J": span.left.right.dom, "H": span.right.right.dom, "K": cube.sigma.dom,
        "L": bottom.left.dom, "A": bottom.left.cod, "R": bottom.top.cod, "S": bottom.bottom.cod,
    }
    lines = ["digraph cube {", "  rankdir=LR;", "  node [shape=box];"]
    for name, obj in objs.items():
        lines.append(f"  {name} [label={_q(name + chr(10) + _describe(obj))}];")
    solid = [
        ("I", "J", "a'"), ("I", "H", "r'"), ("J", "K", "r̄'"), ("H", "K", "ā'"),
        ("L", "A", "a"), ("L", "R", "r"), ("A", "S", "r̄"), ("R", "S", "ā"),
    ]
    dashed = [("I", "L", "γ"), ("J", "A", "τ"), ("H", "R", "β"), ("K", "S", "σ")]
    lines.append("  subgraph cluster_top { label=\"instances\"; I; J; H; K; }")
    lines.append("  subgraph cluster_bottom { label=\"base\"; L; A; R; S; }")
    for u, v, lab in solid:
        lines.append(f"  {u} -> {v} [label={_q(lab)}];")
    for u, v, lab in dashed:
        lines.append(f"  {u} -> {v} [label={_q(lab)}, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _incidence_lines(a: FinMap, r: FinMap, cycle: Optional[Sequence[str]], prefix: str) -> List[str]:
    ka, kr = kernel_pair(a), kernel_pair(r)
    nodes_a, nodes_r, edges = incidence_multigraph(a, r)
    on_cycle = set(cycle or ())
    out = []
    for node in nodes_a:
        members = ka.block_of(node[2:])
        out.append(f"    {_q(prefix + node)} [label={_q('ker a: ' + ' '.join(members))}, shape=box];")
    for node in nodes_r:
        members = kr.block_of(node[2:])
        out.append(f"    {_q(prefix + node)} [label={_q('ker r: ' + ' '.join(members))}, shape=ellipse];")
    for x, na, nr in edges:
        style = ", color=red, penwidth=2" if x in on_cycle else ""
        out.append(f"    {_q(prefix + na)} -- {_q(prefix + nr)} [label={_q(x)}{style}];")
    return out


def incidence_dot(a, r, cycles: Sequence[Optional[Sequence[str]]] = ()) -> str:
    """Blocks of ``ker(a)`` and ``ker(r)`` as nodes, one edge per element; cycle edges drawn red.

    For graph homomorphisms the vertex and edge components are drawn side by side.
    """
    lines = ["graph incidence {"]
    if isinstance(a, GraphHom):
        vcyc = cycles[0] if cycles else None
        ecyc = cycles[1] if len(cycles) > 1 else None
        for label, fa, fr, cyc, prefix in (
            ("vertices", a.on_vertices, r.on_vertices, vcyc, "V/"),
            ("edges", a.on_edges, r.on_edges, ecyc, "E/"),
        ):
            lines.append(f"  subgraph cluster_{label} {{")
            lines.append(f"    label={_q(label)};")
            lines.extend(_incidence_lines(fa, fr, cyc, prefix))
            lines.append("  }")
    else:
        cyc = cycles[0] if cycles else None
        lines.extend(line[2:] if line.startswith("    ") else line for line in _incidence_lines(a, r, cyc, ""))
    lines.append("}")
    return "\n".join(lines) + "\n"

