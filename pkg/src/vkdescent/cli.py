"""Command line front end: ``vkdescent <command> --scenario FILE``.

Exit status is 0 when the question is answered positively (or something was
constructed), 1 when it is answered negatively (or nothing exists), and 2 on
any error, including a disagreement with the brute-force oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from .finset import FinSetError, is_pushout
from .graph_oracle import brute_reachable_graph, brute_van_kampen_graph_counterexample
from .graphs import (
    GraphHom,
    GraphSquare,
    amalgamate_graph,
    is_graph_pushout,
    is_van_kampen_graph,
    unreachable_graph_span,
)
from .oracle import BudgetExceeded, SearchBudget, brute_reachable, brute_van_kampen_counterexample
from .render import cube_dot, incidence_dot
from .scenario import Scenario, ScenarioError, cube_document, parse_scenario, span_document
from .vankampen import (
    amalgamate,
    canonical_cycle,
    check_coherence,
    cycle_obstruction,
    find_domain_cycle,
    is_van_kampen,
    proper_domain_cycles,
    unreachable_span_for_cycle,
)

COMMANDS = ("check-vk", "check-reachable", "amalgamate", "cycles", "counterexample", "oracle")


class OracleDisagreement(RuntimeError):
    pass


@dataclass
class Report:
    command: str
    verdict: bool
    summary: str
    details: List[str] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    dot: Optional[str] = None

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict else 1

    def as_json(self) -> Dict[str, Any]:
        return {"command": self.command, "verdict": self.verdict, "exit_code": self.exit_code,
                "summary": self.summary, **self.data}

    def as_text(self) -> str:
        lines = [self.summary] + [f"  {d}" for d in self.details]
        lines += ["", "[result]", json.dumps(self.as_json(), indent=2, ensure_ascii=False)]
        return "\n".join(lines) + "\n"


def _fmt_cycle(cycle) -> str:
    return "(" + ", ".join(cycle.elements) + ")"


def _require(value, what: str):
    if value is None:
        raise ScenarioError(f"the scenario target does not provide {what}", "target")
    return value


def _cross(report: Report, oracle_value: bool, what: str) -> None:
    report.data["oracle"] = oracle_value
    if oracle_value != report.verdict:
        raise OracleDisagreement(
            f"brute-force oracle says {what} is {oracle_value}, the decision procedure says {report.verdict}"
        )
    report.details.append(f"brute-force oracle agrees ({what} = {oracle_value})")


def _cycle_lines(a, r) -> List[Dict[str, Any]]:
    """Per component: the first cycle found (or None)."""
    if isinstance(a, GraphHom):
        vc, ec = find_domain_cycle(a.on_vertices, r.on_vertices), find_domain_cycle(a.on_edges, r.on_edges)
        return [{"component": "vertices", "cycle": vc}, {"component": "edges", "cycle": ec}]
    return [{"component": "elements", "cycle": find_domain_cycle(a, r)}]


def _cycle_data(found) -> Dict[str, Any]:
    return {f["component"]: (list(f["cycle"].elements) if f["cycle"] else None) for f in found}


def _check_vk(sc: Scenario, budget: SearchBudget, oracle: bool) -> Report:
    sq = _require(sc.target_square(), "a square")
    graph = isinstance(sq, GraphSquare)
    verdict = is_van_kampen_graph(sq) if graph else is_van_kampen(sq)
    found = _cycle_lines(sq.left, sq.top)
    rep = Report("check-vk", verdict, f"Van Kampen: {'yes' if verdict else 'no'}")
    if verdict:
        rep.details.append(
            "a and r have separated kernels (the kernel incidence multigraph is a forest"
            + (" on vertices and on edges" if graph else "")
            + "), so pulling instances back along this pushout is an equivalence"
        )
    for f in found:
        if f["cycle"] is not None:
            rep.details.append(
                f"domain cycle {_fmt_cycle(f['cycle'])} on {f['component']} alternates between ker(a) and ker(r);"
                " twisting one lift along it yields a rear span that no instance over the pushout reaches"
            )
    rep.data.update(category="graph" if graph else "set", cycles=_cycle_data(found))
    rep.dot = incidence_dot(sq.left, sq.top, [f["cycle"].elements if f["cycle"] else None for f in found])
    if oracle:
        cex = (brute_van_kampen_graph_counterexample if graph else brute_van_kampen_counterexample)(sq, budget)
        _cross(rep, cex is None, "Van Kampen")
    return rep


def _set_obstruction(span, report) -> List[str]:
    out = []
    if report.obstruction is not None:
        block, x, hits = report.obstruction
        out.append(
            f"join of ker(a') and ker(r') has block {{{', '.join(block)}}} meeting the fibre over {x} "
            f"in {hits} elements instead of exactly one"
        )
    obs = cycle_obstruction(span)
    if obs is not None:
        cycle, m = obs
        moved = ", ".join(f"{i} -> {j}" for i, j in sorted(m.items()) if i != j)
        out.append(f"transport around domain cycle {_fmt_cycle(cycle)} is not the identity: {moved}")
    return out


def _check_reachable(sc: Scenario, budget: SearchBudget, oracle: bool) -> Report:
    span = _require(sc.target_span(), "a span")
    sq = _require(sc.target_square(), "a bottom square")
    if isinstance(sq, GraphSquare):
        cube = amalgamate_graph(span, sq)
        verdict = cube is not None
        rep = Report("check-reachable", verdict, f"reachable: {'yes' if verdict else 'no'}")
        for name, sub_span, sub_sq in (
            ("vertices", span.vertex_span(), sq.vertex_square()),
            ("edges", span.edge_span(), sq.edge_square()),
        ):
            cr = check_coherence(sub_span, sub_sq)
            status = "coherent" if cr.coherent else "not coherent"
            rep.details.append(f"{name}: {status}")
            if not cr.coherent:
                rep.details.extend(f"{name}: {line}" for line in _set_obstruction(sub_span, cr))
        rep.data["category"] = "graph"
    else:
        cr = check_coherence(span, sq)
        verdict = cr.coherent
        cube = amalgamate(span, sq) if verdict and is_pushout(sq) else None
        rep = Report("check-reachable", verdict, f"reachable: {'yes' if verdict else 'no'}")
        if verdict:
            rep.details.append(
                "the join of ker(a') and ker(r') meets every fibre of each ker(s) class exactly once, "
                "so it is descent data over s restricting to both canonical families"
            )
            rep.data["witness"] = [[x, y, dict(m)] for (x, y), m in sorted(cr.witness.family.items())]
        else:
            rep.data["obstruction"] = _set_obstruction(span, cr)
            rep.details.extend(rep.data["obstruction"])
        rep.data["category"] = "set"
    if cube is not None:
        rep.details.append(f"amalgamated instance: |K| = {_size(cube.sigma.dom)}")
        rep.data["sigma"] = _sigma_data(cube.sigma)
        rep.dot = cube_dot(cube)
    else:
        rep.dot = incidence_dot(span.a, span.r, [f["cycle"].elements if f["cycle"] else None
                                                 for f in _cycle_lines(span.a, span.r)])
    if oracle:
        finder = brute_reachable_graph if isinstance(sq, GraphSquare) else brute_reachable
        _cross(rep, finder(span, sq, budget) is not None, "reachable")
    return rep


def _size(obj) -> Any:
    if hasattr(obj, "vertices"):
        return f"{len(obj.vertices)} vertices, {len(obj.edges)} edges"
    return len(obj)


def _sigma_data(sigma) -> Dict[str, Any]:
    if isinstance(sigma, GraphHom):
        return {"vertices": sigma.on_vertices.as_dict(), "edges": sigma.on_edges.as_dict()}
    return sigma.as_dict()


def _amalgamate(sc: Scenario, budget: SearchBudget, oracle: bool) -> Report:
    span = _require(sc.target_span(), "a span")
    sq = _require(sc.target_square(), "a bottom square")
    graph = isinstance(sq, GraphSquare)
    cube = amalgamate_graph(span, sq) if graph else amalgamate(span, sq)
    if cube is None:
        rep = Report("amalgamate", False, "no amalgamation: the span is not reachable")
        rep.dot = incidence_dot(span.a, span.r)
    else:
        K = cube.sigma.dom
        rep = Report("amalgamate", True, f"amalgamated instance: |K| = {_size(K)}")
        rep.details.append(f"sigma: {_sigma_data(cube.sigma)}")
        for name in ("s_top", "abar_top", "rbar_top"):
            rep.details.append(f"{name}: {_sigma_data(getattr(cube, name))}")
        rep.details.append("front and side faces are pullbacks, the top face is a pushout")
        rep.data.update(sigma=_sigma_data(cube.sigma), cube=cube_document(cube))
        rep.dot = cube_dot(cube)
    if oracle:
        finder = brute_reachable_graph if graph else brute_reachable
        _cross(rep, finder(span, sq, budget) is not None, "reachable")
    return rep


def _cycles(sc: Scenario, budget: SearchBudget, oracle: bool) -> Report:
    a, r = _require(sc.target_legs(), "legs a and r")
    found = _cycle_lines(a, r)
    separated = all(f["cycle"] is None for f in found)
    rep = Report("cycles", separated, "separated kernels" if separated else "domain cycle found")
    listing: Dict[str, List[List[str]]] = {}
    pairs = [("vertices", a.on_vertices, r.on_vertices), ("edges", a.on_edges, r.on_edges)] \
        if isinstance(a, GraphHom) else [("elements", a, r)]
    for name, fa, fr in pairs:
        cycles, seen = [], set()
        for c in proper_domain_cycles(fa, fr):
            key = canonical_cycle(c.elements)
            if key not in seen:
                seen.add(key)
                cycles.append(list(key))
            if len(cycles) >= 20:
                break
        listing[name] = cycles
        for c in cycles:
            rep.details.append(f"{name}: ({', '.join(c)})")
    rep.data.update(cycles=_cycle_data(found), proper_cycles=listing)
    rep.dot = incidence_dot(a, r, [f["cycle"].elements if f["cycle"] else None for f in found])
    if oracle:
        from .oracle import walk_domain_cycle

        walked = all(walk_domain_cycle(fa, fr) is None for _, fa, fr in pairs)
        _cross(rep, walked, "separated")
    return rep


def _counterexample(sc: Scenario, budget: SearchBudget, oracle: bool) -> Report:
    a, r = _require(sc.target_legs(), "legs a and r")
    sq = _require(sc.target_square(), "a square")
    graph = isinstance(a, GraphHom)
    if graph:
        span = unreachable_graph_span(a, r)
    else:
        cycle = find_domain_cycle(a, r)
        span = unreachable_span_for_cycle(a, r, cycle) if cycle is not None else None
    if span is None:
        rep = Report("counterexample", False, "no counterexample: a and r have separated kernels")
    else:
        rep = Report("counterexample", True, "unreachable rear span constructed")
        found = _cycle_lines(a, r)
        # the construction twists along the first component that has a cycle
        used = next(f for f in found if f["cycle"] is not None)
        rep.details.append(f"twisted along domain cycle {_fmt_cycle(used['cycle'])} on {used['component']}")
        rep.data["twisted"] = {used["component"]: list(used["cycle"].elements)}
        rep.data["span"] = span_document(span, sq)
        rep.dot = incidence_dot(a, r, [f["cycle"].elements if f["cycle"] else None for f in found])
    if oracle and span is not None:
        finder = brute_reachable_graph if graph else brute_reachable
        _cross(rep, finder(span, sq, budget) is None, "unreachable")
    return rep


def _oracle(sc: Scenario, budget: SearchBudget, oracle: bool) -> Report:
    sq = _require(sc.target_square(), "a square")
    graph = isinstance(sq, GraphSquare)
    span = sc.target_span()
    if span is not None:
        sigma = (brute_reachable_graph if graph else brute_reachable)(span, sq, budget)
        rep = Report("oracle", sigma is not None, f"brute force: {'reachable' if sigma is not None else 'unreachable'}")
        if sigma is not None:
            rep.data["sigma"] = _sigma_data(sigma)
            rep.details.append(f"instance found with |K| = {_size(sigma.dom)}")
        if oracle:
            rep.data["oracle"] = rep.verdict
            algo = (amalgamate_graph(span, sq) is not None) if graph else check_coherence(span, sq).coherent
            if algo != rep.verdict:
                raise OracleDisagreement(f"decision procedure says reachable = {algo}")
        return rep
    if not (is_graph_pushout(sq) if graph else is_pushout(sq)):
        raise FinSetError("the oracle's Van Kampen check needs a pushout square")
    cex = (brute_van_kampen_graph_counterexample if graph else brute_van_kampen_counterexample)(sq, budget)
    rep = Report("oracle", cex is None, f"brute force: {'Van Kampen' if cex is None else 'not Van Kampen'}")
    rep.details.append(
        f"searched rear spans with fibres of size at most {budget.max_fiber_size}, "
        f"instances with at most {budget.max_apex_size} elements"
    )
    if cex is not None:
        rep.data["span"] = span_document(cex, sq)
    if oracle:
        algo = is_van_kampen_graph(sq) if graph else is_van_kampen(sq)
        if algo != rep.verdict:
            raise OracleDisagreement(f"decision procedure says Van Kampen = {algo}")
        rep.data["oracle"] = rep.verdict
    return rep


_RUNNERS: Dict[str, Callable[[Scenario, SearchBudget, bool], Report]] = {
    "check-vk": _check_vk,
    "check-reachable": _check_reachable,
    "amalgamate": _amalgamate,
    "cycles": _cycles,
    "counterexample": _counterexample,
    "oracle": _oracle,
}


def run(command: str, scenario: Scenario, budget: SearchBudget = SearchBudget(), oracle: bool = False) -> Report:
    if command not in _RUNNERS:
        raise ValueError(f"unknown command {command!r}")
    return _RUNNERS[command](scenario, budget, oracle)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vkdescent", description="Van Kampen squares and reachable spans.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", required=True, help="path to a JSON scenario file ('-' for stdin)")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--budget-apex", type=int, default=16, help="largest instance the oracle tries")
    p.add_argument("--budget-fiber", type=int, default=2, help="largest fibre in enumerated spans")
    p.add_argument("--time-limit", type=float, default=60.0, help="seconds allowed for oracle searches")
    p.add_argument("--oracle", action="store_true", help="cross-check against the brute-force oracle")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.scenario == "-" else open(args.scenario, encoding="utf-8").read()
        budget = SearchBudget(args.budget_apex, args.budget_fiber, args.time_limit)
        report = run(args.command, parse_scenario(text), budget, args.oracle)
    except (OSError, ValueError, FinSetError, BudgetExceeded, OracleDisagreement) as exc:
        if args.format == "json":
            print(json.dumps({"command": args.command, "error": str(exc), "exit_code": 2}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(report.as_json(), indent=2, ensure_ascii=False))
    elif args.format == "dot":
        sys.stdout.write(report.dot or "")
    else:
        sys.stdout.write(report.as_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
