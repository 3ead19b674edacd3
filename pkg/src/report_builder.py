from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List

from graphviz import Digraph
from rich.console import Console
from rich.table import Table
from rich.text import Text

from .derive import LinePoint, PairsDecomposition
from .factors import FormalLFactor, LFactorTerm
from .ms_text import format_ms, format_segment
from .orbits import HasseDiagram, RankTable
from .schemas import PairsReport, PosetReport, RankReport


def format_point(p: LinePoint) -> str:
    return f"{p.line.name}:{p.residue}"


# --- Building reports ---------------------------------------------------------


def build_pairs_report(decomposition: PairsDecomposition) -> PairsReport:
    """Normalize a pairs decomposition into printable text fields."""
    free = decomposition.free()
    return PairsReport(
        point=format_point(decomposition.point),
        pairs=[[format_segment(a), format_segment(b)] for a, b in decomposition.pairs],
        f_part=format_ms(decomposition.f_part),
        free=[format_segment(s) for s in free],
        extendable=[format_segment(s) for s in decomposition.extendable()],
        d_right=len(free),
    )


def build_rank_report(table: RankTable) -> RankReport:
    return RankReport(
        line=table.line.name,
        dims={str(v): d for v, d in table.dims},
        ranks=[{"vertex": v, "k": k, "rank": r} for (v, k), r in table.ranks],
    )


def build_poset_report(diagram: HasseDiagram) -> PosetReport:
    return PosetReport(
        nodes=[format_ms(n) for n in diagram.nodes],
        edges=[[i, j] for i, j in diagram.edges],
        minimal=[format_ms(n) for n in diagram.minimal()],
    )


# --- Rendering ----------------------------------------------------------------


def render_json(payload: Dict[str, Any], pretty: bool = False) -> str:
    if pretty:
        return json.dumps(payload, indent=2, ensure_ascii=False)
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def render_dot(diagram: HasseDiagram) -> str:
    """Closure-order Hasse diagram; edges point from the lower node to the node covering it."""
    dot = Digraph(name="closure_order", comment="covering relations", strict=True)
    for i, node in enumerate(diagram.nodes):
        dot.node(f"n{i}", format_ms(node))
    for i, j in diagram.edges:
        dot.edge(f"n{i}", f"n{j}")
    return dot.source


def _format_exponent(q2exp: int) -> str:
    value = Fraction(q2exp, 2)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_term(term: LFactorTerm, variable: str = "T") -> str:
    unit = "*".join(
        token if exp == 1 else f"{token}^{exp}" for token, exp in term.unit.exponents
    )
    pieces = [p for p in (unit, f"q^({_format_exponent(term.q2exp)})" if term.q2exp else "", variable) if p]
    return f"(1 - {'*'.join(pieces)})^-1"


def format_lfactor(factor: FormalLFactor, variable: str = "T") -> str:
    if factor.is_one:
        return "1"
    return " ".join(format_term(t, variable) for t in factor.terms)


def render_text(payload: Dict[str, Any], console: Console, title: str = "") -> None:
    """Key/value table; nested values are shown as compact JSON."""
    table = Table(title=title or None, show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value", overflow="fold")
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            text = _render_nested(value)
        else:
            text = "null" if value is None else str(value)
        table.add_row(key, Text(text))
    console.print(table)


def _render_nested(value: Any) -> str:
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        lines: List[str] = list(value)
        return "\n".join(lines) if lines else "-"
    return json.dumps(value, ensure_ascii=False)
