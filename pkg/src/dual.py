# src/dual.py
"""
Recursive dual of aperiodic multisegments:

    dual(0) = 0
    dual(m) = soc_left(dual(D_r(m, p)), p)   for a point p with D_r(m, p) != 0

Every line must have order > 1 (infinite lines included).
"""
from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple

from .derive import LinePoint, d_right, derivative_vector, derive_right, soc_left
from .errors import NoDerivativePoint, NotAperiodic, UnsupportedLine
from .msline import ZERO, CuspidalLine, Multisegment, is_aperiodic


def _candidate_residues(m: Multisegment, line: CuspidalLine) -> List[int]:
    if line.is_infinite:
        return sorted({s.end for s in m.restrict(line)})
    return line.residues()


def _check_lines(m: Multisegment) -> None:
    for line in m.lines():
        if not line.square_irreducible:
            raise UnsupportedLine(f"no dual algorithm on the order-1 line {line.name}")


def choose_derivative_point(m: Multisegment) -> LinePoint:
    """Smallest point (line id, then residue) with a nonzero right derivative."""
    _check_lines(m)
    for line in m.lines():
        for r in _candidate_residues(m, line):
            p = LinePoint(line, r)
            if d_right(m, p) > 0:
                return p
    raise NoDerivativePoint(
        "no point has a nonzero right derivative",
        vector={line.name: derivative_vector(m, line) for line in m.lines()},
    )


@lru_cache(maxsize=4096)
def _az_dual(m: Multisegment) -> Multisegment:
    if not m:
        return m
    p = choose_derivative_point(m)
    return soc_left(_az_dual(derive_right(m, p)), p)


def az_dual(m: Multisegment) -> Multisegment:
    _check_lines(m)
    if not is_aperiodic(m):
        raise NotAperiodic("the dual is only defined on aperiodic multisegments")
    return _az_dual(m)


def az_dual_trace(m: Multisegment) -> List[Tuple[LinePoint, Multisegment]]:
    """The (point, derivative) steps the recursion walks, outermost first."""
    _check_lines(m)
    if not is_aperiodic(m):
        raise NotAperiodic("the dual is only defined on aperiodic multisegments")
    steps: List[Tuple[LinePoint, Multisegment]] = []
    while m:
        p = choose_derivative_point(m)
        m = derive_right(m, p)
        steps.append((p, m))
    return steps


def dual_at(m: Multisegment, p: LinePoint) -> Multisegment:
    """The recursion with its first step forced at p; equals az_dual(m) whenever d_right(m, p) > 0."""
    n = derive_right(m, p)
    if n is ZERO:
        raise NoDerivativePoint(
            f"d_right vanishes at residue {p.residue} of {p.line.name}",
            vector={p.line.name: derivative_vector(m, p.line)},
        )
    return soc_left(az_dual(n), p)
