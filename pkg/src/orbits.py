# src/orbits.py
"""
Nilpotent orbits of the cyclic (or equioriented A-infinity) quiver.

Orbits with a fixed graded dimension vector are indexed by the
multisegments with that cuspidal support. n <= m in the closure order
when n is reached from m by elementary operations
    [a,b] + [a',b']  ->  [a,b'] + [a',b]      (a+1 <= a' <= b+1 <= b')
which always lengthen segments; the unlinked multisegments are the open
orbits. Rank tables of the quiver representations give an independent
check of the order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
from rich.console import Console
from sympy import Matrix, zeros

from .errors import CrosscheckFailed, InfiniteLine, MixedLines
from .msline import (
    CuspidalLine,
    CuspSupport,
    Multisegment,
    Segment,
    cusp_support,
    enumerate_by_support,
    linking_shifts,
    ms_sub,
    unlinked,
)

console = Console(stderr=True)


# --- Elementary operations ----------------------------------------------------


def _occurrence_pairs(m: Multisegment) -> List[Tuple[Segment, Segment]]:
    out = []
    for a, ka in m.items:
        for b, _ in m.items:
            if a.line != b.line:
                continue
            if a == b and ka < 2:
                continue
            out.append((a, b))
    return out


def elementary_ops(m: Multisegment) -> List[Multisegment]:
    """Every distinct multisegment one elementary operation away from m."""
    results = set()
    for a, b in _occurrence_pairs(m):
        rest = ms_sub(m, Multisegment.of([a, b]))
        for t in linking_shifts(a, b):
            union = Segment(a.line, a.start, t + b.length)
            new = [union]
            if a.length > t:
                new.append(Segment(a.line, a.start + t, a.length - t))
            results.add(rest + Multisegment.of(new))
    return sorted(results, key=Multisegment.sort_key)


@lru_cache(maxsize=2048)
def closure_down_set(m: Multisegment) -> FrozenSet[Multisegment]:
    """All n with n <= m, by breadth-first search from m."""
    seen = {m}
    queue = deque([m])
    while queue:
        current = queue.popleft()
        for nxt in elementary_ops(current):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def closure_leq(n: Multisegment, m: Multisegment) -> bool:
    if cusp_support(n) != cusp_support(m):
        return False
    return n in closure_down_set(m)


def is_open_orbit(m: Multisegment, crosscheck: bool = False) -> bool:
    verdict = unlinked(m)
    if crosscheck:
        no_ops = not elementary_ops(m)
        console.print(f"[green]\\[orbits][/green] open-orbit crosscheck: unlinked={verdict} no_ops={no_ops}")
        if verdict != no_ops:
            raise CrosscheckFailed("unlinked and 'no elementary operation' disagree")
    return verdict


# --- Hasse diagrams -----------------------------------------------------------


@dataclass(frozen=True)
class HasseDiagram:
    """
    nodes -- every multisegment with the support, in canonical order
    edges -- (i, j) index pairs: nodes[i] is covered by nodes[j] in the closure order
    """

    support: CuspSupport
    nodes: Tuple[Multisegment, ...] = field(default_factory=tuple)
    edges: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    def minimal(self) -> List[Multisegment]:
        covered = {j for _, j in self.edges}
        return [n for i, n in enumerate(self.nodes) if i not in covered]


def hasse_poset(s: CuspSupport, bound: Optional[int] = None) -> HasseDiagram:
    nodes = enumerate_by_support(s, aperiodic_only=False, bound=bound)
    index = {m: i for i, m in enumerate(nodes)}

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(nodes)))
    for m in nodes:
        for lower in elementary_ops(m):
            graph.add_edge(index[lower], index[m])

    reduced = nx.transitive_reduction(graph)
    return HasseDiagram(support=s, nodes=tuple(nodes), edges=tuple(sorted(reduced.edges())))


# --- Counting open orbits -----------------------------------------------------


def _counting_line(s: CuspSupport, line: Optional[CuspidalLine]) -> CuspidalLine:
    lines = s.lines()
    if len(lines) > 1 or (line is not None and lines and lines[0] != line):
        raise MixedLines("counting needs a support on a single line")
    if line is None:
        if not lines:
            raise MixedLines("counting an empty support needs its line")
        line = lines[0]
    if line.is_infinite:
        raise InfiniteLine(f"counting needs a finite-order line, got {line.name}")
    return line


def count_unlinked_formula(s: CuspSupport, line: Optional[CuspidalLine] = None) -> int:
    """#{i : d_i = D} when D = min d_i is positive, 1 otherwise."""
    line = _counting_line(s, line)
    d = s.vector(line)
    least = min(d)
    if least == 0:
        return 1
    return sum(1 for x in d if x == least)


def unlinked_members(s: CuspSupport, bound: Optional[int] = None) -> List[Multisegment]:
    return [m for m in enumerate_by_support(s, bound=bound) if unlinked(m)]


def count_unlinked_brute(s: CuspSupport, line: Optional[CuspidalLine] = None, bound: Optional[int] = None) -> int:
    _counting_line(s, line)
    return len(unlinked_members(s, bound))


# --- Rank tables --------------------------------------------------------------


@dataclass(frozen=True)
class RankTable:
    line: CuspidalLine
    dims: Tuple[Tuple[int, int], ...]
    ranks: Tuple[Tuple[Tuple[int, int], int], ...]

    def dim(self, vertex: int) -> int:
        return dict(self.dims).get(vertex, 0)

    def rank(self, vertex: int, k: int) -> int:
        return dict(self.ranks).get((vertex, k), 0)

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return dict(self.ranks)


def _vertices(line: CuspidalLine, support: Dict[int, int]) -> List[int]:
    return sorted(support) if line.is_infinite else line.residues()


def rank_table(m: Multisegment, line: Optional[CuspidalLine] = None) -> RankTable:
    """
    Exact ranks of every composition of k successive arrows of lambda(m),
    1 <= k <= mass(m). Each segment occurrence is one chain
    e_a -> e_{a+1} -> ... -> e_b -> 0.
    """
    own = m.single_line()
    if line is None:
        line = own
    elif own is not None and own != line:
        raise MixedLines(f"multisegment lives on {own.name}, not {line.name}")
    if line is None:
        raise MixedLines("rank_table of the empty multisegment needs a line")

    # basis vectors (occurrence, position) grouped by vertex
    basis: Dict[int, List[Tuple[int, int]]] = {}
    for occ, seg in enumerate(m):
        for pos, vertex in enumerate(seg.covered()):
            basis.setdefault(vertex, []).append((occ, pos))
    lengths = [seg.length for seg in m]
    vertices = _vertices(line, {v: len(b) for v, b in basis.items()})
    dims = {v: len(basis.get(v, [])) for v in vertices}

    def arrow(v: int) -> Matrix:
        target = line.canon(v + 1)
        rows = basis.get(target, [])
        cols = basis.get(v, [])
        row_index = {b: i for i, b in enumerate(rows)}
        mat = zeros(len(rows), len(cols))
        for j, (occ, pos) in enumerate(cols):
            if pos + 1 < lengths[occ]:
                mat[row_index[(occ, pos + 1)], j] = 1
        return mat

    ranks: Dict[Tuple[int, int], int] = {}
    for v in vertices:
        composite: Optional[Matrix] = None
        for k in range(1, m.mass + 1):
            step = arrow(line.canon(v + k - 1))
            composite = step if composite is None else step * composite
            value = 0 if 0 in composite.shape else int(composite.rank())
            if value:
                ranks[(v, k)] = value
            else:
                # once zero, longer paths stay zero
                break

    return RankTable(
        line=line,
        dims=tuple(sorted(dims.items())),
        ranks=tuple(sorted(ranks.items())),
    )


def rank_dominates(a: RankTable, b: RankTable) -> bool:
    if a.line != b.line or a.dims != b.dims:
        return False
    keys = set(a.as_dict()) | set(b.as_dict())
    return all(a.rank(*key) >= b.rank(*key) for key in keys)
