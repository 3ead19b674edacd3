# src/derive.py
"""
Maximal-pair decomposition and the derivative / socle operators at a point.

Right operators are computed directly; every left operator is the right
operator on the dual line at the dual point, conjugated by dual_ms.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .errors import UnsupportedLine
from .msline import (
    ZERO,
    CuspidalLine,
    MaybeMultisegment,
    Multisegment,
    Segment,
    dual_ms,
    shift_ops,
)


@dataclass(frozen=True)
class LinePoint:
    """The point rho * nu^residue on a line; residue is canonical."""

    line: CuspidalLine
    residue: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "residue", self.line.canon(self.residue))

    def shifted(self, k: int) -> "LinePoint":
        return LinePoint(self.line, self.residue + k)

    def dual(self) -> "LinePoint":
        return LinePoint(self.line.dual(), -self.residue)

    def sort_key(self) -> Tuple[str, int]:
        return (self.line.name, self.residue)


@dataclass(frozen=True)
class PairsDecomposition:
    """
    pairs  -- (d1, d2) with d1 ending at the point, d2 at point - 1;
              the last pair extracted comes first
    f_part -- what is left of the point's line after removing the pairs
    """

    point: LinePoint
    pairs: Tuple[Tuple[Segment, Segment], ...] = field(default_factory=tuple)
    f_part: Multisegment = field(default_factory=Multisegment)

    def free(self) -> List[Segment]:
        return _by_length([s for s in self.f_part if _ends_at(s, self.point)])

    def extendable(self) -> List[Segment]:
        return _by_length([s for s in self.f_part if _ends_at(s, self.point.shifted(-1))])

    def paired(self) -> Multisegment:
        return Multisegment.of(seg for pair in self.pairs for seg in pair)


def _require_square_irreducible(line: CuspidalLine) -> None:
    if not line.square_irreducible:
        raise UnsupportedLine(
            f"line {line.name} has order 1: the point and the point minus one coincide"
        )


def _ends_at(seg: Segment, p: LinePoint) -> bool:
    return seg.line == p.line and seg.line.congruent(seg.end, p.residue)


def _by_length(segments: List[Segment]) -> List[Segment]:
    return sorted(segments, key=lambda s: (s.length, s.sort_key()))


def pairs_right(m: Multisegment, p: LinePoint) -> PairsDecomposition:
    """
    Repeatedly take the longest d1 ending at p that has a partner ending
    at p - 1 of at least its length, pair it with the shortest such d2,
    and continue on what is left.
    """
    _require_square_irreducible(p.line)
    pool: Counter = m.restrict(p.line).counts()
    below = p.shifted(-1)
    pairs: List[Tuple[Segment, Segment]] = []

    while True:
        heads = sorted(
            (s for s, k in pool.items() if k > 0 and _ends_at(s, p)),
            key=lambda s: (-s.length, s.sort_key()),
        )
        tails = _by_length([s for s, k in pool.items() if k > 0 and _ends_at(s, below)])
        chosen = None
        for head in heads:
            partner = next((t for t in tails if t.length >= head.length), None)
            if partner is not None:
                chosen = (head, partner)
                break
        if chosen is None:
            break
        pool[chosen[0]] -= 1
        pool[chosen[1]] -= 1
        pairs.append(chosen)

    return PairsDecomposition(point=p, pairs=tuple(reversed(pairs)), f_part=Multisegment.from_counts(pool))


def free_and_extendable(m: Multisegment, p: LinePoint) -> Tuple[List[Segment], List[Segment]]:
    decomposition = pairs_right(m, p)
    return decomposition.free(), decomposition.extendable()


def d_right(m: Multisegment, p: LinePoint) -> int:
    return len(pairs_right(m, p).free())


def _shorten(m: Multisegment, segments: List[Segment]) -> Multisegment:
    counts = m.counts()
    for seg in segments:
        counts[seg] -= 1
        shorter = shift_ops(seg, "minus_right")
        if shorter is not None:
            counts[shorter] += 1
    return Multisegment.from_counts(counts)


def derive_right_k(m: Multisegment, p: LinePoint, k: int) -> MaybeMultisegment:
    """Shorten the k shortest free segments; ZERO when fewer than k are free."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    free = pairs_right(m, p).free()
    if k > len(free):
        return ZERO
    return _shorten(m, free[:k])


def derive_right(m: Multisegment, p: LinePoint) -> MaybeMultisegment:
    return derive_right_k(m, p, 1)


def derive_right_max(m: Multisegment, p: LinePoint) -> Multisegment:
    return _shorten(m, pairs_right(m, p).free())


def soc_right(m: Multisegment, p: LinePoint) -> Multisegment:
    """Extend the longest extendable segment, or add the point [p, p]."""
    extendable = pairs_right(m, p).extendable()
    if not extendable:
        return m + Multisegment.of([Segment(p.line, p.residue, 1)])
    longest = max(extendable, key=lambda s: s.length)
    target = next(s for s in extendable if s.length == longest.length)
    counts = m.counts()
    counts[target] -= 1
    counts[shift_ops(target, "plus_right")] += 1
    return Multisegment.from_counts(counts)


def soc_right_k(m: Multisegment, p: LinePoint, k: int) -> Multisegment:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    for _ in range(k):
        m = soc_right(m, p)
    return m


def derivative_vector(m: Multisegment, line: CuspidalLine) -> Dict[int, int]:
    """d_right at every residue of a finite line, or at every occupied end of an infinite one."""
    if line.is_infinite:
        residues = sorted({s.end for s in m.restrict(line)})
    else:
        residues = line.residues()
    return {r: d_right(m, LinePoint(line, r)) for r in residues}


# --- Left operators -----------------------------------------------------------


def _undual(result: MaybeMultisegment) -> MaybeMultisegment:
    return ZERO if result is ZERO else dual_ms(result)


def pairs_left(m: Multisegment, p: LinePoint) -> PairsDecomposition:
    """Pairs of the dual multisegment at the dual point (segments stay on the dual line)."""
    return pairs_right(dual_ms(m), p.dual())


def d_left(m: Multisegment, p: LinePoint) -> int:
    return d_right(dual_ms(m), p.dual())


def derive_left(m: Multisegment, p: LinePoint) -> MaybeMultisegment:
    return _undual(derive_right(dual_ms(m), p.dual()))


def derive_left_k(m: Multisegment, p: LinePoint, k: int) -> MaybeMultisegment:
    return _undual(derive_right_k(dual_ms(m), p.dual(), k))


def derive_left_max(m: Multisegment, p: LinePoint) -> Multisegment:
    return dual_ms(derive_right_max(dual_ms(m), p.dual()))


def soc_left(m: Multisegment, p: LinePoint) -> Multisegment:
    return dual_ms(soc_right(dual_ms(m), p.dual()))


def soc_left_k(m: Multisegment, p: LinePoint, k: int) -> Multisegment:
    return dual_ms(soc_right_k(dual_ms(m), p.dual(), k))
