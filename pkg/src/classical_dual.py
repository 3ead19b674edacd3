# src/classical_dual.py
"""
Classical Moeglin-Waldspurger involution on infinite lines.

Kept independent of the derivative machinery so it can serve as an
oracle for the recursive dual:

  1. take the largest end e and the shortest segment ending there;
  2. walk down: at each step take the shortest segment ending one lower
     that starts strictly earlier than the previous one;
  3. the chain of length r contributes [e - r + 1, e] to the dual and
     every chain member loses its last point; repeat until empty.
"""
from __future__ import annotations

from collections import Counter
from typing import List

from .errors import UnsupportedLine
from .msline import CuspidalLine, Multisegment, Segment


def _dual_component(line: CuspidalLine, pool: Counter) -> List[Segment]:
    out: List[Segment] = []
    while +pool:
        live = [s for s, k in pool.items() if k > 0]
        top = max(s.end for s in live)
        current = max((s for s in live if s.end == top), key=lambda s: s.start)
        chain = [current]
        pool[current] -= 1
        while True:
            below = [
                s for s, k in pool.items()
                if k > 0 and s.end == current.end - 1 and s.start < current.start
            ]
            if not below:
                break
            current = max(below, key=lambda s: s.start)
            chain.append(current)
            pool[current] -= 1
        for seg in chain:
            if seg.length > 1:
                pool[Segment(line, seg.start, seg.length - 1)] += 1
        out.append(Segment(line, top - len(chain) + 1, len(chain)))
    return out


def classical_dual(m: Multisegment) -> Multisegment:
    segments: List[Segment] = []
    for line in m.lines():
        if not line.is_infinite:
            raise UnsupportedLine(f"the classical involution needs an infinite line, got {line.name}")
        segments += _dual_component(line, m.restrict(line).counts())
    return Multisegment.of(segments)
