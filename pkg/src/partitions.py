# src/partitions.py
"""
Partitions and compositions: reversal, the recursive intersection,
dominance, l-regularity and Kostka numbers by tableau enumeration.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from .errors import NotOrdered, UnequalSums

Tableau = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Partition:
    """A sequence of positive parts; `is_ordered` when weakly decreasing."""

    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def is_ordered(self) -> bool:
        return all(a >= b for a, b in zip(self.parts, self.parts[1:]))

    def __len__(self) -> int:
        return len(self.parts)


def ordered(alpha: Partition) -> Partition:
    return Partition(tuple(sorted(alpha.parts, reverse=True)))


def reverse(alpha: Partition) -> Partition:
    return Partition(tuple(reversed(alpha.parts)))


def _require_equal_sums(alpha: Partition, beta: Partition) -> None:
    if alpha.size != beta.size:
        raise UnequalSums(f"{alpha.parts} sums to {alpha.size}, {beta.parts} to {beta.size}")


def intersect(alpha: Partition, beta: Partition) -> Partition:
    """
    Common refinement, built left to right. Each step emits the smaller
    leading part and continues with the arguments swapped, the longer
    leading part reduced by what was emitted.
    """
    _require_equal_sums(alpha, beta)
    a, b = list(alpha.parts), list(beta.parts)
    out: List[int] = []
    while a:
        if a[0] == b[0]:
            out.append(a[0])
            a, b = b[1:], a[1:]
        elif a[0] < b[0]:
            out.append(a[0])
            a, b = [b[0] - a[0]] + b[1:], a[1:]
        else:
            out.append(b[0])
            a, b = b[1:], [a[0] - b[0]] + a[1:]
    return Partition(tuple(out))


def dominance_leq(alpha: Partition, beta: Partition) -> bool:
    """Prefix sums of alpha never exceed those of beta."""
    for p in (alpha, beta):
        if not p.is_ordered:
            raise NotOrdered(f"{p.parts} is not weakly decreasing")
    _require_equal_sums(alpha, beta)
    total_a = total_b = 0
    for x, y in zip(alpha.parts, beta.parts):
        total_a += x
        total_b += y
        if total_a > total_b:
            return False
    return True


def is_ell_regular(lam: Partition, ell: int) -> bool:
    """No part occurs ell or more times."""
    return all(k < ell for k in Counter(lam.parts).values())


def partitions_of(n: int, largest: int = 0) -> Iterator[Partition]:
    """Ordered partitions of n, in reverse lexicographic order."""
    if n == 0:
        yield Partition(())
        return
    top = n if largest <= 0 else min(n, largest)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + rest.parts)


def count_ell_regular(n: int, ell: int) -> int:
    return sum(1 for lam in partitions_of(n) if is_ell_regular(lam, ell))


# --- Tableaux -----------------------------------------------------------------


def _fits(rows: List[List[int]], row: int, col: int, val: int) -> bool:
    """Rows weakly increase, columns strictly increase."""
    if col > 0 and val < rows[row][col - 1]:
        return False
    if row > 0 and val <= rows[row - 1][col]:
        return False
    return True


def ssyt(shape: Partition, content: Sequence[int]) -> List[Tableau]:
    """Every semistandard tableau of `shape` with content[i] entries equal to i + 1."""
    if not shape.is_ordered:
        raise NotOrdered(f"shape {shape.parts} is not weakly decreasing")
    if any(c < 0 for c in content):
        raise ValueError(f"content must be nonnegative, got {tuple(content)}")
    if shape.size != sum(content):
        raise UnequalSums(f"shape {shape.parts} has {shape.size} boxes, content sums to {sum(content)}")

    cells = [(r, c) for r, length in enumerate(shape.parts) for c in range(length)]
    rows: List[List[int]] = [[0] * length for length in shape.parts]
    remaining = list(content)
    results: List[Tableau] = []

    def backtrack(pos: int) -> None:
        if pos == len(cells):
            results.append(tuple(tuple(r) for r in rows))
            return
        row, col = cells[pos]
        for i, left in enumerate(remaining):
            val = i + 1
            if left == 0 or not _fits(rows, row, col, val):
                continue
            rows[row][col] = val
            remaining[i] -= 1
            backtrack(pos + 1)
            remaining[i] += 1
            rows[row][col] = 0

    backtrack(0)
    return results


def kostka(lam: Partition, mu: Sequence[int]) -> int:
    return len(ssyt(lam, mu))
