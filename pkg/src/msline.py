# src/msline.py
"""
Core domain types: cuspidal lines, segments, multisegments and cuspidal
supports, plus the combinatorial operations on them (duals, linkedness,
aperiodicity, truncations, lifts and enumeration by support).

All values are immutable and hashable; every function here is pure.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Dict, Iterable, Iterator, List, Literal, Mapping, Optional, Tuple, Union

from sympy import isprime

from .config import DEFAULT_ENUM_BOUND
from .errors import (
    DifferentLines,
    EmptyMultisegment,
    InvalidLine,
    InvalidSegment,
    MixedLines,
    NotContained,
    TooLarge,
    UnsupportedLine,
)

# An order of None means the line is infinite (no twist is periodic).
INFINITY: Optional[int] = None

DUAL_SUFFIX = "'"
LIFT_SUFFIX = "~"

ShiftKind = Literal["minus_right", "minus_left", "plus_right", "plus_left"]


# --- Lines --------------------------------------------------------------------


@dataclass(frozen=True)
class CuspidalLine:
    """
    The twist orbit of one cuspidal object.

    order          -- o(rho): positive int, or INFINITY (None)
    ell            -- the residue characteristic; required when order == 1
    cusp_degree    -- weight of one point (the m of G_m)
    algebra_degree -- degree d of the division algebra (factors only)
    unramified_char / unit_token -- unramified characters of F* carry the
                      symbolic value chi(varpi_F) under `unit_token`
    is_dual        -- this is the contragredient line of `id`
    """

    id: str
    order: Optional[int] = INFINITY
    ell: Optional[int] = None
    cusp_degree: int = 1
    algebra_degree: int = 1
    unramified_char: bool = False
    unit_token: Optional[str] = None
    is_dual: bool = False

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidLine("line id must be nonempty")
        if self.order is not None and self.order < 1:
            raise InvalidLine(f"line {self.id}: order must be positive or inf, got {self.order}")
        if self.ell is not None and (self.ell < 2 or not isprime(self.ell)):
            raise InvalidLine(f"line {self.id}: ell must be a prime >= 2, got {self.ell}")
        if self.order == 1 and self.ell is None:
            raise InvalidLine(f"line {self.id}: ell is required when order is 1")
        if self.cusp_degree < 1 or self.algebra_degree < 1:
            raise InvalidLine(f"line {self.id}: degrees must be positive")
        if self.unramified_char:
            if self.cusp_degree != 1:
                raise InvalidLine(f"line {self.id}: an unramified character has cusp degree 1")
            if not self.unit_token:
                raise InvalidLine(f"line {self.id}: unramified lines need a chi token")

    @property
    def name(self) -> str:
        """Identifier as printed: dual lines carry a trailing quote."""
        return self.id + DUAL_SUFFIX if self.is_dual else self.id

    @property
    def is_infinite(self) -> bool:
        return self.order is None

    @property
    def period(self) -> Optional[int]:
        """e(rho): the order when it exceeds 1, ell for order-1 lines."""
        if self.order == 1:
            return self.ell
        return self.order

    @property
    def square_irreducible(self) -> bool:
        return self.order is None or self.order > 1

    def canon(self, residue: int) -> int:
        return residue if self.order is None else residue % self.order

    def congruent(self, a: int, b: int) -> bool:
        return self.canon(a) == self.canon(b)

    def dual(self) -> "CuspidalLine":
        return replace(self, is_dual=not self.is_dual)

    def lifted(self) -> "CuspidalLine":
        """Companion infinite line used for lifts of multisegments."""
        if self.order is None:
            raise UnsupportedLine(f"line {self.name} is already infinite")
        return replace(self, id=self.id + LIFT_SUFFIX, order=INFINITY)

    def residues(self) -> List[int]:
        if self.order is None:
            raise UnsupportedLine(f"line {self.name} has no finite residue set")
        return list(range(self.order))


# --- Segments -----------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """A segment [start, start+length-1] on a line, stored with canonical start."""

    line: CuspidalLine
    start: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise InvalidSegment(f"segment length must be >= 1, got {self.length}")
        object.__setattr__(self, "start", self.line.canon(self.start))

    @classmethod
    def from_ends(cls, line: CuspidalLine, start: int, end: int) -> "Segment":
        return cls(line, start, end - start + 1)

    @property
    def end(self) -> int:
        """Integer end of the canonical representative."""
        return self.start + self.length - 1

    @property
    def end_residue(self) -> int:
        return self.line.canon(self.end)

    @property
    def degree(self) -> int:
        return self.line.cusp_degree * self.length

    def sort_key(self) -> Tuple[str, int, int]:
        return (self.line.name, self.start, self.length)

    def covered(self) -> List[int]:
        return [self.line.canon(self.start + i) for i in range(self.length)]


def shift_ops(s: Segment, which: ShiftKind) -> Optional[Segment]:
    """Move one endpoint of `s` by one; None stands for the empty segment."""
    if which == "minus_right":
        return Segment(s.line, s.start, s.length - 1) if s.length > 1 else None
    if which == "minus_left":
        return Segment(s.line, s.start + 1, s.length - 1) if s.length > 1 else None
    if which == "plus_right":
        return Segment(s.line, s.start, s.length + 1)
    if which == "plus_left":
        return Segment(s.line, s.start - 1, s.length + 1)
    raise ValueError(f"unknown shift {which!r}")


def dual_segment(s: Segment) -> Segment:
    return Segment(s.line.dual(), -s.end, s.length)


# --- Multisegments ------------------------------------------------------------


def _normalize(items: Iterable[Tuple[Segment, int]]) -> Tuple[Tuple[Segment, int], ...]:
    counts: Counter = Counter()
    for seg, mult in items:
        if mult < 0:
            raise InvalidSegment(f"negative multiplicity {mult} for {seg}")
        counts[seg] += mult
    return tuple(
        sorted(((s, k) for s, k in counts.items() if k > 0), key=lambda sk: sk[0].sort_key())
    )


@dataclass(frozen=True)
class Multisegment:
    """A finite multiset of segments, kept sorted by (line, start, length)."""

    items: Tuple[Tuple[Segment, int], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", _normalize(self.items))

    @classmethod
    def of(cls, segments: Iterable[Segment]) -> "Multisegment":
        return cls(tuple((s, 1) for s in segments))

    @classmethod
    def from_counts(cls, counts: Mapping[Segment, int]) -> "Multisegment":
        return cls(tuple(counts.items()))

    def __bool__(self) -> bool:
        return bool(self.items)

    def __len__(self) -> int:
        return sum(k for _, k in self.items)

    def __iter__(self) -> Iterator[Segment]:
        for seg, mult in self.items:
            for _ in range(mult):
                yield seg

    def __add__(self, other: "Multisegment") -> "Multisegment":
        return Multisegment(self.items + other.items)

    def counts(self) -> Counter:
        return Counter(dict(self.items))

    def lines(self) -> List[CuspidalLine]:
        seen: Dict[str, CuspidalLine] = {}
        for seg, _ in self.items:
            seen.setdefault(seg.line.name, seg.line)
        return [seen[k] for k in sorted(seen)]

    def restrict(self, line: CuspidalLine) -> "Multisegment":
        return Multisegment(tuple((s, k) for s, k in self.items if s.line == line))

    def single_line(self) -> Optional[CuspidalLine]:
        """The only line of `self` (None when empty); MixedLines otherwise."""
        lines = self.lines()
        if len(lines) > 1:
            raise MixedLines("expected a multisegment on a single line, got " + ", ".join(ln.name for ln in lines))
        return lines[0] if lines else None

    @property
    def degree(self) -> int:
        return sum(seg.degree * k for seg, k in self.items)

    @property
    def mass(self) -> int:
        """Total number of points, i.e. the sum of lengths."""
        return sum(seg.length * k for seg, k in self.items)

    def sort_key(self) -> Tuple:
        return tuple((seg.sort_key(), k) for seg, k in self.items)


EMPTY_MS = Multisegment()


class _Zero:
    """The vanishing derivative; distinct from the empty multisegment."""

    _instance: Optional["_Zero"] = None

    def __new__(cls) -> "_Zero":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO"

    def __bool__(self) -> bool:
        return False


ZERO = _Zero()

MaybeMultisegment = Union[Multisegment, _Zero]


def ms_add(m: Multisegment, n: Multisegment) -> Multisegment:
    return m + n


def ms_sub(m: Multisegment, n: Multisegment) -> Multisegment:
    counts = m.counts()
    for seg, k in n.items:
        if counts[seg] < k:
            raise NotContained(f"segment {seg.sort_key()} occurs {counts[seg]} times, cannot remove {k}")
        counts[seg] -= k
    return Multisegment.from_counts(counts)


def dual_ms(m: Multisegment) -> Multisegment:
    return Multisegment(tuple((dual_segment(s), k) for s, k in m.items))


# --- Linkedness ---------------------------------------------------------------


def _window(a: Segment, b: Segment) -> Tuple[int, int]:
    return max(1, a.length - b.length + 1), a.length


def linking_shifts(a: Segment, b: Segment) -> List[int]:
    """
    All integers t realising `a` preceding `b`: t is congruent to
    start(b) - start(a) and max(1, len a - len b + 1) <= t <= len a.
    """
    if a.line != b.line:
        raise DifferentLines(f"segments on {a.line.name} and {b.line.name}")
    lo, hi = _window(a, b)
    diff = b.start - a.start
    order = a.line.order
    if order is None:
        return [diff] if lo <= diff <= hi else []
    first = lo + (diff - lo) % order
    return list(range(first, hi + 1, order))


def precedes(a: Segment, b: Segment) -> bool:
    return bool(linking_shifts(a, b))


def self_linked(s: Segment) -> bool:
    """True when a segment precedes its own class (length >= order)."""
    return precedes(s, s)


def unlinked(m: Multisegment) -> bool:
    items = m.items
    for i, (a, ka) in enumerate(items):
        if ka >= 2 and self_linked(a):
            return False
        for b, _ in items[i + 1:]:
            if a.line != b.line:
                continue
            if precedes(a, b) or precedes(b, a):
                return False
    return True


def is_aperiodic(m: Multisegment) -> bool:
    """
    False when some line carries e shifted copies [a+i, b+i], 0 <= i < e,
    of one segment (counted with multiplicity in the residue classes).
    """
    for line in m.lines():
        if line.order is None:
            continue
        order, period = line.order, line.period
        counts = m.restrict(line).counts()
        lengths = {s.length for s in counts}
        for length in lengths:
            for a in range(order):
                needed: Counter = Counter(line.canon(a + i) for i in range(period))
                if all(counts[Segment(line, r, length)] >= k for r, k in needed.items()):
                    return False
    return True


# --- Truncations and supports -------------------------------------------------


def ms_top(m: Multisegment) -> Multisegment:
    return Multisegment(tuple((Segment(s.line, s.end, 1), k) for s, k in m.items))


def ms_minus(m: Multisegment) -> Multisegment:
    out = []
    for s, k in m.items:
        shorter = shift_ops(s, "minus_right")
        if shorter is not None:
            out.append((shorter, k))
    return Multisegment(tuple(out))


def ms_level(m: Multisegment, s: int) -> Multisegment:
    if s < 1:
        raise ValueError(f"level must be >= 1, got {s}")
    for _ in range(s - 1):
        m = ms_minus(m)
    return ms_top(m)


def mu_partition(m: Multisegment) -> Tuple[int, ...]:
    """(deg m^1, deg m^2, ...) up to the last nonempty level."""
    if not m:
        raise EmptyMultisegment("mu_partition needs a nonempty multisegment")
    parts: List[int] = []
    current = m
    while current:
        parts.append(ms_top(current).degree)
        current = ms_minus(current)
    return tuple(parts)


@dataclass(frozen=True)
class CuspSupport:
    """Per-line map residue -> multiplicity; zero entries are not stored."""

    entries: Tuple[Tuple[CuspidalLine, Tuple[Tuple[int, int], ...]], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        merged: Dict[str, Tuple[CuspidalLine, Counter]] = {}
        for line, values in self.entries:
            _, bucket = merged.setdefault(line.name, (line, Counter()))
            for residue, k in values:
                if k < 0:
                    raise ValueError(f"negative multiplicity at residue {residue}")
                bucket[line.canon(residue)] += k
        normalized = tuple(
            (line, tuple(sorted((r, k) for r, k in bucket.items() if k > 0)))
            for _, (line, bucket) in sorted(merged.items())
        )
        object.__setattr__(self, "entries", tuple(e for e in normalized if e[1]))

    @classmethod
    def single(cls, line: CuspidalLine, values: Mapping[int, int]) -> "CuspSupport":
        return cls(((line, tuple(values.items())),))

    @classmethod
    def from_vector(cls, line: CuspidalLine, d: Iterable[int]) -> "CuspSupport":
        """The support with d_i points at residue i."""
        return cls.single(line, dict(enumerate(d)))

    def lines(self) -> List[CuspidalLine]:
        return [line for line, _ in self.entries]

    def for_line(self, line: CuspidalLine) -> Dict[int, int]:
        for known, values in self.entries:
            if known == line:
                return dict(values)
        return {}

    def vector(self, line: CuspidalLine) -> Tuple[int, ...]:
        """(d_0, ..., d_{o-1}) on a finite line."""
        values = self.for_line(line)
        return tuple(values.get(r, 0) for r in line.residues())

    @property
    def mass(self) -> int:
        return sum(k for _, values in self.entries for _, k in values)


def cusp_support(m: Multisegment) -> CuspSupport:
    entries = []
    for line in m.lines():
        bucket: Counter = Counter()
        for seg, k in m.restrict(line).items:
            for r in seg.covered():
                bucket[r] += k
        entries.append((line, tuple(bucket.items())))
    return CuspSupport(tuple(entries))


def shift_support(s: CuspSupport, k: int) -> CuspSupport:
    return CuspSupport(tuple((line, tuple((r + k, n) for r, n in values)) for line, values in s.entries))


# --- Lifts --------------------------------------------------------------------


def _check_liftable(line: CuspidalLine) -> None:
    if line.order is None or line.order < 2:
        raise UnsupportedLine(f"line {line.name}: lifts need a finite order >= 2")


def lifted_end(line: CuspidalLine, end: int, anchor: int = 0) -> int:
    """
    Representative of `end` in {anchor - 1, anchor, ..., anchor + order - 2}:
    ends congruent to anchor and anchor - 1 land exactly there.
    """
    _check_liftable(line)
    offset = (end - anchor) % line.order
    if offset == line.order - 1:
        offset = -1
    return anchor + offset


def lift_right_compatible(m: Multisegment, anchor: int = 0) -> Multisegment:
    out = []
    for seg, k in m.items:
        line = seg.line
        end = lifted_end(line, seg.end, anchor)
        out.append((Segment(line.lifted(), end - seg.length + 1, seg.length), k))
    return Multisegment(tuple(out))


def lift_left_compatible(m: Multisegment, anchor: int = 0) -> Multisegment:
    """Lift with starts in anchor, anchor + 1, ..., anchor + order - 1."""
    out = []
    for seg, k in m.items:
        line = seg.line
        _check_liftable(line)
        start = anchor + (seg.start - anchor) % line.order
        out.append((Segment(line.lifted(), start, seg.length), k))
    return Multisegment(tuple(out))


def reduce_mod_ell(m: Multisegment, target: CuspidalLine) -> Multisegment:
    if target.order is None:
        raise UnsupportedLine(f"reduction target {target.name} must have finite order")
    for line in m.lines():
        if not line.is_infinite:
            raise UnsupportedLine(f"line {line.name} is not an infinite line")
    return Multisegment(tuple((Segment(target, s.start, s.length), k) for s, k in m.items))


# --- Enumeration --------------------------------------------------------------


def _enumerate_line(line: CuspidalLine, values: Dict[int, int]) -> List[Multisegment]:
    memo: Dict[Tuple[Tuple[int, int], ...], frozenset] = {}

    def solve(remaining: Tuple[Tuple[int, int], ...]) -> frozenset:
        if not remaining:
            return frozenset([()])
        if remaining in memo:
            return memo[remaining]
        left = dict(remaining)
        pivot = remaining[0][0]
        total = sum(left.values())
        found = set()
        for length in range(1, total + 1):
            for offset in range(length):
                seg = Segment(line, pivot - offset, length)
                cover = Counter(seg.covered())
                if any(left.get(r, 0) < k for r, k in cover.items()):
                    continue
                rest = dict(left)
                for r, k in cover.items():
                    rest[r] -= k
                key = tuple(sorted((r, k) for r, k in rest.items() if k > 0))
                for tail in solve(key):
                    found.add(tuple(sorted(tail + ((seg.start, seg.length),))))
        memo[remaining] = frozenset(found)
        return memo[remaining]

    start = tuple(sorted((r, k) for r, k in values.items() if k > 0))
    return [
        Multisegment.of(Segment(line, s, l) for s, l in combo)
        for combo in solve(start)
    ]


def enumerate_by_support(
    s: CuspSupport,
    aperiodic_only: bool = False,
    bound: Optional[int] = None,
) -> List[Multisegment]:
    """
    Every multisegment with cuspidal support `s`, duplicate-free and in
    canonical order. Lines never interact, so the result is the product
    of the per-line enumerations.
    """
    limit = DEFAULT_ENUM_BOUND if bound is None else bound
    if s.mass > limit:
        raise TooLarge(f"support of mass {s.mass} exceeds the enumeration bound {limit}")

    per_line = [_enumerate_line(line, dict(values)) for line, values in s.entries]
    results: List[Multisegment] = []
    for parts in product(*per_line):
        m = EMPTY_MS
        for part in parts:
            m = m + part
        if aperiodic_only and not is_aperiodic(m):
            continue
        results.append(m)
    results.sort(key=Multisegment.sort_key)
    return results


# --- Diagnostics --------------------------------------------------------------


def ms_diagnostics(m: Multisegment) -> List[str]:
    """Human-readable warnings about degenerate input."""
    warnings: List[str] = []
    for seg, _ in m.items:
        if not seg.line.is_infinite and self_linked(seg):
            warnings.append(
                f"segment of length {seg.length} at {seg.start} on {seg.line.name} "
                f"precedes its own class (order {seg.line.order})"
            )
    if not is_aperiodic(m):
        warnings.append("multisegment is not aperiodic")
    return warnings
