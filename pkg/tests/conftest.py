"""
Shared lines, a small multisegment builder and the exhaustive sweeps
used by the identity suites.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Tuple

import pytest

from src.msline import INFINITY, CuspidalLine, CuspSupport, Multisegment, Segment, enumerate_by_support

INF = CuspidalLine("L", INFINITY, ell=2)
O1 = CuspidalLine("U", 1, ell=2)
O1_ELL3 = CuspidalLine("U", 1, ell=3)
O2 = CuspidalLine("L", 2, ell=3)
O3 = CuspidalLine("L", 3, ell=5)
O4 = CuspidalLine("L", 4, ell=5)
M2 = CuspidalLine("M", 2, ell=3)


def ms(line: CuspidalLine, *terms) -> Multisegment:
    """ms(O3, (0, 2), (1, 1, 2)) is [0,2] + 2*[1,1]; terms are (start, end[, mult])."""
    items = []
    for term in terms:
        start, end = term[0], term[1]
        mult = term[2] if len(term) > 2 else 1
        items.append((Segment.from_ends(line, start, end), mult))
    return Multisegment(tuple(items))


def supports(line: CuspidalLine, max_mass: int, width: Optional[int] = None) -> Iterator[CuspSupport]:
    """Every support of mass <= max_mass on the residues (or an integer window of `width`)."""
    size = line.order if line.order is not None else (width or max_mass)
    for d in product(range(max_mass + 1), repeat=size):
        if 0 < sum(d) <= max_mass:
            yield CuspSupport.from_vector(line, d)


@lru_cache(maxsize=None)
def all_multisegments(line: CuspidalLine, max_mass: int, aperiodic_only: bool = False) -> Tuple[Multisegment, ...]:
    """Every multisegment of mass 1..max_mass on `line`; shared across the sweeps."""
    found = []
    for s in supports(line, max_mass):
        found += enumerate_by_support(s, aperiodic_only=aperiodic_only)
    return tuple(found)


@pytest.fixture
def inf_line() -> CuspidalLine:
    return INF


@pytest.fixture
def o2() -> CuspidalLine:
    return O2


@pytest.fixture
def o3() -> CuspidalLine:
    return O3


@pytest.fixture
def unramified_inf() -> CuspidalLine:
    return CuspidalLine("L", INFINITY, ell=2, unramified_char=True, unit_token="u")


@pytest.fixture
def unramified_inf_d2() -> CuspidalLine:
    return CuspidalLine("L", INFINITY, ell=2, algebra_degree=2, unramified_char=True, unit_token="u")
