"""
Tests for the pairs decomposition and the derivative / socle operators.

These tests verify that:
1. pairs_right, free and extendable segments match hand-run examples
2. derivatives and socles invert each other on aperiodic multisegments
3. The iterated, truncation, stability and lift identities hold on small sweeps
"""

from __future__ import annotations

from collections import Counter
from typing import List

import pytest

from src.derive import (
    LinePoint,
    d_left,
    d_right,
    derivative_vector,
    derive_left,
    derive_left_k,
    derive_left_max,
    derive_right,
    derive_right_k,
    derive_right_max,
    free_and_extendable,
    pairs_left,
    pairs_right,
    soc_left,
    soc_right,
    soc_right_k,
)
from src.errors import UnsupportedLine
from src.msline import (
    EMPTY_MS,
    ZERO,
    CuspidalLine,
    Multisegment,
    Segment,
    dual_ms,
    is_aperiodic,
    lift_right_compatible,
    ms_minus,
    reduce_mod_ell,
    shift_ops,
)
from tests.conftest import M2, O1, O2, O3, O4, all_multisegments, ms

SWEEP_LINES = [O2, O3, O4]
SWEEP_DEGREE = 6


def points(line: CuspidalLine) -> List[LinePoint]:
    return [LinePoint(line, r) for r in line.residues()]


def aperiodic_sweep(max_mass: int = SWEEP_DEGREE):
    for line in SWEEP_LINES:
        for m in all_multisegments(line, max_mass, aperiodic_only=True):
            for p in points(line):
                yield m, p


def pair_counter(m: Multisegment, p: LinePoint) -> Counter:
    return Counter(pairs_right(m, p).pairs)


# -----------------------------------------------------------------------------
# Pairs decomposition
# -----------------------------------------------------------------------------


class TestPairsRight:
    """Maximal pairs at a point."""

    def test_wrap_pair(self):
        d = pairs_right(ms(O3, (0, 0), (2, 2)), LinePoint(O3, 0))
        assert d.pairs == ((Segment(O3, 0, 1), Segment(O3, 2, 1)),)
        assert d.f_part == EMPTY_MS

    def test_nothing_ends_below(self):
        m = ms(O2, (1, 2), (0, 0))
        d = pairs_right(m, LinePoint(O2, 0))
        assert d.pairs == ()
        assert d.f_part == m

    def test_equal_lengths_pair(self):
        d = pairs_right(ms(O2, (1, 2), (0, 1)), LinePoint(O2, 0))
        assert d.pairs == ((Segment.from_ends(O2, 1, 2), Segment.from_ends(O2, 0, 1)),)
        assert not d.f_part

    def test_longest_head_takes_shortest_partner(self):
        """[0,3] takes [-3,2], the only tail long enough; [2,3] then takes [1,2] and is listed first."""
        line = CuspidalLine("L")
        m = ms(line, (0, 3), (2, 3), (-3, 2), (1, 2))
        d = pairs_right(m, LinePoint(line, 3))
        assert d.pairs == (
            (Segment.from_ends(line, 2, 3), Segment.from_ends(line, 1, 2)),
            (Segment.from_ends(line, 0, 3), Segment.from_ends(line, -3, 2)),
        )

    def test_reassembly(self):
        for m, p in aperiodic_sweep(3):
            d = pairs_right(m, p)
            assert d.f_part + d.paired() == m.restrict(p.line)
            for d1, d2 in d.pairs:
                assert d2.length >= d1.length

    def test_order_one_rejected(self):
        with pytest.raises(UnsupportedLine):
            pairs_right(ms(O1, (0, 0)), LinePoint(O1, 0))

    def test_other_lines_ignored(self):
        m = ms(O3, (0, 0)) + ms(M2, (1, 1))
        d = pairs_right(m, LinePoint(O3, 0))
        assert d.f_part == ms(O3, (0, 0))


class TestFreeAndExtendable:
    def test_two_free(self):
        free, ext = free_and_extendable(ms(O2, (1, 2), (0, 0)), LinePoint(O2, 0))
        assert free == [Segment(O2, 0, 1), Segment.from_ends(O2, 1, 2)]
        assert ext == []

    def test_extendable(self):
        free, ext = free_and_extendable(ms(O3, (0, 2)), LinePoint(O3, 0))
        assert free == []
        assert ext == [Segment(O3, 0, 3)]

    def test_empty(self):
        assert free_and_extendable(EMPTY_MS, LinePoint(O3, 0)) == ([], [])

    def test_extendable_shorter_than_free(self):
        for m, p in aperiodic_sweep(4):
            free, ext = free_and_extendable(m, p)
            if free and ext:
                assert max(s.length for s in ext) < min(s.length for s in free)


class TestDRight:
    def test_counts(self):
        assert d_right(ms(O2, (1, 2), (0, 0)), LinePoint(O2, 0)) == 2
        assert d_right(ms(O3, (0, 0), (2, 2)), LinePoint(O3, 0)) == 0

    def test_fully_paired_periodic(self):
        m = ms(O2, (0, 1), (1, 2))
        assert d_right(m, LinePoint(O2, 0)) == 0
        assert d_right(m, LinePoint(O2, 1)) == 0
        assert derivative_vector(m, O2) == {0: 0, 1: 0}

    def test_left_count_is_dual_count(self):
        for m, p in aperiodic_sweep(3):
            assert d_left(m, p) == d_right(dual_ms(m), p.dual())


# -----------------------------------------------------------------------------
# Derivatives and socles
# -----------------------------------------------------------------------------


class TestDeriveRight:
    def test_single_free(self):
        assert derive_right(ms(O3, (1, 3)), LinePoint(O3, 0)) == ms(O3, (1, 2))

    def test_paired_is_zero(self):
        assert derive_right(ms(O3, (0, 0), (2, 2)), LinePoint(O3, 0)) is ZERO

    def test_zero_differs_from_empty(self):
        """Deriving a single point gives the empty multisegment, not ZERO."""
        assert derive_right(ms(O3, (0, 0)), LinePoint(O3, 0)) == EMPTY_MS
        assert derive_right(ms(O3, (1, 1)), LinePoint(O3, 0)) is ZERO

    def test_max_and_k(self):
        m = ms(O2, (1, 2), (0, 0))
        p = LinePoint(O2, 0)
        assert derive_right_max(m, p) == ms(O2, (1, 1))
        assert derive_right_k(m, p, 1) == ms(O2, (1, 2))
        assert derive_right_k(m, p, 3) is ZERO
        assert derive_right_k(m, p, 0) == m

    def test_soc_then_derive(self):
        p = LinePoint(O3, 0)
        assert soc_right(ms(O3, (0, 2)), p) == ms(O3, (0, 3))
        assert derive_right(ms(O3, (0, 3)), p) == ms(O3, (0, 2))

    def test_other_lines_pass_through(self):
        m = ms(O3, (1, 3)) + ms(M2, (0, 0))
        assert derive_right(m, LinePoint(O3, 0)) == ms(O3, (1, 2)) + ms(M2, (0, 0))


class TestSocRight:
    def test_adds_point(self):
        assert soc_right(EMPTY_MS, LinePoint(O3, 0)) == ms(O3, (0, 0))

    def test_paired_segment_is_not_extended(self):
        m = ms(O3, (0, 0), (2, 2))
        assert soc_right(m, LinePoint(O3, 0)) == ms(O3, (0, 0, 2), (2, 2))

    def test_k_fold(self):
        p = LinePoint(O3, 0)
        assert soc_right_k(EMPTY_MS, p, 2) == ms(O3, (0, 0, 2))


class TestLeftVariants:
    def test_soc_left_of_empty(self):
        assert soc_left(EMPTY_MS, LinePoint(O3, 0)) == ms(O3, (0, 0))

    def test_derive_left(self):
        assert derive_left(ms(O3, (0, 1)), LinePoint(O3, 0)) == ms(O3, (1, 1))

    def test_derive_left_zero(self):
        assert derive_left(ms(O3, (1, 1)), LinePoint(O3, 0)) is ZERO

    def test_left_max_shortens_every_free_start(self):
        m = ms(O3, (0, 1), (0, 0))
        assert derive_left_max(m, LinePoint(O3, 0)) == ms(O3, (1, 1))

    def test_pairs_left_lives_on_dual_line(self):
        d = pairs_left(ms(O3, (0, 1)), LinePoint(O3, 0))
        assert d.point.line == O3.dual()
        assert [s.line for s in d.free()] == [O3.dual()]


# -----------------------------------------------------------------------------
# Identities on small sweeps
# -----------------------------------------------------------------------------


class TestInversion:
    """D(soc(m)) = m always, soc(D(m)) = m when D(m) is not ZERO."""

    def test_right(self):
        for m, p in aperiodic_sweep():
            assert derive_right(soc_right(m, p), p) == m
            n = derive_right(m, p)
            if n is not ZERO:
                assert soc_right(n, p) == m

    def test_left(self):
        for m, p in aperiodic_sweep():
            assert derive_left(soc_left(m, p), p) == m
            n = derive_left(m, p)
            if n is not ZERO:
                assert soc_left(n, p) == m


class TestAperiodicityPreserved:
    def test_all_four_operators(self):
        for m, p in aperiodic_sweep():
            for op in (derive_right, derive_left, soc_right, soc_left):
                n = op(m, p)
                if n is not ZERO:
                    assert is_aperiodic(n), (op.__name__, m, p)


class TestIterationLaw:
    def test_k_fold_equals_k_shortest(self):
        for m, p in aperiodic_sweep():
            free = pairs_right(m, p).free()
            for k in range(1, len(free) + 2):
                iterated = m
                for _ in range(k):
                    iterated = ZERO if iterated is ZERO else derive_right(iterated, p)
                assert derive_right_k(m, p, k) == iterated
                if k <= len(free):
                    counts = m.counts()
                    for seg in free[:k]:
                        counts[seg] -= 1
                        shorter = shift_ops(seg, "minus_right")
                        if shorter is not None:
                            counts[shorter] += 1
                    assert iterated == Multisegment.from_counts(counts)

    def test_left_k_matches_iterated_left(self):
        for m, p in aperiodic_sweep(3):
            once = derive_left(m, p)
            twice = ZERO if once is ZERO else derive_left(once, p)
            assert derive_left_k(m, p, 2) == twice


class TestPairIdentities:
    def test_truncation(self):
        """Pairs of m^- at p - 1 are the truncated pairs of m whose head is longer than 1."""
        for line in (O2, O3):
            for m in all_multisegments(line, SWEEP_DEGREE):
                for p in points(line):
                    expected = Counter(
                        (shift_ops(d1, "minus_right"), shift_ops(d2, "minus_right"))
                        for d1, d2 in pairs_right(m, p).pairs
                        if d1.length > 1
                    )
                    assert pair_counter(ms_minus(m), p.shifted(-1)) == expected, (m, p)

    def test_stable_under_soc_and_derive(self):
        for m, p in aperiodic_sweep():
            before = pair_counter(m, p)
            assert pair_counter(soc_right(m, p), p) == before
            n = derive_right(m, p)
            if n is not ZERO:
                assert pair_counter(n, p) == before


class TestLiftCompatibility:
    @pytest.mark.parametrize("line", [O2, O3])
    def test_reduce_derive_lift(self, line):
        p = LinePoint(line, 0)
        for m in all_multisegments(line, 5, aperiodic_only=True):
            lifted = lift_right_compatible(m)
            upstairs = derive_right(lifted, LinePoint(line.lifted(), 0))
            downstairs = derive_right(m, p)
            if downstairs is ZERO:
                assert upstairs is ZERO
            else:
                assert reduce_mod_ell(upstairs, line) == downstairs
