"""
Tests for partition utilities and Kostka numbers.
"""

from __future__ import annotations

from itertools import accumulate, product

import pytest

from src.errors import NotOrdered, UnequalSums
from src.partitions import (
    Partition,
    count_ell_regular,
    dominance_leq,
    intersect,
    is_ell_regular,
    kostka,
    ordered,
    partitions_of,
    reverse,
    ssyt,
)

P = Partition.of


def compositions(n: int):
    """Every composition of n, as tuples of positive parts."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


# -----------------------------------------------------------------------------
# Reverse, intersection, dominance
# -----------------------------------------------------------------------------


class TestReverse:
    def test_examples(self):
        assert reverse(P(2, 1)) == P(1, 2)
        assert reverse(P(3)) == P(3)
        assert reverse(reverse(P(1, 2, 3))) == P(1, 2, 3)

    def test_parts_positive(self):
        with pytest.raises(ValueError):
            P(2, 0)


class TestIntersect:
    def test_examples(self):
        assert intersect(P(2, 1), P(1, 2)) == P(1, 1, 1)
        assert intersect(P(3), P(1, 1, 1)) == P(1, 1, 1)
        assert intersect(P(3, 2), P(3, 2)) == P(3, 2)

    def test_unequal_sums(self):
        with pytest.raises(UnequalSums):
            intersect(P(2), P(1))

    def test_commutative_common_refinement(self):
        """The parts of the intersection cut at every prefix sum of either argument."""
        for n in range(1, 9):
            comps = [Partition(c) for c in compositions(n)]
            for a, b in product(comps, repeat=2):
                cut = intersect(a, b)
                assert cut == intersect(b, a)
                assert cut.size == n
                assert set(accumulate(cut.parts)) == set(accumulate(a.parts)) | set(accumulate(b.parts))


class TestDominance:
    def test_examples(self):
        assert dominance_leq(P(1, 1, 1), P(2, 1))
        assert not dominance_leq(P(2, 1), P(1, 1, 1))
        assert dominance_leq(P(2, 1), P(2, 1))

    def test_requires_ordered(self):
        with pytest.raises(NotOrdered):
            dominance_leq(P(1, 2), P(3))

    def test_requires_equal_sums(self):
        with pytest.raises(UnequalSums):
            dominance_leq(P(2), P(1))


# -----------------------------------------------------------------------------
# Regularity
# -----------------------------------------------------------------------------


class TestEllRegular:
    def test_examples(self):
        assert not is_ell_regular(P(1, 1), 2)
        assert is_ell_regular(P(2, 1), 2)
        assert not is_ell_regular(P(3, 3, 3), 3)

    def test_partition_counts(self):
        assert [sum(1 for _ in partitions_of(n)) for n in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]
        assert all(lam.is_ordered for lam in partitions_of(6))

    @pytest.mark.parametrize("ell", [2, 3, 5])
    def test_glaisher(self, ell):
        """ell-regular partitions are as many as partitions with no part divisible by ell."""
        for n in range(1, 11):
            class_regular = sum(1 for lam in partitions_of(n) if all(p % ell for p in lam.parts))
            assert count_ell_regular(n, ell) == class_regular

    def test_distinct_parts(self):
        assert count_ell_regular(6, 2) == 4


# -----------------------------------------------------------------------------
# Kostka numbers
# -----------------------------------------------------------------------------


class TestKostka:
    def test_examples(self):
        assert kostka(P(2, 1), (1, 1, 1)) == 2
        assert kostka(P(1, 1, 1), (2, 1)) == 0
        assert kostka(P(3, 2), (3, 2)) == 1

    def test_tableaux_are_semistandard(self):
        for t in ssyt(P(3, 2), (2, 2, 1)):
            for row in t:
                assert list(row) == sorted(row)
            for c in range(len(t[1])):
                assert t[0][c] < t[1][c]

    def test_unequal_sums(self):
        with pytest.raises(UnequalSums):
            kostka(P(2), (1,))

    def test_shape_must_be_ordered(self):
        with pytest.raises(NotOrdered):
            kostka(P(1, 2), (1, 2))

    def test_diagonal_is_one(self):
        for n in range(1, 7):
            for lam in partitions_of(n):
                assert kostka(lam, lam.parts) == 1

    def test_nonzero_iff_dominated(self):
        for n in range(1, 7):
            shapes = list(partitions_of(n))
            for lam in shapes:
                for mu in compositions(n):
                    nonzero = kostka(lam, mu) != 0
                    assert nonzero == dominance_leq(ordered(Partition(mu)), lam), (lam.parts, mu)

    def test_content_order_does_not_matter(self):
        assert kostka(P(3, 1), (1, 2, 1)) == kostka(P(3, 1), (2, 1, 1)) == 2
