"""
Tests for the text and JSON formats.

These tests verify that:
1. Line declarations parse into CuspidalLine values (and print back)
2. Multisegment expressions parse, canonicalize and format byte-for-byte
3. Malformed input raises ParseError with a position
"""

from __future__ import annotations

import pytest

from src.errors import InvalidLine, ParseError, UnknownLine
from src.ms_text import (
    DEFAULT_LINE,
    LineRegistry,
    format_line,
    format_ms,
    ms_from_json,
    ms_to_json,
    parse_line,
    parse_ms,
)
from src.msline import EMPTY_MS, INFINITY, Segment
from tests.conftest import O3, ms


@pytest.fixture
def registry() -> LineRegistry:
    return LineRegistry([O3])


# -----------------------------------------------------------------------------
# Line declarations
# -----------------------------------------------------------------------------


class TestParseLine:
    def test_full_declaration(self):
        line = parse_line('line L { o: 3, ell: 5, deg: 1, d: 2, unramified: true, chi: "u" }')
        assert line.id == "L"
        assert line.order == 3
        assert line.ell == 5
        assert line.cusp_degree == 1
        assert line.algebra_degree == 2
        assert line.unramified_char
        assert line.unit_token == "u"

    def test_compact_declaration(self):
        line = parse_line("line L {o:3, ell:5, deg:1, d:1, unramified:false}")
        assert line.order == 3
        assert not line.unramified_char

    def test_infinite_order(self):
        assert parse_line("line M { o: inf }").order is INFINITY

    def test_unknown_field(self):
        with pytest.raises(ParseError) as exc:
            parse_line("line L { o: 3, colour: 2 }")
        assert exc.value.to_dict()["error"] == "syntax_error"

    def test_malformed(self):
        with pytest.raises(ParseError):
            parse_line("L { o: 3 }")

    def test_domain_validation_still_applies(self):
        """ell is mandatory on order-1 lines."""
        with pytest.raises(InvalidLine):
            parse_line("line U { o: 1 }")

    def test_unramified_needs_degree_one(self):
        with pytest.raises(InvalidLine):
            parse_line('line L { o: 3, ell: 5, deg: 2, unramified: true, chi: "u" }')

    def test_duplicate_field(self):
        text = "line L { o: 3, o: 4 }"
        with pytest.raises(ParseError) as exc:
            parse_line(text)
        assert exc.value.position == text.rindex("o:")
        assert "duplicate" in exc.value.message

    def test_format_reparses(self):
        line = parse_line('line L { o: 3, ell: 5, unramified: true, chi: "u" }')
        assert parse_line(format_line(line)) == line


class TestRegistry:
    def test_suffixes_resolve(self, registry):
        assert registry.resolve("L'") == O3.dual()
        assert registry.resolve("L~") == O3.lifted()
        assert registry.resolve("L~'") == O3.lifted().dual()

    def test_unknown(self, registry):
        with pytest.raises(UnknownLine):
            registry.resolve("M")
        assert "M" not in registry
        assert "L'" in registry

    def test_duplicate_declaration(self, registry):
        with pytest.raises(InvalidLine):
            registry.declare(O3)

    def test_default_line(self):
        assert DEFAULT_LINE.id == "L"
        assert DEFAULT_LINE.is_infinite


# -----------------------------------------------------------------------------
# Multisegment expressions
# -----------------------------------------------------------------------------


class TestParseMs:
    def test_multiplicities(self, registry):
        m = parse_ms("L:[0,2] + 2*L:[1,1]", registry)
        assert m == ms(O3, (0, 2), (1, 1, 2))

    def test_canonical_format(self, registry):
        """Terms print in (line, start, length) order."""
        m = parse_ms("2*L:[1,1] + L:[0,2]", registry)
        assert format_ms(m) == "L:[0,2] + 2*L:[1,1]"

    def test_starts_canonicalize(self, registry):
        assert format_ms(parse_ms("L:[4,5]", registry)) == "L:[1,2]"

    def test_negative_length(self, registry):
        with pytest.raises(ParseError) as exc:
            parse_ms("L:[3,1]", registry)
        assert exc.value.position == 3

    def test_trailing_garbage(self, registry):
        with pytest.raises(ParseError) as exc:
            parse_ms("L:[0,1] L:[2,2]", registry)
        assert exc.value.expected

    def test_empty(self, registry):
        assert parse_ms("0", registry) == EMPTY_MS
        assert parse_ms("", registry) == EMPTY_MS
        assert format_ms(EMPTY_MS) == "0"

    def test_dual_line_terms(self, registry):
        m = parse_ms("L':[0,1]", registry)
        assert m.items[0][0] == Segment(O3.dual(), 0, 2)
        assert format_ms(m) == "L':[0,1]"

    def test_printed_values_reparse(self, registry):
        for text in ("L:[0,2] + 2*L:[1,1]", "L:[2,4] + L':[1,1]", "3*L:[0,0]"):
            m = parse_ms(text, registry)
            assert parse_ms(format_ms(m), registry) == m


# -----------------------------------------------------------------------------
# JSON
# -----------------------------------------------------------------------------


class TestJson:
    def test_export_shape(self):
        doc = ms_to_json(ms(O3, (0, 2), (1, 1, 2)))
        assert doc == {
            "line": "L",
            "segments": [{"start": 0, "len": 3, "mult": 1}, {"start": 1, "len": 1, "mult": 2}],
        }

    def test_import(self, registry):
        doc = {"line": "L", "segments": [{"start": 4, "len": 1}]}
        assert ms_from_json(doc, registry) == ms(O3, (1, 1))

    def test_empty(self, registry):
        assert ms_to_json(EMPTY_MS) == {"line": None, "segments": []}
        assert ms_from_json(ms_to_json(EMPTY_MS), registry) == EMPTY_MS
