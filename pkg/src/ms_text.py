# src/ms_text.py
"""
Text and JSON formats for lines and multisegments.

Line declaration:
    line <id> { o: <int|inf>, ell: <int>, deg: <int>, d: <int>, unramified: <bool>, chi: "<token>" }

Multisegment:
    <mult>*<id>:[<start>,<end>] + ...      (mult omitted when 1, "0" is empty)

A declared id `L` also resolves `L'` (its dual line) and `L~` (its
companion infinite line); suffixes compose as `L~'`.
"""
from __future__ import annotations

import re
from typing import Any, Dict, Iterator, List, Optional, Union

from .errors import InvalidLine, InvalidSegment, ParseError, UnknownLine
from .msline import DUAL_SUFFIX, LIFT_SUFFIX, INFINITY, CuspidalLine, Multisegment, Segment

ID_RE = r"[A-Za-z_][A-Za-z0-9_]*"

LINE_DECL_RE = re.compile(rf"\s*line\s+({ID_RE})\s*\{{(?P<body>[^{{}}]*)\}}\s*$")
LINE_FIELD_RE = re.compile(r"\s*([A-Za-z_]+)\s*:\s*(\"[^\"]*\"|[^,\s]+)\s*(?:,|$)")
TERM_RE = re.compile(
    rf"\s*(?:(?P<mult>\d+)\s*\*\s*)?(?P<id>{ID_RE}(?:{re.escape(LIFT_SUFFIX)})?(?:{re.escape(DUAL_SUFFIX)})?)"
    r"\s*:\s*\[\s*(?P<start>-?\d+)\s*,\s*(?P<end>-?\d+)\s*\]\s*"
)
PLUS_RE = re.compile(r"\s*\+\s*")
EMPTY_RE = re.compile(r"\s*0?\s*$")

TERM_GRAMMAR = "<mult>*<id>:[<start>,<end>] joined by ' + '"
LINE_GRAMMAR = 'line <id> { o: <int|inf>, ell: <int>, deg: <int>, d: <int>, unramified: <bool>, chi: "<token>" }'

DEFAULT_LINE = CuspidalLine(id="L", order=INFINITY, ell=2)


class LineRegistry:
    """Declared lines by id, with dual and lift suffixes resolved on lookup."""

    def __init__(self, lines: Optional[List[CuspidalLine]] = None) -> None:
        self._lines: Dict[str, CuspidalLine] = {}
        for line in lines or []:
            self.declare(line)

    def declare(self, line: CuspidalLine) -> None:
        if line.id in self._lines:
            raise InvalidLine(f"line {line.id} declared twice")
        self._lines[line.id] = line

    def __contains__(self, name: str) -> bool:
        try:
            self.resolve(name)
        except UnknownLine:
            return False
        return True

    def __iter__(self) -> Iterator[CuspidalLine]:
        return iter(self._lines[k] for k in sorted(self._lines))

    def __len__(self) -> int:
        return len(self._lines)

    def resolve(self, name: str) -> CuspidalLine:
        if name in self._lines:
            return self._lines[name]
        if name.endswith(DUAL_SUFFIX):
            return self.resolve(name[: -len(DUAL_SUFFIX)]).dual()
        if name.endswith(LIFT_SUFFIX):
            return self.resolve(name[: -len(LIFT_SUFFIX)]).lifted()
        raise UnknownLine(f"unknown line id {name!r}")


# --- Line declarations --------------------------------------------------------


def _parse_int(key: str, raw: str, text: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"field {key} expects an integer, got {raw!r}", text=text,
                         position=text.find(raw), expected="<int>") from None


def _parse_bool(key: str, raw: str, text: str) -> bool:
    value = raw.lower()
    if value in ("true", "yes", "1"):
        return True
    if value in ("false", "no", "0"):
        return False
    raise ParseError(f"field {key} expects a boolean, got {raw!r}", text=text,
                     position=text.find(raw), expected="true|false")


def parse_line(text: str) -> CuspidalLine:
    match = LINE_DECL_RE.match(text)
    if not match:
        raise ParseError("malformed line declaration", text=text, position=0, expected=LINE_GRAMMAR)

    body = match.group("body")
    offset = match.start("body")
    fields: Dict[str, str] = {}
    pos = 0
    while pos < len(body) and body[pos:].strip():
        f = LINE_FIELD_RE.match(body, pos)
        if not f:
            raise ParseError("expected '<key>: <value>'", text=text, position=offset + pos, expected=LINE_GRAMMAR)
        if f.group(1) in fields:
            raise ParseError(f"duplicate field {f.group(1)!r}", text=text,
                             position=offset + f.start(1), expected=LINE_GRAMMAR)
        fields[f.group(1)] = f.group(2)
        pos = f.end()

    unknown = set(fields) - {"o", "ell", "deg", "d", "unramified", "chi"}
    if unknown:
        key = sorted(unknown)[0]
        raise ParseError(f"unknown field {key!r}", text=text, position=text.find(key), expected=LINE_GRAMMAR)

    raw_order = fields.get("o", "inf")
    order = INFINITY if raw_order.lower() in ("inf", "infinity") else _parse_int("o", raw_order, text)
    chi = fields.get("chi")
    return CuspidalLine(
        id=match.group(1),
        order=order,
        ell=_parse_int("ell", fields["ell"], text) if "ell" in fields else None,
        cusp_degree=_parse_int("deg", fields.get("deg", "1"), text),
        algebra_degree=_parse_int("d", fields.get("d", "1"), text),
        unramified_char=_parse_bool("unramified", fields.get("unramified", "false"), text),
        unit_token=chi.strip('"') if chi else None,
    )


def format_line(line: CuspidalLine) -> str:
    order = "inf" if line.order is None else str(line.order)
    parts = [f"o: {order}"]
    if line.ell is not None:
        parts.append(f"ell: {line.ell}")
    parts += [
        f"deg: {line.cusp_degree}",
        f"d: {line.algebra_degree}",
        f"unramified: {'true' if line.unramified_char else 'false'}",
    ]
    if line.unit_token:
        parts.append(f'chi: "{line.unit_token}"')
    return f"line {line.id} {{ {', '.join(parts)} }}"


# --- Multisegments ------------------------------------------------------------


def parse_ms(text: str, lines: LineRegistry) -> Multisegment:
    if EMPTY_RE.match(text):
        return Multisegment()

    items = []
    pos = 0
    while True:
        term = TERM_RE.match(text, pos)
        if not term:
            raise ParseError("expected a segment term", text=text, position=pos, expected=TERM_GRAMMAR)
        start, end = int(term.group("start")), int(term.group("end"))
        if end < start:
            raise ParseError(f"segment [{start},{end}] has length <= 0", text=text,
                             position=term.start("start"), expected="end >= start")
        mult = int(term.group("mult") or 1)
        if mult < 1:
            raise ParseError("multiplicity must be >= 1", text=text, position=term.start("mult"))
        line = lines.resolve(term.group("id"))
        items.append((Segment.from_ends(line, start, end), mult))

        pos = term.end()
        if pos == len(text):
            break
        plus = PLUS_RE.match(text, pos)
        if not plus:
            raise ParseError("expected '+' or end of input", text=text, position=pos, expected=TERM_GRAMMAR)
        pos = plus.end()
    return Multisegment(tuple(items))


def format_segment(seg: Segment) -> str:
    return f"{seg.line.name}:[{seg.start},{seg.end}]"


def format_ms(m: Multisegment) -> str:
    if not m:
        return "0"
    return " + ".join(
        (f"{k}*" if k > 1 else "") + format_segment(seg) for seg, k in m.items
    )


# --- JSON ---------------------------------------------------------------------


def ms_to_json(m: Multisegment) -> Union[Dict[str, Any], List[Dict[str, Any]]]:
    """One object per line; a list when the multisegment spans several lines."""
    docs = [
        {
            "line": line.name,
            "segments": [
                {"start": seg.start, "len": seg.length, "mult": k}
                for seg, k in m.restrict(line).items
            ],
        }
        for line in m.lines()
    ]
    if not docs:
        return {"line": None, "segments": []}
    return docs[0] if len(docs) == 1 else docs


def ms_from_json(doc: Union[Dict[str, Any], List[Dict[str, Any]]], lines: LineRegistry) -> Multisegment:
    docs = doc if isinstance(doc, list) else [doc]
    items = []
    for d in docs:
        if d.get("line") is None:
            if d.get("segments"):
                raise UnknownLine("segments given without a line id")
            continue
        line = lines.resolve(d["line"])
        for entry in d.get("segments", []):
            try:
                items.append((Segment(line, int(entry["start"]), int(entry["len"])), int(entry.get("mult", 1))))
            except KeyError as exc:
                raise InvalidSegment(f"segment entry missing {exc.args[0]!r}") from None
    return Multisegment(tuple(items))
