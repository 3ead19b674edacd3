# src/errors.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional


class MultisegmentError(RuntimeError):
    """
    Base class for every domain error raised by the engine.

    `code` is a stable machine-readable identifier; the CLI serializes
    errors with `to_dict()` onto stderr and exits with status 1.
    """

    code = "domain_error"

    def __init__(self, message: str = "") -> None:
        super().__init__(message)
        self.message = message

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message}


class DifferentLines(MultisegmentError):
    code = "different_lines"


class MixedLines(MultisegmentError):
    code = "mixed_lines"


class UnsupportedLine(MultisegmentError):
    """Raised when an operation is undefined for the line's order."""

    code = "unsupported_line"


class InfiniteLine(MultisegmentError):
    code = "infinite_line"


class InvalidLine(MultisegmentError):
    code = "invalid_line"


class UnknownLine(MultisegmentError):
    code = "unknown_line"


class InvalidSegment(MultisegmentError):
    code = "invalid_segment"


class EmptyMultisegment(MultisegmentError):
    code = "empty_multisegment"


class NotAperiodic(MultisegmentError):
    code = "not_aperiodic"


class NotContained(MultisegmentError):
    code = "not_contained"


class TooLarge(MultisegmentError):
    """Raised when an exhaustive computation would exceed the enumeration bound."""

    code = "too_large"


class UnequalSums(MultisegmentError):
    code = "unequal_sums"


class NotOrdered(MultisegmentError):
    code = "not_ordered"


class CrosscheckFailed(MultisegmentError):
    code = "crosscheck_failed"


class NoDerivativePoint(MultisegmentError):
    """
    No point has a nonzero right derivative.

    `vector` is the derivative vector that was observed (all zeros),
    keyed by line id and then residue.
    """

    code = "no_derivative_point"

    def __init__(self, message: str, vector: Optional[Dict[str, Dict[int, int]]] = None) -> None:
        super().__init__(message)
        self.vector = vector or {}

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["derivative_vector"] = {
            line_id: {str(r): d for r, d in sorted(values.items())}
            for line_id, values in sorted(self.vector.items())
        }
        return payload


@dataclass
class ParseError(MultisegmentError):
    message: str
    text: str = ""
    position: int = 0
    expected: Optional[str] = field(default=None)

    code = "syntax_error"

    def __post_init__(self) -> None:
        RuntimeError.__init__(self, f"{self.message} at position {self.position}")

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "error": self.code,
            "message": self.message,
            "position": self.position,
            "text": self.text,
        }
        if self.expected:
            payload["expected"] = self.expected
        return payload
