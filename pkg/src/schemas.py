from __future__ import annotations

from dataclasses import dataclass, asdict, field
from typing import List, Dict, Any, Optional


def _drop_none(d: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in d.items() if v is not None}


# --- Multisegment-valued results ----------------------------------------------


@dataclass
class MsResult:
    """
    A multisegment answer in text form. `result` is None for the
    vanishing derivative, "0" for the empty multisegment.
    """
    result: Optional[str]
    steps: Optional[List[Dict[str, str]]] = None
    crosscheck: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        # result stays even when None: null is the vanishing derivative
        return {"result": self.result, **_drop_none(asdict(self))}


@dataclass
class PairsReport:
    point: str
    pairs: List[List[str]]
    f_part: str
    free: List[str]
    extendable: List[str]
    d_right: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SupportReport:
    support: Dict[str, Dict[str, int]]
    degree: int
    mass: int
    mu: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class LinkReport:
    aperiodic: bool
    unlinked: bool
    open_orbit: bool
    diagnostics: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class EnumerationReport:
    count: int
    multisegments: List[str]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# --- Orbits -------------------------------------------------------------------


@dataclass
class CountReport:
    formula: int
    brute: int
    agree: bool
    unlinked: Optional[List[str]] = None

    def to_dict(self) -> Dict[str, Any]:
        return _drop_none(asdict(self))


@dataclass
class PosetReport:
    nodes: List[str]
    edges: List[List[int]]
    minimal: List[str]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RankReport:
    line: str
    dims: Dict[str, int]
    ranks: List[Dict[str, int]]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# --- Factors ------------------------------------------------------------------


@dataclass
class FactorReport:
    gj: List[Dict[str, Any]]
    galois: List[Dict[str, Any]]
    agree: bool
    text: Optional[Dict[str, str]] = None
    eps_gamma: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return _drop_none(asdict(self))


@dataclass
class ParameterReport:
    parameter: List[Dict[str, Any]]
    text: str
    dimension: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
