# src/factors.py
"""
Formal local factors on both sides of the correspondence.

Automorphic side: Godement-Jacquet L-factors of <m>, read segment by
segment, with epsilon and gamma kept as structured expressions.
Galois side: C-parameters built from nilpotent and cyclic blocks, the
CV map, and the L-factor det(1 - T Phi(Frob) | Ker(U)^I)^{-1}.

q stays symbolic: an exponent s is stored as the integer 2s.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Literal, Mapping, Optional, Tuple

from .errors import InfiniteLine, MixedLines, NotAperiodic, ParseError
from .ms_text import EMPTY_RE, ID_RE, PLUS_RE, LineRegistry, format_segment
from .msline import CuspidalLine, Multisegment, Segment, dual_ms, is_aperiodic, lifted_end

SUBSTITUTION_TAG = "T -> q^-1 T^-1"
CENTRAL_CHARACTER_NOTE = "eps(T, pi, psi) * eps(q^-1 T^-1, dual pi, psi) = omega_pi(-1)"


# --- Formal L-factors ---------------------------------------------------------


@dataclass(frozen=True)
class UnitMonomial:
    """A product of symbolic units, token -> exponent; empty means 1."""

    exponents: Tuple[Tuple[str, int], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        merged: Counter = Counter()
        for token, exp in self.exponents:
            merged[token] += exp
        object.__setattr__(
            self, "exponents", tuple(sorted((t, e) for t, e in merged.items() if e != 0))
        )

    @classmethod
    def from_dict(cls, exponents: Mapping[str, int]) -> "UnitMonomial":
        return cls(tuple(exponents.items()))

    def __mul__(self, other: "UnitMonomial") -> "UnitMonomial":
        return UnitMonomial(self.exponents + other.exponents)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.exponents)


@dataclass(frozen=True)
class LFactorTerm:
    """One factor (1 - unit * q^(q2exp/2) * T)^-1."""

    unit: UnitMonomial
    q2exp: int

    @property
    def q_exp(self) -> Fraction:
        return Fraction(self.q2exp, 2)

    def sort_key(self) -> Tuple[int, Tuple[Tuple[str, int], ...]]:
        return (self.q2exp, self.unit.exponents)

    def to_dict(self) -> Dict[str, Any]:
        return {"unit": self.unit.as_dict(), "q2exp": self.q2exp}


@dataclass(frozen=True)
class FormalLFactor:
    terms: Tuple[LFactorTerm, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=LFactorTerm.sort_key)))

    def __mul__(self, other: "FormalLFactor") -> "FormalLFactor":
        return FormalLFactor(self.terms + other.terms)

    @property
    def is_one(self) -> bool:
        return not self.terms

    def to_list(self) -> List[Dict[str, Any]]:
        return [t.to_dict() for t in self.terms]


ONE = FormalLFactor()


def _product(factors: Iterable[FormalLFactor]) -> FormalLFactor:
    out = ONE
    for f in factors:
        out = out * f
    return out


def _unit_of(line: CuspidalLine) -> UnitMonomial:
    return UnitMonomial.from_dict({line.unit_token: -1 if line.is_dual else 1})


def _has_factor(line: CuspidalLine) -> bool:
    # q^d != 1 exactly when the order exceeds 1
    return line.unramified_char and line.square_irreducible


def _integer_end(line: CuspidalLine, end: int) -> int:
    """The end used in the exponent: itself on infinite lines, the right-compatible lift otherwise."""
    return end if line.is_infinite else lifted_end(line, end)


def _term(line: CuspidalLine, end: int) -> LFactorTerm:
    d = line.algebra_degree
    b = _integer_end(line, end)
    # exponent -d*b + (1-d)/2, doubled
    return LFactorTerm(unit=_unit_of(line), q2exp=-2 * d * b + (1 - d))


def gj_L_segment(seg: Segment) -> FormalLFactor:
    if not _has_factor(seg.line):
        return ONE
    return FormalLFactor((_term(seg.line, seg.end),))


def gj_L(m: Multisegment) -> FormalLFactor:
    return _product(gj_L_segment(seg) for seg in m)


# --- Epsilon and gamma --------------------------------------------------------


@dataclass(frozen=True)
class EpsFactor:
    """Opaque per-segment epsilon tokens times an overall unit."""

    tokens: Tuple[str, ...] = field(default_factory=tuple)
    unit: UnitMonomial = field(default_factory=UnitMonomial)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(sorted(self.tokens)))

    def __mul__(self, other: "EpsFactor") -> "EpsFactor":
        return EpsFactor(self.tokens + other.tokens, self.unit * other.unit)

    def to_dict(self) -> Dict[str, Any]:
        return {"tokens": list(self.tokens), "unit": self.unit.as_dict()}


@dataclass(frozen=True)
class GammaFactor:
    """eps * L_dual(q^-1 T^-1) / L(T), never flattened."""

    eps: EpsFactor
    l_dual: FormalLFactor
    l: FormalLFactor
    substitution: str = SUBSTITUTION_TAG
    central_character: str = CENTRAL_CHARACTER_NOTE

    def __mul__(self, other: "GammaFactor") -> "GammaFactor":
        return GammaFactor(self.eps * other.eps, self.l_dual * other.l_dual, self.l * other.l)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps.to_dict(),
            "numerator": {"substitution": self.substitution, "factors": self.l_dual.to_list()},
            "denominator": {"factors": self.l.to_list()},
            "central_character": self.central_character,
        }


@dataclass(frozen=True)
class EpsGamma:
    eps: EpsFactor
    gamma: GammaFactor

    def to_dict(self) -> Dict[str, Any]:
        return {"eps": self.eps.to_dict(), "gamma": self.gamma.to_dict()}


def gj_eps(m: Multisegment) -> EpsFactor:
    return EpsFactor(tuple(f"eps({format_segment(seg)})" for seg in m))


def gj_gamma(m: Multisegment) -> GammaFactor:
    return GammaFactor(eps=gj_eps(m), l_dual=gj_L(dual_ms(m)), l=gj_L(m))


def gj_eps_gamma(m: Multisegment) -> EpsGamma:
    return EpsGamma(eps=gj_eps(m), gamma=gj_gamma(m))


# --- Galois side --------------------------------------------------------------


SummandKind = Literal["nilp", "cyc"]


@dataclass(frozen=True)
class Summand:
    """
    nilp: [0, size-1] (x) nu^twist Phi     (twist canonical on the line)
    cyc:  [0, size-1] (x) C(Phi)           (finite lines only; U is bijective)
    """

    kind: SummandKind
    size: int
    line: CuspidalLine
    twist: Optional[int] = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"summand size must be >= 1, got {self.size}")
        if self.kind == "nilp":
            if self.twist is None:
                raise ValueError("nilpotent summands need a twist")
            object.__setattr__(self, "twist", self.line.canon(self.twist))
        elif self.kind == "cyc":
            if self.line.is_infinite:
                raise InfiniteLine(f"cyclic summands need a finite-order line, got {self.line.name}")
            object.__setattr__(self, "twist", None)
        else:
            raise ValueError(f"unknown summand kind {self.kind!r}")

    def sort_key(self) -> Tuple[str, str, int, int]:
        return (self.line.name, self.kind, self.size, -1 if self.twist is None else self.twist)

    @property
    def dimension(self) -> int:
        """Rank of the block in units of dim Phi."""
        return self.size * (self.line.order if self.kind == "cyc" else 1)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind, "size": self.size, "line": self.line.name}
        if self.kind == "nilp":
            out["twist"] = self.twist
        return out


@dataclass(frozen=True)
class DeligneParameter:
    summands: Tuple[Summand, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=Summand.sort_key)))

    def __add__(self, other: "DeligneParameter") -> "DeligneParameter":
        return DeligneParameter(self.summands + other.summands)

    @property
    def dimension(self) -> int:
        return sum(s.dimension for s in self.summands)

    def to_list(self) -> List[Dict[str, Any]]:
        return [s.to_dict() for s in self.summands]


def c_parameter(m: Multisegment) -> DeligneParameter:
    """[a,b] on a line of order > 1 gives a nilpotent block; order 1 gives a cyclic one."""
    if not is_aperiodic(m):
        raise NotAperiodic("C-parameters are attached to aperiodic multisegments")
    summands = []
    for seg in m:
        if seg.line.square_irreducible:
            summands.append(Summand("nilp", seg.length, seg.line, seg.start))
        else:
            summands.append(Summand("cyc", seg.length, seg.line))
    return DeligneParameter(tuple(summands))


def cv_map(p: DeligneParameter) -> DeligneParameter:
    """
    For every size i, move a_i = min_k c_{i,k} full residue cycles of
    nilpotent blocks into a_i copies of the cyclic block of size i.
    """
    if not p.summands:
        return p
    lines = {s.line for s in p.summands}
    if len(lines) > 1:
        raise MixedLines("the CV map acts on a parameter over a single line")
    line = next(iter(lines))
    if line.is_infinite:
        raise InfiniteLine(f"the CV map needs a finite-order line, got {line.name}")

    nilp: Counter = Counter((s.size, s.twist) for s in p.summands if s.kind == "nilp")
    out = [s for s in p.summands if s.kind == "cyc"]
    for size in sorted({i for i, _ in nilp}):
        cycles = min(nilp[(size, k)] for k in line.residues())
        for k in line.residues():
            out += [Summand("nilp", size, line, k)] * (nilp[(size, k)] - cycles)
        out += [Summand("cyc", size, line)] * cycles
    return DeligneParameter(tuple(out))


def _kernel_eigenvalue(s: Summand) -> LFactorTerm:
    """
    Frobenius on Ker(U) of a nilpotent block: the top twist nu^b of the
    block acting on Phi, where Phi itself carries chi(varpi) * q^((1-d)/2).
    """
    line = s.line
    top = s.twist + s.size - 1
    if line.order is not None:
        # q^d has order o, so the twist is read in the window {-1, ..., o-2}
        top = (top + 1) % line.order - 1
    d = line.algebra_degree
    q_exp = Fraction(1 - d, 2) - d * top
    token_power = -1 if line.is_dual else 1
    return LFactorTerm(unit=UnitMonomial(((line.unit_token, token_power),)), q2exp=int(2 * q_exp))


def galois_L(p: DeligneParameter) -> FormalLFactor:
    """Only nilpotent blocks on unramified lines of order > 1 have an inertia-fixed kernel of U."""
    terms = []
    for s in p.summands:
        if s.kind == "cyc" or not s.line.unramified_char or s.line.order == 1:
            continue
        terms.append(_kernel_eigenvalue(s))
    return FormalLFactor(tuple(terms))


@dataclass(frozen=True)
class LFactorComparison:
    gj: FormalLFactor
    galois: FormalLFactor

    @property
    def agree(self) -> bool:
        return self.gj == self.galois

    def to_dict(self) -> Dict[str, Any]:
        return {"gj": self.gj.to_list(), "galois": self.galois.to_list(), "agree": self.agree}


def compare_l_factors(m: Multisegment) -> LFactorComparison:
    return LFactorComparison(gj=gj_L(m), galois=galois_L(c_parameter(m)))


# --- Parameter text form ------------------------------------------------------

SUMMAND_RE = re.compile(
    rf"\s*(?:(?P<mult>\d+)\s*\*\s*)?(?P<id>{ID_RE}(?:~)?(?:')?)\s*:\s*"
    r"(?:nilp\(\s*(?P<size>\d+)\s*,\s*(?P<twist>-?\d+)\s*\)|cyc\(\s*(?P<csize>\d+)\s*\))\s*"
)
PARAMETER_GRAMMAR = "<mult>*<id>:nilp(<size>,<twist>) | <mult>*<id>:cyc(<size>) joined by ' + '"


def format_summand(s: Summand) -> str:
    if s.kind == "cyc":
        return f"{s.line.name}:cyc({s.size})"
    return f"{s.line.name}:nilp({s.size},{s.twist})"


def format_parameter(p: DeligneParameter) -> str:
    if not p.summands:
        return "0"
    counts = Counter(p.summands)
    ordered = sorted(counts, key=Summand.sort_key)
    return " + ".join((f"{counts[s]}*" if counts[s] > 1 else "") + format_summand(s) for s in ordered)


def parse_parameter(text: str, lines: LineRegistry) -> DeligneParameter:
    if EMPTY_RE.match(text):
        return DeligneParameter()
    summands: List[Summand] = []
    pos = 0
    while True:
        term = SUMMAND_RE.match(text, pos)
        if not term:
            raise ParseError("expected a summand", text=text, position=pos, expected=PARAMETER_GRAMMAR)
        line = lines.resolve(term.group("id"))
        mult = int(term.group("mult") or 1)
        if term.group("csize") is not None:
            summand = Summand("cyc", int(term.group("csize")), line)
        else:
            summand = Summand("nilp", int(term.group("size")), line, int(term.group("twist")))
        summands += [summand] * mult
        pos = term.end()
        if pos == len(text):
            break
        plus = PLUS_RE.match(text, pos)
        if not plus:
            raise ParseError("expected '+' or end of input", text=text, position=pos, expected=PARAMETER_GRAMMAR)
        pos = plus.end()
    return DeligneParameter(tuple(summands))
