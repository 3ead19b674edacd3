# src/cli.py
"""
Command-line front end.

    python -m src.cli derive --line 'line L {o:3, ell:5}' --ms 'L:[1,3]' --point L:0
    python -m src.cli count --line 'line L {o:3, ell:5}' --support 1,1,1
    python -m src.cli dual --ms 'L:[0,1]'

Results go to stdout (JSON by default); diagnostics and structured errors
go to stderr. Exit status: 0 ok, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from rich.console import Console

from .classical_dual import classical_dual
from .config import DEFAULT_ENUM_BOUND, OUTPUT_FORMATS, ConfigError, get_settings
from .derive import (
    LinePoint,
    derive_left,
    derive_left_k,
    derive_left_max,
    derive_right,
    derive_right_k,
    derive_right_max,
    pairs_left,
    pairs_right,
    soc_left_k,
    soc_right_k,
)
from .dual import az_dual, az_dual_trace
from .errors import CrosscheckFailed, MultisegmentError, ParseError, UnknownLine
from .factors import (
    c_parameter,
    compare_l_factors,
    cv_map,
    format_parameter,
    gj_eps_gamma,
    parse_parameter,
)
from .ms_text import DEFAULT_LINE, LINE_GRAMMAR, TERM_GRAMMAR, LineRegistry, format_ms, parse_line, parse_ms
from .msline import (
    ZERO,
    CuspidalLine,
    CuspSupport,
    MaybeMultisegment,
    Multisegment,
    cusp_support,
    enumerate_by_support,
    is_aperiodic,
    lift_left_compatible,
    lift_right_compatible,
    ms_diagnostics,
    mu_partition,
    unlinked,
)
from .orbits import (
    count_unlinked_brute,
    count_unlinked_formula,
    hasse_poset,
    is_open_orbit,
    rank_dominates,
    rank_table,
    unlinked_members,
)
from .partitions import Partition, count_ell_regular, is_ell_regular, kostka
from .report_builder import (
    build_pairs_report,
    build_poset_report,
    build_rank_report,
    format_lfactor,
    format_point,
    render_dot,
    render_json,
    render_text,
)
from .schemas import (
    CountReport,
    EnumerationReport,
    FactorReport,
    LinkReport,
    MsResult,
    ParameterReport,
    SupportReport,
)

console = Console(stderr=True)

GRAMMAR_EPILOG = (
    f"line declaration: {LINE_GRAMMAR}\n"
    f"multisegment:     {TERM_GRAMMAR} (\"0\" is empty)\n"
    "point:            <id>:<residue>\n"
    "support:          d_0,d_1,... (one entry per residue) or r:k,r:k,..."
)

Payload = Union[Dict[str, Any], str]


@dataclass
class Session:
    lines: LineRegistry
    output_format: str = "json"
    bound: int = DEFAULT_ENUM_BOUND
    debug_crosscheck: bool = False
    verbose: bool = False
    pretty: bool = False

    def ms(self, text: str) -> Multisegment:
        m = parse_ms(text, self.lines)
        if self.verbose:
            for warning in ms_diagnostics(m):
                console.print(f"[yellow]Warning:[/yellow] {warning}", highlight=False)
        return m

    def line(self, name: Optional[str]) -> CuspidalLine:
        if name:
            return self.lines.resolve(name)
        declared = list(self.lines)
        if len(declared) != 1:
            raise UnknownLine("several lines are declared; choose one with --on")
        return declared[0]

    def point(self, text: str) -> LinePoint:
        name, sep, residue = text.rpartition(":")
        if not sep:
            raise ParseError("expected <id>:<residue>", text=text, position=0, expected="<id>:<residue>")
        try:
            value = int(residue)
        except ValueError:
            raise ParseError("residue must be an integer", text=text, position=len(name) + 1) from None
        return LinePoint(self.lines.resolve(name), value)

    def support(self, text: str, line: CuspidalLine) -> CuspSupport:
        text = text.strip()
        if not text:
            return CuspSupport()
        entries = [e.strip() for e in text.split(",")]
        try:
            if any(":" in e for e in entries):
                values: Dict[int, int] = {}
                for e in entries:
                    r, _, k = e.partition(":")
                    values[int(r)] = values.get(int(r), 0) + int(k)
                return CuspSupport.single(line, values)
            return CuspSupport.from_vector(line, [int(e) for e in entries])
        except ValueError:
            raise ParseError("malformed support", text=text, position=0,
                             expected="d_0,d_1,... or r:k,r:k,...") from None


def _ms_text(result: MaybeMultisegment) -> Optional[str]:
    return None if result is ZERO else format_ms(result)


def _crosscheck_failed(what: str) -> None:
    console.print(f"[red]Error:[/red] crosscheck failed: {what}")
    raise CrosscheckFailed(what)


# --- Verbs --------------------------------------------------------------------


def cmd_derive(session: Session, args: argparse.Namespace) -> Payload:
    m, p = session.ms(args.ms), session.point(args.point)
    left = args.side == "left"
    if args.max:
        result: MaybeMultisegment = derive_left_max(m, p) if left else derive_right_max(m, p)
    elif args.k is not None:
        result = derive_left_k(m, p, args.k) if left else derive_right_k(m, p, args.k)
    else:
        result = derive_left(m, p) if left else derive_right(m, p)

    payload = MsResult(result=_ms_text(result)).to_dict()
    if args.pairs:
        decomposition = pairs_left(m, p) if left else pairs_right(m, p)
        payload["pairs"] = build_pairs_report(decomposition).to_dict()
    if session.debug_crosscheck and not args.max and result is not ZERO and is_aperiodic(m):
        k = 1 if args.k is None else args.k
        back = soc_left_k(result, p, k) if left else soc_right_k(result, p, k)
        if back != m:
            _crosscheck_failed("soc does not invert the derivative")
        console.print("[green]\\[derive][/green] soc(D(m)) = m")
    return payload


def cmd_soc(session: Session, args: argparse.Namespace) -> Payload:
    m, p = session.ms(args.ms), session.point(args.point)
    left = args.side == "left"
    result = soc_left_k(m, p, args.k) if left else soc_right_k(m, p, args.k)
    if session.debug_crosscheck and is_aperiodic(m):
        back = derive_left_k(result, p, args.k) if left else derive_right_k(result, p, args.k)
        if back != m:
            _crosscheck_failed("the derivative does not invert soc")
        console.print("[green]\\[soc][/green] D(soc(m)) = m")
    return MsResult(result=format_ms(result)).to_dict()


def cmd_pairs(session: Session, args: argparse.Namespace) -> Payload:
    m, p = session.ms(args.ms), session.point(args.point)
    decomposition = pairs_left(m, p) if args.side == "left" else pairs_right(m, p)
    return build_pairs_report(decomposition).to_dict()


def cmd_dual(session: Session, args: argparse.Namespace) -> Payload:
    m = session.ms(args.ms)
    if not is_aperiodic(m):
        for warning in ms_diagnostics(m):
            console.print(f"[yellow]Warning:[/yellow] {warning}")
    result = az_dual(m)
    report = MsResult(result=format_ms(result))
    if args.trace:
        report.steps = [
            {"point": format_point(p), "derivative": format_ms(n)} for p, n in az_dual_trace(m)
        ]
    if session.debug_crosscheck:
        checks: Dict[str, Any] = {"involution": az_dual(result) == m}
        if m and all(line.is_infinite for line in m.lines()):
            checks["classical"] = classical_dual(m) == result
        console.print(f"[green]\\[dual][/green] crosscheck {checks}")
        if not all(checks.values()):
            _crosscheck_failed(f"dual oracles disagree: {checks}")
        report.crosscheck = checks
    return report.to_dict()


def cmd_poset(session: Session, args: argparse.Namespace) -> Payload:
    line = session.line(args.on)
    diagram = hasse_poset(session.support(args.support, line), bound=session.bound)
    if session.debug_crosscheck:
        tables = {n: rank_table(n, line) for n in diagram.nodes}
        for i, j in diagram.edges:
            lower, upper = diagram.nodes[i], diagram.nodes[j]
            if not rank_dominates(tables[lower], tables[upper]):
                _crosscheck_failed(f"rank tables do not dominate along {format_ms(lower)} -> {format_ms(upper)}")
        console.print(f"[green]\\[poset][/green] rank oracle agrees on {len(diagram.edges)} covering relation(s)")
    if session.output_format == "dot":
        return render_dot(diagram)
    return build_poset_report(diagram).to_dict()


def cmd_count(session: Session, args: argparse.Namespace) -> Payload:
    line = session.line(args.on)
    s = session.support(args.support, line)
    formula = count_unlinked_formula(s, line)
    brute = count_unlinked_brute(s, line, bound=session.bound)
    if session.debug_crosscheck and formula != brute:
        _crosscheck_failed(f"formula {formula} != brute force {brute}")
    members = [format_ms(m) for m in unlinked_members(s, bound=session.bound)] if args.list else None
    return CountReport(formula=formula, brute=brute, agree=formula == brute, unlinked=members).to_dict()


def cmd_ranks(session: Session, args: argparse.Namespace) -> Payload:
    m = session.ms(args.ms)
    line = session.line(args.on) if not m else None
    return build_rank_report(rank_table(m, line)).to_dict()


def cmd_lfactor(session: Session, args: argparse.Namespace) -> Payload:
    m = session.ms(args.ms)
    comparison = compare_l_factors(m)
    report = FactorReport(
        gj=comparison.gj.to_list(),
        galois=comparison.galois.to_list(),
        agree=comparison.agree,
        text={"gj": format_lfactor(comparison.gj), "galois": format_lfactor(comparison.galois)},
    )
    if args.gamma:
        report.eps_gamma = gj_eps_gamma(m).to_dict()
    if session.debug_crosscheck and not comparison.agree:
        _crosscheck_failed("the two sides give different L-factors")
    return report.to_dict()


def cmd_cparam(session: Session, args: argparse.Namespace) -> Payload:
    p = c_parameter(session.ms(args.ms))
    return ParameterReport(parameter=p.to_list(), text=format_parameter(p), dimension=p.dimension).to_dict()


def cmd_cv(session: Session, args: argparse.Namespace) -> Payload:
    if args.param is not None:
        p = parse_parameter(args.param, session.lines)
    elif args.ms is not None:
        p = c_parameter(session.ms(args.ms))
    else:
        raise ParseError("cv needs --param or --ms", expected="--param <parameter> | --ms <multisegment>")
    result = cv_map(p)
    if session.debug_crosscheck and (cv_map(result) != result or result.dimension != p.dimension):
        _crosscheck_failed("CV map is not idempotent or changed the dimension")
    return ParameterReport(parameter=result.to_list(), text=format_parameter(result), dimension=result.dimension).to_dict()


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError("expected comma-separated integers", text=text, position=0) from None


def cmd_kostka(session: Session, args: argparse.Namespace) -> Payload:
    shape = Partition(tuple(_int_list(args.shape)))
    return {"kostka": kostka(shape, _int_list(args.content))}


def cmd_ellregular(session: Session, args: argparse.Namespace) -> Payload:
    if args.count is not None:
        return {"n": args.count, "ell": args.ell, "count": count_ell_regular(args.count, args.ell)}
    if args.partition is None:
        raise ParseError("ellregular needs --partition or --count", expected="--partition a,b,... | --count n")
    return {"ell_regular": is_ell_regular(Partition(tuple(_int_list(args.partition))), args.ell)}


def cmd_enumerate(session: Session, args: argparse.Namespace) -> Payload:
    line = session.line(args.on)
    found = enumerate_by_support(session.support(args.support, line), aperiodic_only=args.aperiodic, bound=session.bound)
    return EnumerationReport(count=len(found), multisegments=[format_ms(m) for m in found]).to_dict()


def cmd_lift(session: Session, args: argparse.Namespace) -> Payload:
    m = session.ms(args.ms)
    lifted = lift_left_compatible(m, args.anchor) if args.side == "left" else lift_right_compatible(m, args.anchor)
    return MsResult(result=format_ms(lifted)).to_dict()


def cmd_support(session: Session, args: argparse.Namespace) -> Payload:
    m = session.ms(args.ms)
    s = cusp_support(m)
    return SupportReport(
        support={line.name: {str(r): k for r, k in s.for_line(line).items()} for line in s.lines()},
        degree=m.degree,
        mass=m.mass,
        mu=list(mu_partition(m)) if m else [],
    ).to_dict()


def cmd_aperiodic(session: Session, args: argparse.Namespace) -> Payload:
    m = session.ms(args.ms)
    return LinkReport(
        aperiodic=is_aperiodic(m),
        unlinked=unlinked(m),
        open_orbit=is_open_orbit(m, crosscheck=session.debug_crosscheck),
        diagnostics=ms_diagnostics(m),
    ).to_dict()


HANDLERS: Dict[str, Callable[[Session, argparse.Namespace], Payload]] = {
    "derive": cmd_derive,
    "soc": cmd_soc,
    "pairs": cmd_pairs,
    "dual": cmd_dual,
    "poset": cmd_poset,
    "count": cmd_count,
    "ranks": cmd_ranks,
    "lfactor": cmd_lfactor,
    "cparam": cmd_cparam,
    "cv": cmd_cv,
    "kostka": cmd_kostka,
    "ellregular": cmd_ellregular,
    "enumerate": cmd_enumerate,
    "lift": cmd_lift,
    "support": cmd_support,
    "aperiodic": cmd_aperiodic,
}


# --- Argument parsing ---------------------------------------------------------


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--line", action="append", default=[], metavar="DECL",
                        help="Line declaration (repeatable). Default: line L { o: inf, ell: 2 }.")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None,
                        help="Output format (default json; dot for poset).")
    common.add_argument("--bound", type=int, default=None,
                        help=f"Largest support mass for enumerations (default {DEFAULT_ENUM_BOUND}).")
    common.add_argument("--debug-crosscheck", action="store_true",
                        help="Run the paired oracle and fail on mismatch.")
    common.add_argument("--verbose", action="store_true", help="Print diagnostics for parsed input.")
    common.add_argument("--pretty", action="store_true", help="Indent JSON output.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="mseg",
        description="Multisegment calculus: derivatives, duals, orbit posets and local factors.",
        epilog=GRAMMAR_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, epilog=GRAMMAR_EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = verb("derive", "Right/left derivative at a point.")
    p.add_argument("--ms", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("--k", type=int, default=None, help="Shorten the k shortest free segments.")
    p.add_argument("--max", action="store_true", help="Shorten every free segment.")
    p.add_argument("--pairs", action="store_true", help="Include the pairs decomposition.")

    p = verb("soc", "Right/left socle operator at a point.")
    p.add_argument("--ms", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("--k", type=int, default=1)

    p = verb("pairs", "Maximal-pair decomposition at a point.")
    p.add_argument("--ms", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--side", choices=("right", "left"), default="right")

    p = verb("dual", "Recursive dual of an aperiodic multisegment.")
    p.add_argument("--ms", required=True)
    p.add_argument("--trace", action="store_true", help="Include the derivative steps taken.")

    for name, help_text in (
        ("poset", "Hasse diagram of the closure order on a support."),
        ("count", "Open orbits on a support: formula vs brute force."),
        ("enumerate", "All multisegments with a support."),
    ):
        p = verb(name, help_text)
        p.add_argument("--support", required=True)
        p.add_argument("--on", default=None, help="Line id of the support.")
        if name == "count":
            p.add_argument("--list", action="store_true", help="List the unlinked multisegments.")
        if name == "enumerate":
            p.add_argument("--aperiodic", action="store_true", help="Keep aperiodic ones only.")

    p = verb("ranks", "Rank table of the quiver representation.")
    p.add_argument("--ms", required=True)
    p.add_argument("--on", default=None, help="Line id (needed for the empty multisegment).")

    p = verb("lfactor", "L-factor on both sides and the equality verdict.")
    p.add_argument("--ms", required=True)
    p.add_argument("--gamma", action="store_true", help="Include epsilon and gamma.")

    p = verb("cparam", "C-parameter of a multisegment.")
    p.add_argument("--ms", required=True)

    p = verb("cv", "CV map of a parameter.")
    p.add_argument("--param", default=None)
    p.add_argument("--ms", default=None)

    p = verb("kostka", "Kostka number K_{shape, content}.")
    p.add_argument("--shape", required=True)
    p.add_argument("--content", required=True)

    p = verb("ellregular", "ell-regularity of a partition, or the count for n.")
    p.add_argument("--partition", default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--ell", type=int, required=True)

    p = verb("lift", "Derivative-compatible lift to the infinite line.")
    p.add_argument("--ms", required=True)
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("--anchor", type=int, default=0)

    p = verb("support", "Cuspidal support, degree and mu-partition.")
    p.add_argument("--ms", required=True)

    p = verb("aperiodic", "Aperiodicity, linkedness and open-orbit report.")
    p.add_argument("--ms", required=True)

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _session(args: argparse.Namespace) -> Session:
    settings = get_settings()
    declared = [parse_line(text) for text in args.line]
    registry = LineRegistry(declared or [DEFAULT_LINE])
    bound = settings.enum_bound if args.bound is None else args.bound
    if bound < 1:
        raise ConfigError(f"--bound must be >= 1, got {bound}")
    output_format = args.format or ("dot" if args.verb == "poset" else settings.output_format)
    if output_format == "dot" and args.verb != "poset":
        raise ConfigError("--format dot is only available for poset")
    return Session(
        lines=registry,
        output_format=output_format,
        bound=bound,
        debug_crosscheck=args.debug_crosscheck or settings.debug_crosscheck,
        verbose=args.verbose,
        pretty=args.pretty,
    )


def _emit(session: Session, verb: str, payload: Payload) -> None:
    if isinstance(payload, str):
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
    elif session.output_format == "text":
        out = Console(width=get_settings().output_width, highlight=False)
        render_text(payload, out, title=verb)
    else:
        sys.stdout.write(render_json(payload, pretty=session.pretty) + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        session = _session(args)
        payload = HANDLERS[args.verb](session, args)
        _emit(session, args.verb, payload)
    except ParseError as exc:
        sys.stderr.write(render_json(exc.to_dict()) + "\n")
        sys.stderr.write(GRAMMAR_EPILOG + "\n")
        return 2
    except ConfigError as exc:
        console.print(f"[red]Error:[/red] {exc}", highlight=False)
        return 2
    except MultisegmentError as exc:
        sys.stderr.write(render_json(exc.to_dict()) + "\n")
        return 1
    except ValueError as exc:
        console.print(f"[red]Error:[/red] {exc}", highlight=False)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
