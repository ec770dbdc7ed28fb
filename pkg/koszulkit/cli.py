"""Command-line surface: ``python -m koszulkit [global flags] <command> ...``.

Results go to standard output (or ``--out``); diagnostics and logs go to
standard error. Exit codes: 0 verdict reached, 1 input error, 2 resource
guard, 3 internal assertion.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import voluptuous as vol

from .algebra import RingDescriptor, ScalarField, format_poly, parse_poly
from .const import (
    CHARACTER_SIGN,
    CHARACTER_TRIVIAL,
    COMMAND_AMPLE,
    COMMAND_BETTI,
    COMMAND_CURVE_BOUND,
    COMMAND_ELIMINATE,
    COMMAND_GB,
    COMMAND_INTERSECT,
    COMMAND_KOSZUL,
    COMMAND_POLYGRAPH,
    COMMAND_REPORT,
    COMMAND_RESOLVE,
    COMMAND_SECTIONS,
    COMMAND_VERIFY,
    CONF_COMMAND,
    CONF_FIELD,
    CONF_FORMAT,
    CONF_MAX_BASIS,
    CONF_ORDER,
    CONF_OUT,
    CONF_SEED,
    CONF_THREADS,
    CONF_VERBOSE,
    DEFAULT_FIELD,
    DEFAULT_FORMAT,
    DEFAULT_MAX_BASIS,
    DEFAULT_ORDER,
    DEFAULT_P_MAX,
    DEFAULT_PRIME,
    DEFAULT_SAMPLE_TRIALS,
    DEFAULT_SEED,
    DEFAULT_STABILIZATION_CAP,
    DEFAULT_THREADS,
    DOMAIN,
    EXIT_INTERNAL,
    EXIT_OK,
    FORMAT_CSV,
    FORMAT_JSON,
    FORMATS,
    JOB_SCHEMA,
    LEVEL_FAST,
    LEVELS,
    ORDERS,
    STRATEGY_EXHAUSTIVE,
    STRATEGY_SAMPLED,
)
from .exceptions import InputError, KoszulKitError
from .geometry import (
    CurveNumerics,
    LineBundleOnP1,
    curve_chi_closed_form,
    curve_chi_rr,
    curve_nonvanishing_criterion,
    effective_bound_report,
    effective_bound_table,
    evaluation_map,
    gonality_bound_report,
    kernel_bundle_numerics,
    parse_point_configuration,
    realizable_h0,
    section_module,
    syzygy_gonality_check,
    very_ampleness_order,
)
from .gradedmod import (
    BettiTable,
    GradedModule,
    format_module,
    free_resolution,
    minimal_free_resolution,
    parse_module_json,
    parse_module_text,
    quotient_module,
)
from .groebner import IdealBasis, basis_limit, buchberger, eliminate, intersect_ideals
from .helpers import parse_int_list, parse_name_list
from .koszul import koszul_cohomology_dim, koszul_table
from .polygraph import PolygraphSpec, ext_modules, s_module_presentation
from .symgrp import Character
from .verify import verify_suite

_LOGGER = logging.getLogger(__name__)

_LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass
class Output:
    """What a command produced, in every format it supports."""

    text: str
    data: Any
    csv: Optional[str] = None
    exit_code: int = EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputError("Invalid arguments", message)


# ---------------------------------------------------------------------------
# Input helpers


def _polys(text: str) -> List[str]:
    return [part.strip() for part in text.replace(";", ",").split(",") if part.strip()]


def _ring(args: argparse.Namespace, job: Dict[str, Any]) -> RingDescriptor:
    if not args.vars:
        raise InputError("--vars is required")
    weights = parse_int_list(args.weights) if args.weights else None
    return RingDescriptor.parse(
        parse_name_list(args.vars), weights, job[CONF_ORDER], args.block, ScalarField.parse(job[CONF_FIELD])
    )


def _ideal(args: argparse.Namespace, job: Dict[str, Any], texts: Sequence[str]) -> IdealBasis:
    ring = _ring(args, job)
    return IdealBasis(ring, tuple(parse_poly(text, ring) for text in texts))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as ex:
        raise InputError("Cannot read input", f"{path}: {ex}") from ex


def _read_json(path: str) -> Any:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as ex:
        raise InputError("Invalid JSON", f"{path}: {ex}") from ex


def _module(args: argparse.Namespace, job: Dict[str, Any]) -> GradedModule:
    """Module from --input (text or .json), else S/I from --vars and polynomials."""
    field_ = ScalarField.parse(job[CONF_FIELD])
    if args.input:
        if args.input.endswith(".json"):
            return parse_module_json(_read_json(args.input), field_, job[CONF_ORDER])
        return parse_module_text(_read(args.input), field_, job[CONF_ORDER])
    ideal = _ideal(args, job, args.polys)
    return quotient_module(ideal.ring, ideal.generators)


def _span(text: str) -> range:
    """'3' or '0:3' (inclusive)."""
    try:
        if ":" in text:
            low, high = text.split(":", 1)
            return range(int(low), int(high) + 1)
        value = int(text)
    except ValueError as ex:
        raise InputError("Expected an integer or a range lo:hi", text) from ex
    return range(value, value + 1)


def _basis_output(ideal: IdealBasis) -> Output:
    lines = [format_poly(g, ideal.ring) for g in ideal.generators]
    return Output(
        "\n".join(lines) if lines else "0",
        {"ring": str(ideal.ring), "order": ideal.order, "basis": lines},
    )


def _table_output(table: BettiTable, extra: Optional[Dict[str, Any]] = None) -> Output:
    data = table.to_json()
    if extra:
        data.update(extra)
    return Output(table.to_text(), data, table.to_csv())


# ---------------------------------------------------------------------------
# Commands


def cmd_gb(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    return _basis_output(buchberger(_ideal(args, job, args.polys)))


def cmd_eliminate(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    return _basis_output(eliminate(_ideal(args, job, args.polys), parse_name_list(args.keep)))


def cmd_intersect(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    ideals = [_ideal(args, job, _polys(text)) for text in args.ideal or []]
    return _basis_output(buchberger(intersect_ideals(ideals, job[CONF_THREADS])))


def cmd_resolve(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    M = _module(args, job)
    if args.non_minimal:
        resolution = free_resolution(M, args.max_length)
    else:
        resolution = minimal_free_resolution(M, args.max_length)
    table = resolution.betti_table()
    ranks = " <- ".join(str(r) for r in resolution.ranks)
    data = {
        "ranks": resolution.ranks,
        "minimal": resolution.is_minimal(),
        "betti": table.to_json(),
        "shifts": [list(F.shifts) for F in resolution.modules],
    }
    return Output(f"ranks: {ranks}\n{table.to_text()}", data, table.to_csv())


def cmd_betti(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    return _table_output(minimal_free_resolution(_module(args, job), args.max_length).betti_table())


def cmd_koszul(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    prime = DEFAULT_PRIME if args.prepass else None
    if args.d is not None:
        M = section_module(args.b, args.d, ScalarField.parse(job[CONF_FIELD]))
        V = None
    else:
        M = _module(args, job)
        V = [parse_poly(text, M.ring) for text in _polys(args.v)] if args.v else None
    ps, qs = _span(args.p), _span(args.q)
    if len(ps) == 1 and len(qs) == 1:
        value = koszul_cohomology_dim(M, V, ps[0], qs[0], prime)
        return Output(str(value), {"p": ps[0], "q": qs[0], "dimension": value})
    return _table_output(koszul_table(M, V, ps, qs, job[CONF_THREADS], prime))


def _schemes_output(path: str, job: Dict[str, Any]) -> Output:
    config = parse_point_configuration(_read_json(path), ScalarField.parse(job[CONF_FIELD]))
    rows = []
    for scheme in config.schemes:
        result = evaluation_map(config.sections, scheme, config.ring)
        rows.append({
            "kind": scheme.kind,
            "length": result.length,
            "sections": result.dimension,
            "rank": result.rank,
            "surjective": result.surjective,
        })
    lines = [
        f"{row['kind']}: length {row['length']}, rank {row['rank']}/{row['sections']}, "
        f"{'surjective' if row['surjective'] else 'not surjective'}"
        for row in rows
    ]
    return Output("\n".join(lines), {"ambient": config.ambient, "schemes": rows})


def cmd_sections(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    if args.points:
        return _schemes_output(args.points, job)
    if args.d is None:
        raise InputError("sections needs --d or --points")
    M = section_module(args.b, args.d, ScalarField.parse(job[CONF_FIELD]))
    top = args.q_max if args.q_max is not None else M.first_degree + 3
    hilbert = [[q, M.dimension(q)] for q in range(M.first_degree, top + 1)]
    presentation = format_module(M.presentation(top))
    text = "\n".join(f"{q}: {dim}" for q, dim in hilbert) + "\n" + presentation
    return Output(text, {"b": args.b, "d": args.d, "hilbert": hilbert, "presentation": presentation})


def cmd_ample(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    field_ = ScalarField.parse(job[CONF_FIELD])
    if args.points:
        target: Any = parse_point_configuration(_read_json(args.points), field_)
        strategy = args.strategy or STRATEGY_SAMPLED
    elif args.degree is not None:
        target = LineBundleOnP1(args.degree, field_)
        strategy = args.strategy or STRATEGY_EXHAUSTIVE
    else:
        raise InputError("ample needs --degree or --points")
    report = very_ampleness_order(target, args.p_max, strategy, job[CONF_SEED], args.trials)
    lines = [f"p={p}: {'yes' if ok else 'no'}" for p, ok in sorted(report.verdicts.items())]
    lines.append(f"order: {report.order} ({report.label})")
    return Output("\n".join(lines), report.as_dict())


def cmd_curve_bound(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    num = CurveNumerics(args.g, args.d, args.b, args.p, args.h0b)
    data: Dict[str, Any] = {
        "g": num.g, "d": num.d, "b": num.b, "p": num.p, "h0B": num.h0B,
        "realizable_h0B": list(realizable_h0(num.g, num.b)),
        "chi_closed_form": str(curve_chi_closed_form(num)),
    }
    lines = [f"chi (closed form): {data['chi_closed_form']}"]
    if num.d >= 2 * num.g + 1:
        data["chi_rr"] = str(curve_chi_rr(num))
        data["kernel_bundle"] = kernel_bundle_numerics(num.g, num.d, num.p)
        lines.append(f"chi (Riemann-Roch): {data['chi_rr']}")
    if num.h0B is not None:
        criterion = curve_nonvanishing_criterion(num)
        data["criterion"] = criterion.as_dict()
        lines.append(f"K_{{{num.p},1}} nonvanishing: {criterion.verdict}")
    return Output("\n".join(lines), data)


def cmd_polygraph(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    spec = PolygraphSpec(args.n, args.k, ScalarField.parse(job[CONF_FIELD]), args.allow_large)
    presentation = s_module_presentation(spec, cap=args.cap, threads=job[CONF_THREADS])
    j = args.j if args.j is not None else args.k + 1
    report = ext_modules(presentation, j, job[CONF_THREADS], Character(args.character))
    lines = [report.summary()]
    lines += [f"  degree {q}: dim {dim}, isotypic {iso}" for (q, dim), (_, iso) in
              zip(report.dimensions, report.invariant_dimensions)]
    return Output("\n".join(lines), report.as_dict())


def cmd_report(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    table = effective_bound_table(args.n_max, args.p_max)
    lines = ["n\\p " + " ".join(f"{p:>3}" for p in range(args.p_max + 1))]
    for n in range(1, args.n_max + 1):
        lines.append(f"{n:>3} " + " ".join(f"{table[(n, p)]:>3}" for p in range(args.p_max + 1)))
    data: Dict[str, Any] = {"bounds": [[n, p, value] for (n, p), value in sorted(table.items())]}
    if args.n is not None and args.p is not None:
        data["bound"] = effective_bound_report(args.n, args.p)
        lines.append(data["bound"]["hypothesis"])
        if args.vanishing is not None:
            data["gonality"] = gonality_bound_report(args.n, args.p, args.vanishing == "true")
            lines.append(f"gonality: {data['gonality']['claim']}")
    if args.line_degree is not None:
        data["line_syzygies"] = syzygy_gonality_check(args.line_degree, args.p if args.p is not None else 0)
        lines.append(
            f"O({args.line_degree}) on P^1: K_{{{data['line_syzygies']['koszul_index'][0]},1}} = "
            f"{data['line_syzygies']['koszul_dimension']}, {data['line_syzygies']['claim']}"
        )
    return Output("\n".join(lines), data)


def cmd_verify(args: argparse.Namespace, job: Dict[str, Any]) -> Output:
    report = verify_suite(args.level, job[CONF_SEED], job[CONF_THREADS])
    lines = [
        f"{'PASS' if result['passed'] else 'FAIL'} {name}"
        for name, result in sorted(report["criteria"].items())
    ]
    return Output("\n".join(lines), report, exit_code=EXIT_OK if report["passed"] else EXIT_INTERNAL)


HANDLERS: Dict[str, Callable[[argparse.Namespace, Dict[str, Any]], Output]] = {
    COMMAND_GB: cmd_gb,
    COMMAND_ELIMINATE: cmd_eliminate,
    COMMAND_INTERSECT: cmd_intersect,
    COMMAND_RESOLVE: cmd_resolve,
    COMMAND_BETTI: cmd_betti,
    COMMAND_KOSZUL: cmd_koszul,
    COMMAND_SECTIONS: cmd_sections,
    COMMAND_AMPLE: cmd_ample,
    COMMAND_CURVE_BOUND: cmd_curve_bound,
    COMMAND_POLYGRAPH: cmd_polygraph,
    COMMAND_REPORT: cmd_report,
    COMMAND_VERIFY: cmd_verify,
}


# ---------------------------------------------------------------------------
# Parser


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Flags accepted before or after the command name."""

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--field", default=default(DEFAULT_FIELD), help="qq or fp:P")
    parser.add_argument("--order", choices=ORDERS, default=default(DEFAULT_ORDER))
    parser.add_argument("--seed", type=int, default=default(DEFAULT_SEED))
    parser.add_argument("--threads", type=int, default=default(DEFAULT_THREADS))
    parser.add_argument("--max-basis", type=int, default=default(DEFAULT_MAX_BASIS))
    parser.add_argument("--format", choices=FORMATS, default=default(DEFAULT_FORMAT))
    parser.add_argument("--out", default=default(None), help="write results to a file")
    parser.add_argument("--verbose", action="store_true", default=default(False))


def _ring_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--vars", help="variable names, e.g. x,y,z")
    parser.add_argument("--weights", help="positive variable weights")
    parser.add_argument("--block", type=int, default=0, help="size of the eliminated block")


def _module_options(parser: argparse.ArgumentParser) -> None:
    _ring_options(parser)
    parser.add_argument("--input", help="module description (text, or JSON with a .json suffix)")
    parser.add_argument("polys", nargs="*", help="generators of I for the module S/I")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=DOMAIN, description="Koszul cohomology and syzygy computations")
    _global_options(parser, suppress=False)
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        _global_options(sub, suppress=True)
        return sub

    sub = command(COMMAND_GB, "reduced Groebner basis")
    _ring_options(sub)
    sub.add_argument("polys", nargs="+")

    sub = command(COMMAND_ELIMINATE, "eliminate variables")
    _ring_options(sub)
    sub.add_argument("--keep", required=True, help="variables to keep")
    sub.add_argument("polys", nargs="+")

    sub = command(COMMAND_INTERSECT, "intersect ideals")
    _ring_options(sub)
    sub.add_argument("--ideal", action="append", help="comma separated generators; repeat per ideal")

    for name, help_text in ((COMMAND_RESOLVE, "free resolution"), (COMMAND_BETTI, "Betti table")):
        sub = command(name, help_text)
        _module_options(sub)
        sub.add_argument("--max-length", type=int, default=None)
        if name == COMMAND_RESOLVE:
            sub.add_argument("--non-minimal", action="store_true")

    sub = command(COMMAND_KOSZUL, "Koszul cohomology dimensions")
    _module_options(sub)
    sub.add_argument("--b", type=int, default=0, help="degree of B on P^1")
    sub.add_argument("--d", type=int, default=None, help="degree of L on P^1")
    sub.add_argument("--p", default="0", help="p or lo:hi")
    sub.add_argument("--q", default="0", help="q or lo:hi")
    sub.add_argument("--v", help="linear forms spanning V (default: all degree-1 variables)")
    sub.add_argument("--prepass", action="store_true", help="modular pre-pass over the rationals")

    sub = command(COMMAND_SECTIONS, "section modules and evaluation maps")
    sub.add_argument("--b", type=int, default=0)
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--q-max", type=int, default=None)
    sub.add_argument("--points", help="point configuration JSON")

    sub = command(COMMAND_AMPLE, "higher-order very ampleness")
    sub.add_argument("--degree", type=int, default=None, help="O(m) on P^1")
    sub.add_argument("--points", help="point configuration JSON")
    sub.add_argument("--p-max", type=int, default=DEFAULT_P_MAX)
    sub.add_argument("--strategy", choices=[STRATEGY_EXHAUSTIVE, STRATEGY_SAMPLED], default=None)
    sub.add_argument("--trials", type=int, default=DEFAULT_SAMPLE_TRIALS)

    sub = command(COMMAND_CURVE_BOUND, "numeric nonvanishing criterion on curves")
    for flag in ("--g", "--d", "--b", "--p"):
        sub.add_argument(flag, type=int, required=True)
    sub.add_argument("--h0b", type=int, default=None)

    sub = command(COMMAND_POLYGRAPH, "Ext of polygraph rings")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--j", type=int, default=None, help="Ext index (default k+1)")
    sub.add_argument("--character", choices=[CHARACTER_TRIVIAL, CHARACTER_SIGN], default=CHARACTER_TRIVIAL)
    sub.add_argument("--cap", type=int, default=DEFAULT_STABILIZATION_CAP)
    sub.add_argument("--allow-large", action="store_true")

    sub = command(COMMAND_REPORT, "effective bounds and gonality")
    sub.add_argument("--n-max", type=int, default=4)
    sub.add_argument("--p-max", type=int, default=4)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--p", type=int, default=None)
    sub.add_argument("--vanishing", choices=["true", "false"], default=None)
    sub.add_argument("--line-degree", type=int, default=None, help="degree d of O(d) on P^1 whose syzygies to check")

    sub = command(COMMAND_VERIFY, "acceptance suite")
    sub.add_argument("--level", choices=LEVELS, default=LEVEL_FAST)
    return parser


def _job(args: argparse.Namespace) -> Dict[str, Any]:
    try:
        return JOB_SCHEMA({
            CONF_COMMAND: args.command,
            CONF_FIELD: args.field,
            CONF_ORDER: args.order,
            CONF_SEED: args.seed,
            CONF_THREADS: args.threads,
            CONF_MAX_BASIS: args.max_basis,
            CONF_FORMAT: args.format,
            CONF_OUT: args.out,
            CONF_VERBOSE: args.verbose,
        })
    except vol.Invalid as ex:
        raise InputError("Invalid job", str(ex)) from ex


def _render(output: Output, job: Dict[str, Any]) -> str:
    if job[CONF_FORMAT] == FORMAT_JSON:
        return json.dumps(output.data, sort_keys=True, indent=2) + "\n"
    if job[CONF_FORMAT] == FORMAT_CSV:
        if output.csv is None:
            raise InputError(f"csv output is not available for {job[CONF_COMMAND]}")
        return output.csv
    return output.text + "\n"


def run(args: argparse.Namespace) -> int:
    """Execute one parsed job and write its result."""
    job = _job(args)
    logging.basicConfig(
        stream=sys.stderr, level=logging.DEBUG if job[CONF_VERBOSE] else logging.WARNING, format=_LOG_FORMAT
    )
    with basis_limit(job[CONF_MAX_BASIS]):
        output = HANDLERS[job[CONF_COMMAND]](args, job)
    rendered = _render(output, job)
    if job[CONF_OUT]:
        Path(job[CONF_OUT]).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return output.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(build_parser().parse_args(argv))
    except KoszulKitError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return ex.exit_code
    except Exception as ex:  # pylint: disable=broad-except
        _LOGGER.exception("Unexpected error")
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INTERNAL
