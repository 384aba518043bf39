"""
Command-line surface.

Every subcommand delegates to one ``CommandService`` method and follows the
exit-code contract:

    0  verdict passed (or the command only reports information)
    1  verdict failed
    2  usage, IO, parse or engine error

Reports go to stdout unless ``--output`` names a file; logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Callable, Sequence

from src.cli.report import RENDERERS, Report
from src.engine.errors import AlgebraError, UnknownCommand
from src.engine.exactlin import Field
from src.engine.multimap import Subalgebra
from src.engine.linfty import PAIR_SUBALGEBRAS
from src.service.command_service import PARTS, REPRESENTATIONS, CommandService

logger = logging.getLogger(__name__)

USAGE_ERROR = 2


# ---------------------------------------------------
# Parser
# ---------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=sorted(RENDERERS), default="text")
    common.add_argument("--output", default=None, help="write the report to this file")
    common.add_argument("--field", type=Field.from_flag, default=None, help="'rational' or 'prime:P'")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="leibniz-deform", description="Deformation maps of proto-twilled Leibniz algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, document: bool = True, map_required: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        if document:
            p.add_argument("document")
        if map_required:
            p.add_argument("--map", required=True, dest="map_name")
        return p

    command("check-leibniz", "Leibniz identity of Omega or of one summand").add_argument(
        "--part", choices=PARTS, default="total"
    )
    command("check-proto", "proto-twilled check with the five bidegree equations")
    command("is-deformation-map", "deformation-map identity and graph closure", map_required=True)
    command("induced", "induced Leibniz algebra and representation", map_required=True)
    command("twist", "twist Omega by a linear map", map_required=True)

    p = command("cohomology", "cohomology dimensions")
    p.add_argument("--map", dest="map_name", default=None)
    p.add_argument("--part", choices=PARTS, default="g")
    p.add_argument("--rep", choices=REPRESENTATIONS, default="adjoint")
    p.add_argument("--max-degree", type=int, required=True)

    command("mc-check", "Maurer-Cartan defect in the controlling algebra", map_required=True)

    p = command("governing-check", "Maurer-Cartan elements of the governing algebra", map_required=True)
    p.add_argument("--perturbation", default=None)
    p.add_argument("--budget", type=_positive_int, default=None)

    p = command("pair-mc-check", "Maurer-Cartan defect of (Omega, r) in the pair algebra", map_required=True)
    p.add_argument("--subalgebra", choices=[s.value for s in PAIR_SUBALGEBRAS], default=Subalgebra.FULL.value)

    p = command("enumerate", "all deformation maps over a prime field")
    p.add_argument("--budget", type=_positive_int, default=None)
    p.add_argument("--workers", type=_positive_int, default=None)

    p = command("zoo-build", "write a catalogue entry as a document", document=False)
    p.add_argument("name")
    p.add_argument("--out", required=True)

    p = command("zoo-verify", "operator identity against the deformation-map predicate")
    p.add_argument("--budget", type=_positive_int, default=None)
    return parser


# ---------------------------------------------------
# Dispatch
# ---------------------------------------------------

Handler = Callable[[CommandService, argparse.Namespace], Report]

HANDLERS: dict[str, Handler] = {
    "check-leibniz": lambda s, a: s.check_leibniz(a.document, a.part, a.field),
    "check-proto": lambda s, a: s.check_proto(a.document, a.field),
    "is-deformation-map": lambda s, a: s.is_deformation_map(a.document, a.map_name, a.field),
    "induced": lambda s, a: s.induced(a.document, a.map_name, a.field),
    "twist": lambda s, a: s.twist(a.document, a.map_name, a.field),
    "cohomology": lambda s, a: s.cohomology(a.document, a.max_degree, a.map_name, a.part, a.rep, a.field),
    "mc-check": lambda s, a: s.mc_check(a.document, a.map_name, a.field),
    "governing-check": lambda s, a: s.governing_check(a.document, a.map_name, a.perturbation, a.budget, a.field),
    "pair-mc-check": lambda s, a: s.pair_mc_check(a.document, a.map_name, a.subalgebra, a.field),
    "enumerate": lambda s, a: s.enumerate(a.document, a.budget, a.workers, a.field),
    "zoo-build": lambda s, a: s.zoo_build(a.name, a.out, a.field),
    "zoo-verify": lambda s, a: s.zoo_verify(a.document, a.budget, a.field),
}


def dispatch(service: CommandService, args: argparse.Namespace) -> Report:
    """
    Raises:
        UnknownCommand: If ``args.command`` has no handler.
    """
    handler = HANDLERS.get(args.command)
    if handler is None:
        raise UnknownCommand(f"unknown command {args.command!r}")
    started = time.perf_counter()
    report = handler(service, args)
    report.elapsed = time.perf_counter() - started
    return report


def run(argv: Sequence[str] | None = None, service: CommandService | None = None) -> int:
    """Parse ``argv``, run the command, emit the report and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return USAGE_ERROR if ex.code else 0

    service = service or CommandService()
    try:
        report = dispatch(service, args)
    except (AlgebraError, OSError, json.JSONDecodeError) as ex:
        logger.error(f"[CLI] {args.command} failed: {ex}")
        print(f"error: {ex}", file=sys.stderr)
        return USAGE_ERROR

    rendered = RENDERERS[args.format](report)
    if args.output:
        service.modify_repo.write_report(rendered, args.output)
    else:
        sys.stdout.write(rendered)
    logger.info(f"[CLI] {args.command} exit={report.exit_code}")
    return report.exit_code
