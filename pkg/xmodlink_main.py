"""
xmodlink Main
Command-line front end: load groups, crossed modules, pairs and diagrams from
files or built-ins, run axiom and move checks, evaluate invariants and print
the trefoil tables
"""

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from xmodlink_algebra import parse_word
from xmodlink_builtins import DIAGRAMS, describe_builtins, resolve_builtin, resolve_diagram
from xmodlink_config import XmodlinkConfig, get_logger, setup_logging
from xmodlink_diagram import SlicedDiagram
from xmodlink_errors import MissingOption, UnknownBuiltin, UnknownVerb
from xmodlink_files import read_diagram, read_group, read_pair, read_rack, read_xmod, results_to_tsv, write_results
from xmodlink_invariant import check_relations, invariant_matrix, rack_colouring_count, state_sum
from xmodlink_pairs import ReidemeisterPair, check_framed, check_unframed
from xmodlink_tables import AVAILABLE_TABLES, TABLES
from xmodlink_xmod import Rack

logger = get_logger(__name__)

VERBS = ("builtins", "check-pair", "invariant", "tables", "moves", "rack-count")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@dataclass
class Command:
    verb: str
    options: argparse.Namespace


@dataclass
class CommandResult:
    exit_code: int
    output: str


# === ARGUMENTS ========================================================

def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--workers", type=int, default=None, help="Worker processes for colouring enumeration.")
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL.")
    parser.add_argument("--seed", type=int, default=None, help="Seed for sampled checks.")


def _pair_source(parser: argparse.ArgumentParser):
    parser.add_argument("--builtin", default=None, help="Built-in key, see `xmodlink builtins`.")
    parser.add_argument("--pair", default=None, help="Path to a .pair file.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xmodlink",
                                     description="Tangle invariants from finite crossed modules")
    subparsers = parser.add_subparsers(dest="verb", required=True)

    listing = subparsers.add_parser("builtins", help="List built-in groups, racks, pairs and diagrams.")
    _common(listing)

    check = subparsers.add_parser("check-pair", help="Check the Reidemeister pair axioms.")
    _pair_source(check)
    check.add_argument("--group", default=None, help="Validate a .grp file.")
    check.add_argument("--xmod", default=None, help="Validate a .xmod file.")
    check.add_argument("--framed", action="store_true", help="Check the framed axioms instead.")
    _common(check)

    invariant = subparsers.add_parser("invariant", help="Evaluate the state sum of a diagram.")
    _pair_source(invariant)
    invariant.add_argument("--diagram", default=None, help="Path to a .tng file or a built-in diagram key.")
    invariant.add_argument("--top", default=None, help="Top boundary word, e.g. `(12), (123)*`.")
    invariant.add_argument("--bottom", default=None, help="Bottom boundary word; every bottom when omitted.")
    invariant.add_argument("--output", default=None, help="Write TSV results to this path.")
    _common(invariant)

    tables = subparsers.add_parser("tables", help="Print the trefoil tables.")
    tables.add_argument("--which", choices=AVAILABLE_TABLES + ["all"], default="all")
    _common(tables)

    moves = subparsers.add_parser("moves",
                                  help="Check invariance under the tangle relations (12 unframed, 11 framed).")
    _pair_source(moves)
    moves.add_argument("--framed", action="store_true", help="Use the framed relation set, which drops R1.")
    _common(moves)

    racks = subparsers.add_parser("rack-count", help="Count rack colourings of a diagram.")
    racks.add_argument("--builtin", default=None, help="Built-in rack key.")
    racks.add_argument("--rack", default=None, help="Path to a .rck file.")
    racks.add_argument("--diagram", default=None, help="Path to a .tng file or a built-in diagram key.")
    racks.add_argument("--top", default=None, help="Comma separated rack colours of the top endpoints.")
    racks.add_argument("--bottom", default=None, help="Comma separated rack colours of the bottom endpoints.")
    _common(racks)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> Command:
    """
    Raises:
        UnknownVerb
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and not argv[0].startswith("-") and argv[0] not in VERBS:
        raise UnknownVerb(f"unknown command {argv[0]!r}; expected one of {', '.join(VERBS)}")
    args = build_parser().parse_args(argv)
    return Command(args.verb, args)


# === LOADING ==========================================================

def _config(options: argparse.Namespace) -> XmodlinkConfig:
    overrides = {}
    if options.workers is not None:
        overrides["workers"] = options.workers
    if options.log_level is not None:
        overrides["log_level"] = options.log_level
    if options.seed is not None:
        overrides["random_seed"] = options.seed
    return dataclasses.replace(XmodlinkConfig(), **overrides)


def _load_pair(options: argparse.Namespace, config: XmodlinkConfig) -> ReidemeisterPair:
    if options.pair:
        return read_pair(options.pair, config)
    if options.builtin:
        pair = resolve_builtin(options.builtin, config)
        if not isinstance(pair, ReidemeisterPair):
            raise UnknownBuiltin(f"{options.builtin!r} is not a Reidemeister pair")
        return pair
    raise MissingOption(f"{options.verb} needs --pair <path> or --builtin <key>")


def _load_diagram(options: argparse.Namespace) -> SlicedDiagram:
    if not options.diagram:
        raise MissingOption(f"{options.verb} needs --diagram <path or key>")
    if options.diagram in DIAGRAMS:
        return resolve_diagram(options.diagram)
    return read_diagram(options.diagram)


def _load_rack(options: argparse.Namespace, config: XmodlinkConfig) -> Rack:
    if options.rack:
        return read_rack(options.rack, config)
    if options.builtin:
        rack = resolve_builtin(options.builtin, config)
        if not isinstance(rack, Rack):
            raise UnknownBuiltin(f"{options.builtin!r} is not a rack")
        return rack
    raise MissingOption("rack-count needs --rack <path> or --builtin <key>")


def _colours(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [token.strip() for token in text.split(",") if token.strip()]


# === VERBS ============================================================

def _run_builtins(options, config) -> CommandResult:
    return CommandResult(EXIT_OK, describe_builtins())


def _run_check_pair(options, config) -> CommandResult:
    lines = []
    if options.group:
        group = read_group(options.group, config)
        lines.append(f"✅ {group.name} is a group of order {group.order}")
    if options.xmod:
        xmod = read_xmod(options.xmod, config)
        lines.append(f"✅ {xmod!r} satisfies the crossed module axioms")
    if lines and not (options.pair or options.builtin):
        return CommandResult(EXIT_OK, "\n".join(lines))

    pair = _load_pair(options, config)
    if options.framed:
        report, structure = check_framed(pair, config)
    else:
        report = check_unframed(pair, config=config)
    lines.append(report.render())
    if options.framed and structure is not None:
        f = ", ".join(f"{pair.G.names[z]}->{pair.G.names[a]}" for z, a in enumerate(structure.f))
        lines.append(f"f: {f}")
    return CommandResult(EXIT_OK if report.passed else EXIT_CHECK_FAILED, "\n".join(lines))


def _run_invariant(options, config) -> CommandResult:
    pair = _load_pair(options, config)
    d = _load_diagram(options)
    if options.top is None:
        raise MissingOption("invariant needs --top <word>")
    top = parse_word(pair.G, options.top)
    if options.bottom is not None:
        results = [state_sum(d, pair, top, parse_word(pair.G, options.bottom), config)]
    else:
        results = list(invariant_matrix(d, pair, top, config).values())
    if options.output:
        write_results(options.output, results)
        return CommandResult(EXIT_OK, f"✅ Wrote {len(results)} result(s) to {options.output}")
    return CommandResult(EXIT_OK, results_to_tsv(results))


def _run_tables(options, config) -> CommandResult:
    which = AVAILABLE_TABLES if options.which == "all" else [options.which]
    rendered = [TABLES[name](config).render() for name in which]
    return CommandResult(EXIT_OK, "\n\n".join(rendered))


def _run_moves(options, config) -> CommandResult:
    pair = _load_pair(options, config)
    report = check_relations(pair, options.framed, config)
    return CommandResult(EXIT_OK if report.passed else EXIT_CHECK_FAILED, report.render())


def _run_rack_count(options, config) -> CommandResult:
    rack = _load_rack(options, config)
    d = _load_diagram(options)
    count = rack_colouring_count(d, rack, _colours(options.top), _colours(options.bottom))
    return CommandResult(EXIT_OK, str(count))


RUNNERS = {
    "builtins": _run_builtins,
    "check-pair": _run_check_pair,
    "invariant": _run_invariant,
    "tables": _run_tables,
    "moves": _run_moves,
    "rack-count": _run_rack_count,
}


def run(command: Command) -> CommandResult:
    """
    Execute a parsed command; exit code 0 on success, 1 on a failed check,
    2 on a usage, input or file error
    """
    try:
        config = _config(command.options)
        setup_logging(config)
        logger.debug("running %s", command.verb)
        return RUNNERS[command.verb](command.options, config)
    except (ValueError, OSError) as e:
        # XmodlinkError is a ValueError, and config validation raises plain ValueError
        logger.debug("%s failed: %s", command.verb, e)
        return CommandResult(EXIT_USAGE, f"❌ {e}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        command = parse_args(argv)
    except UnknownVerb as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    result = run(command)
    stream = sys.stderr if result.exit_code == EXIT_USAGE else sys.stdout
    print(result.output, file=stream)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
