# Licensed under the MIT License.
"""
Command line parsers
"""

from argparse import ArgumentParser
from pathlib import Path
from typing import Optional, Sequence

from multalign.config import MATCHER_CHOICES
from multalign.experiments.runner import ORDERING_MEASURES
from multalign.network.parser import FORMATS


DEFAULT_CONFIG = Path("multalign.yaml")
EXPERIMENTS = ("grid", "modes", "ordering", "deanon")


def get_base_parsers():
    """
    Options common to parsers
    """

    parsers = {
        "config": ArgumentParser(add_help=False),
        "logging": ArgumentParser(add_help=False),
        "msd": ArgumentParser(add_help=False),
        "network": ArgumentParser(add_help=False),
        "output": ArgumentParser(add_help=False),
    }

    parsers["config"].add_argument(
        "-c",
        "--config",
        metavar="FILEPATH",
        type=Path,
        help="Path to configuration file. Defaults to multalign.yaml in current directory",
    )

    parsers["logging"].add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase output verbosity",
    )

    parsers["msd"].add_argument(
        "--alpha",
        type=float,
        help="PageRank damping factor in (0, 1). Defaults to 0.9",
    )
    parsers["msd"].add_argument(
        "--iters",
        dest="iterations",
        metavar="T",
        type=int,
        help="Number of power iterations. Defaults to 10",
    )
    parsers["msd"].add_argument(
        "--matcher",
        choices=MATCHER_CHOICES,
        help="Matching strategy. Defaults to all",
    )

    parsers["network"].add_argument(
        "--format",
        dest="file_format",
        choices=FORMATS,
        default="multiplex",
        help="Input network format. Defaults to multiplex",
    )
    parsers["network"].add_argument(
        "--layers",
        metavar="K",
        type=int,
        help="Declare multiplex layers 1..K so layers without edges still become modes",
    )

    parsers["output"].add_argument(
        "-o",
        "--out",
        metavar="DIR",
        type=Path,
        default=Path("."),
        help="Output directory. Defaults to current directory",
    )

    return parsers


BASE_PARSERS = get_base_parsers()


def add_network_pair(parser: ArgumentParser, required: bool) -> None:
    """Options for the A and B network files"""

    parser.add_argument(
        "-a", "--a", dest="net_a", type=Path, required=required, help="Network A file"
    )
    parser.add_argument(
        "-b", "--b", dest="net_b", type=Path, required=required, help="Network B file"
    )


def get_align_parser():
    """
    Generate parser for align subcommand
    """

    parser = ArgumentParser(
        "align",
        description="Align two multimodal networks",
        parents=[BASE_PARSERS[name] for name in ("config", "logging", "msd", "network", "output")],
    )
    add_network_pair(parser, required=True)
    parser.add_argument(
        "--baseline",
        action="store_true",
        help="Also run the pairwise and smashed baselines and report their overlap",
    )
    parser.add_argument(
        "--dump-factors",
        metavar="DIR",
        type=Path,
        help="Also write the U and V factors as TSV files to this directory",
    )

    return parser


def get_gen_parser():
    """
    Generate parser for gen subcommand
    """

    parser = ArgumentParser(
        "gen",
        description="Generate a synthetic network pair with ground truth",
        parents=[BASE_PARSERS[name] for name in ("config", "logging", "output")],
    )
    parser.add_argument("--seed", type=int, help="Random seed. Defaults to configured seed")
    parser.add_argument("-p", "--vertex-del-p", type=float, help="Vertex deletion probability")
    parser.add_argument("-q", "--edge-del-q", type=float, help="Edge deletion probability")
    parser.add_argument("-m", "--modes", type=int, help="Number of modes")

    return parser


def get_exp_parser():
    """
    Generate parser for exp subcommand
    """

    parser = ArgumentParser(
        "exp",
        description="Run an experiment and export its tables",
        parents=[
            BASE_PARSERS[name] for name in ("config", "logging", "msd", "network", "output")
        ],
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="Experiment to run")
    add_network_pair(parser, required=False)
    parser.add_argument(
        "--trials", type=int, help="Trials per cell. Defaults to configured trials"
    )
    parser.add_argument("--seed", type=int, help="Random seed. Defaults to configured seed")
    parser.add_argument(
        "-j", "--jobs", type=int, help="Worker processes for trials. Defaults to configured jobs"
    )
    parser.add_argument(
        "--measure",
        choices=(*ORDERING_MEASURES, "all"),
        default="all",
        help="Mode ordering measure. Defaults to all",
    )
    parser.add_argument(
        "--steps",
        type=int,
        nargs="+",
        metavar="S",
        help="Numbers of top modes to align with. Defaults to every count",
    )
    parser.add_argument(
        "--database",
        metavar="FILEPATH",
        type=Path,
        help="SQLite results database. Defaults to multalign.db in the output directory",
    )
    parser.add_argument(
        "--workbook",
        metavar="FILEPATH",
        type=Path,
        help="Also export result tables to this Excel workbook",
    )

    return parser


def get_stats_parser():
    """
    Generate parser for stats subcommand
    """

    parser = ArgumentParser(
        "stats",
        description="Print per-mode statistics of a network",
        parents=[BASE_PARSERS[name] for name in ("logging", "network")],
    )
    parser.add_argument("-a", "--a", dest="net_a", type=Path, required=True, help="Network file")
    parser.add_argument(
        "-o", "--out", type=Path, help="Write the table to this TSV file instead of stdout"
    )

    return parser


SUBPARSERS = {
    "align": get_align_parser,
    "gen": get_gen_parser,
    "exp": get_exp_parser,
    "stats": get_stats_parser,
}


def parse_args(args: Optional[Sequence[str]] = None):
    """
    Parse command line arguments
    """

    parser = ArgumentParser(description="Multimodal network alignment")
    subparsers = parser.add_subparsers(title="subcommands", required=True, dest="subcommand")

    # Populate subparsers
    for name, func in SUBPARSERS.items():
        subparser = func()
        subparsers.add_parser(
            name, parents=[subparser], conflict_handler="resolve", help=subparser.description
        )

    options = parser.parse_args(args)

    if options.subcommand == "exp" and options.experiment in {"ordering", "deanon"}:
        if None in (options.net_a, options.net_b):
            parser.error(f"The {options.experiment} experiment requires --a and --b")

    for name in ("net_a", "net_b"):
        path = getattr(options, name, None)
        if path is not None and not path.is_file():
            parser.error(f"Network file {path} does not exist")

    # Configuration file was specified
    config = getattr(options, "config", None)
    if config is not None:
        if not config.is_file():
            parser.error(f"Specified configuration file {config} does not exist")

    # Default configuration file found
    elif "config" in options and DEFAULT_CONFIG.is_file():
        options.config = DEFAULT_CONFIG

    return options
