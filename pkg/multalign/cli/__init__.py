# Licensed under the MIT License.
"""
CLI entry point for program
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import pandas as pd
from pydantic import ValidationError
from ruamel.yaml import YAML as R_YAML
from ruamel.yaml import YAMLError

from multalign.cli.parser import parse_args
from multalign.config import FullConfig
from multalign.database.driver import ResultsDatabase
from multalign.exceptions import MultalignError
from multalign.experiments import gen_instance_pair, gen_reference, trial_rng, write_instance
from multalign.experiments.runner import (
    ORDERING_MEASURES,
    run_adding_modes,
    run_deanonymization,
    run_mode_ordering,
    run_recovery_grid,
)
from multalign.msd import write_factors
from multalign.network import mode_statistics
from multalign.network.parser import load_network, load_network_pair
from multalign.pipeline import (
    OVERLAP_NOTE,
    align_multimodal,
    align_pairwise_baseline,
    write_alignment,
)
from multalign.util import stats_frame, write_table
from multalign.util.spreadsheet import export_workbook


LOGGER = logging.getLogger("multalign.cli")
YAML = R_YAML(typ="safe")

# Option name -> (config section, field)
OVERRIDES = {
    "alpha": ("msd", "alpha"),
    "iterations": ("msd", "iterations"),
    "seed": ("synthetic", "seed"),
    "trials": ("synthetic", "trials"),
    "vertex_del_p": ("synthetic", "vertex_del_p"),
    "edge_del_q": ("synthetic", "edge_del_q"),
    "modes": ("synthetic", "modes"),
    "jobs": ("experiment", "jobs"),
    "steps": ("experiment", "ordering_steps"),
}


class Session:
    """
    Container for session data to avoid duplicate actions
    """

    def __init__(self, config) -> None:
        self.config: FullConfig = config

    @staticmethod
    def _layers(options):
        """Layer ids declared with --layers"""
        return range(1, options.layers + 1) if options.layers else None

    def _load(self, path, options):
        """Read a network with the format options"""
        return load_network(path, options.file_format, self._layers(options))

    def _load_pair(self, options):
        """Read networks A and B with matching modes"""
        return load_network_pair(
            options.net_a, options.net_b, options.file_format, self._layers(options)
        )

    def align(self, options):
        """
        Handle align subcommand
        """

        net_a, net_b = self._load_pair(options)
        result = align_multimodal(net_a, net_b, self.config.msd, self.config.matcher)
        write_alignment(result, net_a, net_b, options.out)

        print(f"Overlap: {result.overlap} ({result.strategy.label}, {result.timing:.2f}s)")
        for name, count in zip(net_a.names, result.per_mode_overlap):
            print(f"  mode {name}: {count}")
        print(f"Note: {OVERLAP_NOTE}")

        if options.dump_factors:
            write_factors(result.factors, options.dump_factors)

        if options.baseline:
            LOGGER.info("Running pairwise baselines")
            baseline = align_pairwise_baseline(net_a, net_b, self.config.msd, self.config.matcher)
            print(f"Pairwise baseline overlap: {baseline.overlap} ({baseline.strategy.label})")

    def gen(self, options):
        """
        Handle gen subcommand
        """

        cfg = self.config.synthetic
        rng = trial_rng(cfg.seed, 0, 0)
        pair = gen_instance_pair(gen_reference(cfg, rng), cfg, rng)
        write_instance(pair, options.out)
        print(f"Edges per mode: A {pair.a.edge_counts}, B {pair.b.edge_counts}")

    def exp(self, options):
        """
        Handle exp subcommand
        """

        out: Path = options.out
        database = ResultsDatabase(options.database or out / "multalign.db", options.verbose > 2)
        experiment = options.experiment
        database.clear(experiment)
        tables: Dict[str, pd.DataFrame] = {}

        synthetic, settings = self.config.synthetic, self.config.experiment
        msd_cfg, matcher = self.config.msd, self.config.matcher

        if experiment == "grid":
            records = run_recovery_grid(
                synthetic, settings.p_values, settings.q_values, msd_cfg, matcher, settings.jobs
            )
            database.add_recovery_records(experiment, records)

        elif experiment == "modes":
            records = run_adding_modes(
                synthetic,
                settings.mode_counts,
                settings.adding_modes_settings,
                msd_cfg,
                matcher,
                settings.jobs,
            )
            database.add_recovery_records(experiment, records)

        elif experiment == "ordering":
            net_a, net_b = self._load_pair(options)
            measures = ORDERING_MEASURES if options.measure == "all" else (options.measure,)
            for measure in measures:
                points = run_mode_ordering(
                    net_a,
                    net_b,
                    measure,
                    msd_cfg,
                    matcher,
                    settings.ordering_steps,
                    synthetic.seed,
                )
                database.add_ordering_points(experiment, points)
            tables["ordering"] = database.ordering_frame(experiment)

        else:
            net_a, net_b = self._load_pair(options)
            rows = run_deanonymization(net_a, net_b, msd_cfg, matcher)
            tables["deanon"] = pd.DataFrame(rows, columns=["method", "overlap"])

        if experiment in {"grid", "modes"}:
            tables["recovery"] = database.recovery_frame(experiment)
            tables["summary"] = database.summary_frame(experiment)

        for name, frame in tables.items():
            write_table(frame, out / f"{name}.csv")
        if "summary" in tables:
            print(tables["summary"].to_string(index=False))
        elif "deanon" in tables:
            print(tables["deanon"].to_string(index=False))

        if options.workbook:
            export_workbook(tables, options.workbook)

    def stats(self, options):
        """
        Handle stats subcommand
        """

        net = self._load(options.net_a, options)
        frame = stats_frame(mode_statistics(net))

        if options.out:
            write_table(frame, options.out)
        else:
            print(frame.to_csv(sep="\t", index=False), end="")

    def __call__(self, options) -> None:
        """
        Runs the specified subcommand
        """

        getattr(self, options.subcommand)(options)


def build_config(file_values: Optional[Dict[str, Any]], options) -> FullConfig:
    """
    Configuration file values overridden by any command line options that were given
    """

    values = dict(file_values or {})
    for option, (section, field) in OVERRIDES.items():
        value = getattr(options, option, None)
        if value is not None:
            values[section] = {**(values.get(section) or {}), field: value}

    matcher = getattr(options, "matcher", None)
    if matcher is not None:
        values["matcher"] = matcher

    return FullConfig(**values)


def main(args: Optional[Sequence[str]] = None):
    """
    Main CLI entry point
    """

    options = parse_args(args)

    # Configure logging
    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(options.verbose, logging.DEBUG),
        format="%(asctime)s %(name)-5s %(levelname)-7s %(message)s",
        datefmt="%m-%d %H:%M:%S",
    )

    config_file = getattr(options, "config", None)
    try:
        config = build_config(YAML.load(config_file) if config_file else None, options)
    except (ValidationError, YAMLError) as e:
        print(f"Unable to validate configuration: {config_file or 'command line options'}")
        sys.exit(e)

    try:
        # Create session object and invoke subcommand
        Session(config)(options)

    except MultalignError as e:
        sys.exit(f"ERROR: {e}")


if __name__ == "__main__":
    main()
