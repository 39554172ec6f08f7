import argparse
import dataclasses
import logging
import os
import re
import sys
import time
from pathlib import Path

import torch

from . import __version__
from .aggregation import VoteProfile, get_rule
from .config import make_config, read_config_file
from .election import action_space_size
from .errors import ConfigError, ExperimentError, PbMarlError
from .io.pabulib import dataset_checksum, load_election
from .io.results import (
    BALLOT_COLUMNS,
    FAIRNESS_COLUMNS,
    INCOMPLETE,
    SCHEMA_VERSION,
    TRAINING_LOG_COLUMNS,
    WINNERS_COLUMNS,
    ballot_rows,
    fairness_rows,
    read_manifest,
    winners_rows,
    write_csv,
    write_manifest,
)
from .metrics import profile_report
from .report import (
    FIG4_COLUMNS,
    FIG5_COLUMNS,
    FIG6_COLUMNS,
    TABLE4_COLUMNS,
    expand_run_dirs,
    fig4_rows,
    fig5_rows,
    fig6_rows,
    load_run,
    table4_rows,
)
from .training import Simulation, training_log_rows

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1


class ArgumentParser(argparse.ArgumentParser):
    """
    Parser reporting usage errors with the configuration exit code
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ConfigError.exit_code, f"{self.prog}: error: {message}\n")


def configure_logging(verbosity, quiet=False):
    if quiet:
        level = logging.ERROR
    else:
        level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbosity, 2)]
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def checkpoint_name(voter_id):
    return "agent_" + re.sub(r"[^A-Za-z0-9_.-]", "_", voter_id) + ".pt"


def cmd_aggregate(args):
    rule = get_rule(args.rule)
    election = load_election(args.pb)
    profile = election.historical_profile()
    report, winners = profile_report(profile, election, rule)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(winners_rows(winners, profile, election), WINNERS_COLUMNS, out / "winners.csv")
    write_csv(fairness_rows(report, rule.name), FAIRNESS_COLUMNS, out / "fairness.csv")
    print(
        f"{rule.name}: {len(winners)} winners, total cost "
        f"{winners.total_cost / election.cost_scale:g} of "
        f"{election.budget / election.cost_scale:g} {election.currency}".rstrip()
    )
    return EXIT_OK


def _manifest(config, checksum, election, started, finished=None):
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": config.to_dict(),
        "seed": config.seed,
        "dataset": {"path": config.election_path, "sha256": checksum},
        "election": {
            "projects": election.n_projects,
            "voters": election.n_voters,
            "tokens": election.tokens,
        },
        "timing": {"started": started, "finished": finished},
    }


def simulate_run(config, election, run_dir, checksum, quiet=False):
    """Trains one repetition and writes its run directory

    The INCOMPLETE marker is removed only once every output is written.

    Args:
      config: ExperimentConfig of this repetition
      election: Full ElectionInstance
      run_dir: Output directory
      checksum: SHA-256 of the dataset, echoed in the manifest
      quiet: Disables the progress bar
    """
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    marker = run_dir / INCOMPLETE
    marker.touch()

    threads = config.threads or os.cpu_count() or 1
    if threads > 1:
        # agents run in parallel, each on a single intra-op thread
        torch.set_num_threads(1)
    sim = Simulation(dataclasses.replace(config, threads=threads), election)
    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    write_manifest(run_dir, _manifest(config, checksum, sim.election, started))

    untrained = sim.evaluate()
    records = sim.run(progress=not quiet)
    trained = sim.evaluate()

    write_csv(training_log_rows(records), TRAINING_LOG_COLUMNS, run_dir / "training_log.csv")
    for name, record in (("ballots_untrained", untrained), ("ballots_trained", trained)):
        write_csv(
            ballot_rows(VoteProfile(record.ballots), sim.election),
            BALLOT_COLUMNS,
            run_dir / f"{name}.csv",
        )
    checkpoints = run_dir / "checkpoints"
    checkpoints.mkdir(exist_ok=True)
    for agent in sim.agents:
        agent.save(checkpoints / checkpoint_name(agent.voter.id))

    finished = time.strftime("%Y-%m-%dT%H:%M:%S")
    write_manifest(run_dir, _manifest(config, checksum, sim.election, started, finished))
    marker.unlink()
    logger.info("run written to %s", run_dir)
    return records


def cmd_simulate(args):
    file_values = read_config_file(args.config) if args.config else {}
    config = make_config(
        file_values,
        {
            "election_path": args.data,
            "rule": args.rule,
            "seed": args.seed,
            "training_episodes": args.episodes,
            "voter_subsample": args.voters,
            "repetitions": args.repetitions,
            "threads": args.threads,
            "output_dir": args.out,
        },
    )
    if not config.election_path:
        raise ConfigError("no election given, use --data or election_path")
    election = load_election(config.election_path)
    checksum = dataset_checksum(config.election_path)
    out = Path(config.output_dir)
    for r in range(config.repetitions):
        run_config = dataclasses.replace(config, seed=config.seed + r)
        run_dir = out / f"rep_{r:02d}" if config.repetitions > 1 else out
        simulate_run(run_config, election, run_dir, checksum, quiet=args.quiet)
    return EXIT_OK


def cmd_report(args):
    run_dirs = expand_run_dirs(args.runs)
    data = args.data
    if data is None:
        data = read_manifest(run_dirs[0])["config"]["election_path"]
    election = load_election(data)
    runs = [load_run(path, election) for path in run_dirs]
    logger.info("reporting on %d runs", len(runs))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(table4_rows(runs, election), TABLE4_COLUMNS, out / "table4.csv")
    write_csv(fig4_rows(runs), FIG4_COLUMNS, out / "fig4_training.csv")
    write_csv(fig5_rows(runs, election), FIG5_COLUMNS, out / "fig5_cost_distribution.csv")
    write_csv(fig6_rows(runs, election, args.bins), FIG6_COLUMNS, out / "fig6_satisfaction_cdf.csv")
    return EXIT_OK


def cmd_validate_data(args):
    election = load_election(args.pb)
    branched, unbranched = action_space_size(election.n_projects, election.tokens)
    print(f"projects: {election.n_projects}")
    print(f"voters: {election.n_voters}")
    print(f"impact areas: {len(election.impact_areas)}")
    print(f"budget: {election.budget / election.cost_scale:g} {election.currency}".rstrip())
    print(f"tokens: {election.tokens}")
    print(f"action space: {branched} branched, {unbranched} unbranched")
    return EXIT_OK


def build_parser():
    parser = ArgumentParser(
        prog="pbmarl",
        description="Voting agents learning cumulative ballots in participatory budgeting",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true", help="errors only, no progress bar")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("aggregate", help="aggregate the actual ballots of an election")
    p.add_argument("pb", help=".pb file")
    p.add_argument("--rule", default="equalshares", help="greedy or equalshares")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("simulate", help="train one agent per voter")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--data", help=".pb file of the election")
    p.add_argument("--rule")
    p.add_argument("--seed", type=int)
    p.add_argument("--episodes", type=int)
    p.add_argument("--voters", type=int, help="random subset of voters")
    p.add_argument("--repetitions", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="run directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="fairness tables of completed runs")
    p.add_argument("runs", nargs="+", help="run directories or parents of rep_* directories")
    p.add_argument("--data", help=".pb file of the actual election, read from the manifest if omitted")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--bins", type=int, default=10)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("validate-data", help="check a .pb file and print its dimensions")
    p.add_argument("pb", help=".pb file")
    p.set_defaults(func=cmd_validate_data)
    return parser


def main(argv=None):
    """Runs the command line interface

    Returns:
      Exit code: 0 ok, 2 data error, 3 configuration error, 4 report input error
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return args.func(args)
    except ExperimentError as e:
        print(f"error: {e}", file=sys.stderr)
        return getattr(e.cause, "exit_code", EXIT_FAILURE)
    except PbMarlError as e:
        print(f"error: {e}", file=sys.stderr)
        return getattr(e, "exit_code", EXIT_FAILURE)


if __name__ == "__main__":
    sys.exit(main())
