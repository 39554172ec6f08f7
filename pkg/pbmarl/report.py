import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .aggregation import VoteProfile, get_rule
from .errors import ReportInputError
from .io.results import INCOMPLETE, MANIFEST, read_ballots, read_csv, read_manifest
from .metrics import (
    MEASURES,
    QUARTILES,
    STATISTICS,
    build_table,
    cost_quartile_distribution,
    satisfaction_cdf,
    welfare_vectors,
)

logger = logging.getLogger(__name__)

SOURCES = ("actual", "untrained", "trained")

TABLE4_COLUMNS = [
    "rule",
    "measure",
    "statistic",
    "unit",
    "actual_mean",
    "actual_std",
    "marl_mean",
    "marl_std",
    "untrained_mean",
    "untrained_std",
    "runs",
    "scale",
]
FIG4_COLUMNS = [
    "rule",
    "episode",
    "mean_reward_mean",
    "mean_reward_std",
    "mean_loss_mean",
    "mean_loss_std",
    "runs",
]
FIG5_COLUMNS = ["rule", "source", "quartile", "share_mean", "share_std", "runs"]
FIG6_COLUMNS = ["rule", "source", "measure", "threshold", "proportion_mean", "proportion_std", "runs"]


@dataclass
class RunResult:
    """
    Outputs of one completed simulation run, with the matching actual ballots
    """

    path: Path
    manifest: dict
    rule: str
    profiles: dict
    log: pd.DataFrame
    full_scale: bool


def expand_run_dirs(paths):
    """Run directories among the given paths, `rep_*` sub-directories included"""
    runs = []
    for path in map(Path, paths):
        if not (path / MANIFEST).exists() and not (path / INCOMPLETE).exists():
            reps = sorted(p for p in path.glob("rep_*") if p.is_dir())
            if reps:
                runs.extend(reps)
                continue
        runs.append(path)
    if not runs:
        raise ReportInputError("no run directories given")
    return runs


def load_run(path, election):
    """Reads a run directory and restricts the actual ballots to its voters

    Args:
      path: Run directory written by the simulate command
      election: Full ElectionInstance of the actual election

    Returns:
      RunResult
    """
    manifest = read_manifest(path)
    trained = read_ballots(Path(path) / "ballots_trained.csv")
    untrained = read_ballots(Path(path) / "ballots_untrained.csv")
    historical = {v.id: v.historical_ballot for v in election.voters}
    missing = [vid for vid in trained if vid not in historical]
    if missing:
        raise ReportInputError(f"{path}: voters {missing[:3]} are not in the actual election")
    actual = VoteProfile({vid: historical[vid] for vid in trained})
    return RunResult(
        path=Path(path),
        manifest=manifest,
        rule=manifest["config"]["rule"],
        profiles={"actual": actual, "untrained": untrained, "trained": trained},
        log=read_csv(Path(path) / "training_log.csv", keep_default_na=True),
        full_scale=len(trained) == election.n_voters,
    )


def _mean_std(values):
    x = np.asarray(values, dtype=np.float64)
    return float(x.mean()), float(x.std())


def _by_rule(runs):
    rules = {}
    for run in runs:
        rules.setdefault(run.rule, []).append(run)
    return sorted(rules.items())


def table4_rows(runs, election):
    """Fairness of actual, untrained and trained ballots per rule, across runs"""
    rows = []
    for rule, group in _by_rule(runs):
        reports = {s: [] for s in SOURCES}
        for run in group:
            actual, trained = build_table(
                run.profiles["actual"], run.profiles["trained"], election, rule
            )
            _, untrained = build_table(
                run.profiles["actual"], run.profiles["untrained"], election, rule
            )
            reports["actual"].append(actual)
            reports["trained"].append(trained)
            reports["untrained"].append(untrained)
        scale = "full" if all(r.full_scale for r in group) else "reduced-scale"
        for measure in MEASURES:
            for statistic in STATISTICS:
                row = {
                    "rule": rule,
                    "measure": measure,
                    "statistic": statistic,
                    "unit": reports["actual"][0][measure].unit,
                    "runs": len(group),
                    "scale": scale,
                }
                for source, prefix in zip(SOURCES, ("actual", "untrained", "marl")):
                    values = [getattr(r[measure], statistic) for r in reports[source]]
                    row[f"{prefix}_mean"], row[f"{prefix}_std"] = _mean_std(values)
                rows.append(row)
    return rows


def fig5_rows(runs, election):
    """Token share per cost quartile of each ballot source"""
    rows = []
    for rule, group in _by_rule(runs):
        for source in SOURCES:
            shares = np.array(
                [cost_quartile_distribution(run.profiles[source], election) for run in group]
            )
            for k, quartile in enumerate(QUARTILES):
                mean, std = _mean_std(shares[:, k])
                rows.append(
                    {
                        "rule": rule,
                        "source": source,
                        "quartile": quartile,
                        "share_mean": mean,
                        "share_std": std,
                        "runs": len(group),
                    }
                )
    return rows


def fig6_rows(runs, election, bins=10):
    """Proportion of voters reaching each satisfaction threshold"""
    rows = []
    rule_objects = {}
    for rule, group in _by_rule(runs):
        rule_objects.setdefault(rule, get_rule(rule))
        for source in SOURCES:
            curves = {m: [] for m in ("satisfaction_project", "satisfaction_cost")}
            for run in group:
                profile = run.profiles[source]
                winners = rule_objects[rule](profile, election)
                vectors = welfare_vectors(profile, winners, election)
                for measure in curves:
                    thresholds, proportions = satisfaction_cdf(vectors[measure].array(), bins)
                    curves[measure].append(proportions)
            for measure, values in curves.items():
                values = np.array(values)
                for k, threshold in enumerate(thresholds):
                    mean, std = _mean_std(values[:, k])
                    rows.append(
                        {
                            "rule": rule,
                            "source": source,
                            "measure": measure,
                            "threshold": threshold,
                            "proportion_mean": mean,
                            "proportion_std": std,
                            "runs": len(group),
                        }
                    )
    return rows


def fig4_rows(runs):
    """Validation reward and loss per validation episode, averaged across runs"""
    rows = []
    for rule, group in _by_rule(runs):
        logs = [run.log[run.log["kind"] == "validation"].reset_index(drop=True) for run in group]
        length = min(len(log) for log in logs)
        for k in range(length):
            rewards = [float(log.loc[k, "mean_reward"]) for log in logs]
            losses = [float(log.loc[k, "mean_loss"]) for log in logs]
            reward_mean, reward_std = _mean_std(rewards)
            loss_mean, loss_std = _mean_std(losses)
            rows.append(
                {
                    "rule": rule,
                    "episode": int(logs[0].loc[k, "episode"]),
                    "mean_reward_mean": reward_mean,
                    "mean_reward_std": reward_std,
                    "mean_loss_mean": loss_mean,
                    "mean_loss_std": loss_std,
                    "runs": len(group),
                }
            )
    return rows
