import json
from pathlib import Path

import pandas as pd

from ..aggregation import VoteProfile
from ..election import CumulativeBallot
from ..errors import ReportInputError

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.6g"
MANIFEST = "manifest.json"
INCOMPLETE = "INCOMPLETE"

WINNERS_COLUMNS = ["project_id", "cost", "score", "phase"]
FAIRNESS_COLUMNS = ["rule", "measure", "statistic", "value", "unit"]
BALLOT_COLUMNS = ["voter_id", "project_id", "tokens"]
TRAINING_LOG_COLUMNS = [
    "episode",
    "kind",
    "mean_reward",
    "reward_q1",
    "reward_q3",
    "mean_loss",
    "loss_q1",
    "loss_q3",
]


def write_csv(rows, columns, path):
    """Writes rows with a fixed header, floats with 6 significant digits

    Args:
      rows: List of dicts or DataFrame
      columns: Header, in order
      path: Output path
    """
    frame = pd.DataFrame(rows, columns=columns)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_csv(path, **kwargs):
    path = Path(path)
    if not path.exists():
        raise ReportInputError(f"missing {path}")
    kwargs.setdefault("keep_default_na", False)
    return pd.read_csv(path, dtype={"voter_id": str, "project_id": str}, **kwargs)


def winners_rows(winners, profile, election):
    return [
        {
            "project_id": pid,
            "cost": election.currency_cost(pid),
            "score": profile.scores[pid],
            "phase": phase,
        }
        for pid, phase in zip(winners.project_ids, winners.phases)
    ]


def fairness_rows(report, rule):
    return [
        {"rule": rule, "measure": m, "statistic": s, "value": v, "unit": u}
        for m, s, v, u in report.rows()
    ]


def ballot_rows(profile, election):
    """One row per non-zero assignment, voters without tokens get an empty row"""
    rows = []
    for vid, ballot in profile.items():
        if len(ballot) == 0:
            rows.append({"voter_id": vid, "project_id": "", "tokens": 0})
        for p in election.projects:
            if ballot[p.id] > 0:
                rows.append({"voter_id": vid, "project_id": p.id, "tokens": ballot[p.id]})
    return rows


def read_ballots(path):
    """Reads a ballot CSV written with ballot_rows

    Returns:
      VoteProfile in file order
    """
    frame = read_csv(path)
    if list(frame.columns) != BALLOT_COLUMNS:
        raise ReportInputError(f"{path}: unexpected header {list(frame.columns)}")
    assignments = {}
    for vid, pid, tokens in frame.itertuples(index=False):
        ballot = assignments.setdefault(vid, {})
        if pid:
            ballot[pid] = ballot.get(pid, 0) + int(tokens)
    return VoteProfile({vid: CumulativeBallot(a) for vid, a in assignments.items()})


def write_manifest(run_dir, manifest):
    with open(Path(run_dir) / MANIFEST, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def read_manifest(run_dir):
    run_dir = Path(run_dir)
    if not (run_dir / MANIFEST).exists():
        raise ReportInputError(f"{run_dir} has no {MANIFEST}")
    if (run_dir / INCOMPLETE).exists():
        raise ReportInputError(f"{run_dir} is marked {INCOMPLETE}")
    with open(run_dir / MANIFEST, encoding="utf-8") as f:
        return json.load(f)
