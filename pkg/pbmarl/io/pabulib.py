import hashlib
import logging
import os
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path

from ..election import (
    CumulativeBallot,
    ElectionInstance,
    Project,
    VoterProfile,
    derive_preferences,
)
from ..errors import (
    BallotExceedsTokens,
    DataError,
    DuplicateProjectId,
    DuplicateVoterId,
    EmptyImpactAreas,
    MalformedRow,
    MissingBudget,
    MissingSection,
    NonNumericCost,
    TokenCountMissing,
    UnknownProject,
)

logger = logging.getLogger(__name__)

SECTIONS = ("META", "PROJECTS", "VOTES")
META_HEADER = ["key", "value"]
TOKEN_KEYS = ("max_sum_points", "num_tokens")
IMPACT_COLUMNS = ("impact_areas", "category", "categories")
DATA_DIR_ENV = "PBMARL_DATA_DIR"


@dataclass
class RawPbFile:
    """
    Field-level content of a .pb file, rows in file order
    """

    meta: dict = field(default_factory=dict)
    projects: list = field(default_factory=list)
    votes: list = field(default_factory=list)
    project_columns: list = field(default_factory=list)
    vote_columns: list = field(default_factory=list)


def _parse_cost(value, what):
    try:
        amount = Decimal(value.strip())
    except InvalidOperation:
        raise NonNumericCost(f"{what}: cannot parse cost {value!r}") from None
    if not amount.is_finite() or amount <= 0:
        raise NonNumericCost(f"{what}: cost must be positive, got {value!r}")
    return amount


def parse_pb(text):
    """Parses a PABULIB document

    Args:
      text: Content of a .pb file

    Returns:
      RawPbFile with rows in file order, unknown columns kept as strings
    """
    raw = RawPbFile()
    section = -1
    header = None
    meta_rows = 0
    project_ids = set()
    voter_ids = set()

    if text.startswith("\ufeff"):
        text = text[1:]
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        name = line.strip().upper()
        if name in SECTIONS:
            index = SECTIONS.index(name)
            if index != section + 1:
                raise MalformedRow(f"unexpected section {name}", lineno)
            section = index
            header = None
            continue
        if section < 0:
            raise MalformedRow("content before META section", lineno)
        fields = line.split(";")

        if section == 0:
            if len(fields) != 2:
                raise MalformedRow("META rows must be key;value", lineno)
            meta_rows += 1
            if meta_rows == 1 and [f.strip().lower() for f in fields] == META_HEADER:
                continue
            if fields[0] in raw.meta:
                raise MalformedRow(f"duplicate META key {fields[0]}", lineno)
            raw.meta[fields[0]] = fields[1]
            continue

        if header is None:
            header = fields
            key = "project_id" if section == 1 else "voter_id"
            if key not in header:
                raise MalformedRow(f"missing {key} column", lineno)
            if len(set(header)) != len(header):
                raise MalformedRow("duplicate column names", lineno)
            if section == 1:
                raw.project_columns = header
            else:
                raw.vote_columns = header
            continue
        if len(fields) != len(header):
            raise MalformedRow(f"expected {len(header)} fields, got {len(fields)}", lineno)
        row = dict(zip(header, fields))

        if section == 1:
            pid = row["project_id"]
            if not pid:
                raise MalformedRow("empty project_id", lineno)
            if pid in project_ids:
                raise DuplicateProjectId(f"line {lineno}: duplicate project_id {pid}")
            if "cost" not in row:
                raise MalformedRow("missing cost column", lineno)
            _parse_cost(row["cost"], f"line {lineno}")
            project_ids.add(pid)
            raw.projects.append(row)
        else:
            vid = row["voter_id"]
            if not vid:
                raise MalformedRow("empty voter_id", lineno)
            if vid in voter_ids:
                raise DuplicateVoterId(f"line {lineno}: duplicate voter_id {vid}")
            voter_ids.add(vid)
            raw.votes.append(row)

    if section < 2:
        raise MissingSection(f"missing section {SECTIONS[section + 1]}")
    return raw


def serialize_pb(raw):
    """Writes a RawPbFile back to .pb text

    Args:
      raw: RawPbFile

    Returns:
      Document which parses to a RawPbFile equal to raw
    """

    def join(fields):
        for f in fields:
            if ";" in f or "\n" in f or "\r" in f:
                raise MalformedRow(f"field {f!r} cannot be written without quoting")
        return ";".join(fields)

    lines = ["META", join(META_HEADER)]
    lines += [join([k, v]) for k, v in raw.meta.items()]
    lines += ["PROJECTS", join(raw.project_columns)]
    lines += [join([row[c] for c in raw.project_columns]) for row in raw.projects]
    lines += ["VOTES", join(raw.vote_columns)]
    lines += [join([row[c] for c in raw.vote_columns]) for row in raw.votes]
    return "\n".join(lines) + "\n"


def _split_list(value):
    return [s.strip() for s in value.split(",") if s.strip()]


def _decimals(amount):
    return max(0, -amount.as_tuple().exponent)


def build_election(raw, impact_column=None):
    """Materialises an election from a parsed file

    Args:
      raw: RawPbFile
      impact_column: Name of the project column holding comma separated impact
        areas, if None the first of `impact_areas`, `category`, `categories` found

    Returns:
      ElectionInstance with one VoterProfile per vote row
    """
    if "budget" not in raw.meta:
        raise MissingBudget("META has no budget entry")
    budget = _parse_cost(raw.meta["budget"], "budget")

    tokens = None
    for key in TOKEN_KEYS:
        if raw.meta.get(key, "").strip():
            try:
                tokens = int(raw.meta[key])
            except ValueError:
                raise TokenCountMissing(f"{key} is not an integer: {raw.meta[key]!r}") from None
            break
    if tokens is None:
        raise TokenCountMissing("META defines neither " + " nor ".join(TOKEN_KEYS))

    if impact_column is None:
        impact_column = next((c for c in IMPACT_COLUMNS if c in raw.project_columns), None)
    if impact_column is None or impact_column not in raw.project_columns:
        raise EmptyImpactAreas("no impact-area column among project columns")

    costs = [_parse_cost(row["cost"], row["project_id"]) for row in raw.projects]
    scale = 10 ** max(_decimals(a) for a in costs + [budget])

    projects = []
    for row, cost in zip(raw.projects, costs):
        areas = frozenset(_split_list(row[impact_column]))
        if not areas:
            raise EmptyImpactAreas(f"project {row['project_id']} has no impact areas")
        projects.append(
            Project(row["project_id"], int(cost * scale), areas, name=row.get("name", ""))
        )
    lookup = {p.id: p for p in projects}

    voters = []
    for row in raw.votes:
        vid = row["voter_id"]
        ids = _split_list(row.get("vote", ""))
        points = _split_list(row.get("points", ""))
        if not points:
            points = ["1"] * len(ids)
        if len(points) != len(ids):
            raise MalformedRow(f"voter {vid}: vote and points lists differ in length")
        assignments = {}
        for pid, p in zip(ids, points):
            if pid not in lookup:
                raise UnknownProject(f"voter {vid} votes for unknown project {pid}")
            try:
                n = int(p)
            except ValueError:
                raise MalformedRow(f"voter {vid}: non-integer points {p!r}") from None
            if n < 0:
                raise MalformedRow(f"voter {vid}: negative points {p!r} for {pid}")
            assignments[pid] = assignments.get(pid, 0) + n
        ballot = CumulativeBallot(assignments)
        if ballot.total > tokens:
            raise BallotExceedsTokens(f"voter {vid} assigns {ballot.total} > {tokens} tokens")
        voters.append(VoterProfile(vid, derive_preferences(ballot, lookup), ballot))

    election = ElectionInstance(
        projects=projects,
        budget=int(budget * scale),
        tokens=tokens,
        voters=voters,
        currency=raw.meta.get("currency", ""),
        cost_scale=scale,
        name=raw.meta.get("description", raw.meta.get("unit", "")),
    )
    logger.debug(
        "built election with %d projects, %d voters, %d impact areas",
        election.n_projects,
        election.n_voters,
        len(election.impact_areas),
    )
    return election


def resolve_data_path(path):
    """Resolves a dataset path, falling back to the PBMARL_DATA_DIR directory"""
    path = Path(path)
    if path.exists():
        return path
    root = os.environ.get(DATA_DIR_ENV)
    if root and (Path(root) / path).exists():
        return Path(root) / path
    raise DataError(f"dataset {path} not found (also looked in ${DATA_DIR_ENV})")


def load_election(path, impact_column=None):
    """Reads and builds an election from a .pb file

    Args:
      path: Path of the file, relative paths may live under PBMARL_DATA_DIR
      impact_column: See build_election

    Returns:
      ElectionInstance
    """
    path = resolve_data_path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except UnicodeDecodeError as e:
        raise DataError(f"{path} is not valid UTF-8: {e}") from None
    return build_election(parse_pb(text), impact_column=impact_column)


def dataset_checksum(path):
    """SHA-256 hex digest of a dataset file"""
    return hashlib.sha256(resolve_data_path(path).read_bytes()).hexdigest()
