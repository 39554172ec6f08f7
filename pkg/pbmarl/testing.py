"""
Small elections shared by the test suite
"""

import os
from pathlib import Path

from .election import CumulativeBallot, ElectionInstance, Project, VoterProfile, derive_preferences
from .io.pabulib import DATA_DIR_ENV, build_election, parse_pb

SLOW_TESTS_ENV = "PBMARL_SLOW_TESTS"

TOY_PB = """META
key;value
description;Toy district
currency;CHF
num_projects;5
num_votes;4
budget;100
vote_type;cumulative
max_sum_points;3
PROJECTS
project_id;cost;name;category
p1;60;Park;environment,culture
p2;50;Library;culture,education
p3;30;Bike lane;transport
p4;20;Mural;culture
p5;40;School garden;education,environment
VOTES
voter_id;vote;points
v1;p1,p4;2,1
v2;p2,p3;1,2
v3;p3;3
v4;p5,p1,p2;1,1,1
"""

MINIMAL_PB = """META
key;value
budget;10
num_tokens;1
PROJECTS
project_id;cost;category
a;10;culture
VOTES
voter_id;vote;points
x;a;1
"""

DATASETS = {
    "aarau": "*aarau*.pb",
    "toulouse": "*toulouse*.pb",
}


def toy_election():
    return build_election(parse_pb(TOY_PB))


def make_election(costs, budget, tokens, areas=None, ballots=None, currency=""):
    """Builds an election from plain values

    Args:
      costs: Mapping from project id to integer cost
      budget: Integer budget
      tokens: Tokens per voter
      areas: Mapping from project id to impact areas, one area per project if None
      ballots: Mapping from voter id to token assignments

    Returns:
      ElectionInstance
    """
    areas = areas or {pid: {f"area_{pid}"} for pid in costs}
    projects = [Project(pid, cost, frozenset(areas[pid])) for pid, cost in costs.items()]
    voters = [
        VoterProfile(vid, derive_preferences(CumulativeBallot(a), projects), CumulativeBallot(a))
        for vid, a in (ballots or {}).items()
    ]
    return ElectionInstance(projects, budget, tokens, voters, currency=currency)


def random_election(rng, n_projects, n_voters, tokens, n_areas=3, max_cost=100):
    """Random election with at least one affordable project

    Voters spend between 0 and `tokens` tokens each.

    Args:
      rng: numpy Generator
    """
    area_names = [f"area{k}" for k in range(n_areas)]
    costs = {f"p{i}": int(rng.integers(1, max_cost + 1)) for i in range(n_projects)}
    areas = {}
    for pid in costs:
        k = int(rng.integers(1, n_areas + 1))
        areas[pid] = set(rng.choice(area_names, size=k, replace=False).tolist())
    budget = int(rng.integers(min(costs.values()), sum(costs.values()) + 1))
    ids = list(costs)
    ballots = {}
    for v in range(n_voters):
        spent = int(rng.integers(0, tokens + 1))
        assignment = {}
        for choice in rng.integers(n_projects, size=spent):
            assignment[ids[choice]] = assignment.get(ids[choice], 0) + 1
        ballots[f"v{v}"] = assignment
    return make_election(costs, budget, tokens, areas, ballots)


def find_dataset(name):
    """Path of a real election file in PBMARL_DATA_DIR or data/, None if absent"""
    roots = [Path(__file__).resolve().parent.parent / "data"]
    if os.environ.get(DATA_DIR_ENV):
        roots.insert(0, Path(os.environ[DATA_DIR_ENV]))
    for root in roots:
        matches = sorted(root.glob(DATASETS[name])) if root.is_dir() else []
        if matches:
            return matches[0]
    return None


def slow_tests_enabled():
    return os.environ.get(SLOW_TESTS_ENV, "") not in ("", "0")
