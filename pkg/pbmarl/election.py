from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from math import comb

import numpy as np

from .errors import (
    ConfigError,
    EmptyImpactAreas,
    IndexOutOfRange,
    NoFeasibleProject,
    NonNumericCost,
    TokenCountMissing,
    UnknownProject,
)


@dataclass(frozen=True)
class Project:
    """
    A costed proposal contributing to one or more impact areas
    """

    id: str
    cost: int
    impact_areas: frozenset
    name: str = ""

    def __post_init__(self):
        if self.cost <= 0:
            raise NonNumericCost(f"project {self.id}: cost must be positive, got {self.cost}")
        if not self.impact_areas:
            raise EmptyImpactAreas(f"project {self.id} has no impact areas")
        object.__setattr__(self, "impact_areas", frozenset(self.impact_areas))


@dataclass(frozen=True, eq=False)
class CumulativeBallot:
    """
    Assignment of tokens to projects, zero entries are dropped
    """

    assignments: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self,
            "assignments",
            {pid: int(t) for pid, t in self.assignments.items() if t != 0},
        )
        if any(t < 0 for t in self.assignments.values()):
            raise ValueError("token counts must be non-negative")

    def __eq__(self, other):
        if not isinstance(other, CumulativeBallot):
            return NotImplemented
        return self.assignments == other.assignments

    def __hash__(self):
        return hash(frozenset(self.assignments.items()))

    def __getitem__(self, project_id):
        return self.assignments.get(project_id, 0)

    def __iter__(self):
        return iter(self.assignments)

    def __len__(self):
        return len(self.assignments)

    def items(self):
        return self.assignments.items()

    @property
    def total(self):
        return sum(self.assignments.values())

    @property
    def voted_for(self):
        """Ids of projects that received at least one token"""
        return frozenset(self.assignments)


@dataclass(frozen=True)
class VoterProfile:
    id: str
    favoured_areas: frozenset
    historical_ballot: CumulativeBallot


@dataclass(frozen=True)
class WinningSet:
    """
    Budget-feasible set of selected projects

    Project ids are kept in selection order; `phases` names the phase of the
    aggregation rule that selected each of them.
    """

    project_ids: tuple = ()
    total_cost: int = 0
    phases: tuple = ()

    def __contains__(self, project_id):
        return project_id in self._members

    def __iter__(self):
        return iter(self.project_ids)

    def __len__(self):
        return len(self.project_ids)

    @cached_property
    def _members(self):
        return frozenset(self.project_ids)


@dataclass(frozen=True)
class ElectionInstance:
    """
    A participatory budgeting election with cumulative ballots

    Costs and budget are integers in units of `1 / cost_scale` of the
    election currency.
    """

    projects: tuple
    budget: int
    tokens: int
    voters: tuple = ()
    currency: str = ""
    cost_scale: int = 1
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "projects", tuple(self.projects))
        object.__setattr__(self, "voters", tuple(self.voters))
        if self.tokens < 1:
            raise TokenCountMissing(f"tokens per voter must be >= 1, got {self.tokens}")
        if not any(p.cost <= self.budget for p in self.projects):
            raise NoFeasibleProject("no project fits within the budget")

    @cached_property
    def lookup(self):
        return {p.id: p for p in self.projects}

    @cached_property
    def project_index(self):
        return {p.id: i for i, p in enumerate(self.projects)}

    @cached_property
    def impact_areas(self):
        """Sorted union of all project impact areas"""
        return tuple(sorted(set().union(*(p.impact_areas for p in self.projects))))

    @property
    def n_projects(self):
        return len(self.projects)

    @property
    def n_voters(self):
        return len(self.voters)

    def currency_cost(self, project_id):
        """Cost of a project in whole currency units"""
        return self.lookup[project_id].cost / self.cost_scale

    def subsample(self, n, rng):
        """Restricts the election to a uniform random subset of voters

        Args:
          n: Number of voters to keep
          rng: numpy Generator

        Returns:
          Election with the same projects and budget and n voters in original order
        """
        if not 1 <= n <= self.n_voters:
            raise ConfigError(f"cannot subsample {n} of {self.n_voters} voters")
        keep = np.sort(rng.choice(self.n_voters, size=n, replace=False))
        return replace(self, voters=tuple(self.voters[i] for i in keep))

    def historical_profile(self):
        from .aggregation.base import VoteProfile

        return VoteProfile({v.id: v.historical_ballot for v in self.voters})


def derive_preferences(ballot, projects):
    """Impact areas a voter is assumed to favour given a ballot

    Args:
      ballot: CumulativeBallot
      projects: Iterable of Project or mapping from project id to Project

    Returns:
      Union of the impact areas of all projects with at least one token
    """
    lookup = projects if isinstance(projects, dict) else {p.id: p for p in projects}
    areas = set()
    for pid in ballot.voted_for:
        if pid not in lookup:
            raise UnknownProject(f"ballot references unknown project {pid}")
        areas |= lookup[pid].impact_areas
    return frozenset(areas)


def decode_action(branch_choices, projects):
    """Converts the per-branch project choices of an agent into a ballot

    The number of times a project index appears is its token count.

    Args:
      branch_choices: Sequence of T project indices
      projects: Sequence of Project in file order

    Returns:
      CumulativeBallot spending exactly T tokens
    """
    n = len(projects)
    counts = Counter()
    for choice in branch_choices:
        choice = int(choice)
        if not 0 <= choice < n:
            raise IndexOutOfRange(f"project index {choice} not in [0, {n})")
        counts[projects[choice].id] += 1
    return CumulativeBallot(dict(counts))


def action_space_size(n_projects, n_tokens):
    """Size of the action space with and without branching

    Returns:
      Tuple (branched, unbranched): P * T outputs for the branching network,
      and the number of multisets of T tokens over P projects
    """
    return n_projects * n_tokens, comb(n_projects + n_tokens - 1, n_tokens)
