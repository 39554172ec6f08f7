from collections import Counter
from functools import cached_property

from ..election import WinningSet
from ..errors import ConfigError


class VoteProfile:
    """
    Cumulative ballots of all voters of one election, keyed by voter id
    """

    def __init__(self, ballots):
        """Constructor

        Args:
          ballots: Mapping from voter id to CumulativeBallot, order is kept
        """
        self.ballots = dict(ballots)

    def __len__(self):
        return len(self.ballots)

    def __iter__(self):
        return iter(self.ballots)

    def __getitem__(self, voter_id):
        return self.ballots[voter_id]

    def __eq__(self, other):
        if not isinstance(other, VoteProfile):
            return NotImplemented
        return self.ballots == other.ballots

    def items(self):
        return self.ballots.items()

    @cached_property
    def scores(self):
        """Total tokens per project id"""
        scores = Counter()
        for ballot in self.ballots.values():
            for pid, tokens in ballot.items():
                scores[pid] += tokens
        return scores


class AggregationRule:
    """
    Generic class for ballot aggregation rules
    """

    name = None

    def __call__(self, profile, election):
        return self.aggregate(profile, election)

    def aggregate(self, profile, election):
        """
        Args:
          profile: VoteProfile over the projects of election
          election: ElectionInstance providing projects and budget

        Returns:
          WinningSet with total cost within the budget
        """
        raise NotImplementedError("Aggregation has not been implemented.")


def greedy_key(score, project):
    """Ordering of projects for greedy selection, most popular first

    Ties go to the cheaper project, then to the lexicographically smaller id.
    """
    return (-score, project.cost, project.id)


def greedy_fill(scores, election, budget, selected=()):
    """Adds projects by decreasing score while they fit the remaining budget

    Args:
      scores: Mapping from project id to score
      election: ElectionInstance
      budget: Budget available to this phase
      selected: Projects already selected, excluded from this phase

    Returns:
      Tuple of selected project ids and the amount spent
    """
    taken = set(selected)
    chosen = []
    spent = 0
    order = sorted(
        (p for p in election.projects if p.id not in taken),
        key=lambda p: greedy_key(scores.get(p.id, 0), p),
    )
    for project in order:
        if spent + project.cost <= budget:
            chosen.append(project.id)
            spent += project.cost
    return chosen, spent


def make_winning_set(election, selections):
    """Builds a WinningSet from (project id, phase) pairs in selection order"""
    ids = tuple(pid for pid, _ in selections)
    return WinningSet(
        project_ids=ids,
        total_cost=sum(election.lookup[pid].cost for pid in ids),
        phases=tuple(phase for _, phase in selections),
    )


def get_rule(name):
    """Instantiates an aggregation rule by its CLI name

    Args:
      name: `greedy` or `equalshares`

    Returns:
      AggregationRule
    """
    from .equal_shares import EqualShares
    from .greedy import Greedy

    rules = {Greedy.name: Greedy, EqualShares.name: EqualShares}
    if name not in rules:
        raise ConfigError(f"unknown rule {name!r}, choose from {sorted(rules)}")
    return rules[name]()
