from dataclasses import dataclass, field

import numpy as np

from ..aggregation import get_rule
from ..errors import EmptyInput, ZeroVotesOnOwnVotedWinner

MEASURES = ("satisfaction_project", "satisfaction_cost", "share")
STATISTICS = ("gini", "egalitarian", "utilitarian")


def satisfaction_project(ballot, winners):
    """Fraction of the winning projects the voter put at least one token on"""
    if len(winners) == 0:
        return 0.0
    return sum(1 for pid in winners if ballot[pid] > 0) / len(winners)


def satisfaction_cost(ballot, winners, costs):
    """Fraction of the winning cost spent on projects the voter voted for

    Args:
      ballot: CumulativeBallot
      winners: WinningSet
      costs: Mapping from project id to cost
    """
    total = sum(costs[pid] for pid in winners)
    if total == 0:
        return 0.0
    return sum(costs[pid] for pid in winners if ballot[pid] > 0) / total


def share(ballot, winners, costs, profile):
    """Part of the winning cost attributable to a voter

    Every voted-for winner contributes its cost divided by the total number of
    tokens it received in the profile.

    Args:
      ballot: CumulativeBallot of the voter
      winners: WinningSet
      costs: Mapping from project id to cost in currency units
      profile: VoteProfile containing the ballot
    """
    value = 0.0
    for pid in winners:
        if ballot[pid] == 0:
            continue
        votes = profile.scores[pid]
        if votes == 0:
            raise ZeroVotesOnOwnVotedWinner(f"project {pid} has no votes in the profile")
        value += costs[pid] / votes
    return value


def gini(values):
    """Gini coefficient of non-negative values

    0 means perfect equality, 1 maximal inequality; 0 if all values are 0.
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size == 0:
        raise EmptyInput("gini of an empty sequence")
    total = x.sum()
    if total == 0:
        return 0.0
    n = x.size
    # sum_ij |x_i - x_j| / (2 n^2 mean) with x sorted ascending
    rank = np.arange(1, n + 1)
    return float(np.sum((2 * rank - n - 1) * x) / (n * total))


@dataclass
class WelfareVector:
    measure: str
    values: dict = field(default_factory=dict)

    def array(self):
        return np.fromiter(self.values.values(), dtype=np.float64, count=len(self.values))


@dataclass(frozen=True)
class WelfareSummary:
    gini: float
    egalitarian: float
    utilitarian: float
    unit: str = "fraction"


@dataclass
class WelfareReport:
    """
    Gini, egalitarian and per-voter utilitarian welfare for every measure
    """

    measures: dict = field(default_factory=dict)

    def __getitem__(self, measure):
        return self.measures[measure]

    def rows(self):
        """Yields (measure, statistic, value, unit) in a fixed order"""
        for measure in MEASURES:
            summary = self.measures[measure]
            for statistic in STATISTICS:
                yield measure, statistic, getattr(summary, statistic), summary.unit


def welfare_vectors(profile, winners, election):
    """Per-voter satisfaction and share for a profile and its winning set

    Returns:
      Dict from measure name to WelfareVector
    """
    costs = {p.id: p.cost / election.cost_scale for p in election.projects}
    vectors = {m: WelfareVector(m) for m in MEASURES}
    for vid, ballot in profile.items():
        vectors["satisfaction_project"].values[vid] = satisfaction_project(ballot, winners)
        vectors["satisfaction_cost"].values[vid] = satisfaction_cost(ballot, winners, costs)
        vectors["share"].values[vid] = share(ballot, winners, costs, profile)
    return vectors


def welfare_report(vectors, currency=""):
    """Aggregates welfare vectors into Gini, egalitarian and utilitarian welfare

    Utilitarian welfare is divided by the number of voters.
    """
    measures = {}
    for measure, vector in vectors.items():
        x = vector.array()
        if x.size == 0:
            raise EmptyInput("welfare of an empty population")
        measures[measure] = WelfareSummary(
            gini=gini(x),
            egalitarian=float(x.min()),
            utilitarian=float(x.mean()),
            unit=(currency or "currency") if measure == "share" else "fraction",
        )
    return WelfareReport(measures)


def profile_report(profile, election, rule):
    """Aggregates a profile with a rule and reports its welfare

    Args:
      profile: VoteProfile
      election: ElectionInstance
      rule: AggregationRule or its name

    Returns:
      WelfareReport, WinningSet
    """
    if isinstance(rule, str):
        rule = get_rule(rule)
    winners = rule(profile, election)
    return welfare_report(welfare_vectors(profile, winners, election), election.currency), winners


def build_table(actual, marl, election, rule):
    """Fairness of the collective choice of actual and learned ballots

    Returns:
      Pair of WelfareReport, actual first
    """
    actual_report, _ = profile_report(actual, election, rule)
    marl_report, _ = profile_report(marl, election, rule)
    return actual_report, marl_report
