import logging
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ConfigError, EmptyInput
from .base import AggregationRule, greedy_fill, make_winning_set

logger = logging.getLogger(__name__)

COMPLETIONS = ("greedy", None)


@dataclass
class EqualSharesTrace:
    """
    Outcome of the equal-shares phase before completion

    Balances and charges are exact fractions of the budget currency unit.
    """

    selected: list = field(default_factory=list)
    rhos: list = field(default_factory=list)
    charges: list = field(default_factory=list)
    start_balance: Fraction = Fraction(0)
    balances: dict = field(default_factory=dict)


def min_rho(cost, supporters, balance):
    """Smallest price per unit of utility at which supporters can pay for a project

    Args:
      cost: Cost of the project
      supporters: List of (voter id, utility) pairs with positive utility
      balance: Mapping from voter id to remaining balance

    Returns:
      Fraction rho with sum of min(balance, rho * utility) equal to cost, or
      None if the supporters cannot afford the project
    """
    if sum(balance[v] for v, _ in supporters) < cost:
        return None
    remaining = Fraction(cost)
    utility = sum(u for _, u in supporters)
    # supporters sorted by the rho at which they run out of money
    for v, u in sorted(supporters, key=lambda vu: balance[vu[0]] / vu[1]):
        rho = remaining / utility
        if rho * u <= balance[v]:
            return rho
        remaining -= balance[v]
        utility -= u
    return None


def equal_shares_phase(profile, election):
    """Runs the method of equal shares without completion

    Utilities are token counts. Every voter starts with budget / n.

    Args:
      profile: VoteProfile
      election: ElectionInstance

    Returns:
      EqualSharesTrace
    """
    if len(profile) == 0:
        raise EmptyInput("equal shares needs at least one voter")
    start = Fraction(election.budget, len(profile))
    balance = {v: start for v in profile}
    supporters = {}
    projects_of = {v: [] for v in profile}
    for v, ballot in profile.items():
        for pid, tokens in ballot.items():
            supporters.setdefault(pid, []).append((v, tokens))
            projects_of[v].append(pid)

    trace = EqualSharesTrace(start_balance=start)
    rho = {}
    dirty = set(supporters)
    while True:
        for pid in dirty:
            if pid in supporters:
                rho[pid] = min_rho(election.lookup[pid].cost, supporters[pid], balance)
                if rho[pid] is None:
                    del rho[pid]
                    del supporters[pid]
        if not rho:
            break
        best = min(
            rho,
            key=lambda pid: (rho[pid], election.lookup[pid].cost, pid),
        )
        price = rho.pop(best)
        charges = {}
        for v, u in supporters.pop(best):
            pay = min(balance[v], price * u)
            balance[v] -= pay
            charges[v] = pay
        trace.selected.append(best)
        trace.rhos.append(price)
        trace.charges.append(charges)
        dirty = {pid for v in charges for pid in projects_of[v] if pid in supporters}
        logger.debug("equal shares selects %s at rho=%s", best, price)
    trace.balances = balance
    return trace


class EqualShares(AggregationRule):
    """
    Method of equal shares with utilitarian greedy completion

    Each voter controls an equal part of the budget. A project is bought when
    its supporters can jointly pay its cost, the project needing the lowest
    price per token is bought first, and the unspent budget is finally spent
    by utilitarian greedy over the remaining projects.
    """

    name = "equalshares"

    def __init__(self, completion="greedy"):
        """Constructor

        Args:
          completion: `greedy`, or None to stop after the equal-shares phase
        """
        if completion not in COMPLETIONS:
            raise ConfigError(f"unknown completion {completion!r}")
        self.completion = completion

    def aggregate(self, profile, election):
        trace = equal_shares_phase(profile, election)
        selections = [(pid, self.name) for pid in trace.selected]
        if self.completion == "greedy":
            spent = sum(election.lookup[pid].cost for pid in trace.selected)
            chosen, _ = greedy_fill(
                profile.scores,
                election,
                election.budget - spent,
                selected=trace.selected,
            )
            selections += [(pid, "completion") for pid in chosen]
        return make_winning_set(election, selections)


def equal_shares(profile, election, completion="greedy"):
    return EqualShares(completion)(profile, election)
