import math
from dataclasses import dataclass

from .errors import UnknownWinnerProject


@dataclass(frozen=True)
class RewardContext:
    """
    Everything a voter's reward depends on in one episode

    `ballot_cast` is the ballot submitted in this episode, not the historical one.
    """

    voter: object
    ballot_cast: object
    winners: object
    tokens_total: int


def reward(ctx, projects, cost_scale=1):
    """Self-interested reward of a voter for a winning set

    Sums, over winning projects the voter put tokens on, the log cost of the
    project weighted by the share of the voter's favoured areas it covers, the
    share of its own areas the voter favours, and the share of the voter's
    tokens it received.

    Args:
      ctx: RewardContext
      projects: Mapping from project id to Project
      cost_scale: Divisor turning integer costs into currency units

    Returns:
      Non-negative reward, 0 for voters without favoured areas
    """
    favoured = ctx.voter.favoured_areas
    total = 0.0
    for pid in ctx.winners:
        if pid not in projects:
            raise UnknownWinnerProject(pid)
        if not favoured:
            continue
        tokens = ctx.ballot_cast[pid]
        if tokens == 0:
            continue
        areas = projects[pid].impact_areas
        overlap = len(favoured & areas)
        if overlap == 0:
            continue
        total += (
            math.log(projects[pid].cost / cost_scale)
            * (overlap / len(favoured))
            * (overlap / len(areas))
            * (tokens / ctx.tokens_total)
        )
    return total


def profile_rewards(election, voters, profile, winners):
    """Rewards of every voter in a profile

    Args:
      election: ElectionInstance
      voters: Sequence of VoterProfile, ballots are looked up by their id
      profile: VoteProfile of cast ballots
      winners: WinningSet

    Returns:
      List of rewards aligned with voters
    """
    return [
        reward(
            RewardContext(v, profile[v.id], winners, election.tokens),
            election.lookup,
            election.cost_scale,
        )
        for v in voters
    ]
