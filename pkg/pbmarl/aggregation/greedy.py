from .base import AggregationRule, greedy_fill, make_winning_set


class Greedy(AggregationRule):
    """
    Utilitarian greedy: fund the most popular affordable project until nothing fits

    The popularity of a project is the total number of tokens it received.
    """

    name = "greedy"

    def aggregate(self, profile, election):
        chosen, _ = greedy_fill(profile.scores, election, election.budget)
        return make_winning_set(election, [(pid, self.name) for pid in chosen])


def greedy(profile, election):
    return Greedy()(profile, election)
