import numpy as np

from ..errors import TooFewProjects

QUARTILES = ("small", "medium", "large", "xlarge")


def cost_quartiles(election):
    """Projects split into four buckets by increasing cost

    Ties in cost are ordered by project id; when P is not divisible by four the
    lower buckets take the extra projects.

    Returns:
      List of four lists of project ids
    """
    n = election.n_projects
    if n < 4:
        raise TooFewProjects(f"need at least 4 projects for quartiles, got {n}")
    ranked = [p.id for p in sorted(election.projects, key=lambda p: (p.cost, p.id))]
    sizes = [n // 4 + (1 if i < n % 4 else 0) for i in range(4)]
    bounds = np.cumsum([0] + sizes)
    return [ranked[bounds[i] : bounds[i + 1]] for i in range(4)]


def cost_quartile_distribution(profile, election):
    """Share of all possible tokens assigned to each cost quartile

    Returns:
      Array of four shares (small, medium, large, xlarge) summing to at most 1
    """
    buckets = cost_quartiles(election)
    possible = len(profile) * election.tokens
    if possible == 0:
        return np.zeros(4)
    scores = profile.scores
    return np.array([sum(scores[pid] for pid in bucket) / possible for bucket in buckets])


def satisfaction_cdf(values, bins=10):
    """Proportion of voters reaching at least each satisfaction threshold

    Args:
      values: Satisfaction values in [0, 1]
      bins: Number of equal-width steps between 0 and 1

    Returns:
      Thresholds k / bins for k = 0..bins and the matching proportions
    """
    x = np.asarray(values, dtype=np.float64)
    thresholds = np.arange(bins + 1) / bins
    if x.size == 0:
        return thresholds, np.zeros_like(thresholds)
    # tolerance absorbs float error in values such as 3 / 10
    proportions = np.array([np.mean(x >= t - 1e-12) for t in thresholds])
    return thresholds, proportions
