from .base import AggregationRule, VoteProfile, get_rule

from .greedy import Greedy, greedy

from .equal_shares import EqualShares, equal_shares, equal_shares_phase
