import unittest

from pbmarl.aggregation import VoteProfile, get_rule
from pbmarl.election import CumulativeBallot
from pbmarl.errors import ConfigError
from pbmarl.testing import toy_election


class RuleTest(unittest.TestCase):
    """
    Generic test case for aggregation rules
    """

    def checkFeasible(self, rule, profile, election):
        winners = rule(profile, election)
        # Check budget
        assert winners.total_cost <= election.budget
        assert winners.total_cost == sum(election.lookup[pid].cost for pid in winners)
        # Check ids
        assert len(set(winners.project_ids)) == len(winners)
        assert all(pid in election.lookup for pid in winners)
        assert len(winners.phases) == len(winners)
        return winners


class ProfileTest(unittest.TestCase):
    def test_scores(self):
        profile = toy_election().historical_profile()
        self.assertEqual(profile.scores["p1"], 3)
        self.assertEqual(profile.scores["p3"], 5)
        self.assertEqual(profile.scores["p9"], 0)
        self.assertEqual(len(profile), 4)
        self.assertEqual(list(profile), ["v1", "v2", "v3", "v4"])

    def test_equality(self):
        a = VoteProfile({"x": CumulativeBallot({"p1": 1})})
        b = VoteProfile({"x": CumulativeBallot({"p1": 1, "p2": 0})})
        self.assertEqual(a, b)

    def test_get_rule(self):
        self.assertEqual(get_rule("greedy").name, "greedy")
        self.assertEqual(get_rule("equalshares").name, "equalshares")
        with self.assertRaises(ConfigError):
            get_rule("borda")


class ToyRulesTest(RuleTest):
    def test_toy(self):
        election = toy_election()
        profile = election.historical_profile()
        for name in ("greedy", "equalshares"):
            with self.subTest(rule=name):
                self.checkFeasible(get_rule(name), profile, election)


if __name__ == "__main__":
    unittest.main()
