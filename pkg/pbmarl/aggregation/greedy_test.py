import unittest

import numpy as np

from pbmarl.aggregation import Greedy, VoteProfile, greedy
from pbmarl.aggregation.rule_test import RuleTest
from pbmarl.election import CumulativeBallot
from pbmarl.testing import make_election, random_election, toy_election


def brute_force_greedy(profile, election):
    """Repeatedly funds the best project that still fits"""
    chosen = []
    remaining = election.budget
    while True:
        candidates = [
            p for p in election.projects if p.id not in chosen and p.cost <= remaining
        ]
        if not candidates:
            return chosen
        best = min(candidates, key=lambda p: (-profile.scores[p.id], p.cost, p.id))
        chosen.append(best.id)
        remaining -= best.cost


class GreedyTest(RuleTest):
    def test_single_project(self):
        election = make_election({"a": 10}, 10, 1, ballots={"x": {"a": 1}})
        winners = self.checkFeasible(Greedy(), election.historical_profile(), election)
        self.assertEqual(winners.project_ids, ("a",))
        self.assertEqual(winners.phases, ("greedy",))

    def test_hand_trace(self):
        election = make_election(
            {"A": 60, "B": 50, "C": 50}, 100, 23, ballots={"x": {"A": 10, "B": 8, "C": 5}}
        )
        winners = greedy(election.historical_profile(), election)
        self.assertEqual(winners.project_ids, ("A",))
        self.assertEqual(winners.total_cost, 60)

    def test_toy(self):
        election = toy_election()
        winners = greedy(election.historical_profile(), election)
        self.assertEqual(winners.project_ids, ("p3", "p1"))
        self.assertEqual(winners.total_cost, 90)

    def test_ties(self):
        election = make_election({"b": 30, "a": 30, "c": 20}, 50, 1)
        profile = VoteProfile({})
        # all scores zero: cheapest first, then lexicographic id
        winners = greedy(profile, election)
        self.assertEqual(winners.project_ids, ("c", "a"))

    def test_unvoted_projects_fill_budget(self):
        election = make_election({"a": 50, "b": 40}, 100, 1, ballots={"x": {"a": 1}})
        winners = greedy(election.historical_profile(), election)
        self.assertEqual(winners.project_ids, ("a", "b"))

    def test_empty_ballots(self):
        election = make_election({"a": 5}, 10, 2)
        profile = VoteProfile({"x": CumulativeBallot()})
        self.assertEqual(greedy(profile, election).project_ids, ("a",))

    def test_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            election = random_election(
                rng, int(rng.integers(1, 7)), int(rng.integers(1, 6)), int(rng.integers(1, 5))
            )
            profile = election.historical_profile()
            winners = self.checkFeasible(Greedy(), profile, election)
            self.assertEqual(list(winners.project_ids), brute_force_greedy(profile, election))

    def test_raising_winner_score_keeps_it(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            election = random_election(rng, int(rng.integers(1, 7)), int(rng.integers(1, 6)), 3)
            profile = election.historical_profile()
            winners = greedy(profile, election)
            for pid in winners:
                ballots = dict(profile.items())
                ballots["extra"] = CumulativeBallot({pid: int(rng.integers(1, 4))})
                self.assertIn(pid, greedy(VoteProfile(ballots), election))

    def test_score_scaling(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            election = random_election(rng, int(rng.integers(1, 7)), int(rng.integers(1, 6)), 3)
            profile = election.historical_profile()
            winners = greedy(profile, election)
            for factor in (2, 3, 7):
                scaled = VoteProfile(
                    {
                        vid: CumulativeBallot({pid: factor * n for pid, n in ballot.items()})
                        for vid, ballot in profile.items()
                    }
                )
                self.assertEqual(greedy(scaled, election).project_ids, winners.project_ids)


if __name__ == "__main__":
    unittest.main()
