import hashlib
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

import numpy as np

from pbmarl.election import CumulativeBallot
from pbmarl.errors import (
    BallotExceedsTokens,
    DataError,
    DuplicateProjectId,
    DuplicateVoterId,
    EmptyImpactAreas,
    MalformedRow,
    MissingBudget,
    MissingSection,
    NonNumericCost,
    TokenCountMissing,
    UnknownProject,
)
from pbmarl.io.pabulib import (
    DATA_DIR_ENV,
    RawPbFile,
    build_election,
    dataset_checksum,
    load_election,
    parse_pb,
    serialize_pb,
)
from pbmarl.testing import MINIMAL_PB, TOY_PB, find_dataset


def replace_line(text, old, new):
    assert old in text
    return text.replace(old, new, 1)


class ParseTest(unittest.TestCase):
    def test_minimal(self):
        raw = parse_pb(MINIMAL_PB)
        self.assertEqual(len(raw.projects), 1)
        self.assertEqual(len(raw.votes), 1)
        self.assertEqual(raw.meta, {"budget": "10", "num_tokens": "1"})

    def test_toy(self):
        raw = parse_pb(TOY_PB)
        self.assertEqual(raw.project_columns, ["project_id", "cost", "name", "category"])
        self.assertEqual(raw.vote_columns, ["voter_id", "vote", "points"])
        self.assertEqual([r["project_id"] for r in raw.projects], ["p1", "p2", "p3", "p4", "p5"])
        self.assertEqual(raw.votes[3]["vote"], "p5,p1,p2")
        self.assertEqual(raw.meta["currency"], "CHF")

    def test_line_endings_and_bom(self):
        expected = parse_pb(TOY_PB)
        self.assertEqual(parse_pb(TOY_PB.replace("\n", "\r\n")), expected)
        self.assertEqual(parse_pb("\ufeff" + TOY_PB), expected)
        self.assertEqual(parse_pb(TOY_PB.replace("VOTES\n", "\nVOTES\n\n")), expected)

    def test_missing_section(self):
        text = TOY_PB[: TOY_PB.index("VOTES")]
        with self.assertRaises(MissingSection):
            parse_pb(text)

    def test_sections_out_of_order(self):
        text = "PROJECTS\nproject_id;cost\na;1\n"
        with self.assertRaises(MalformedRow):
            parse_pb(text)

    def test_duplicate_ids(self):
        with self.assertRaises(DuplicateProjectId):
            parse_pb(replace_line(TOY_PB, "p2;50;", "p1;50;"))
        with self.assertRaises(DuplicateVoterId):
            parse_pb(replace_line(TOY_PB, "v2;p2,p3", "v1;p2,p3"))

    def test_malformed_row(self):
        text = replace_line(TOY_PB, "p3;30;Bike lane;transport", "p3;30;Bike lane")
        with self.assertRaises(MalformedRow) as cm:
            parse_pb(text)
        self.assertEqual(cm.exception.line, 14)
        self.assertIn("line 14", str(cm.exception))

    def test_duplicate_meta_key(self):
        text = replace_line(TOY_PB, "budget;100\n", "budget;100\nbudget;200\n")
        with self.assertRaises(MalformedRow) as cm:
            parse_pb(text)
        self.assertEqual(cm.exception.line, 8)

    def test_non_numeric_cost(self):
        for cost in ("abc", "-5", "0", "nan"):
            with self.subTest(cost=cost):
                with self.assertRaises(NonNumericCost):
                    parse_pb(replace_line(TOY_PB, "p4;20;", f"p4;{cost};"))


class BuildTest(unittest.TestCase):
    def test_toy(self):
        election = build_election(parse_pb(TOY_PB))
        self.assertEqual(election.budget, 100)
        self.assertEqual(election.tokens, 3)
        self.assertEqual(election.currency, "CHF")
        self.assertEqual(election.cost_scale, 1)
        self.assertEqual(election.n_projects, 5)
        self.assertEqual(election.n_voters, 4)
        self.assertEqual(len(election.impact_areas), 4)
        v1 = election.voters[0]
        self.assertEqual(v1.historical_ballot, CumulativeBallot({"p1": 2, "p4": 1}))
        self.assertEqual(v1.favoured_areas, {"environment", "culture"})

    def test_single_project(self):
        election = build_election(parse_pb(MINIMAL_PB))
        self.assertEqual(election.projects[0].cost, election.budget)

    def test_fractional_costs(self):
        text = replace_line(TOY_PB, "p4;20;", "p4;12.5;")
        election = build_election(parse_pb(text))
        self.assertEqual(election.cost_scale, 10)
        self.assertEqual(election.budget, 1000)
        self.assertEqual(election.lookup["p4"].cost, 125)
        self.assertEqual(election.currency_cost("p4"), 12.5)

    def test_points_default_to_one(self):
        text = replace_line(TOY_PB, "v3;p3;3", "v3;p3;")
        election = build_election(parse_pb(text))
        self.assertEqual(election.voters[2].historical_ballot, CumulativeBallot({"p3": 1}))

    def test_missing_budget(self):
        with self.assertRaises(MissingBudget):
            build_election(parse_pb(replace_line(TOY_PB, "budget;100\n", "")))

    def test_missing_tokens(self):
        with self.assertRaises(TokenCountMissing):
            build_election(parse_pb(replace_line(TOY_PB, "max_sum_points;3\n", "")))

    def test_empty_impact_areas(self):
        with self.assertRaises(EmptyImpactAreas):
            build_election(parse_pb(replace_line(TOY_PB, "p4;20;Mural;culture", "p4;20;Mural;")))
        text = TOY_PB.replace("project_id;cost;name;category", "project_id;cost;name;tags")
        with self.assertRaises(EmptyImpactAreas):
            build_election(parse_pb(text))

    def test_ballot_exceeds_tokens(self):
        with self.assertRaises(BallotExceedsTokens):
            build_election(parse_pb(replace_line(TOY_PB, "v3;p3;3", "v3;p3;4")))

    def test_negative_points(self):
        text = replace_line(TOY_PB, "v4;p5,p1,p2;1,1,1", "v4;p5,p1;4,-1")
        with self.assertRaises(MalformedRow) as cm:
            build_election(parse_pb(text))
        self.assertIsInstance(cm.exception, DataError)
        self.assertIn("negative points", str(cm.exception))

    def test_unknown_project(self):
        with self.assertRaises(UnknownProject):
            build_election(parse_pb(replace_line(TOY_PB, "v3;p3;3", "v3;p9;3")))

    def test_errors_are_data_errors(self):
        with self.assertRaises(DataError) as cm:
            build_election(parse_pb(replace_line(TOY_PB, "v3;p3;3", "v3;p9;3")))
        self.assertEqual(cm.exception.exit_code, 2)


class RoundTripTest(unittest.TestCase):
    def test_toy(self):
        raw = parse_pb(TOY_PB)
        self.assertEqual(parse_pb(serialize_pb(raw)), raw)

    def test_random_files(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n_projects = int(rng.integers(1, 6))
            raw = RawPbFile(
                meta={"budget": str(int(rng.integers(10, 1000))), "num_tokens": "3"},
                project_columns=["project_id", "cost", "category"],
                vote_columns=["voter_id", "vote", "points"],
            )
            for i in range(n_projects):
                raw.projects.append(
                    {"project_id": f"p{i}", "cost": str(int(rng.integers(1, 10))), "category": "x,y"}
                )
            for v in range(int(rng.integers(1, 6))):
                raw.votes.append({"voter_id": f"v{v}", "vote": "p0", "points": str(int(rng.integers(1, 4)))})
            self.assertEqual(parse_pb(serialize_pb(raw)), raw)

    def test_unquotable_field(self):
        raw = parse_pb(TOY_PB)
        raw.projects[0]["name"] = "Park; north"
        with self.assertRaises(MalformedRow):
            serialize_pb(raw)


class LoadTest(unittest.TestCase):
    def test_load_and_checksum(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "toy.pb"
            path.write_text(TOY_PB, encoding="utf-8")
            election = load_election(path)
            self.assertEqual(election.n_voters, 4)
            self.assertEqual(
                dataset_checksum(path), hashlib.sha256(TOY_PB.encode("utf-8")).hexdigest()
            )

    def test_data_dir_fallback(self):
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / "toy.pb").write_text(TOY_PB, encoding="utf-8")
            with mock.patch.dict(os.environ, {DATA_DIR_ENV: tmp}):
                self.assertEqual(load_election("toy.pb").n_projects, 5)
            with mock.patch.dict(os.environ, {DATA_DIR_ENV: ""}):
                with self.assertRaises(DataError):
                    load_election("toy.pb")

    def test_invalid_encoding(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.pb"
            path.write_bytes(b"META\n\xff\xfe;1\n")
            with self.assertRaises(DataError):
                load_election(path)


class DatasetTest(unittest.TestCase):
    def test_aarau(self):
        path = find_dataset("aarau")
        if path is None:
            self.skipTest("Aarau dataset not available")
        raw = parse_pb(path.read_text(encoding="utf-8-sig"))
        self.assertEqual(len(raw.projects), 33)
        self.assertEqual(len(raw.votes), 1703)
        election = build_election(raw)
        self.assertEqual(election.budget / election.cost_scale, 50000)
        self.assertEqual(election.tokens, 10)
        self.assertEqual(len(election.impact_areas), 9)
        for voter in election.voters:
            self.assertLessEqual(voter.favoured_areas, set(election.impact_areas))

    def test_toulouse(self):
        path = find_dataset("toulouse")
        if path is None:
            self.skipTest("Toulouse dataset not available")
        raw = parse_pb(path.read_text(encoding="utf-8-sig"))
        self.assertEqual(len(raw.projects), 30)
        self.assertEqual(len(raw.votes), 1494)
        election = build_election(raw)
        self.assertEqual(election.budget / election.cost_scale, 1000000)
        self.assertEqual(election.tokens, 7)
        self.assertEqual(len(election.impact_areas), 9)


if __name__ == "__main__":
    unittest.main()
