import tempfile
import unittest
from pathlib import Path

from pbmarl.aggregation import VoteProfile
from pbmarl.election import CumulativeBallot
from pbmarl.errors import ReportInputError
from pbmarl.io.results import (
    BALLOT_COLUMNS,
    INCOMPLETE,
    ballot_rows,
    read_ballots,
    read_manifest,
    write_csv,
    write_manifest,
)
from pbmarl.testing import toy_election


class CsvTest(unittest.TestCase):
    def test_float_format(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "out.csv"
            write_csv([{"a": 1 / 3, "b": "x"}, {"a": 1234567.0, "b": "y"}], ["b", "a"], path)
            text = path.read_bytes().decode("utf-8")
        self.assertEqual(text, "b,a\nx,0.333333\ny,1.23457e+06\n")

    def test_ballots(self):
        election = toy_election()
        profile = VoteProfile(
            {
                "v1": CumulativeBallot({"p4": 1, "p1": 2}),
                "v2": CumulativeBallot(),
                "007": CumulativeBallot({"p3": 3}),
            }
        )
        rows = ballot_rows(profile, election)
        # projects in file order, voters in profile order
        self.assertEqual(
            [(r["voter_id"], r["project_id"], r["tokens"]) for r in rows],
            [("v1", "p1", 2), ("v1", "p4", 1), ("v2", "", 0), ("007", "p3", 3)],
        )
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "ballots.csv"
            write_csv(rows, BALLOT_COLUMNS, path)
            self.assertEqual(read_ballots(path), profile)
            self.assertEqual(list(read_ballots(path)), ["v1", "v2", "007"])

    def test_missing_csv(self):
        with self.assertRaises(ReportInputError):
            read_ballots("/nonexistent/ballots.csv")


class ManifestTest(unittest.TestCase):
    def test_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            write_manifest(tmp, {"seed": 3, "config": {"rule": "greedy"}})
            self.assertEqual(read_manifest(tmp)["seed"], 3)
            (Path(tmp) / INCOMPLETE).touch()
            with self.assertRaises(ReportInputError):
                read_manifest(tmp)

    def test_missing(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ReportInputError):
                read_manifest(tmp)


if __name__ == "__main__":
    unittest.main()
