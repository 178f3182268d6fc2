# Standard Library
import json
import os
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

# Third Party
import jsonschema
import pandas as pd

# Django
from django.core.cache import cache
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

# Curie-Weiss App
from curieweiss.verification_report import VerificationReport
from curieweiss.verification_suite import CHECKS


SCHEMA_PATH = Path(__file__).resolve().parents[2] / "docs" / "verification_report.schema.json"


def failing(options):
    return VerificationReport("failing", False, "nowhere", worst_case=1.0)


class TestCurieWeissCommand(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def call(self, *args):
        stdout, stderr = StringIO(), StringIO()
        call_command("curieweiss", *args, stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()

    def assertUsageError(self, *args, returncode=2):
        with self.assertRaises(CommandError) as raised:
            self.call(*args)
        self.assertEqual(raised.exception.returncode, returncode)

    def test_exact_tail(self):
        out, _ = self.call("exact-tail", "--n", "10000", "--x", "0", "2.15", "20")
        lines = out.splitlines()
        self.assertEqual(lines[0], "x,exact_tail,limit_tail,ratio,corrected_ratio,envelope")
        self.assertEqual(len(lines), 21)
        frame = pd.read_csv(StringIO(out))
        self.assertLess(abs(frame["exact_tail"][0] - 0.5), 1e-3)
        self.assertAlmostEqual(frame["limit_tail"][0], 0.5, delta=1e-14)
        self.assertTrue((frame["exact_tail"].diff().dropna() <= 0).all())

    def test_exact_tail_accepts_scientific_n(self):
        out, _ = self.call("exact-tail", "--n", "1e4", "--x", "0", "1", "3", "--format", "json")
        payload = json.loads(out)
        self.assertEqual(len(payload["rows"]), 3)

    def test_exact_tail_usage_errors(self):
        self.assertUsageError("exact-tail", "--n", "10000", "--x", "2", "1", "5")
        self.assertUsageError("exact-tail", "--n", "10000", "--x", "0", "1", "0")
        self.assertUsageError("exact-tail", "--n", "10000", "--beta", "0.5", "--x", "0", "1", "5")
        self.assertUsageError("exact-tail", "--n", "100", "1000", "--x", "0", "1", "5")
        self.assertUsageError("exact-tail", "--n", "0", "--x", "0", "1", "5")

    def test_exact_tail_range(self):
        self.assertUsageError("exact-tail", "--n", "10000", "--x", "0", "5", "3")
        out, _ = self.call("exact-tail", "--n", "10000", "--x", "0", "5", "3", "--allow-out-of-range")
        self.assertEqual(len(out.splitlines()), 4)

    def test_limit_law(self):
        out, _ = self.call("limit-law", "--x", "-3", "3", "61")
        frame = pd.read_csv(StringIO(out))
        self.assertEqual(len(frame), 61)
        self.assertEqual(list(frame.columns), ["x", "F", "G", "p1", "p2"])
        for i in range(61):
            self.assertAlmostEqual(frame["F"][i] + frame["F"][60 - i], 1.0, delta=1e-12)

    def test_sample_is_reproducible(self):
        first, _ = self.call("sample", "--n", "100", "--draws", "50", "--seed", "9")
        second, _ = self.call("sample", "--n", "100", "--draws", "50", "--seed", "9")
        self.assertEqual(first, second)
        self.assertEqual(first.splitlines()[0], "draw,S")
        self.assertEqual(len(first.splitlines()), 51)

    def test_sample_glauber(self):
        out, err = self.call(
            "sample", "--n", "20", "--beta", "0.5", "--glauber", "--sweeps", "2000", "--burn-in", "100"
        )
        self.assertIn("total_variation=", err)
        self.assertEqual(out.splitlines()[0], "S,empirical,exact")

    def test_verify(self):
        out, err = self.call("verify", "--check", "J-lemma")
        payload = json.loads(out)
        self.assertTrue(payload["passed"])
        self.assertEqual(payload["reports"][0]["check_id"], "J-lemma")
        self.assertEqual(payload["reports"][0]["worst_case"], 0.0)
        self.assertIn("1/1 checks passed", err)

    def test_verify_matches_schema(self):
        schema = json.loads(SCHEMA_PATH.read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        out, _ = self.call("verify", "--check", "J-lemma", "--check", "corollary", "--check", "theorem-pair")
        payload = json.loads(out)
        jsonschema.validate(instance=payload, schema=schema, cls=jsonschema.Draft202012Validator)
        self.assertEqual([r["check_id"] for r in payload["reports"]], ["J-lemma", "corollary", "theorem-pair"])

        with mock.patch.dict(CHECKS, {"failing": failing}):
            stdout = StringIO()
            with self.assertRaises(CommandError):
                call_command("curieweiss", "verify", "--check", "failing", stdout=stdout, stderr=StringIO())
        jsonschema.validate(instance=json.loads(stdout.getvalue()), schema=schema, cls=jsonschema.Draft202012Validator)

    def test_verify_csv(self):
        out, _ = self.call("verify", "--check", "monotone-densities", "--format", "csv")
        self.assertTrue(out.startswith("check_id,passed,status"))

    def test_verify_failure_exits_with_one(self):
        with mock.patch.dict(CHECKS, {"failing": failing}):
            stdout = StringIO()
            with self.assertRaises(CommandError) as raised:
                call_command("curieweiss", "verify", "--check", "failing", stdout=stdout, stderr=StringIO())
        self.assertEqual(raised.exception.returncode, 1)
        self.assertFalse(json.loads(stdout.getvalue())["passed"])

    def test_verify_usage_errors(self):
        self.assertUsageError("verify")
        self.assertUsageError("verify", "--check", "J-lemma", "--all")
        self.assertUsageError("verify", "--check", "no-such-check")

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "F.csv")
            out, _ = self.call("limit-law", "--x", "0", "1", "5", "--out", path)
            self.assertEqual(out, "")
            with open(path, encoding="utf-8") as handle:
                self.assertEqual(len(handle.read().splitlines()), 6)
