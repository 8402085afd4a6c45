# pylint: disable=missing-docstring,line-too-long

import json
import tempfile
import unittest
from pathlib import Path

from click.testing import CliRunner

from src.cli.app import EXIT_INPUT_ERROR, EXIT_OK, EXIT_UNSOLVED, cli, run
from src.ramified_zeros.form.form import FormHelper

DATA = Path(__file__).resolve().parents[2] / "data"


class TestCli(unittest.TestCase):
    def setUp(self) -> None:
        self.runner = CliRunner(mix_stderr=False)
        self.tmp = tempfile.TemporaryDirectory()
        self.tmp_path = Path(self.tmp.name)

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def invoke(self, *args):
        result = self.runner.invoke(cli, list(args), standalone_mode=False)
        if result.exception is not None:
            raise result.exception
        return result.return_value, result.stdout

    def write_form(self, name: str, payload: dict) -> str:
        path = self.tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    def test_solve_and_verify(self):
        report_path = self.tmp_path / "report.json"
        certificate_path = self.tmp_path / "certificate.json"
        code, _ = self.invoke(
            "solve",
            "--input", str(DATA / "q2_d6_allones.json"),
            "--report", str(report_path),
            "--certificate", str(certificate_path),
        )
        self.assertEqual(code, EXIT_OK)

        report = json.loads(report_path.read_text(encoding="utf-8"))
        self.assertEqual(report["strategy"], {"kind": "SingleLevel", "level": 0})
        self.assertEqual(report["variables_bound"], 28)
        self.assertEqual(report["field"], {"e": 1, "eisenstein": [-2], "precision": 24})
        self.assertNotIn("wall_time", report)

        code, output = self.invoke(
            "verify",
            "--input", str(DATA / "q2_d6_allones.json"),
            "--certificate", str(certificate_path),
            "--json",
        )
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(json.loads(output)["passed"])

    def test_reports_are_reproducible(self):
        paths = [self.tmp_path / "first.json", self.tmp_path / "second.json"]
        for path in paths:
            self.invoke("solve", "--input", str(DATA / "q2_d6_allones.json"), "--report", str(path))
        self.assertEqual(paths[0].read_text(encoding="utf-8"), paths[1].read_text(encoding="utf-8"))

    def test_unsolved(self):
        report_path = self.tmp_path / "report.json"
        certificate_path = self.tmp_path / "certificate.json"
        code, _ = self.invoke(
            "solve",
            "--input", str(DATA / "unsolvable_pair.json"),
            "--report", str(report_path),
            "--certificate", str(certificate_path),
        )
        self.assertEqual(code, EXIT_UNSOLVED)
        self.assertEqual(json.loads(report_path.read_text(encoding="utf-8"))["certificate"], "Unsolved")
        self.assertFalse(certificate_path.exists())

    def test_verify_rejects_bad_certificate(self):
        certificate = self.write_form("bad.json", {"assignment": [[1]] * 27 + [[2]], "n_target": 0, "pivot": 27})
        code, output = self.invoke("verify", "--input", str(DATA / "q2_d6_allones.json"), "--certificate", certificate, "--json")
        self.assertEqual(code, EXIT_UNSOLVED)
        payload = json.loads(output)
        self.assertFalse(payload["pivot_is_unit"])
        self.assertFalse(payload["passed"])

    def test_normalize(self):
        code, output = self.invoke("normalize", "--input", str(DATA / "q2_d6_fallback_profile.json"), "--json")
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(output)
        self.assertEqual(payload["rotation"], 0)
        self.assertListEqual(payload["normalized_profile"], [9, 1, 9, 1, 7, 1])

    def test_bins_check(self):
        code, output = self.invoke("bins-check", "--m", "2", "--n", "5", "--exhaustive", "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(output)["checked"], 1024)

        code, _ = self.invoke("bins-check", "--m", "2", "--n", "4", "--exhaustive")
        self.assertEqual(code, EXIT_UNSOLVED)

        code, output = self.invoke("bins-check", "--m", "4", "--n", "7", "--samples", "1000", "--seed", "3", "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(output)["seed"], 3)

    def test_dispatch_report(self):
        out_path = self.tmp_path / "coverage.json"
        code, output = self.invoke("dispatch-report", "--d", "6", "--s", "12", "--out", str(out_path), "--json")
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(output)
        self.assertEqual(sum(payload["covered_by"].values()), payload["total"])
        self.assertEqual(json.loads(out_path.read_text(encoding="utf-8")), payload)

    def test_brute(self):
        form = self.write_form("pair.json", {"field": {"e": 1, "eisenstein": [-2]}, "d": 6, "coefficients": [[1], [-1]]})
        code, output = self.invoke("brute", "--input", form, "--n-small", "3", "--support", "2", "--json")
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(output)
        self.assertEqual(payload["count"], 16)
        self.assertIn([[1], [7]], payload["zeros"])

    def test_random(self):
        paths = [self.tmp_path / "a.json", self.tmp_path / "b.json"]
        for path in paths:
            code, _ = self.invoke("random", "--e", "2", "--eisenstein=-2,0", "--d", "6", "--s", "10", "--seed", "4", "--out", str(path))
            self.assertEqual(code, EXIT_OK)
        self.assertEqual(paths[0].read_text(encoding="utf-8"), paths[1].read_text(encoding="utf-8"))
        self.assertEqual(FormHelper.load(paths[0].read_text(encoding="utf-8")).s, 10)

    def test_random_with_profile(self):
        path = self.tmp_path / "profile.json"
        self.invoke("random", "--e", "1", "--eisenstein=-2", "--d", "6", "--s", "8", "--profile", "4,4,0,0,0,0", "--out", str(path))
        form = FormHelper.load(path.read_text(encoding="utf-8"))
        self.assertListEqual(list(form.profile().counts), [4, 4, 0, 0, 0, 0])


class TestRun(unittest.TestCase):
    def test_missing_file(self):
        self.assertEqual(run(["solve", "--input", "/nonexistent/form.json"]), EXIT_INPUT_ERROR)

    def test_bad_field(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "form.json"
            path.write_text(json.dumps({"field": {"e": 2, "eisenstein": [4, 0]}, "d": 6, "coefficients": [[1, 0]]}), encoding="utf-8")
            self.assertEqual(run(["normalize", "--input", str(path)]), EXIT_INPUT_ERROR)

    def test_bad_eisenstein_option(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = str(Path(tmp) / "out.json")
            self.assertEqual(run(["random", "--e", "2", "--eisenstein", "a,b", "--d", "6", "--s", "4", "--out", out]), EXIT_INPUT_ERROR)

    def test_unknown_command(self):
        self.assertEqual(run(["factor"]), EXIT_INPUT_ERROR)

    def test_exit_codes(self):
        self.assertEqual(run(["bins-check", "--m", "1", "--n", "4", "--exhaustive"]), EXIT_OK)
        self.assertEqual(run(["solve", "--input", str(DATA / "unsolvable_pair.json")]), EXIT_UNSOLVED)

    def test_undecodable_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "binary.json"
            path.write_bytes(b'{"d": 6}\xff\xfe')
            self.assertEqual(run(["solve", "--input", str(path)]), EXIT_INPUT_ERROR)
            self.assertEqual(run(["verify", "--input", str(DATA / "q2_d6_allones.json"), "--certificate", str(path)]), EXIT_INPUT_ERROR)

    def test_bins_check_needs_a_bin(self):
        self.assertEqual(run(["bins-check", "--m", "0", "--n", "5", "--exhaustive"]), EXIT_INPUT_ERROR)
