"""
Тесты командной строки.
"""
import json
import os
import tempfile
import unittest
from fractions import Fraction
from unittest import mock

import main
from utils import Settings

PASSING = """
identity cli.distribution {
  vars: x;
  level: exact;
  weight: 2;
  tags: good;
  expr: [x^2] - 2*[x] - 2*[-x];
}
"""

FAILING = """
identity cli.distribution.wrong {
  vars: x;
  level: exact;
  weight: 2;
  expr: [x^2] - 2*[x];
}
"""


class HelpersTest(unittest.TestCase):

    def test_parse_points(self):
        self.assertEqual(main.parse_points("7/10,3/10; 3/5,1/4"),
                         [(Fraction(7, 10), Fraction(3, 10)), (Fraction(3, 5), Fraction(1, 4))])
        self.assertEqual(main.parse_points(None), [])
        with self.assertRaises(ValueError):
            main.parse_points("1,2,3")

    def test_tolerance_is_clamped_to_precision(self):
        with tempfile.TemporaryDirectory() as tmp:
            settings = Settings(os.path.join(tmp, "settings.json"))
            cfg = main.numeric_config(settings, precision=20)
            self.assertEqual((cfg.precision, cfg.tolerance_exp), (20, 15))
            cfg = main.numeric_config(settings)
            self.assertEqual((cfg.precision, cfg.tolerance_exp), (50, 30))


class MainTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.log_patch = mock.patch("main.LOG_FILE", os.path.join(self.tmp.name, "checks.log"))
        self.log_patch.start()

    def tearDown(self):
        self.log_patch.stop()
        self.tmp.cleanup()

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def write(self, name: str, text: str) -> str:
        with open(self.path(name), 'w', encoding='utf-8') as f:
            f.write(text)
        return self.path(name)

    def run_main(self, *argv: str) -> int:
        return main.main([*argv, "--settings", self.path("settings.json")])

    def test_check_passing_file(self):
        source = self.write("ok.idf", PASSING)
        out = self.path("report.json")
        self.assertEqual(self.run_main("check", source, "--out", out), 0)
        with open(out, encoding='utf-8') as f:
            data = json.load(f)
        self.assertEqual([r['verdict'] for r in data['reports']], ["pass"])
        self.assertTrue(all(row['verdict'] == "missing" for row in data['coverage']))

    def test_check_failing_file(self):
        source = self.write("bad.idf", PASSING + FAILING)
        out = self.path("report.md")
        self.assertEqual(self.run_main("check", source, "--out", out, "--format", "markdown"), 1)
        with open(out, encoding='utf-8') as f:
            self.assertIn("cli.distribution.wrong", f.read())

    def test_filter_on_files(self):
        source = self.write("bad.idf", PASSING + FAILING)
        out = self.path("report.json")
        self.assertEqual(self.run_main("check", source, "--filter", "good", "--out", out), 0)

    def test_syntax_error_is_usage_error(self):
        source = self.write("broken.idf", "identity broken { vars: x; expr: [x] +; }")
        self.assertEqual(self.run_main("check", source), 2)

    def test_missing_file_is_usage_error(self):
        self.assertEqual(self.run_main("check", self.path("absent.idf")), 2)

    def test_report_merges_files(self):
        first = self.path("first.json")
        second = self.path("second.json")
        self.run_main("check", self.write("ok.idf", PASSING), "--out", first)
        self.run_main("check", self.write("bad.idf", FAILING), "--out", second)
        merged = self.path("merged.json")
        self.assertEqual(self.run_main("report", first, second, "--out", merged), 1)
        with open(merged, encoding='utf-8') as f:
            ids = [r['entry_id'] for r in json.load(f)['reports']]
        self.assertEqual(ids, ["cli.distribution", "cli.distribution.wrong"])

    def test_numeric_classical_only(self):
        out = self.path("numeric.json")
        self.assertEqual(self.run_main("numeric", "--filter", "numeric.stuffle", "--out", out), 0)
        with open(out, encoding='utf-8') as f:
            reports = json.load(f)['reports']
        self.assertEqual([(r['entry_id'], r['verdict']) for r in reports],
                         [("numeric.stuffle.li11", "pass")])


if __name__ == '__main__':
    unittest.main()
