"""
Тесты сервисов проверки и хранилища отчётов.
"""
import json
import os
import random
import tempfile
import unittest
from itertools import permutations

from corpus import get_entry
from corpus.registry import entry_expression, entry_from_template
from dsl import parse_identity
from models import (
    AtomKind, CheckReport, CorpusEntry, IdentityExpr, IdentityTerm, Level, NumericConfig, Verdict
)
from services import NumericRunner, Ranker, Specializer, Verifier, VerifierConfig, exit_code
from services.ranker import BASIS_CERTIFICATE, POINTS, projected_family
from services.verifier import symbolic_residual
from storage import ReportStore
from symbols.tensors import tensor_rank

EXACT_ENTRIES = (
    "depth1.stuffle",
    "depth1.li11-reduction",
    "classical.distribution.li2",
    "classical.distribution.li3",
    "classical.distribution.li4",
    "s4.five-term-arguments",
    "s4.five-term-specialisation",
)

MOD_PRODUCTS_ENTRIES = (
    "classical.inversion.li2",
    "classical.inversion.li3",
    "classical.inversion.li4",
    "dilog.five-term",
)

DELTA22_ENTRIES = (
    "depth2.delta-of-i31",
    "depth2.twoterm.identity",
    "depth2.twoterm.inverse",
    "depth2.twoterm.inverse-one-minus",
    "depth2.twoterm.one-minus",
    "depth2.twoterm.one-minus-inverse",
    "depth2.twoterm.ratio",
)

CONVERT_ENTRIES = (
    "depth2.convert.13-from-22",
    "depth2.convert.13-from-31",
    "depth2.convert.22-from-13",
    "depth2.convert.22-from-31",
    "depth2.convert.31-from-13",
    "depth2.convert.31-from-22",
)

CALIBRATED_ENTRIES = (
    "depth2.inversion333.symbol",
    "depth2.i31-via-i22",
    "depth2.i31-via-i22.antisymmetrised",
    "depth2.i31-via-i22.symmetrised",
    "weight3.split-independence",
    "kappa.reflection",
    "kappa.inversion",
)

EXPECTED_FAILURES = (
    "depth2.inversion333.printed",
    "depth2.xi-twenty-terms",
    "weight3.li111",
    "kappa.inversion.printed",
)

PROXY_ENTRIES = (
    "depth3.antisymmetrised.last-swap",
    "depth3.antisymmetrised.last-cycle",
)

SEVEN_POINT_ENTRIES = (
    "depth4.swap-middle",
    "depth4.six-term",
    "s4.six-point-specialisation",
)

MONOTONE_ENTRIES = (
    "depth1.stuffle",
    "classical.distribution.li4",
    "classical.inversion.li4",
    "depth2.nine-term-symbol",
    "depth2.inversion333.symbol",
)

CORRUPTED = """
identity corrupted.distribution {
  vars: x;
  level: exact;
  weight: 2;
  expr: [x^2] - 2*[x] - 3*[-x];
}
"""


def corrupted_entry() -> CorpusEntry:
    return entry_from_template(parse_identity(CORRUPTED))


class VerifierTest(unittest.TestCase):

    def setUp(self):
        self.verifier = Verifier(VerifierConfig())

    def assert_passes(self, entry_ids):
        for entry_id in entry_ids:
            report = self.verifier.check_entry(get_entry(entry_id))
            self.assertEqual(report.verdict, Verdict.PASS, f"{entry_id}: {report.witnesses}")

    def test_exact_entries(self):
        self.assert_passes(EXACT_ENTRIES)

    def test_mod_products_entries(self):
        self.assert_passes(MOD_PRODUCTS_ENTRIES)

    def test_delta22_entries(self):
        self.assert_passes(DELTA22_ENTRIES)

    def test_conversions_between_depth_two_families(self):
        self.assert_passes(CONVERT_ENTRIES)

    def test_corrected_entries(self):
        self.assert_passes(CALIBRATED_ENTRIES)

    def test_seven_point_entries(self):
        self.assert_passes(SEVEN_POINT_ENTRIES)

    def test_printed_forms_fail(self):
        for entry_id in EXPECTED_FAILURES:
            entry = get_entry(entry_id)
            self.assertFalse(entry.expect_pass, entry_id)
            residual = symbolic_residual(entry_expression(entry), entry.level)
            self.assertGreater(residual.size(), 0, entry_id)

    def test_proxy_entries(self):
        for entry_id in PROXY_ENTRIES:
            report = self.verifier.check_entry(get_entry(entry_id))
            self.assertEqual(report.verdict, Verdict.PROXY_PASS, entry_id)

    def test_kappa_calibration_is_reported(self):
        for entry_id in ("kappa.reflection", "kappa.inversion"):
            entry = get_entry(entry_id)
            self.assertEqual(entry.level, Level.LEADING_MOD_PRODUCTS)
            report = self.verifier.check_entry(entry)
            self.assertEqual(report.verdict, Verdict.PASS, entry_id)
            self.assertIsNone(report.variant)
            self.assertEqual(report.calibration, "expr")
            self.assertEqual(report.to_dict()['details']['calibration'], "expr")

    def test_symmetrised_conversion_uses_main_form(self):
        report = self.verifier.check_entry(get_entry("depth2.i31-via-i22.symmetrised"))
        self.assertEqual(report.verdict, Verdict.PASS)
        self.assertIn(report.calibration, (None, "expr"))

    def test_sign_of_i_term_matters(self):
        expr = entry_expression(get_entry("depth2.nine-term-symbol"))
        self.assertTrue(symbolic_residual(expr, Level.EXACT).is_zero())
        flipped = [
            IdentityTerm(-term.coeff if term.factors[0].kind == AtomKind.I else term.coeff,
                         term.factors)
            for term in expr.terms
        ]
        wrong = IdentityExpr("nine-term.flipped", expr.variables, flipped, Level.EXACT)
        residual = symbolic_residual(wrong, Level.EXACT)
        self.assertFalse(residual.is_zero())

    def test_weaker_levels_follow(self):
        for entry_id in MONOTONE_ENTRIES:
            entry = get_entry(entry_id)
            weight = entry_expression(entry).weight
            levels = entry.level.implied(weight)
            self.assertTrue(levels, entry_id)
            for level in levels:
                report = self.verifier.check_entry(entry, level)
                self.assertEqual(report.verdict, Verdict.PASS, f"{entry_id} @ {level.value}")

    def test_corrupted_coefficient_fails(self):
        report = self.verifier.check_entry(corrupted_entry())
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertGreater(report.residual_terms, 0)
        self.assertTrue(report.witnesses)

    def test_argument_count_is_recorded(self):
        report = self.verifier.check_entry(get_entry("classical.inversion.li2"))
        self.assertEqual(report.details['arguments'], 0)
        report = self.verifier.check_entry(get_entry("depth1.stuffle"))
        self.assertNotIn('arguments', report.details)

    def test_level_override(self):
        report = self.verifier.check_entry(get_entry("classical.inversion.li2"), Level.EXACT)
        self.assertEqual(report.level, Level.EXACT.value)
        self.assertEqual(report.verdict, Verdict.FAIL)

    def test_numeric_without_runner_is_skipped(self):
        report = self.verifier.check_entry(get_entry("dilog.five-term.numeric"))
        self.assertEqual(report.verdict, Verdict.SKIPPED)


class ExitCodeTest(unittest.TestCase):

    def entry(self, entry_id, expect_pass=True, proxy=False):
        return CorpusEntry(entry_id, None, Level.EXACT, expect_pass=expect_pass, proxy=proxy)

    def test_all_pass(self):
        entries = [self.entry("a"), self.entry("b")]
        reports = [CheckReport("a", "exact", Verdict.PASS), CheckReport("b", "exact", Verdict.PASS)]
        self.assertEqual(exit_code(reports, entries), 0)

    def test_failure(self):
        entries = [self.entry("a")]
        self.assertEqual(exit_code([CheckReport("a", "exact", Verdict.ERROR)], entries), 1)

    def test_expected_failures_and_proxies_are_ignored(self):
        entries = [self.entry("a", expect_pass=False), self.entry("b", proxy=True), self.entry("c")]
        reports = [
            CheckReport("a", "exact", Verdict.FAIL),
            CheckReport("b", "exact", Verdict.FAIL),
            CheckReport("c", "exact", Verdict.SKIPPED),
        ]
        self.assertEqual(exit_code(reports, entries), 0)


class SpecializerTest(unittest.TestCase):

    def setUp(self):
        self.specializer = Specializer(seed=1, trials=2)

    def test_true_identity_is_proxy_pass(self):
        report = self.specializer.check_entry(get_entry("classical.distribution.li2"))
        self.assertEqual(report.verdict, Verdict.PROXY_PASS)
        self.assertEqual(len(report.details['trials']), 2)
        self.assertEqual(report.details['seed'], 1)

    def test_corrupted_coefficient_fails(self):
        report = self.specializer.check_entry(corrupted_entry())
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertTrue(report.witnesses)

    def test_points_avoid_special_values(self):
        import random
        point = self.specializer.sample_point(random.Random(0), ("x", "y", "z"))
        values = list(point.values())
        self.assertEqual(len(set(values)), 3)
        for v in values:
            self.assertNotIn(v, (0, 1, -1))

    def test_same_seed_same_points(self):
        first = self.specializer.check_entry(get_entry("dilog.five-term"))
        second = Specializer(seed=1, trials=2).check_entry(get_entry("dilog.five-term"))
        self.assertEqual(first.details['trials'], second.details['trials'])


class NumericRunnerTest(unittest.TestCase):

    def setUp(self):
        self.runner = NumericRunner(NumericConfig(), seed=0)

    def test_classical_checks(self):
        reports = self.runner.classical_checks()
        self.assertEqual(len(reports), 6)
        for report in reports:
            self.assertEqual(report.verdict, Verdict.PASS,
                             f"{report.entry_id}: {report.details.get('residual')}")

    def test_classical_filter(self):
        reports = self.runner.classical_checks("numeric.inversion")
        self.assertEqual([r.entry_id for r in reports],
                         ["numeric.inversion.li2", "numeric.inversion.p4"])

    def test_five_term_entry(self):
        report = self.runner.check_entry(get_entry("dilog.five-term.numeric"))
        self.assertEqual(report.verdict, Verdict.PASS)
        self.assertEqual(report.details['tolerance'], "1e-30")

    def test_verifier_delegates_numeric_level(self):
        verifier = Verifier(VerifierConfig(), numeric_runner=self.runner)
        report = verifier.check_entry(get_entry("dilog.five-term.numeric"))
        self.assertEqual(report.verdict, Verdict.PASS)


class CertificateRankTest(unittest.TestCase):

    def test_certificate_spans_sampled_words(self):
        words = ["".join(p) for p in permutations(POINTS)]
        sample = random.Random(5).sample([w for w in words if w not in BASIS_CERTIFICATE], 8)
        projected = projected_family((3, 1), list(BASIS_CERTIFICATE) + sample)
        certificate = [projected[w] for w in BASIS_CERTIFICATE]
        self.assertEqual(tensor_rank(certificate), 6)
        self.assertEqual(tensor_rank(list(projected.values())), 6)

    def test_other_families_stay_within_six(self):
        words = ["".join(p) for p in permutations(POINTS)]
        sample = random.Random(6).sample(words, 14)
        for indices in ((2, 2), (1, 3)):
            projected = projected_family(indices, sample)
            self.assertLessEqual(tensor_rank(list(projected.values())), 6, indices)


@unittest.skipUnless(os.environ.get("MPL_HEAVY") == "1", "ранги семейств считаются долго")
class RankerTest(unittest.TestCase):

    def test_rank_of_i31_family(self):
        report = Ranker().check_family((3, 1))
        self.assertEqual(report.details['rank'], 6)
        self.assertEqual(report.verdict, Verdict.PASS)


class ReportStoreTest(unittest.TestCase):

    def setUp(self):
        self.store = ReportStore(required_ids=("a.one", "b.two", "c.three"))
        self.store.add([
            CheckReport("b.two", "exact", Verdict.FAIL, residual_terms=2,
                        witnesses=["1 * 2⊗3"], millis=17),
            CheckReport("a.one", "exact", Verdict.PASS, millis=5),
        ])

    def test_coverage_flags_missing(self):
        self.assertEqual(self.store.missing(), ["c.three"])
        self.assertEqual(self.store.summary()['pass'], 1)
        self.assertEqual(self.store.summary()['fail'], 1)

    def test_json_is_sorted_and_without_timing(self):
        data = json.loads(self.store.to_json())
        self.assertEqual([r['entry_id'] for r in data['reports']], ["a.one", "b.two"])
        self.assertTrue(all(r['millis'] == 0 for r in data['reports']))
        self.assertEqual(self.store.to_json(), self.store.to_json())

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "out", "report.json")
            self.store.save(path)
            loaded = ReportStore.load(path)
            self.assertEqual(loaded.required_ids, self.store.required_ids)
            self.assertEqual(loaded.to_json(), self.store.to_json())

    def test_load_rejects_other_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "other.json")
            with open(path, 'w', encoding='utf-8') as f:
                json.dump([1, 2], f)
            with self.assertRaises(ValueError):
                ReportStore.load(path)

    def test_renderers(self):
        self.assertIn("<table>", self.store.render("html"))
        self.assertIn("**missing**", self.store.render("markdown"))
        self.assertIn("Нет отчётов для: c.three", self.store.render("text"))
        with self.assertRaises(ValueError):
            self.store.render("xml")

    def test_latest_report_wins(self):
        self.store.add([CheckReport("b.two", "exact", Verdict.PASS)])
        self.assertEqual(self.store.summary()['fail'], 0)


if __name__ == '__main__':
    unittest.main()
