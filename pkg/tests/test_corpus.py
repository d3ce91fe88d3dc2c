"""
Тесты реестра корпуса и генераторов.
"""
import os
import tempfile
import unittest
from fractions import Fraction
from typing import Set
from unittest import mock

from corpus import (
    REQUIRED_IDS, build_931, build_kappa_checks, build_s4_display, count_up_to_inverses,
    get_entry, is_swap_invariant, list_identities, load_templates
)
from corpus.generators import NINE_POINTS, TWO_FIVE_POINT_SETS
from corpus.registry import (
    ENV_DATA_DIR, entry_expression, entry_variables, entry_variants, load_corpus_files,
    resolve_data_dir
)
from dsl import expand_at, parse_identity
from exceptions import ParseError
from models import AtomKind, Level
from services.verifier import symbolic_residual

DUPLICATE = "identity same.id { vars: x; weight: 2; expr: [x]; }\n"


class RegistryTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.entries = list_identities()

    def test_required_ids_present(self):
        ids = {e.id for e in self.entries}
        self.assertEqual(set(REQUIRED_IDS) - ids, set())

    def test_sorted_and_unique(self):
        ids = [e.id for e in self.entries]
        self.assertEqual(ids, sorted(ids))
        self.assertEqual(len(ids), len(set(ids)))

    def test_prefix_filter(self):
        entries = list_identities("depth2.twoterm")
        self.assertEqual(len(entries), 6)
        self.assertTrue(all(e.id.startswith("depth2.twoterm.") for e in entries))

    def test_tag_filter(self):
        ids = {e.id for e in list_identities("inversion")}
        self.assertIn("classical.inversion.li2", ids)
        self.assertIn("depth2.inversion-li4", ids)

    def test_printed_forms_are_expected_failures(self):
        for entry_id in ("depth2.inversion333.printed", "depth2.inversion333.numeric",
                         "depth2.xi-twenty-terms", "weight3.li111", "kappa.inversion.printed",
                         "depth3.via-i31"):
            self.assertFalse(get_entry(entry_id).expect_pass, entry_id)
        for entry_id in ("depth2.inversion333.symbol", "depth2.i31-via-i22.symmetrised",
                         "weight3.split-independence", "kappa.reflection", "kappa.inversion"):
            self.assertTrue(get_entry(entry_id).expect_pass, entry_id)

    def test_heavy_excluded_on_request(self):
        cheap = list_identities(include_heavy=False)
        self.assertFalse(any(e.is_heavy for e in cheap))
        self.assertLess(len(cheap), len(self.entries))

    def test_unknown_id(self):
        with self.assertRaises(KeyError):
            get_entry("no.such.entry")

    def test_variants(self):
        entry = get_entry("classical.distribution.li4")
        self.assertEqual(entry_variants(entry), [None, "printed-coefficient"])
        self.assertEqual(entry.level, Level.EXACT)

    def test_fast_orbits_use_builders(self):
        for entry_id in (TWO_FIVE_POINT_SETS, NINE_POINTS):
            entry = get_entry(entry_id)
            self.assertIsNotNone(entry.builder)
            self.assertTrue(entry.is_heavy)
        self.assertEqual(entry_variants(get_entry(NINE_POINTS)), [None, "symmetric"])
        self.assertEqual(len(entry_variables(get_entry(TWO_FIVE_POINT_SETS))), 10)

    def test_generated_entry(self):
        entry = get_entry("s4.tilde-specialisation")
        self.assertIsNone(entry.template)
        self.assertEqual(entry.tags, ("s4",))

    def test_expression_at_point(self):
        expr = entry_expression(get_entry("classical.inversion.li2"), {"x": Fraction(2)})
        self.assertEqual(sorted(t.factors[0].args[0] for t in expr.terms),
                         [Fraction(1, 2), Fraction(2)])


class DataDirTest(unittest.TestCase):

    def test_env_override(self):
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.dict(os.environ, {ENV_DATA_DIR: tmp}):
                self.assertEqual(resolve_data_dir(), tmp)
                self.assertEqual(resolve_data_dir("/explicit"), "/explicit")

    def test_duplicate_ids_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            for name in ("a.idf", "b.idf"):
                with open(os.path.join(tmp, name), 'w', encoding='utf-8') as f:
                    f.write(DUPLICATE)
            with self.assertRaises(ParseError):
                load_templates(tmp)

    def test_missing_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(OSError):
                load_corpus_files(os.path.join(tmp, "absent"))


class CountTest(unittest.TestCase):

    def test_inverse_pairs_fold(self):
        template = parse_identity(
            "identity count { vars: x; weight: 4; expr: [x] + [1/x] + [1 - x]; }")
        self.assertEqual(count_up_to_inverses(expand_at(template, {"x": 3})), 1)
        template = parse_identity(
            "identity count { vars: x; weight: 3; expr: [x] + [1/x]; }")
        self.assertEqual(count_up_to_inverses(expand_at(template, {"x": 3})), 1)


def arguments(expr) -> Set[Fraction]:
    return {atom.args[0] for _, atom in expr.atoms()}


def contains_up_to_inverse(expr, value: Fraction) -> bool:
    args = arguments(expr)
    return value in args or 1 / value in args


class GeneratorTest(unittest.TestCase):

    POINT = {"x": Fraction(2, 7), "y": Fraction(3, 11), "z": Fraction(5, 13), "w": Fraction(17, 19)}

    def test_display_has_122_arguments(self):
        self.assertEqual(count_up_to_inverses(build_s4_display()), 122)

    def test_first_specialised_argument(self):
        point = {k: self.POINT[k] for k in ("x", "y", "z")}
        x, y, z = point["x"], point["y"], point["z"]
        first = x * (x * y - 1) * z * (y * z - 1) / ((x - 1) * (z - 1))
        self.assertTrue(contains_up_to_inverse(build_s4_display(point), first))

    def test_four_variable_equation_contains_displayed_argument(self):
        x, y, z, w = (self.POINT[k] for k in ("x", "y", "z", "w"))
        value = -((1 - w) * (1 - x * y) * (1 - y - z + x * y * z)
                  / (w * (1 - x) * (1 - y) * y * (1 - w * z)))
        self.assertTrue(contains_up_to_inverse(build_931(self.POINT), value))

    def test_four_variable_equation_is_swap_invariant(self):
        self.assertTrue(is_swap_invariant(self.POINT))

    def test_kappa_checks_vanish_in_leading_slots(self):
        checks = build_kappa_checks()
        self.assertEqual([e.name for e in checks], ["kappa.reflection", "kappa.inversion"])
        for expr in checks:
            self.assertEqual(expr.level, Level.LEADING_MOD_PRODUCTS)
            kinds = {atom.kind for term in expr.terms for atom in term.factors}
            self.assertEqual(kinds, {AtomKind.TENSOR, AtomKind.LI})
            self.assertTrue(symbolic_residual(expr, expr.level).is_zero(), expr.name)

    @unittest.skipUnless(os.environ.get("MPL_HEAVY") == "1", "полное слияние четырёхпеременного уравнения")
    def test_four_variable_equation_has_931_arguments(self):
        self.assertEqual(count_up_to_inverses(build_931(self.POINT)), 931)


if __name__ == '__main__':
    unittest.main()
