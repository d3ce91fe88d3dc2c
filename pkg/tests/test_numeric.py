"""
Тесты численных значений полилогарифмов.
"""
import random
import unittest
from fractions import Fraction

import mpmath

from dsl import expand_numeric, parse_identity
from dsl.cross_ratio import v0_arguments
from exceptions import OnBranchPoint, OnSingularPoint, OutOfConvergenceDomain
from models import AtomKind, MplAtom, NumericConfig
from numeric import (
    all_prescriptions, eval_g, eval_g_quadrature, eval_i_depth2, eval_i_series,
    eval_identity_numeric, eval_li_classical, eval_li_increasing, eval_mpl, eval_mpl_series,
    eval_sv, random_points, series_order
)
from numeric.identities import is_small


def close(a, b, digits: int = 30) -> bool:
    return abs(a - b) < mpmath.mpf(10) ** -digits


class ClassicalValuesTest(unittest.TestCase):

    def setUp(self):
        self.cfg = NumericConfig()
        self.dps = mpmath.workdps(60)
        self.dps.__enter__()

    def tearDown(self):
        self.dps.__exit__(None, None, None)

    def test_known_values(self):
        li2_half = eval_li_classical(2, Fraction(1, 2), self.cfg)
        self.assertTrue(close(li2_half, mpmath.pi ** 2 / 12 - mpmath.log(2) ** 2 / 2))
        self.assertTrue(close(li2_half, mpmath.mpf("0.5822405264650125059026")))
        self.assertTrue(close(eval_li_classical(4, 1, self.cfg), mpmath.pi ** 4 / 90))
        self.assertTrue(close(eval_li_classical(1, Fraction(1, 2), self.cfg), mpmath.log(2)))

    def test_branch_point(self):
        with self.assertRaises(OnBranchPoint):
            eval_li_classical(1, 1, self.cfg)

    def test_cut_sides_are_conjugate(self):
        below = eval_li_classical(2, 3, self.cfg, side=-1)
        above = eval_li_classical(2, 3, self.cfg, side=1)
        self.assertTrue(close(below, mpmath.conj(above)))
        self.assertNotEqual(mpmath.im(below), 0)

    def test_series_matches_classical(self):
        z = mpmath.mpc("0.3", "-0.2")
        self.assertTrue(close(eval_mpl_series((3,), (z,), self.cfg), mpmath.polylog(3, z)))

    def test_series_domain(self):
        with self.assertRaises(OutOfConvergenceDomain):
            series_order(1.0, 1, 1e-30)
        with self.assertRaises(OutOfConvergenceDomain):
            eval_mpl_series((1, 1), (mpmath.mpf("0.9"), mpmath.mpf(2)), self.cfg)

    def test_stuffle(self):
        x, y = mpmath.mpf("0.3"), mpmath.mpf("0.2")
        li11 = eval_mpl_series((1, 1), (x, y), self.cfg) + eval_mpl_series((1, 1), (y, x), self.cfg)
        li1 = eval_li_classical(1, x, self.cfg) * eval_li_classical(1, y, self.cfg)
        self.assertTrue(close(li11 + eval_li_classical(2, x * y, self.cfg), li1))

    def test_increasing_convention(self):
        a, b = mpmath.mpf("0.4"), mpmath.mpf("0.5")
        self.assertEqual(eval_li_increasing((1, 2), (a, b), self.cfg),
                         eval_mpl_series((2, 1), (b, a), self.cfg))

    def test_distribution(self):
        z = mpmath.mpf("0.37")
        lhs = eval_li_classical(4, z * z, self.cfg)
        rhs = 8 * (eval_li_classical(4, z, self.cfg) + eval_li_classical(4, -z, self.cfg))
        self.assertTrue(close(lhs, rhs))


class IteratedValuesTest(unittest.TestCase):

    def setUp(self):
        self.cfg = NumericConfig(precision=30, tolerance_exp=20)

    def test_g_table(self):
        with mpmath.workdps(40):
            y = mpmath.mpf("0.4")
            self.assertTrue(close(eval_g([0, 0], y, self.cfg), mpmath.log(y) ** 2 / 2, 25))
            self.assertTrue(close(eval_g([1], y, self.cfg), mpmath.log(1 - y), 25))
            self.assertTrue(close(eval_g([0, 1], y, self.cfg), -mpmath.polylog(2, y), 25))
            self.assertTrue(close(eval_g([0, 0, 1], y, self.cfg), -mpmath.polylog(3, y), 25))
            with self.assertRaises(OutOfConvergenceDomain):
                eval_g([1, 0], y, self.cfg)

    def test_g_quadrature(self):
        with mpmath.workdps(40):
            for k in (0, 1, 2):
                letters = [0] * k + [2]
                self.assertTrue(close(eval_g_quadrature(k, 2, Fraction(1, 2), self.cfg),
                                      eval_g(letters, Fraction(1, 2), self.cfg), 20))

    def test_depth_two_quadrature_matches_series(self):
        with mpmath.workdps(40):
            x, y = mpmath.mpf(3), mpmath.mpf(5)
            for n1, n2 in ((1, 1), (2, 1), (3, 1), (2, 2)):
                series = eval_i_series((n1, n2), (x, y), self.cfg)
                quadrature = eval_i_depth2(n1, n2, x, y, self.cfg)
                self.assertTrue(close(series, quadrature, 20), (n1, n2))

    def test_atoms(self):
        with mpmath.workdps(40):
            a = Fraction(3)
            i1 = eval_mpl(MplAtom(AtomKind.I, (2,), (a,)), self.cfg)
            self.assertTrue(close(i1, -mpmath.polylog(2, mpmath.mpf(1) / 3), 25))
            log = eval_mpl(MplAtom(AtomKind.LOG, (), (Fraction(2),)), self.cfg)
            self.assertTrue(close(log, mpmath.log(2), 25))
            ipi = eval_mpl(MplAtom(AtomKind.IPI), self.cfg)
            self.assertTrue(close(ipi, mpmath.mpc(0, mpmath.pi), 25))
            with self.assertRaises(OutOfConvergenceDomain):
                eval_mpl(MplAtom(AtomKind.TENSOR, (), (Fraction(2),)), self.cfg)


class SingleValuedTest(unittest.TestCase):

    def setUp(self):
        self.cfg = NumericConfig()

    def test_bloch_wigner_maximum(self):
        z = mpmath.exp(mpmath.mpc(0, mpmath.pi / 3))
        self.assertTrue(close(eval_sv(2, z, self.cfg), mpmath.mpf("1.0149416064096536250"), 18))

    def test_inversion(self):
        z = mpmath.mpc("0.6", "0.3")
        for m in (2, 3, 4):
            sign = (-1) ** (m - 1)
            self.assertTrue(close(eval_sv(m, 1 / z, self.cfg), sign * eval_sv(m, z, self.cfg)), m)

    def test_singular_points(self):
        for z in (0, 1):
            with self.assertRaises(OnSingularPoint):
                eval_sv(2, z, self.cfg)

    def test_five_term_at_random_points(self):
        template = parse_identity(
            "identity five { vars: x, y; level: numeric; weight: 2; expr: [V0(x, y)]; }")
        for point in random_points(("x", "y"), seed=1, count=5):
            with mpmath.workdps(self.cfg.precision + 10):
                residual = eval_identity_numeric(expand_numeric(template, point), self.cfg)
            self.assertTrue(is_small(residual, self.cfg), point)

    def test_five_term_at_hundred_points(self):
        rng = random.Random(17)
        with mpmath.workdps(self.cfg.precision + 10):
            for _ in range(100):
                x = mpmath.mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
                y = mpmath.mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
                total = mpmath.fsum(eval_sv(2, v, self.cfg) for v in v0_arguments(x, y))
                self.assertTrue(is_small(abs(total), self.cfg), (x, y))

    def test_non_classical_rejected(self):
        template = parse_identity(
            "identity bad { vars: x; level: numeric; weight: 2; expr: log[x]^2; }")
        with mpmath.workdps(60):
            expr = expand_numeric(template, {"x": mpmath.mpf(2)})
        with self.assertRaises(ValueError):
            eval_identity_numeric(expr, self.cfg)


class HelpersTest(unittest.TestCase):

    def test_random_points_are_deterministic(self):
        first = random_points(("x", "y"), seed=3, count=4)
        second = random_points(("x", "y"), seed=3, count=4)
        self.assertEqual(first, second)
        self.assertNotEqual(first, random_points(("x", "y"), seed=4, count=4))
        real = random_points(("x",), seed=3, count=2, complex_points=False)
        self.assertTrue(all(mpmath.im(p["x"]) == 0 for p in real))

    def test_prescriptions(self):
        prescriptions = all_prescriptions()
        self.assertEqual(len(prescriptions), 16)
        self.assertEqual(len({str(p) for p in prescriptions}), 16)

    def test_config_validation(self):
        with self.assertRaises(ValueError):
            NumericConfig(precision=20, tolerance_exp=30)


if __name__ == '__main__':
    unittest.main()
