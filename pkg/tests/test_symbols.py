"""
Тесты движка символов.
"""
import random
import unittest
from fractions import Fraction
from typing import List

from corpus import get_entry
from corpus.registry import entry_expression
from exceptions import TermBudgetExceeded, WrongWeight
from kernel import PrimeBasis, RationalFunction, make_ring
from models import AtomKind, IdentityExpr, IdentityTerm, MplAtom
from symbols import (
    SymbolCalculator, TensorSketch, TensorSum, TermAccumulator, basis_for,
    delta22_antisymmetrize, rho_project, shuffle, symbol_mpl, tensor_rank
)
from symbols.tensors import leading_rho_pattern, rho_pattern

PRIMES = (2, 3, 5, 7, 11, 13)


def random_tensor(rng: random.Random, weight: int, basis: PrimeBasis, terms: int = 3) -> TensorSum:
    total = TensorSum.zero(weight, basis)
    for _ in range(terms):
        words = [basis.factor(rng.choice(PRIMES)) for _ in range(weight)]
        total = total + TensorSum.from_words(words, rng.randint(1, 5), basis)
    return total


class ClassicalSymbolTest(unittest.TestCase):

    def test_li2_over_factor_basis(self):
        ring = make_ring(("x",))
        x = RationalFunction.variable(ring, "x")
        symbol = symbol_mpl(MplAtom(AtomKind.LI, (2,), (x,)))
        self.assertEqual(symbol.weight, 2)
        self.assertEqual(list(symbol.terms.values()), [Fraction(-1)])

    def test_li2_of_half_over_primes(self):
        symbol = symbol_mpl(MplAtom(AtomKind.LI, (2,), (Fraction(1, 2),)))
        self.assertEqual(symbol.terms, {(2, 2): Fraction(-1)})

    def test_li_at_one_vanishes(self):
        symbol = symbol_mpl(MplAtom(AtomKind.LI, (3,), (Fraction(1),)))
        self.assertTrue(symbol.is_zero())

    def test_product_is_shuffle(self):
        calculator = SymbolCalculator(PrimeBasis())
        log2 = MplAtom(AtomKind.LOG, (), (Fraction(2),))
        square = calculator.symbol_term(IdentityTerm(Fraction(1), (log2, log2)))
        self.assertEqual(square.terms, {(2, 2): Fraction(2)})
        ipi = MplAtom(AtomKind.IPI)
        self.assertTrue(calculator.symbol_term(IdentityTerm(Fraction(1), (log2, ipi))).is_zero())

    def test_shared_basis_cancellation(self):
        ring = make_ring(("x",))
        x = RationalFunction.variable(ring, "x")
        li2 = MplAtom(AtomKind.LI, (2,), (x,))
        expr = IdentityExpr("cancel", ("x",), [IdentityTerm(Fraction(1), (li2,)),
                                               IdentityTerm(Fraction(-1), (li2,))])
        calculator = SymbolCalculator(basis_for([expr]))
        self.assertTrue(calculator.symbol_expr(expr).is_zero())


class ProjectorTest(unittest.TestCase):

    def setUp(self):
        self.rng = random.Random(11)
        self.basis = PrimeBasis()

    def test_rho_kills_shuffles(self):
        for m, n in ((1, 1), (1, 2), (2, 2), (1, 3)):
            u = random_tensor(self.rng, m, self.basis)
            v = random_tensor(self.rng, n, self.basis)
            self.assertTrue(rho_project(shuffle(u, v)).is_zero(), (m, n))

    def test_rho_keeps_antisymmetric_weight_two(self):
        a, b = self.basis.factor(2), self.basis.factor(3)
        t = TensorSum.from_words([a, b], 1, self.basis)
        self.assertEqual(rho_project(t).terms, {(2, 3): Fraction(1), (3, 2): Fraction(-1)})

    def test_rho_of_weight_one_is_identity(self):
        t = random_tensor(self.rng, 1, self.basis)
        self.assertEqual(rho_project(t), t)

    def test_delta22_kills_symmetric_first_pair(self):
        a, b, c = (self.basis.factor(p) for p in (2, 3, 5))
        t = TensorSum.from_words([a, a, b, c], 1, self.basis)
        self.assertTrue(delta22_antisymmetrize(t).is_zero())

    def test_delta22_needs_weight_four(self):
        with self.assertRaises(WrongWeight):
            delta22_antisymmetrize(random_tensor(self.rng, 3, self.basis))

    def test_tensor_rank(self):
        t = random_tensor(self.rng, 2, self.basis)
        s = random_tensor(self.rng, 2, self.basis)
        self.assertEqual(tensor_rank([t]), 1)
        self.assertEqual(tensor_rank([t, t.scale(3)]), 1)
        self.assertEqual(tensor_rank([]), 0)
        self.assertLessEqual(tensor_rank([t, s, t + s]), 2)

    def test_budget(self):
        acc = TermAccumulator(limit=1)
        acc.add((2,), 1)
        with self.assertRaises(TermBudgetExceeded):
            acc.add((3,), 1)


class SketchTest(unittest.TestCase):

    def test_sketch_of_cancelling_sum_is_zero(self):
        rng = random.Random(3)
        basis = PrimeBasis()
        t = random_tensor(rng, 4, basis)
        sketch = TensorSketch(4, dimension=4, seed=1)
        sketch.add_tensor(t)
        self.assertFalse(sketch.is_zero())
        sketch.add_tensor(t, -1)
        self.assertTrue(sketch.is_zero())

    def test_sketch_rho_kills_shuffles(self):
        rng = random.Random(5)
        basis = PrimeBasis()
        product = shuffle(random_tensor(rng, 1, basis), random_tensor(rng, 2, basis))
        sketch = TensorSketch(3, dimension=4, seed=2)
        sketch.add_tensor(product)
        self.assertTrue(sketch.rho().is_zero())

    def test_sketch_delta22_matches_exact(self):
        basis = PrimeBasis()
        a, b, c = (basis.factor(p) for p in (2, 3, 5))
        t = TensorSum.from_words([a, a, b, c], 1, basis)
        sketch = TensorSketch(4, dimension=3, seed=0)
        sketch.add_tensor(t)
        self.assertTrue(sketch.delta22().is_zero())


POOL_KINDS = (
    (AtomKind.LI, (2,)), (AtomKind.LI, (3,)), (AtomKind.LI, (4,)),
    (AtomKind.I, (3, 1)), (AtomKind.I, (2, 2)), (AtomKind.I, (2, 1)),
    (AtomKind.I, (1, 1)), (AtomKind.I, (1, 2)),
)


def argument_pool():
    ring = make_ring(("x", "y"))
    x = RationalFunction.variable(ring, "x")
    y = RationalFunction.variable(ring, "y")
    return [x, y, 1 - x, x / y, x * y, 1 / (1 - y)]


def random_atoms(rng: random.Random, count: int) -> List[MplAtom]:
    pool = argument_pool()
    atoms = []
    for _ in range(count):
        kind, indices = rng.choice(POOL_KINDS)
        atoms.append(MplAtom(kind, indices, tuple(rng.sample(pool, len(indices)))))
    return atoms


def specialise_tensor(t: TensorSum, point) -> TensorSum:
    """Переносит символ над базисом многочленов в символ над простыми в точке."""
    primes = PrimeBasis()
    words = {}
    acc = TermAccumulator()
    for key, c in t.terms.items():
        for i in key:
            if i not in words:
                words[i] = primes.factor(t.basis.value_of(i).specialize(point))
        acc.add_tensor(TensorSum.from_words([words[i] for i in key], c, primes))
    return acc.result(t.weight, primes)


class PropertyTest(unittest.TestCase):

    def setUp(self):
        self.rng = random.Random(2024)
        self.primes = PrimeBasis()

    def test_rho_kills_random_shuffles(self):
        for _ in range(200):
            m = self.rng.randint(1, 3)
            n = self.rng.randint(1, 4 - m)
            u = random_tensor(self.rng, m, self.primes, terms=2)
            v = random_tensor(self.rng, n, self.primes, terms=2)
            self.assertTrue(rho_project(shuffle(u, v)).is_zero(), (m, n))

    def test_delta22_kills_random_products(self):
        for _ in range(200):
            m = self.rng.randint(1, 3)
            u = random_tensor(self.rng, m, self.primes, terms=2)
            v = random_tensor(self.rng, 4 - m, self.primes, terms=2)
            self.assertTrue(delta22_antisymmetrize(shuffle(u, v)).is_zero(), m)

    def test_delta22_kills_classical_li4(self):
        for _ in range(200):
            z = Fraction(self.rng.randint(-500, 500), self.rng.randint(1, 500))
            if z in (0, 1):
                continue
            symbol = symbol_mpl(MplAtom(AtomKind.LI, (4,), (z,)), self.primes)
            self.assertTrue(delta22_antisymmetrize(symbol).is_zero(), z)

    def test_specialisation_commutes_with_symbol(self):
        atoms = random_atoms(self.rng, 50)
        expr = IdentityExpr("pool", ("x", "y"), [IdentityTerm(Fraction(1), (a,)) for a in atoms])
        calculator = SymbolCalculator(basis_for([expr]))
        point = {"x": Fraction(3, 7), "y": Fraction(5, 11)}
        at_point = SymbolCalculator(PrimeBasis())
        for atom in atoms:
            generic = specialise_tensor(calculator.symbol_atom(atom), point)
            args = tuple(a.specialize(point) for a in atom.args)
            direct = at_point.symbol_atom(MplAtom(atom.kind, atom.indices, args))
            self.assertEqual(generic, direct, str(atom))

    def test_leading_rho_keeps_last_slot(self):
        a, b, c = (self.primes.factor(p) for p in (2, 3, 5))
        t = TensorSum.from_words([a, b, c], 1, self.primes)
        self.assertEqual(rho_project(t, leading=True).terms,
                         {(2, 3, 5): Fraction(1), (3, 2, 5): Fraction(-1)})
        self.assertEqual(len(leading_rho_pattern(4)), len(rho_pattern(3)))
        self.assertTrue(all(perm[-1] == 3 for perm, _ in leading_rho_pattern(4)))

    def test_leading_rho_kills_products_in_leading_slots(self):
        for _ in range(50):
            u = random_tensor(self.rng, 1, self.primes, terms=2)
            v = random_tensor(self.rng, 2, self.primes, terms=2)
            w = random_tensor(self.rng, 1, self.primes, terms=1)
            self.assertTrue(rho_project(shuffle(u, v).tensor(w), leading=True).is_zero())
        a, b, c = (TensorSum.from_words([self.primes.factor(p)], 1, self.primes) for p in (2, 3, 5))
        product = shuffle(a, b.tensor(c))
        self.assertTrue(rho_project(product).is_zero())
        self.assertFalse(rho_project(product, leading=True).is_zero())


class DeltaOfI31Test(unittest.TestCase):

    def test_delta22_image_is_wedge(self):
        expr = entry_expression(get_entry("depth2.delta-of-i31"))
        calculator = SymbolCalculator(basis_for([expr]))
        i31 = TensorSum.zero(4, calculator.basis)
        wedge = TensorSum.zero(4, calculator.basis)
        for term in expr.terms:
            symbol = calculator.symbol_term(term).scale(term.coeff)
            if term.factors[0].kind == AtomKind.I:
                i31 = i31 + symbol.scale(Fraction(1, 8))
            else:
                wedge = wedge - symbol
        self.assertFalse(wedge.is_zero())
        self.assertEqual(delta22_antisymmetrize(wedge), wedge.scale(8))
        self.assertEqual(delta22_antisymmetrize(i31), wedge)


if __name__ == '__main__':
    unittest.main()
