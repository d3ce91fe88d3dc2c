"""
Символы итерированных интегралов и атомов тождеств.

Соглашения:
    S(I(a0; a1..an; a_{n+1})) = Σ_i S(I(a0; ..âi..; a_{n+1})) ⊗ [(a_{i+1} - a_i)/(a_{i-1} - a_i)];
    нулевая разность в слоте отбрасывается (регуляризация), константный слот
    уничтожает член;
    I_{n1..nd}(x1..xd) = I(0; x1, 0^{n1-1}, ..., xd, 0^{nd-1}; 1);
    Li_{n1..nd}(z1..zd) = (-1)^d I_{n1..nd}(1/(z1..zd), ..., 1/zd);
    G(a1..an; z) = I(0; an..a1; z).
"""
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from exceptions import Divergent
from kernel.basis import FactorBasis, GroupWord, PrimeBasis, gcd_free_basis
from kernel.polynomials import RationalFunction
from models import INFINITY, AtomKind, IdentityExpr, IdentityTerm, MplAtom
from symbols.tensors import TensorSum, TermAccumulator, shuffle

logger = logging.getLogger(__name__)


def is_zero_value(v: Any) -> bool:
    if isinstance(v, RationalFunction):
        return v.is_zero()
    return v == 0


def _zero_like(v: Any) -> Any:
    return v - v


def iterated_word(atom: MplAtom) -> Tuple[Any, Tuple[Any, ...], Any]:
    """
    Тройка (a0, слово, a_end) итерированного интеграла атома I, Li или G.

    Для Li знак (-1)^d возвращает sign_of_atom.

    Raises:
        Divergent: если среди аргументов I/Li есть ноль
    """
    if atom.kind == AtomKind.G:
        letters, z = atom.args[:-1], atom.args[-1]
        zero = _zero_like(z)
        return zero, tuple(reversed(letters)), z
    if atom.kind not in (AtomKind.I, AtomKind.LI):
        raise ValueError(f"у атома {atom.kind.value} нет итерированного интеграла")
    for a in atom.args:
        if is_zero_value(a):
            raise Divergent(f"{atom}: нулевой аргумент")
    args = list(atom.args)
    if atom.kind == AtomKind.LI:
        converted = []
        for i in range(len(args)):
            prod = args[i]
            for a in args[i + 1:]:
                prod = prod * a
            converted.append(1 / prod)
        args = converted
    zero = _zero_like(args[0])
    one = zero + 1
    word: List[Any] = []
    for n, x in zip(atom.indices, args):
        word.append(x)
        word.extend([zero] * (n - 1))
    return zero, tuple(word), one


def sign_of_atom(atom: MplAtom) -> int:
    if atom.kind == AtomKind.LI and len(atom.indices) % 2:
        return -1
    return 1


def atom_letters(atom: MplAtom) -> List[Any]:
    """Значения, разности которых попадают в слоты символа атома."""
    if atom.kind in (AtomKind.LOG, AtomKind.TENSOR):
        return list(atom.args)
    if atom.kind == AtomKind.IPI:
        return []
    if atom.kind == AtomKind.LI and len(atom.indices) == 1:
        z = atom.args[0]
        return [z, 1 - z]
    a0, word, a_end = iterated_word(atom)
    points = [a0, *word, a_end]
    distinct: List[Any] = []
    for p in points:
        if p is not INFINITY and p not in distinct:
            distinct.append(p)
    diffs = []
    for i in range(len(distinct)):
        for j in range(i + 1, len(distinct)):
            diffs.append(distinct[i] - distinct[j])
    return diffs


def basis_for(expressions: Iterable[IdentityExpr], ring=None) -> FactorBasis:
    """Общий взаимно простой базис для всех атомов набора выражений."""
    polys = []
    seen: Set[Any] = set()
    for expr in expressions:
        for term in expr.terms:
            for atom in term.factors:
                for f in atom_letters(atom):
                    if not isinstance(f, RationalFunction) or f.is_zero():
                        continue
                    ring = f.ring
                    for p in (f.num, f.den):
                        if not p.is_ground and p not in seen:
                            seen.add(p)
                            polys.append(p)
    return gcd_free_basis(polys, ring)


class SymbolCalculator:
    """
    Вычисляет символы над фиксированным базисом (FactorBasis или PrimeBasis).

    Символы подынтегралов и разложения разностей кэшируются.
    """

    def __init__(self, basis, limit: Optional[int] = None):
        self.basis = basis
        self.limit = limit
        self._memo: Dict[Tuple[Any, Tuple[Any, ...], Any], TensorSum] = {}
        self._diffs: Dict[Tuple[Any, Any], GroupWord] = {}
        self._atoms: Dict[MplAtom, TensorSum] = {}
        self.peak_terms = 0

    def word_of(self, f: Any) -> GroupWord:
        """Слово функции по модулю констант."""
        if isinstance(self.basis, PrimeBasis):
            return self.basis.factor(f)
        if isinstance(f, RationalFunction):
            if f.is_constant():
                return GroupWord((), self.basis)
            return self.basis.factor(f)
        return GroupWord((), self.basis)

    def _difference(self, u: Any, v: Any) -> GroupWord:
        """[u - v]; ∞ и нулевая разность дают единичное слово."""
        key = (u, v)
        word = self._diffs.get(key)
        if word is not None:
            return word
        if u is INFINITY or v is INFINITY:
            word = GroupWord((), self.basis)
        else:
            d = u - v
            word = GroupWord((), self.basis) if is_zero_value(d) else self.word_of(d)
        self._diffs[key] = word
        return word

    def symbol_iterated(self, a0: Any, word: Sequence[Any], a_end: Any) -> TensorSum:
        """
        Символ I(a0; word; a_end).

        Raises:
            Divergent: если a0 = a_end при непустом слове
        """
        word = tuple(word)
        if not word:
            return TensorSum.unit(self.basis)
        if a0 is a_end or (a0 is not INFINITY and a_end is not INFINITY
                           and is_zero_value(a0 - a_end)):
            raise Divergent(f"I({a0}; ...; {a_end}): совпадающие пределы")
        key = (a0, word, a_end)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        points = (a0,) + word + (a_end,)
        acc = TermAccumulator(limit=self.limit)
        for i in range(1, len(points) - 1):
            slot = self._difference(points[i + 1], points[i]) / self._difference(points[i - 1], points[i])
            if slot.is_identity():
                continue
            rest = self.symbol_iterated(a0, word[:i - 1] + word[i:], a_end)
            for k, c in rest.terms.items():
                for j, e in slot.exponents:
                    acc.add(k + (j,), c * e)
        result = acc.result(len(word), self.basis)
        self._memo[key] = result
        return result

    def symbol_atom(self, atom: MplAtom) -> TensorSum:
        """Символ одного атома любого вида."""
        cached = self._atoms.get(atom)
        if cached is not None:
            return cached
        if atom.kind == AtomKind.IPI:
            result = TensorSum.zero(1, self.basis)
        elif atom.kind == AtomKind.LOG:
            result = TensorSum.from_words([self.word_of(atom.args[0])], 1, self.basis)
        elif atom.kind == AtomKind.TENSOR:
            result = TensorSum.from_words([self.word_of(f) for f in atom.args], 1, self.basis)
        elif atom.kind == AtomKind.LI and len(atom.indices) == 1:
            result = self.symbol_classical(atom.indices[0], atom.args[0])
        else:
            a0, word, a_end = iterated_word(atom)
            result = self.symbol_iterated(a0, word, a_end).scale(sign_of_atom(atom))
        self._atoms[atom] = result
        return result

    def symbol_classical(self, n: int, z: Any) -> TensorSum:
        """S(Li_n(z)) = -(1-z) ⊗ z ⊗ ... ⊗ z."""
        if is_zero_value(z):
            raise Divergent("Li_n(0)")
        one_minus = 1 - z
        if is_zero_value(one_minus):
            return TensorSum.zero(n, self.basis)
        words = [self.word_of(one_minus)] + [self.word_of(z)] * (n - 1)
        return TensorSum.from_words(words, -1, self.basis)

    def symbol_term(self, term: IdentityTerm) -> TensorSum:
        """Символ произведения атомов - перетасовка символов множителей."""
        result = TensorSum.unit(self.basis)
        for atom in term.factors:
            s = self.symbol_atom(atom)
            if s.is_zero():
                return TensorSum.zero(term.weight, self.basis)
            result = s if result.weight == 0 else shuffle(result, s)
        return result

    def symbol_expr(self, expr: IdentityExpr) -> TensorSum:
        """
        Символ всей линейной комбинации.

        Raises:
            TermBudgetExceeded: если число живых членов превысило лимит
        """
        weight = expr.weight
        acc = TermAccumulator(limit=self.limit)
        for term in expr.terms:
            acc.add_tensor(self.symbol_term(term), term.coeff)
        self.peak_terms = max(self.peak_terms, acc.peak)
        logger.debug(f"{expr.name}: символ из {len(acc.terms)} членов, пик {acc.peak}")
        return acc.result(weight, self.basis)


def symbol_iterated(a0: Any, word: Sequence[Any], a_end: Any, basis=None) -> TensorSum:
    """Символ I(a0; word; a_end); без базиса строит его по разностям букв."""
    if basis is None:
        points = [p for p in (a0, *word, a_end) if p is not INFINITY]
        polys = []
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                d = points[i] - points[j]
                if isinstance(d, RationalFunction) and not d.is_zero():
                    polys.extend(p for p in (d.num, d.den) if not p.is_ground)
        if polys:
            basis = gcd_free_basis(polys)
        else:
            basis = PrimeBasis()
    return SymbolCalculator(basis).symbol_iterated(a0, word, a_end)


def symbol_mpl(atom: MplAtom, basis=None) -> TensorSum:
    """Символ атома; без базиса строит базис по буквам атома."""
    if basis is None:
        expr = IdentityExpr("atom", (), [IdentityTerm(Fraction(1), (atom,))])
        letters = atom_letters(atom)
        if any(isinstance(f, RationalFunction) for f in letters):
            basis = basis_for([expr])
        else:
            basis = PrimeBasis()
    return SymbolCalculator(basis).symbol_atom(atom)
