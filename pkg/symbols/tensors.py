"""
Тензорные суммы над базисом и операции над ними:
перетасовка, проектор rho, антисимметризация delta_{2,2}, ранг.

Элементарный тензор хранится как кортеж индексов букв базиса;
слоты-слова GroupWord раскрываются полилинейно при построении.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from exceptions import TermBudgetExceeded, WrongWeight
from kernel.basis import GroupWord

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]


class TensorSum:
    """
    Q-линейная комбинация элементарных тензоров одного веса.

    Представление каноническое: нулевые коэффициенты не хранятся,
    поэтому равенство - это равенство словарей.
    """

    __slots__ = ("terms", "weight", "basis")

    def __init__(self, terms: Dict[Key, Fraction], weight: int, basis=None):
        self.terms = terms
        self.weight = weight
        self.basis = basis

    @classmethod
    def zero(cls, weight: int, basis=None) -> 'TensorSum':
        return cls({}, weight, basis)

    @classmethod
    def unit(cls, basis=None) -> 'TensorSum':
        return cls({(): Fraction(1)}, 0, basis)

    @classmethod
    def from_words(cls, words: Sequence[GroupWord], coeff=1, basis=None) -> 'TensorSum':
        """Элементарный тензор w1 ⊗ ... ⊗ wn, раскрытый по показателям."""
        acc = TermAccumulator()
        coeff = Fraction(coeff)
        for choice in product(*(w.exponents for w in words)):
            c = coeff
            for _, e in choice:
                c *= e
            acc.add(tuple(i for i, _ in choice), c)
        return acc.result(len(words), basis)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def _check_weight(self, other: 'TensorSum') -> None:
        if self.weight != other.weight and self.terms and other.terms:
            raise WrongWeight(f"сложение весов {self.weight} и {other.weight}")

    def __add__(self, other: 'TensorSum') -> 'TensorSum':
        self._check_weight(other)
        acc = TermAccumulator(dict(self.terms))
        for k, c in other.terms.items():
            acc.add(k, c)
        return acc.result(max(self.weight, other.weight) if not self.terms or not other.terms
                          else self.weight, self.basis or other.basis)

    def __neg__(self) -> 'TensorSum':
        return TensorSum({k: -c for k, c in self.terms.items()}, self.weight, self.basis)

    def __sub__(self, other: 'TensorSum') -> 'TensorSum':
        return self + (-other)

    def scale(self, c) -> 'TensorSum':
        c = Fraction(c)
        if c == 0:
            return TensorSum.zero(self.weight, self.basis)
        return TensorSum({k: v * c for k, v in self.terms.items()}, self.weight, self.basis)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorSum):
            return NotImplemented
        return self.terms == other.terms and (self.weight == other.weight or not self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def tensor(self, other: 'TensorSum') -> 'TensorSum':
        """Конкатенация self ⊗ other."""
        acc = TermAccumulator()
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                acc.add(k1 + k2, c1 * c2)
        return acc.result(self.weight + other.weight, self.basis or other.basis)

    def append_word(self, word: GroupWord, coeff=1) -> 'TensorSum':
        """self ⊗ word с раскрытием последнего слота."""
        acc = TermAccumulator()
        coeff = Fraction(coeff)
        for k, c in self.terms.items():
            for i, e in word.exponents:
                acc.add(k + (i,), c * e * coeff)
        return acc.result(self.weight + 1, self.basis)

    def permute_slots(self, perm: Sequence[int]) -> 'TensorSum':
        """Новый тензор, у которого слот j равен слоту perm[j] исходного."""
        acc = TermAccumulator()
        for k, c in self.terms.items():
            acc.add(tuple(k[p] for p in perm), c)
        return acc.result(self.weight, self.basis)

    def describe_key(self, key: Key) -> str:
        if self.basis is None:
            return " ⊗ ".join(str(i) for i in key)
        return " ⊗ ".join(self.basis.describe(i) for i in key)

    def witnesses(self, limit: int = 10) -> List[str]:
        """Члены с наибольшими по модулю коэффициентами, со слотами в виде множителей."""
        items = sorted(self.terms.items(), key=lambda kc: (-abs(kc[1]), kc[0]))[:limit]
        return [f"{c} * {self.describe_key(k)}" for k, c in items]

    def __repr__(self) -> str:
        return f"TensorSum(weight={self.weight}, terms={len(self.terms)})"


class TermAccumulator:
    """Словарь-накопитель с контролем числа живых членов."""

    def __init__(self, terms: Optional[Dict[Key, Fraction]] = None, limit: Optional[int] = None):
        self.terms: Dict[Key, Fraction] = terms if terms is not None else {}
        self.limit = limit
        self.peak = len(self.terms)

    def add(self, key: Key, c) -> None:
        value = self.terms.get(key, 0) + c
        if value:
            self.terms[key] = value
            if self.limit is not None and len(self.terms) > self.limit:
                raise TermBudgetExceeded(len(self.terms), self.limit)
        else:
            self.terms.pop(key, None)
        if len(self.terms) > self.peak:
            self.peak = len(self.terms)

    def add_tensor(self, t: TensorSum, coeff=1) -> None:
        coeff = Fraction(coeff)
        for k, c in t.terms.items():
            self.add(k, c * coeff)

    def result(self, weight: int, basis=None) -> TensorSum:
        terms = {k: Fraction(c) for k, c in self.terms.items() if c}
        return TensorSum(terms, weight, basis)


@lru_cache(maxsize=None)
def _shuffle_orders(m: int, n: int) -> Tuple[Tuple[int, ...], ...]:
    orders = []
    for positions in combinations(range(m + n), m):
        chosen = set(positions)
        order, i, j = [], 0, 0
        for k in range(m + n):
            if k in chosen:
                order.append(i)
                i += 1
            else:
                order.append(m + j)
                j += 1
        orders.append(tuple(order))
    return tuple(orders)


def shuffle(u: TensorSum, v: TensorSum) -> TensorSum:
    """Билинейное продолжение перетасовки слов; вес складывается."""
    acc = TermAccumulator()
    orders = _shuffle_orders(u.weight, v.weight)
    for k1, c1 in u.terms.items():
        for k2, c2 in v.terms.items():
            letters = k1 + k2
            c = c1 * c2
            for order in orders:
                acc.add(tuple(letters[p] for p in order), c)
    return acc.result(u.weight + v.weight, u.basis or v.basis)


@lru_cache(maxsize=None)
def rho_pattern(n: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """
    rho на словах длины n как сумма перестановок позиций с целыми коэффициентами.

    rho(a) = a, rho(a1..an) = rho(a1..a_{n-1}) ⊗ an - rho(a2..an) ⊗ a1.
    """
    def rho(word: Tuple[int, ...]) -> Dict[Tuple[int, ...], int]:
        if len(word) <= 1:
            return {word: 1}
        result: Dict[Tuple[int, ...], int] = {}
        for w, c in rho(word[:-1]).items():
            key = w + (word[-1],)
            result[key] = result.get(key, 0) + c
        for w, c in rho(word[1:]).items():
            key = w + (word[0],)
            result[key] = result.get(key, 0) - c
        return {k: c for k, c in result.items() if c}

    return tuple(sorted(rho(tuple(range(n))).items()))


@lru_cache(maxsize=None)
def leading_rho_pattern(n: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """rho на первых n-1 позициях, последняя позиция на месте."""
    if n <= 1:
        return rho_pattern(n)
    return tuple((perm + (n - 1,), s) for perm, s in rho_pattern(n - 1))


def rho_project(t: TensorSum, limit: Optional[int] = None, leading: bool = False) -> TensorSum:
    """
    Проектор, ядро которого - произведения перетасовки; проверка для ≐ꗌ.

    При leading=True произведения ищутся только среди первых n-1 слотов.
    """
    acc = TermAccumulator(limit=limit)
    pattern = leading_rho_pattern(t.weight) if leading else rho_pattern(t.weight)
    for k, c in t.terms.items():
        for perm, s in pattern:
            acc.add(tuple(k[p] for p in perm), c * s)
    return acc.result(t.weight, t.basis)


# Группа порядка 8: (1 2), (3 4) и обмен пар, каждый со знаком -1.
DELTA22_GROUP: Tuple[Tuple[Tuple[int, ...], int], ...] = (
    ((0, 1, 2, 3), 1),
    ((1, 0, 2, 3), -1),
    ((0, 1, 3, 2), -1),
    ((1, 0, 3, 2), 1),
    ((2, 3, 0, 1), -1),
    ((3, 2, 0, 1), 1),
    ((2, 3, 1, 0), 1),
    ((3, 2, 1, 0), -1),
)


def delta22_antisymmetrize(t: TensorSum, limit: Optional[int] = None) -> TensorSum:
    """
    Знакопеременная сумма по группе порядка 8; ноль означает ядро delta_{2,2}.

    Raises:
        WrongWeight: если вес не равен 4
    """
    if t.weight != 4:
        raise WrongWeight(f"delta22 определена только для веса 4, получен {t.weight}")
    acc = TermAccumulator(limit=limit)
    for k, c in t.terms.items():
        for perm, s in DELTA22_GROUP:
            acc.add(tuple(k[p] for p in perm), c * s)
    return acc.result(4, t.basis)


def tensor_rank(tensors: Sequence[TensorSum]) -> int:
    """Точный ранг линейной оболочки над Q (разреженная матрица sympy)."""
    rows: Dict[int, Dict[int, object]] = {}
    columns: Dict[Key, int] = {}
    for i, t in enumerate(tensors):
        row = {}
        for k, c in t.terms.items():
            j = columns.setdefault(k, len(columns))
            row[j] = QQ(c.numerator, c.denominator)
        if row:
            rows[i] = row
    if not rows:
        return 0
    matrix = DomainMatrix(rows, (len(tensors), len(columns)), QQ)
    return matrix.rank()


def rebase(t: TensorSum, basis) -> TensorSum:
    """
    Переписывает тензор над другим базисом.

    Raises:
        NotFactorable: если буква не раскладывается над новым базисом
    """
    if t.basis is basis:
        return t
    if t.basis is None:
        raise ValueError("у тензора нет исходного базиса")
    words: Dict[int, GroupWord] = {}
    acc = TermAccumulator()
    for k, c in t.terms.items():
        slots = []
        for i in k:
            if i not in words:
                words[i] = basis.factor(t.basis.value_of(i))
            slots.append(words[i])
        acc.add_tensor(TensorSum.from_words(slots, c, basis))
    return acc.result(t.weight, basis)


def sum_tensors(tensors: Iterable[Tuple[Fraction, TensorSum]], weight: int, basis=None,
                limit: Optional[int] = None) -> Tuple[TensorSum, int]:
    """Линейная комбинация тензоров; возвращает сумму и пиковое число членов."""
    acc = TermAccumulator(limit=limit)
    for c, t in tensors:
        acc.add_tensor(t, c)
    return acc.result(weight, basis), acc.peak
