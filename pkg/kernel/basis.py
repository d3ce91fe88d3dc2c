"""
Взаимно простые базисы и мультипликативные слова над ними.

GroupWord хранит показатели по индексам базиса; константный множитель
отбрасывается, так что (x-1) и (1-x) дают одно и то же слово.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.polys.rings import PolyElement, PolyRing

from exceptions import NotFactorable
from kernel.polynomials import (
    RationalFunction, primitive_normalized, ratfun_normalize, total_degree
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupWord:
    """Разреженный вектор показателей ((индекс, показатель), ...), индексы по возрастанию."""
    exponents: Tuple[Tuple[int, int], ...] = ()
    basis: Optional[Any] = field(default=None, compare=False, hash=False, repr=False)

    @classmethod
    def from_dict(cls, exps: Dict[int, int], basis=None) -> 'GroupWord':
        return cls(tuple(sorted((i, e) for i, e in exps.items() if e)), basis)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.exponents)

    def is_identity(self) -> bool:
        return not self.exponents

    def __mul__(self, other: 'GroupWord') -> 'GroupWord':
        exps = self.as_dict()
        for i, e in other.exponents:
            exps[i] = exps.get(i, 0) + e
        return GroupWord.from_dict(exps, self.basis or other.basis)

    def __pow__(self, n: int) -> 'GroupWord':
        return GroupWord.from_dict({i: e * n for i, e in self.exponents}, self.basis)

    def inverse(self) -> 'GroupWord':
        return self ** -1

    def __truediv__(self, other: 'GroupWord') -> 'GroupWord':
        return self * other.inverse()


def _variables_of(p: PolyElement) -> frozenset:
    return frozenset(i for m in p.itermonoms() for i, e in enumerate(m) if e)


def _sort_key(p: PolyElement) -> tuple:
    return (total_degree(p), len(p), str(p))


def gcd_free_basis(inputs: Iterable[PolyElement], ring: Optional[PolyRing] = None) -> 'FactorBasis':
    """
    Строит попарно взаимно простой базис, над которым раскладываются все входы.

    Каждый шаг расщепления уменьшает суммарную степень рабочего списка,
    поэтому процедура конечна. Результат упорядочен детерминированно.

    Raises:
        ValueError: если среди входов есть нулевой многочлен
    """
    basis: List[PolyElement] = []
    supports: List[frozenset] = []
    for p in inputs:
        if not p:
            raise ValueError("нулевой многочлен во входах базиса")
        ring = p.ring
        work = [p]
        while work:
            q = primitive_normalized(work.pop())[1]
            if q.is_ground:
                continue
            support = _variables_of(q)
            for i, b in enumerate(basis):
                if not (supports[i] & support):
                    continue
                g = b.gcd(q)
                if g.is_ground:
                    continue
                if b == q:
                    break
                del basis[i]
                del supports[i]
                work.extend([g, b.exquo(g), q.exquo(g)])
                break
            else:
                basis.append(q)
                supports.append(support)
    if ring is None:
        raise ValueError("для пустого базиса нужно указать кольцо")
    basis.sort(key=_sort_key)
    logger.debug(f"Построен взаимно простой базис из {len(basis)} элементов")
    return FactorBasis(ring, basis)


class FactorBasis:
    """Взаимно простой базис многочленов с разложением рациональных функций."""

    def __init__(self, ring: PolyRing, elements: Sequence[PolyElement]):
        self.ring = ring
        self.elements: Tuple[PolyElement, ...] = tuple(elements)
        self._degrees = [p.degrees() for p in self.elements]
        self._cache: Dict[RationalFunction, GroupWord] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def _exponents(self, p: PolyElement, sign: int, exps: Dict[int, int]) -> None:
        rem = p
        for i, b in enumerate(self.elements):
            if rem.is_ground:
                return
            degrees = rem.degrees()
            if any(db > dr for db, dr in zip(self._degrees[i], degrees)):
                continue
            while True:
                q, r = rem.div(b)
                if r:
                    break
                rem = q
                exps[i] = exps.get(i, 0) + sign
        if not rem.is_ground:
            raise NotFactorable(f"множитель {rem} не раскладывается над базисом")

    def factor(self, f: RationalFunction) -> GroupWord:
        """
        Разложение f над базисом с точностью до константы.

        Raises:
            NotFactorable: если у f есть множитель, взаимно простой с базисом
        """
        word = self._cache.get(f)
        if word is not None:
            return word
        if f.is_zero():
            raise ValueError("разложение нулевой функции не определено")
        exps: Dict[int, int] = {}
        self._exponents(f.num, 1, exps)
        self._exponents(f.den, -1, exps)
        word = GroupWord.from_dict(exps, self)
        self._cache[f] = word
        return word

    def reconstruct(self, word: GroupWord) -> RationalFunction:
        """Произведение элементов базиса в степенях слова."""
        num, den = self.ring.one, self.ring.one
        for i, e in word.exponents:
            if e > 0:
                num *= self.elements[i] ** e
            else:
                den *= self.elements[i] ** (-e)
        return ratfun_normalize(num, den)

    def value_of(self, index: int) -> RationalFunction:
        return RationalFunction(self.elements[index], self.ring.one)

    def describe(self, index: int) -> str:
        return f"({self.elements[index]})"

    def __contains__(self, p: PolyElement) -> bool:
        return primitive_normalized(p)[1] in self.elements


def factor_over_basis(f: RationalFunction, basis: FactorBasis) -> GroupWord:
    """Функциональная форма FactorBasis.factor."""
    return basis.factor(f)


class PrimeBasis:
    """
    Базис из простых чисел для символов в рациональных точках.

    Индекс буквы - само простое число; знак отбрасывается.
    """

    def __init__(self):
        self._cache: Dict[Fraction, GroupWord] = {}

    def __len__(self) -> int:
        primes = set()
        for word in self._cache.values():
            primes.update(i for i, _ in word.exponents)
        return len(primes)

    def factor(self, q) -> GroupWord:
        q = Fraction(q)
        word = self._cache.get(q)
        if word is not None:
            return word
        if q == 0:
            raise ValueError("разложение нуля не определено")
        exps: Dict[int, int] = {}
        for p, e in factorint(abs(q.numerator)).items():
            exps[p] = exps.get(p, 0) + e
        for p, e in factorint(q.denominator).items():
            exps[p] = exps.get(p, 0) - e
        word = GroupWord.from_dict(exps, self)
        self._cache[q] = word
        return word

    def value_of(self, index: int) -> Fraction:
        return Fraction(index)

    def describe(self, index: int) -> str:
        return str(index)
