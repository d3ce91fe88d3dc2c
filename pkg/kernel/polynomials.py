"""
Многочлены над QQ и рациональные функции в нормальной форме.

Многочлены - разреженные элементы кольца sympy.polys.rings над QQ
с градуированным лексикографическим порядком.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Mapping, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from exceptions import PoleAtPoint, UnboundPoint, ZeroDenominator

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def make_ring(variables: Tuple[str, ...]) -> PolyRing:
    """
    Возвращает кольцо многочленов над QQ от заданных переменных.

    Args:
        variables: Упорядоченные имена переменных

    Returns:
        Кольцо с порядком grlex
    """
    if not variables:
        raise ValueError("нужна хотя бы одна переменная")
    return PolyRing(tuple(variables), QQ, grlex)


def to_fraction(c) -> Fraction:
    """Элемент QQ -> Fraction."""
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


def to_ground(c: Scalar):
    """int или Fraction -> элемент QQ."""
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def primitive_normalized(p: PolyElement) -> Tuple[Fraction, PolyElement]:
    """
    Раскладывает p = c * q, где q имеет взаимно простые целые коэффициенты
    и положительный старший коэффициент.

    Returns:
        Пара (c, q)
    """
    if not p:
        raise ValueError("нулевой многочлен не нормализуется")
    common, q = p.clear_denoms()
    g = 0
    for c in q.itercoeffs():
        g = math.gcd(g, int(QQ.numer(c)))
    if q.LC < 0:
        g = -g
    q = q.quo_ground(QQ(g))
    return Fraction(g, int(common)), q


def poly_gcd(p: PolyElement, q: PolyElement) -> PolyElement:
    """НОД в примитивно-нормализованной форме; gcd(0, q) - примитивная часть q."""
    if not p and not q:
        return p.ring.zero
    return primitive_normalized(p.gcd(q))[1]


def total_degree(p: PolyElement) -> int:
    if not p:
        return -1
    return max(sum(m) for m in p.itermonoms())


def evaluate_poly(p: PolyElement, values: Sequence[Any], convert: Callable[[Any], Any]) -> Any:
    """Значение многочлена в точке; convert переводит коэффициенты QQ в область значений."""
    total = None
    for monom, coeff in p.iterterms():
        term = convert(coeff)
        for v, e in zip(values, monom):
            if e:
                term = term * v ** e
        total = term if total is None else total + term
    return total if total is not None else convert(QQ.zero)


@dataclass(frozen=True)
class RationalFunction:
    """
    Несократимая дробь num/den над QQ.

    Знаменатель примитивно нормализован, поэтому равенство
    сводится к равенству полей.
    """
    num: PolyElement
    den: PolyElement

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @classmethod
    def constant(cls, ring: PolyRing, value: Scalar) -> 'RationalFunction':
        return cls(ring.ground_new(to_ground(value)), ring.one)

    @classmethod
    def variable(cls, ring: PolyRing, name: str) -> 'RationalFunction':
        index = [str(s) for s in ring.symbols].index(name)
        return cls(ring.gens[index], ring.one)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} не константа")
        return to_fraction(self.num.LC if self.num else QQ.zero) / to_fraction(self.den.LC)

    def _coerce(self, other) -> 'RationalFunction':
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise ValueError("рациональные функции из разных колец")
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ratfun_normalize(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ratfun_normalize(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ratfun_normalize(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if n >= 0:
            return RationalFunction(self.num ** n, self.den ** n)
        return ratfun_normalize(self.den ** (-n), self.num ** (-n))

    def specialize(self, point: Mapping[str, Scalar]) -> Fraction:
        """Точное значение в рациональной точке."""
        return specialize(self, point)

    def evaluate(self, point: Mapping[str, Any], convert: Callable[[Any], Any]) -> Any:
        """Значение в точке произвольной числовой области (например, mpmath)."""
        values = _point_values(self.ring, point)
        den = evaluate_poly(self.den, values, convert)
        if den == 0:
            raise PoleAtPoint(f"{self}: знаменатель равен нулю")
        return evaluate_poly(self.num, values, convert) / den

    def __str__(self) -> str:
        num = _poly_str(self.num)
        if self.den == self.ring.one:
            return num
        return f"({num})/({_poly_str(self.den)})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _poly_str(p: PolyElement) -> str:
    return str(p) if p else "0"


def ratfun_normalize(num: PolyElement, den: PolyElement) -> RationalFunction:
    """
    Приводит дробь к несократимому виду с нормализованным знаменателем.

    Raises:
        ZeroDenominator: если den = 0
    """
    if not den:
        raise ZeroDenominator(f"({num})/0")
    ring = den.ring
    if not num:
        return RationalFunction(ring.zero, ring.one)
    _, a, b = num.cofactors(den)
    c, b = primitive_normalized(b)
    return RationalFunction(a.quo_ground(to_ground(c)), b)


def _point_values(ring: PolyRing, point: Mapping[str, Any]) -> list:
    values = []
    for symbol in ring.symbols:
        name = str(symbol)
        if name not in point:
            raise UnboundPoint(f"переменная {name} не задана")
        values.append(point[name])
    return values


def specialize(f: RationalFunction, point: Mapping[str, Scalar]) -> Fraction:
    """
    Подставляет рациональные значения переменных.

    Raises:
        PoleAtPoint: если знаменатель обращается в ноль
    """
    values = [Fraction(v) for v in _point_values(f.ring, point)]
    den = evaluate_poly(f.den, values, to_fraction)
    if den == 0:
        raise PoleAtPoint(f"{f} в точке {dict(point)}")
    return evaluate_poly(f.num, values, to_fraction) / den
