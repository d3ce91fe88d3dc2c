"""
Двойные отношения и производные от них аргументы.

Все функции обобщены по области значений: RationalFunction, Fraction
или комплексные числа mpmath. Точка ∞ (models.INFINITY) допустима
только здесь и в операторе spl.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

from exceptions import DegenerateCrossRatio
from kernel.polynomials import RationalFunction
from models import INFINITY

logger = logging.getLogger(__name__)


def is_zero(v: Any) -> bool:
    if isinstance(v, RationalFunction):
        return v.is_zero()
    return v == 0


@dataclass(frozen=True)
class Quad:
    """Четвёрка точек [a, b, c, d] - аргумент двойного отношения."""
    points: Tuple[Any, Any, Any, Any]


@dataclass
class FormalSum:
    """Формальная сумма Σ c_i [v_i]; значения - скаляры или четвёрки."""
    items: List[Tuple[Fraction, Any]]

    @classmethod
    def of(cls, value: Any, coeff=1) -> 'FormalSum':
        if isinstance(value, FormalSum):
            return cls([(c * Fraction(coeff), v) for c, v in value.items])
        return cls([(Fraction(coeff), value)])

    def __add__(self, other: 'FormalSum') -> 'FormalSum':
        return FormalSum(self.items + other.items)

    def scaled(self, coeff) -> 'FormalSum':
        return FormalSum([(c * Fraction(coeff), v) for c, v in self.items])


def cross_ratio(a: Any, b: Any, c: Any, d: Any) -> Any:
    """
    (abcd) = (a-c)(b-d) / ((a-d)(b-c)); множители с ∞ отбрасываются.

    Raises:
        DegenerateCrossRatio: если две точки совпадают или ∞ встречается дважды
    """
    points = (a, b, c, d)
    if sum(1 for p in points if p is INFINITY) > 1:
        raise DegenerateCrossRatio(f"cr{points}: несколько точек ∞")
    for i in range(4):
        for j in range(i + 1, 4):
            if points[i] is INFINITY or points[j] is INFINITY:
                continue
            if is_zero(points[i] - points[j]):
                raise DegenerateCrossRatio(f"cr{points}: совпадают точки {i + 1} и {j + 1}")
    num = [(a, c), (b, d)]
    den = [(a, d), (b, c)]
    result = None
    for u, v in num:
        if u is INFINITY or v is INFINITY:
            continue
        result = (u - v) if result is None else result * (u - v)
    for u, v in den:
        if u is INFINITY or v is INFINITY:
            continue
        result = 1 / (u - v) if result is None else result / (u - v)
    return result


def cr_quad(q: Quad) -> Any:
    return cross_ratio(*q.points)


def split(e: Any, quad: Quad) -> FormalSum:
    """spl_e([a,b,c,d]) = [e,b,c,d] + [a,e,c,d] + [a,b,e,d] + [a,b,c,e]."""
    items = []
    for i in range(4):
        points = list(quad.points)
        points[i] = e
        items.append((Fraction(1), Quad(tuple(points))))
    return FormalSum(items)


def v0_arguments(x: Any, y: Any) -> List[Any]:
    """Пять аргументов V0(x,y): x, y, (1-x)/(1-xy), 1-xy, (1-y)/(1-xy)."""
    one_xy = 1 - x * y
    return [x, y, (1 - x) / one_xy, one_xy, (1 - y) / one_xy]


def cr_product(j: int, v: Sequence[Any]) -> Any:
    """Произведения двойных отношений cr_1..cr_6 от шести точек."""
    if len(v) != 6:
        raise ValueError(f"cr{j} ожидает 6 точек, получено {len(v)}")
    v1, v2, v3, v4, v5, v6 = v
    cr = cross_ratio
    if j == 1:
        return cr(v1, v3, v2, v4) / cr(v1, v5, v2, v6)
    if j == 2:
        return cr(v1, v2, v3, v4) / cr(v1, v2, v5, v6)
    if j == 3:
        return cr(v1, v3, v2, v4) / cr(v1, v2, v5, v6)
    if j == 4:
        return (cr(v1, v3, v2, v4) / cr(v1, v2, v5, v6)) * (cr(v1, v2, v3, v4) / cr(v1, v5, v2, v6))
    if j == 5:
        return (cr(v1, v2, v3, v4) / cr(v1, v3, v2, v4)) * (cr(v1, v2, v5, v6) / cr(v1, v5, v2, v6))
    if j == 6:
        return (cr(v1, v3, v2, v4) / cr(v1, v6, v2, v5)) * (cr(v1, v4, v2, v3) / cr(v1, v5, v2, v6))
    raise ValueError(f"нет произведения cr{j}")


def orbit_argument(j: int, a: Any, b: Any, c: Any, d: Any, e: Any, g: Any) -> Any:
    """Аргументы f_1..f_9 девяти орбит; четвёрка eabc означает cr(e,a,b,c)."""
    cr = cross_ratio
    if j == 1:
        eabd = cr(e, a, b, d)
        return -(g * (cr(e, a, b, c) - g) * cr(e, c, b, d) * eabd) / (eabd - g) ** 2
    if j == 2:
        return g ** 2 / (1 - g) * (cr(c, a, d, e) * cr(c, a, b, e)) / (cr(e, a, b, d) - g)
    if j == 3:
        return (cr(e, a, b, c) - g) / (1 - g) * cr(e, a, c, d) / (cr(e, a, b, d) - g)
    if j == 4:
        return cr(a, b, d, c) * cr(e, b, a, d) / (1 - g)
    if j == 5:
        return (cr(e, a, b, c) - g) / (1 - g / cr(e, a, b, d))
    if j == 6:
        return (cr(e, a, b, c) - g) / (cr(e, d, a, c) * (1 - g))
    if j == 7:
        return (1 - g / cr(c, a, b, d)) / (1 - g / cr(e, a, b, c))
    if j == 8:
        return (cr(e, a, b, c) - g) / (g * (1 - g)) * cr(e, d, b, c) / cr(e, a, b, d)
    if j == 9:
        return (1 - g / cr(e, a, b, c)) / (1 - g) * cr(d, a, b, c)
    raise ValueError(f"нет аргумента f{j}")


ORBIT_COEFFICIENTS: Tuple[int, ...] = (-1, -2, 2, 4, 4, 8, 2, 3, -6)
