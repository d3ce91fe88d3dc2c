"""
Генераторы больших производных выражений корпуса.

Генераторы собирают текст блоков identity в том же формате, что и
файлы данных, и раскрывают его с макросами файлов. Орбитные семейства
раскрываются напрямую: через шаблон это сотни тысяч членов с
повторным разбором одинаковых двойных отношений.

Все построители принимают значения переменных: None - символьно,
Fraction - рациональная точка, числа mpmath - численная точка.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath

from dsl import ast
from dsl.cross_ratio import ORBIT_COEFFICIENTS, cross_ratio, orbit_argument
from dsl.expand import (
    expand_at, expand_numeric, expand_symbolic, permutation_sign
)
from dsl.parser import parse_identity
from kernel.polynomials import RationalFunction, make_ring
from models import (
    AtomKind, CorpusEntry, CostClass, IdentityExpr, IdentityTerm, Level, MplAtom
)

logger = logging.getLogger(__name__)

S4_POINTS = "a = 0, b = 1, c = x, d = 1/y, e = inf, f = z"

TWO_FIVE_POINT_SETS = "orbits.two-five-point-sets"
NINE_POINTS = "orbits.nine-points"

ORBIT_VARIABLES = {
    TWO_FIVE_POINT_SETS: ("A1", "A2", "A3", "A4", "A5", "B1", "B2", "B3", "B4", "B5"),
    NINE_POINTS: tuple(f"p{i}" for i in range(1, 10)),
}


@dataclass
class ExprBuilder:
    """
    Построитель выражения записи без раскрытия шаблона.

    Вызов builder(values, variant) возвращает IdentityExpr в области значений values.
    """
    name: str
    variables: Tuple[str, ...]
    fn: Callable[[Optional[Dict[str, Any]], Optional[str]], IdentityExpr]
    variants: Tuple[str, ...] = ()
    description: str = ""

    def __call__(self, values: Optional[Dict[str, Any]] = None,
                 variant: Optional[str] = None) -> IdentityExpr:
        if variant is not None and variant not in self.variants:
            raise KeyError(f"{self.name}: нет варианта {variant}")
        return self.fn(values, variant)


def _is_numeric(values: Optional[Dict[str, Any]]) -> bool:
    return bool(values) and any(isinstance(v, (mpmath.mpf, mpmath.mpc, float, complex))
                                for v in values.values())


def _template(text: str, macro_file: Optional[str] = None,
              data_dir: Optional[str] = None) -> ast.IdentityTemplate:
    from corpus.registry import load_macros

    template = parse_identity(text)
    if macro_file:
        macros = dict(load_macros(macro_file, data_dir))
        macros.update(template.macros)
        template.macros = macros
    return template


def expand_template(template: ast.IdentityTemplate, values: Optional[Dict[str, Any]] = None,
                    variant: Optional[str] = None, limit: Optional[int] = None) -> IdentityExpr:
    """Раскрывает шаблон в области, которую задают значения."""
    if values is None:
        return expand_symbolic(template, variant, limit)
    if _is_numeric(values):
        return expand_numeric(template, values, variant)
    return expand_at(template, values, variant, limit)


def combine(name: str, variables: Tuple[str, ...], parts: Sequence[Tuple[int, IdentityExpr]],
            level: Level = Level.EXACT) -> IdentityExpr:
    """Σ c_i · e_i, слитая в одно выражение."""
    terms = []
    for c, expr in parts:
        terms.extend(IdentityTerm(t.coeff * c, t.factors) for t in expr.terms)
    return IdentityExpr(name, variables, terms, level).merged()


# S4

def build_s4_tilde(data_dir: Optional[str] = None) -> IdentityExpr:
    """
    Шеститочечная сумма из 122 членов в переменных a..f.

    Returns:
        Слитое выражение из атомов Li_4 с аргументами RationalFunction
    """
    template = _template(
        "identity s4.tilde { vars: a, b, c, d, e, f; expr: s4tilde(a, b, c, d, e, f); }",
        "s4.idf", data_dir)
    expr = expand_symbolic(template)
    logger.debug(f"s4tilde: {len(expr)} членов")
    return expr


def build_s4(values: Optional[Dict[str, Any]] = None, data_dir: Optional[str] = None) -> IdentityExpr:
    """
    Специализация шеститочечной суммы a=0, b=1, c=x, d=1/y, e=∞, f=z.

    Члены с отрицательным коэффициентом заменяются обращённым аргументом,
    как в напечатанной трёхпеременной форме.
    """
    template = _template(
        "identity s4.specialised { vars: x, y, z; points: a, b, c, d, e, f; "
        f"bind: {S4_POINTS}; flags: invert-on-negative; "
        "expr: s4tilde(a, b, c, d, e, f); }",
        "s4.idf", data_dir)
    return expand_template(template, values)


def build_s4_display(values: Optional[Dict[str, Any]] = None,
                     data_dir: Optional[str] = None) -> IdentityExpr:
    """Напечатанная трёхпеременная форма из 122 членов."""
    template = _template("identity s4.display { vars: x, y, z; expr: s4(x, y, z); }",
                         "s4.idf", data_dir)
    return expand_template(template, values)


def _tilde_specialisation(data_dir: Optional[str]) -> ExprBuilder:
    def fn(values, variant):
        return combine("s4.tilde-specialisation", ("x", "y", "z"),
                       [(1, build_s4(values, data_dir)), (-1, build_s4_display(values, data_dir))])

    return ExprBuilder("s4.tilde-specialisation", ("x", "y", "z"), fn,
                       description="специализация шеститочечной суммы против напечатанной формы")


def build_931(values: Optional[Dict[str, Any]] = None, data_dir: Optional[str] = None) -> IdentityExpr:
    """S4(x, y, V0(z, w)) + S4(z, w, V0(x, y)) - уравнение для Li_4 от четырёх переменных."""
    template = _template(
        "identity s4.931 { vars: x, y, z, w; level: mod-products; "
        "expr: s4(x, y, V0(z, w)) + s4(z, w, V0(x, y)); }",
        "s4.idf", data_dir)
    return expand_template(template, values)


def _inverse_class(arg: Any) -> Tuple[Any, Any, int]:
    inverse = 1 / arg
    a, b = str(arg), str(inverse)
    return (arg, inverse, 1) if (len(a), a) <= (len(b), b) else (inverse, arg, -1)


def count_up_to_inverses(expr: IdentityExpr) -> int:
    """
    Число различных аргументов Li_n, если f и 1/f отождествлены.

    Li_n(1/f) переносится на Li_n(f) со знаком (-1)^(n-1); классы с нулевой
    суммой коэффициентов не считаются.
    """
    classes: Dict[Any, Fraction] = {}
    for coeff, atom in expr.atoms():
        if atom.kind != AtomKind.LI or atom.depth != 1:
            raise ValueError(f"{expr.name}: ожидались только классические Li_n, найден {atom}")
        representative, _, orientation = _inverse_class(atom.args[0])
        sign = 1 if orientation == 1 else (-1) ** (atom.indices[0] - 1)
        classes[representative] = classes.get(representative, Fraction(0)) + coeff * sign
    return sum(1 for c in classes.values() if c)


def is_swap_invariant(values: Dict[str, Any], data_dir: Optional[str] = None) -> bool:
    """build_931 в точке и в точке с обменом (x, y) ↔ (z, w) совпадают как мультимножества."""
    swapped = {"x": values["z"], "y": values["w"], "z": values["x"], "w": values["y"]}
    first = build_931(values, data_dir).merged()
    second = build_931(swapped, data_dir).merged()
    return {t.factors: t.coeff for t in first.terms} == {t.factors: t.coeff for t in second.terms}


# κ

KAPPA_CHECKS = (
    ("kappa.reflection", "2*kappa(x, z) + 2*kappa(1 - x, z) - reflection_side(x, z)"),
    ("kappa.inversion", "2*kappa(x, z) + 2*kappa(1/x, z) + inversion_side(x, z)"),
)


def build_kappa_checks(data_dir: Optional[str] = None) -> List[IdentityExpr]:
    """
    Обе kappa-комбинации минус их стороны из Li_4, символьно.

    {f}_3 ⊗ g реализуется как S(Li_3(f)) ⊗ g; проверка - rho на первых трёх слотах.
    """
    exprs = []
    for name, body in KAPPA_CHECKS:
        template = _template(
            f"identity {name} {{ vars: x, z; level: {Level.LEADING_MOD_PRODUCTS.value}; "
            f"weight: 4; expr: {body}; }}", "kappa.idf", data_dir)
        exprs.append(expand_symbolic(template))
    return exprs


# Орбиты

def _symbolic_points(names: Sequence[str]) -> Dict[str, RationalFunction]:
    ring = make_ring(tuple(names))
    return {n: RationalFunction.variable(ring, n) for n in names}


def _li4(arg: Any) -> MplAtom:
    return MplAtom(AtomKind.LI, (4,), (arg,))


def _nine_orbits(points: Sequence[Any], g: Any, sign: int) -> Iterator[Tuple[int, Any]]:
    for j, c in enumerate(ORBIT_COEFFICIENTS, start=1):
        yield c * sign, orbit_argument(j, *points, g)


def two_five_point_terms(a: Sequence[Any], b: Sequence[Any]) -> Iterator[Tuple[int, Any]]:
    """
    Σ_{σ,τ ∈ S5} sgn σ sgn τ Σ_j c_j f_j(A_σ, cr(B_τ1..B_τ4)).

    Четвёрка B_τ1..B_τ4 определяет τ, поэтому g перебирает 120 упорядочений.
    """
    signs = [(perm, permutation_sign(perm)) for perm in permutations(range(5))]
    g_values = [(cross_ratio(*(b[i] for i in perm[:4])), s) for perm, s in signs]
    for perm, s in signs:
        moved = [a[i] for i in perm]
        for g, t in g_values:
            yield from _nine_orbits(moved, g, s * t)


def nine_point_terms(points: Sequence[Any], signed: bool = True) -> Iterator[Tuple[int, Any]]:
    """
    Сумма по S9 с весом 4·sgn: 126 выборов пятёрки, 120 её порядков и
    6 порядков оставшейся четвёрки.

    Четверная группа Клейна чётна и сохраняет двойное отношение, поэтому
    у четвёрки достаточно порядков с фиксированной первой точкой.
    """
    n = len(points)
    for chosen in combinations(range(n), 5):
        rest = [i for i in range(n) if i not in chosen]
        g_orders = [(rest[0],) + tail for tail in permutations(rest[1:])]
        g_values = [(order, cross_ratio(*(points[i] for i in order))) for order in g_orders]
        for order_a in permutations(chosen):
            moved = [points[i] for i in order_a]
            for order_g, g in g_values:
                sign = permutation_sign(order_a + order_g) if signed else 1
                yield from _nine_orbits(moved, g, 4 * sign)


def build_orbit_family(kind: str, values: Optional[Dict[str, Any]] = None,
                       variant: Optional[str] = None) -> IdentityExpr:
    """
    Орбитное семейство девяти аргументов f_1..f_9.

    Args:
        kind: TWO_FIVE_POINT_SETS (expr(A, B) + expr(B, A)) или NINE_POINTS
        values: Значения точек; None - рациональные функции
        variant: Для NINE_POINTS "symmetric" - сумма без знаков

    Returns:
        Выражение из атомов Li_4; в численной области без слияния
    """
    names = ORBIT_VARIABLES[kind]
    point_values = _symbolic_points(names) if values is None else values
    pts = [point_values[n] for n in names]
    if kind == TWO_FIVE_POINT_SETS:
        a, b = pts[:5], pts[5:]
        raw = list(two_five_point_terms(a, b)) + list(two_five_point_terms(b, a))
    elif kind == NINE_POINTS:
        raw = list(nine_point_terms(pts, signed=variant != "symmetric"))
    else:
        raise KeyError(f"неизвестное орбитное семейство {kind}")
    name = kind if variant is None else f"{kind}/{variant}"
    terms = [IdentityTerm(Fraction(c), (_li4(arg),)) for c, arg in raw]
    expr = IdentityExpr(name, names, terms, Level.NUMERIC)
    logger.debug(f"{name}: {len(terms)} членов орбиты")
    return expr if _is_numeric(values) else expr.merged()


def orbit_builder(entry_id: str) -> ExprBuilder:
    """Быстрый построитель для записи с флагом fast-orbit."""
    variants = ("symmetric",) if entry_id == NINE_POINTS else ()
    return ExprBuilder(entry_id, ORBIT_VARIABLES[entry_id],
                       lambda values, variant: build_orbit_family(entry_id, values, variant),
                       variants=variants, description="прямое раскрытие орбиты")


def generated_entries(data_dir: Optional[str] = None) -> List[CorpusEntry]:
    """Записи корпуса, у которых нет формы в файлах данных."""
    builder = _tilde_specialisation(data_dir)
    return [
        CorpusEntry(
            id=builder.name,
            template=None,
            level=Level.EXACT,
            cost=CostClass.CHEAP,
            tags=("s4",),
            source="generators.py",
            builder=builder,
        ),
    ]
