"""
Численная проверка тождеств: значения атомов, поиск выбора ветвей
и однозначная реализация через P_m.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from exceptions import BranchMismatch, OutOfConvergenceDomain
from models import AtomKind, IdentityExpr, IdentityTerm, MplAtom, NumericConfig
from numeric.polylogs import (
    eval_g, eval_i_depth2, eval_i_series, eval_li_classical, eval_li_increasing, eval_sv
)

logger = logging.getLogger(__name__)

INVERSION333_ID = "depth2.inversion333.numeric"

# Вещественные точки 0 < y < x < 1.
DEFAULT_333_POINTS: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(7, 10), Fraction(3, 10)),
    (Fraction(3, 5), Fraction(1, 4)),
)


def to_mp(v: Any):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpmathify(v)


@dataclass(frozen=True)
class BranchPrescription:
    """Стороны x ± i0, y ± i0, знак среза iπ и знак константы."""
    sx: int = -1
    sy: int = -1
    s_ipi: int = 1
    s_const: int = 1

    def __str__(self) -> str:
        def sign(s):
            return "+" if s > 0 else "-"
        return (f"x{sign(self.sx)}i0, y{sign(self.sy)}i0, "
                f"ipi:{sign(self.s_ipi)}, const:{sign(self.s_const)}")


def all_prescriptions() -> List[BranchPrescription]:
    return [BranchPrescription(*signs) for signs in product((1, -1), repeat=4)]


class NumericEvaluator:
    """
    Значения атомов и выражений в точке mpmath.

    Args:
        cfg: Точность и допуск
        prescription: Знаки для среза iπ и константных членов
    """

    def __init__(self, cfg: NumericConfig, prescription: Optional[BranchPrescription] = None):
        self.cfg = cfg
        self.prescription = prescription or BranchPrescription()
        self._cache: Dict[MplAtom, Any] = {}

    def value_atom(self, atom: MplAtom):
        """
        Raises:
            OutOfConvergenceDomain: если у атома нет реализованного значения
            OnBranchPoint: для Li_1(1)
        """
        cached = self._cache.get(atom)
        if cached is not None:
            return cached
        cfg = self.cfg
        kind, indices = atom.kind, atom.indices
        args = [to_mp(a) for a in atom.args]
        if kind == AtomKind.LI:
            value = eval_li_increasing(indices, args, cfg)
        elif kind == AtomKind.I and len(indices) == 1:
            value = -eval_li_classical(indices[0], 1 / args[0], cfg)
        elif kind == AtomKind.I and len(indices) == 2:
            bound = 1 + mpmath.mpf(cfg.epsilon)
            if all(abs(a) > bound for a in args):
                value = eval_i_series(indices, args, cfg)
            else:
                value = eval_i_depth2(indices[0], indices[1], args[0], args[1], cfg)
        elif kind == AtomKind.I:
            value = eval_i_series(indices, args, cfg)
        elif kind == AtomKind.G:
            value = eval_g(args[:-1], args[-1], cfg)
        elif kind == AtomKind.LOG:
            value = mpmath.log(args[0])
        elif kind == AtomKind.IPI:
            value = self.prescription.s_ipi * mpmath.mpc(0, mpmath.pi)
        else:
            raise OutOfConvergenceDomain(f"у атома {atom} нет численного значения")
        self._cache[atom] = value
        return value

    def value_term(self, term: IdentityTerm):
        value = mpmath.mpf(term.coeff.numerator) / term.coeff.denominator
        for atom in term.factors:
            value *= self.value_atom(atom)
        if term.factors and all(a.kind == AtomKind.IPI for a in term.factors):
            value *= self.prescription.s_const
        return value

    def value_expr(self, expr: IdentityExpr):
        with mpmath.workdps(self.cfg.precision + 10):
            return mpmath.fsum(self.value_term(t) for t in expr.terms)


def eval_mpl(atom: MplAtom, cfg: NumericConfig):
    """Значение одного атома в численной точке."""
    with mpmath.workdps(cfg.precision + 10):
        return NumericEvaluator(cfg).value_atom(atom)


@dataclass
class BranchResult:
    """Итог поиска ветвей: наименьшая невязка и выбор, на котором она достигнута."""
    residual: Any
    prescription: BranchPrescription
    residuals: Dict[str, str]


def _shifted(value: Any, side: int, eta) -> Any:
    return mpmath.mpc(to_mp(value), side * eta)


def eval_333_identity(x: Any, y: Any, cfg: NumericConfig, template=None,
                      variant: Optional[str] = None) -> BranchResult:
    """
    Невязка тождества обращения I_{3,1} с членами-срезами и константой.

    Перебирает 16 выборов ветвей и возвращает лучший.

    Args:
        x, y: Точка, по умолчанию вещественная 0 < y < x < 1
        cfg: Точность и допуск
        template: Шаблон тождества; по умолчанию запись корпуса

    Raises:
        OutOfConvergenceDomain: если атом вне реализованной области
        BranchMismatch: если ни один выбор не даёт невязку меньше τ
    """
    from dsl.expand import expand_numeric

    if template is None:
        from corpus.registry import get_entry
        template = get_entry(INVERSION333_ID).template
    tolerance = mpmath.mpf(10) ** -cfg.tolerance_exp
    residuals: Dict[str, str] = {}
    best: Optional[Tuple[Any, BranchPrescription]] = None
    with mpmath.workdps(cfg.precision + 10):
        eta = mpmath.mpf(10) ** -(cfg.precision + 5)
        for prescription in all_prescriptions():
            point = {"x": _shifted(x, prescription.sx, eta), "y": _shifted(y, prescription.sy, eta)}
            expr = expand_numeric(template, point, variant)
            residual = abs(NumericEvaluator(cfg, prescription).value_expr(expr))
            residuals[str(prescription)] = mpmath.nstr(residual, 5)
            logger.debug(f"333 в ({x}, {y}), {prescription}: невязка {mpmath.nstr(residual, 5)}")
            if best is None or residual < best[0]:
                best = (residual, prescription)
    residual, prescription = best
    if residual >= tolerance:
        raise BranchMismatch(mpmath.nstr(residual, 8), str(prescription))
    return BranchResult(residual, prescription, residuals)


def eval_identity_numeric(expr: IdentityExpr, cfg: NumericConfig):
    """
    |Σ c · P_w(аргумент)| для выражения из классических Li_w в численной точке.

    Raises:
        OnSingularPoint: если аргумент равен 0 или 1
        ValueError: если в выражении есть не Li_w-атомы
    """
    with mpmath.workdps(cfg.precision + 10):
        values = []
        for term in expr.terms:
            if len(term.factors) != 1:
                raise ValueError(f"{expr.name}: член-произведение в однозначной реализации")
            atom = term.factors[0]
            if atom.kind != AtomKind.LI or atom.depth != 1:
                raise ValueError(f"{expr.name}: атом {atom} не классический полилогарифм")
            coeff = mpmath.mpf(term.coeff.numerator) / term.coeff.denominator
            values.append(coeff * eval_sv(atom.indices[0], atom.args[0], cfg))
        return abs(mpmath.fsum(values))


def is_small(residual: Any, cfg: NumericConfig) -> bool:
    return residual < mpmath.mpf(10) ** -cfg.tolerance_exp


def random_points(names: Sequence[str], seed: int, count: int, complex_points: bool = True):
    """Детерминированные случайные точки: действительная и мнимая части из (-1, 1)."""
    generator = random.Random(seed)
    points = []
    for _ in range(count):
        point = {}
        for name in names:
            re = Fraction(generator.randint(-999, 999), 1000)
            im = Fraction(generator.randint(-999, 999), 1000) if complex_points else Fraction(0)
            point[name] = mpmath.mpc(to_mp(re), to_mp(im))
        points.append(point)
    return points
