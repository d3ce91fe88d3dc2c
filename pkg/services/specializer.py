"""
Вероятностная проверка многопеременных тождеств в рациональных точках.

Переменные заменяются случайными различными рациональными числами,
значения слотов раскладываются на простые множители, и равенство
тензора нулю проверяется над базисом простых чисел. Несколько
независимых испытаний с одним итогом дают вердикт proxy-pass.
"""
import logging
import random
import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from corpus.registry import entry_expression, entry_variables, entry_variants
from exceptions import (
    DegenerateCrossRatio, Divergent, MplError, PoleAtPoint, ResampleExhausted,
    TermBudgetExceeded, ZeroDenominator
)
from kernel.basis import PrimeBasis
from models import AtomKind, CheckReport, CorpusEntry, IdentityExpr, Level, Verdict
from services.verifier import Residual, symbolic_residual

logger = logging.getLogger(__name__)

_RESAMPLE_ERRORS = (PoleAtPoint, DegenerateCrossRatio, Divergent, ZeroDenominator, ZeroDivisionError)


def _check_arguments(expr: IdentityExpr) -> None:
    """Нулевой аргумент Li, I, log или T, а также нулевой верхний предел G."""
    for term in expr.terms:
        for atom in term.factors:
            args = atom.args[-1:] if atom.kind == AtomKind.G else atom.args
            if any(a == 0 for a in args):
                raise Divergent(f"{atom}: нулевой аргумент")


class Specializer:
    """Класс для проверки записей в случайных рациональных точках."""

    def __init__(self, seed: int = 0, trials: int = 3, retries: int = 20, height: int = 50,
                 max_terms: Optional[int] = 10_000_000, sketch_threshold: int = 200_000,
                 sketch_dimension: int = 6):
        """
        Инициализация.

        Args:
            seed: Зерно генератора точек
            trials: Число независимых испытаний
            retries: Наибольшее число пересэмплирований на испытание
            height: Граница числителей и знаменателей точек
        """
        self.seed = seed
        self.trials = trials
        self.retries = retries
        self.height = height
        self.max_terms = max_terms
        self.sketch_threshold = sketch_threshold
        self.sketch_dimension = sketch_dimension

    def sample_point(self, rng: random.Random, names: Tuple[str, ...]) -> Dict[str, Fraction]:
        """Различные рациональные числа, отличные от 0, 1 и -1."""
        used = {Fraction(0), Fraction(1), Fraction(-1)}
        point = {}
        for name in names:
            while True:
                q = Fraction(rng.randint(-self.height, self.height), rng.randint(1, self.height))
                if q not in used:
                    break
            used.add(q)
            point[name] = q
        return point

    def expression_at(self, entry: CorpusEntry, rng: random.Random,
                      variant: Optional[str]) -> Tuple[IdentityExpr, Dict[str, Fraction]]:
        """
        Раскрывает запись в случайной точке без полюсов.

        Raises:
            ResampleExhausted: если за retries попыток точка не найдена
        """
        names = entry_variables(entry)
        for attempt in range(self.retries):
            point = self.sample_point(rng, names)
            try:
                expr = entry_expression(entry, point, variant, self.max_terms)
                _check_arguments(expr)
                return expr, point
            except _RESAMPLE_ERRORS as e:
                logger.debug(f"{entry.id}: точка {point} отброшена ({e}), попытка {attempt + 1}")
        raise ResampleExhausted(f"{entry.id}: нет точки без полюсов за {self.retries} попыток")

    def _level(self, entry: CorpusEntry, level: Optional[Level]) -> Level:
        level = level or entry.level
        return Level.MOD_PRODUCTS if level == Level.NUMERIC else level

    def run_trials(self, entry: CorpusEntry, level: Level, variant: Optional[str],
                   rng: random.Random) -> Tuple[bool, Residual, List[dict]]:
        trials = []
        failed: Optional[Residual] = None
        last: Optional[Residual] = None
        for k in range(self.trials):
            expr, point = self.expression_at(entry, rng, variant)
            residual = symbolic_residual(expr, level, self.max_terms, self.sketch_threshold,
                                         self.sketch_dimension, self.seed + k, basis=PrimeBasis())
            last = residual
            zero = residual.is_zero()
            trials.append({'point': {n: str(v) for n, v in point.items()},
                           'zero': zero, 'terms': len(expr),
                           'sketch': residual.sketch is not None})
            logger.debug(f"{entry.id}: испытание {k + 1}, {len(expr)} членов, ноль: {zero}")
            if not zero:
                failed = residual
                break
        return failed is None, failed or last, trials

    def check_entry(self, entry: CorpusEntry, level: Optional[Level] = None) -> CheckReport:
        """
        Проверяет запись в trials случайных точках.

        Returns:
            CheckReport: proxy-pass, если все испытания дали ноль
        """
        level = self._level(entry, level)
        logger.info(f"Специализация {entry.id} на уровне {level.value}, испытаний: {self.trials}")
        started = time.perf_counter()
        report = CheckReport(entry.id, level.value, Verdict.FAIL)
        first: Optional[Tuple[Residual, List[dict]]] = None
        try:
            for variant in entry_variants(entry):
                rng = random.Random(f"{self.seed}:{entry.id}:{variant}")
                passed, residual, trials = self.run_trials(entry, level, variant, rng)
                if first is None:
                    first = (residual, trials)
                report.basis_size = max(report.basis_size, residual.basis_size)
                report.peak_terms = max(report.peak_terms, residual.peak_terms)
                if passed:
                    report.verdict = Verdict.PROXY_PASS
                    report.variant = variant
                    report.details['trials'] = trials
                    break
            if not report.verdict.is_success and first is not None:
                residual, trials = first
                report.residual_terms = residual.size()
                report.witnesses = residual.witnesses(10)
                report.details['trials'] = trials
        except TermBudgetExceeded as e:
            logger.error(f"{entry.id}: превышен лимит членов: {e}")
            report.verdict = Verdict.MEMORY_EXCEEDED
            report.message = str(e)
        except MplError as e:
            logger.error(f"{entry.id}: ошибка специализации: {e}")
            report.verdict = Verdict.ERROR
            report.message = str(e)
        report.details['seed'] = self.seed
        report.millis = int((time.perf_counter() - started) * 1000)
        logger.info(f"{entry.id}: {report.verdict.value} за {report.millis} мс")
        return report

    def check_all(self, entries: List[CorpusEntry], level: Optional[Level] = None) -> List[CheckReport]:
        return [self.check_entry(e, level) for e in entries]
