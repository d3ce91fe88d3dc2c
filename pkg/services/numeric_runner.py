"""
Численная проверка записей корпуса.

Записи с флагом branch-search проверяются перебором выбора ветвей
(тождество обращения I_{3,1}); остальные численные записи собраны из
классических Li_w и проверяются через однозначные P_w в случайных
комплексных точках.
"""
import logging
import random
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import mpmath

from corpus.registry import entry_expression, entry_variables, entry_variants
from dsl.cross_ratio import v0_arguments
from exceptions import BranchMismatch, MplError, OnSingularPoint, OutOfConvergenceDomain
from models import CheckReport, CorpusEntry, Level, NumericConfig, Verdict
from numeric.identities import (
    DEFAULT_333_POINTS, eval_333_identity, eval_identity_numeric, is_small, random_points
)
from numeric.polylogs import eval_li_classical, eval_mpl_series, eval_sv

logger = logging.getLogger(__name__)

POINTS_PER_ENTRY = 3
FIVE_TERM_POINTS = 100


class NumericRunner:
    """Класс для численной проверки записей и встроенных классических тождеств."""

    def __init__(self, cfg: Optional[NumericConfig] = None, seed: int = 0,
                 points_per_entry: int = POINTS_PER_ENTRY):
        """
        Инициализация.

        Args:
            cfg: Точность, допуск и точки для поиска ветвей
            seed: Зерно случайных точек
            points_per_entry: Число точек на запись
        """
        self.cfg = cfg or NumericConfig()
        self.seed = seed
        self.points_per_entry = points_per_entry

    def _branch_points(self) -> List[Tuple[Any, Any]]:
        if self.cfg.points:
            return [tuple(p) for p in self.cfg.points]
        return list(DEFAULT_333_POINTS)

    def _check_branch_search(self, entry: CorpusEntry, report: CheckReport) -> None:
        residuals = {}
        for variant in entry_variants(entry):
            try:
                for x, y in self._branch_points():
                    result = eval_333_identity(x, y, self.cfg, entry.template, variant)
                    residuals[f"({x}, {y})"] = {
                        'residual': mpmath.nstr(result.residual, 5),
                        'prescription': str(result.prescription),
                    }
            except BranchMismatch as e:
                logger.warning(f"{entry.id}: нет подходящего выбора ветвей: {e}")
                report.message = str(e)
                report.details['prescription'] = e.prescription
                continue
            report.verdict = Verdict.PROXY_PASS if entry.proxy else Verdict.PASS
            report.variant = variant
            report.message = ""
            break
        report.details['points'] = residuals

    def _check_single_valued(self, entry: CorpusEntry, report: CheckReport) -> None:
        names = entry_variables(entry)
        worst: Dict[Optional[str], Any] = {}
        for variant in entry_variants(entry):
            seed = f"{self.seed}:{entry.id}:{variant}"
            points = random_points(names, seed, self.points_per_entry)
            largest = mpmath.mpf(0)
            with mpmath.workdps(self.cfg.precision + 10):
                for point in points:
                    expr = entry_expression(entry, point, variant, self.cfg.max_terms)
                    try:
                        residual = eval_identity_numeric(expr, self.cfg)
                    except OnSingularPoint as e:
                        logger.debug(f"{entry.id}: точка пропущена ({e})")
                        continue
                    largest = max(largest, residual)
            worst[variant] = largest
            if is_small(largest, self.cfg):
                report.verdict = Verdict.PROXY_PASS if entry.proxy else Verdict.PASS
                report.variant = variant
                break
        report.details['residuals'] = {str(v): mpmath.nstr(r, 5) for v, r in worst.items()}
        report.details['points'] = self.points_per_entry

    def check_entry(self, entry: CorpusEntry) -> CheckReport:
        """
        Проверяет численную запись, пробуя основное выражение и варианты.

        Returns:
            CheckReport: pass, если невязка меньше 10^-tolerance_exp
        """
        logger.info(f"Численная проверка {entry.id}, точность {self.cfg.precision} знаков")
        started = time.perf_counter()
        report = CheckReport(entry.id, Level.NUMERIC.value, Verdict.FAIL)
        report.details['tolerance'] = self.cfg.tolerance
        flags = entry.template.flags if entry.template is not None else ()
        try:
            if "branch-search" in flags:
                self._check_branch_search(entry, report)
            else:
                self._check_single_valued(entry, report)
        except OutOfConvergenceDomain as e:
            logger.error(f"{entry.id}: вне области сходимости: {e}")
            report.verdict = Verdict.ERROR
            report.message = str(e)
        except (MplError, ValueError) as e:
            logger.error(f"{entry.id}: ошибка численной проверки: {e}")
            report.verdict = Verdict.ERROR
            report.message = str(e)
        report.millis = int((time.perf_counter() - started) * 1000)
        logger.info(f"{entry.id}: {report.verdict.value} за {report.millis} мс")
        return report

    def check_all(self, entries: List[CorpusEntry]) -> List[CheckReport]:
        return [self.check_entry(e) for e in entries]

    # Встроенные классические проверки

    def _distribution_li4(self):
        z = mpmath.mpf("0.37")
        li4 = lambda t: eval_li_classical(4, t, self.cfg)
        return li4(z * z) - 8 * (li4(z) + li4(-z))

    def _inversion_li2(self):
        z = mpmath.mpf(-2)
        li2 = lambda t: eval_li_classical(2, t, self.cfg)
        return li2(z) + li2(1 / z) + mpmath.pi ** 2 / 6 + mpmath.log(-z) ** 2 / 2

    def _stuffle_li11(self):
        x, y = mpmath.mpf("0.3"), mpmath.mpf("0.2")
        li11 = lambda a, b: eval_mpl_series((1, 1), (a, b), self.cfg)
        li1 = lambda t: eval_li_classical(1, t, self.cfg)
        li2 = lambda t: eval_li_classical(2, t, self.cfg)
        return li11(x, y) + li11(y, x) + li2(x * y) - li1(x) * li1(y)

    def _five_term_p2(self):
        rng = random.Random(f"{self.seed}:five-term")
        largest = mpmath.mpf(0)
        for _ in range(FIVE_TERM_POINTS):
            x = mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            y = mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            total = mpmath.fsum(eval_sv(2, v, self.cfg) for v in v0_arguments(x, y))
            largest = max(largest, abs(total))
        return largest

    def _inversion_p4(self):
        z = mpmath.mpc("0.6", "0.3")
        return eval_sv(4, 1 / z, self.cfg) + eval_sv(4, z, self.cfg)

    def _series_consistency(self):
        z = mpmath.mpc("0.3", "0.3")
        return eval_mpl_series((3,), (z,), self.cfg) - eval_li_classical(3, z, self.cfg)

    def classical_suite(self) -> List[Tuple[str, Callable[[], Any]]]:
        return [
            ("numeric.distribution.li4", self._distribution_li4),
            ("numeric.inversion.li2", self._inversion_li2),
            ("numeric.stuffle.li11", self._stuffle_li11),
            ("numeric.five-term.p2", self._five_term_p2),
            ("numeric.inversion.p4", self._inversion_p4),
            ("numeric.series-consistency.li3", self._series_consistency),
        ]

    def classical_checks(self, tag_filter: Optional[str] = None) -> List[CheckReport]:
        """
        Встроенные численные проверки классических тождеств.

        Args:
            tag_filter: Префикс id проверки

        Returns:
            Список CheckReport, по одному на проверку
        """
        reports = []
        for check_id, check in self.classical_suite():
            if tag_filter and not check_id.startswith(tag_filter):
                continue
            started = time.perf_counter()
            report = CheckReport(check_id, Level.NUMERIC.value, Verdict.FAIL)
            try:
                with mpmath.workdps(self.cfg.precision + 10):
                    residual = abs(check())
                    report.details['residual'] = mpmath.nstr(residual, 5)
                    if is_small(residual, self.cfg):
                        report.verdict = Verdict.PASS
            except MplError as e:
                logger.error(f"{check_id}: ошибка вычисления: {e}")
                report.verdict = Verdict.ERROR
                report.message = str(e)
            report.millis = int((time.perf_counter() - started) * 1000)
            logger.info(f"{check_id}: {report.verdict.value}")
            reports.append(report)
        return reports
