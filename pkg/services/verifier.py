"""
Проверка записей корпуса на символьных уровнях.

Для каждой записи строится общий взаимно простой базис по всем
аргументам, считается символ, применяется проектор уровня
(нет / rho / rho на первых слотах / delta22) и проверяется равенство нулю. Основное
выражение пробуется первым, затем варианты по порядку.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from corpus.generators import count_up_to_inverses
from corpus.registry import entry_expression, entry_variants, get_entry
from exceptions import MplError, TermBudgetExceeded
from models import CheckReport, CorpusEntry, IdentityExpr, Level, Verdict
from symbols.iterated import SymbolCalculator, basis_for
from symbols.sketch import TensorSketch
from symbols.tensors import TensorSum, TermAccumulator, delta22_antisymmetrize, rho_project

logger = logging.getLogger(__name__)


@dataclass
class Residual:
    """Остаток после проектора: точный тензор или эскиз."""
    tensor: Optional[TensorSum] = None
    sketch: Optional[TensorSketch] = None
    basis_size: int = 0
    peak_terms: int = 0

    def is_zero(self) -> bool:
        if self.sketch is not None:
            return self.sketch.is_zero()
        return self.tensor.is_zero()

    def size(self) -> int:
        if self.sketch is not None:
            return self.sketch.nonzero_count()
        return len(self.tensor)

    def witnesses(self, limit: int = 10) -> List[str]:
        if self.tensor is None:
            return []
        return self.tensor.witnesses(limit)


class SymbolSum:
    """
    Накопитель символа выражения с переходом на эскиз.

    Пока число живых членов не больше threshold, сумма точная; затем
    накопленное переносится в TensorSketch и дальнейшие члены
    добавляются в эскиз.
    """

    def __init__(self, calculator: SymbolCalculator, weight: int, threshold: int,
                 limit: Optional[int], dimension: int = 6, seed: int = 0):
        self.calculator = calculator
        self.weight = weight
        self.threshold = threshold
        self.dimension = dimension
        self.seed = seed
        self.acc = TermAccumulator(limit=limit)
        self.sketch: Optional[TensorSketch] = None

    def _spill(self) -> None:
        logger.info(f"Переход на эскиз: {len(self.acc.terms)} членов > {self.threshold}")
        self.sketch = TensorSketch(self.weight, self.dimension, self.seed)
        self.sketch.add_tensor(self.acc.result(self.weight))
        self.acc = TermAccumulator()

    def add_expr(self, expr: IdentityExpr, coeff=1) -> None:
        for term in expr.terms:
            tensor = self.calculator.symbol_term(term)
            c = Fraction(term.coeff) * Fraction(coeff)
            if self.sketch is not None:
                self.sketch.add_tensor(tensor, c)
                continue
            self.acc.add_tensor(tensor, c)
            if len(self.acc.terms) > self.threshold:
                self._spill()

    def project(self, level: Level, limit: Optional[int] = None) -> Residual:
        basis = self.calculator.basis
        leading = level == Level.LEADING_MOD_PRODUCTS
        if self.sketch is not None:
            sketch = self.sketch
            if level in (Level.MOD_PRODUCTS, Level.LEADING_MOD_PRODUCTS):
                sketch = sketch.rho(leading)
            elif level == Level.DELTA22:
                sketch = sketch.delta22()
            return Residual(sketch=sketch, basis_size=len(basis), peak_terms=self.threshold)
        tensor = self.acc.result(self.weight, basis)
        if level in (Level.MOD_PRODUCTS, Level.LEADING_MOD_PRODUCTS):
            tensor = rho_project(tensor, limit, leading)
        elif level == Level.DELTA22:
            tensor = delta22_antisymmetrize(tensor, limit)
        return Residual(tensor=tensor, basis_size=len(basis), peak_terms=self.acc.peak)


def symbolic_residual(expr: IdentityExpr, level: Level, max_terms: Optional[int] = None,
                      sketch_threshold: int = 200_000, sketch_dimension: int = 6,
                      seed: int = 0, basis=None) -> Residual:
    """
    Остаток выражения после проектора уровня.

    Args:
        expr: Раскрытое выражение
        level: EXACT, MOD_PRODUCTS, LEADING_MOD_PRODUCTS или DELTA22
        basis: Готовый базис; по умолчанию строится по аргументам выражения

    Raises:
        TermBudgetExceeded: если превышен лимит живых членов
        WrongWeight: delta22 для веса, отличного от 4
    """
    if not expr.terms:
        return Residual(tensor=TensorSum.zero(0))
    if basis is None:
        basis = basis_for([expr])
    logger.debug(f"{expr.name}: базис из {len(basis)} букв, {len(expr)} членов")
    calculator = SymbolCalculator(basis, max_terms)
    total = SymbolSum(calculator, expr.weight, sketch_threshold, max_terms,
                      sketch_dimension, seed)
    total.add_expr(expr)
    residual = total.project(level, max_terms)
    residual.peak_terms = max(residual.peak_terms, calculator.peak_terms)
    return residual


@dataclass
class VerifierConfig:
    """Параметры проверки, передаваемые и в рабочие процессы."""
    max_terms: int = 10_000_000
    sketch_threshold: int = 200_000
    sketch_dimension: int = 6
    seed: int = 0
    data_dir: Optional[str] = None
    numeric: Dict[str, Any] = field(default_factory=dict)


def argument_count(expr: IdentityExpr) -> Optional[int]:
    """Число аргументов с точностью до f ~ 1/f; None, если в выражении не только Li_n."""
    try:
        return count_up_to_inverses(expr)
    except (ValueError, ArithmeticError, MplError):
        return None


def final_verdict(entry: CorpusEntry, passed: bool) -> Verdict:
    if not passed:
        return Verdict.FAIL
    return Verdict.PROXY_PASS if entry.proxy else Verdict.PASS


class Verifier:
    """Класс для проверки записей корпуса на заданных уровнях."""

    def __init__(self, config: Optional[VerifierConfig] = None, numeric_runner=None,
                 workers: int = 1):
        """
        Инициализация проверяющего.

        Args:
            config: Лимиты, порог эскиза и зерно
            numeric_runner: Исполнитель численных проверок для уровня numeric
            workers: Число процессов; 1 - проверка в текущем процессе
        """
        self.config = config or VerifierConfig()
        self.numeric_runner = numeric_runner
        self.workers = workers

    def _check_expression(self, expr: IdentityExpr, level: Level) -> Residual:
        cfg = self.config
        return symbolic_residual(expr, level, cfg.max_terms, cfg.sketch_threshold,
                                 cfg.sketch_dimension, cfg.seed)

    def check_entry(self, entry: CorpusEntry, level: Optional[Level] = None) -> CheckReport:
        """
        Проверяет одну запись; ошибки записи превращаются в вердикт error.

        Args:
            entry: Запись корпуса
            level: Уровень вместо объявленного

        Returns:
            CheckReport с вердиктом, остатком и свидетелями
        """
        level = level or entry.level
        logger.info(f"Проверка {entry.id} на уровне {level.value}")
        started = time.perf_counter()
        if level == Level.NUMERIC:
            if self.numeric_runner is None:
                return CheckReport(entry.id, level.value, Verdict.SKIPPED,
                                   message="численная проверка не настроена")
            return self.numeric_runner.check_entry(entry)
        report = CheckReport(entry.id, level.value, Verdict.FAIL)
        first: Optional[Residual] = None
        try:
            variants = entry_variants(entry)
            for variant in variants:
                expr = entry_expression(entry, variant=variant, limit=self.config.max_terms)
                if first is None:
                    count = argument_count(expr)
                    if count is not None:
                        report.details['arguments'] = count
                residual = self._check_expression(expr, level)
                if first is None:
                    first = residual
                report.basis_size = max(report.basis_size, residual.basis_size)
                report.peak_terms = max(report.peak_terms, residual.peak_terms)
                if residual.sketch is not None:
                    report.details['sketch'] = True
                if residual.is_zero():
                    report.verdict = final_verdict(entry, True)
                    report.variant = variant
                    if len(variants) > 1:
                        report.details['calibration'] = variant or "expr"
                    break
            if not report.verdict.is_success and first is not None:
                report.residual_terms = first.size()
                report.witnesses = first.witnesses(10)
        except TermBudgetExceeded as e:
            logger.error(f"{entry.id}: превышен лимит членов: {e}")
            report.verdict = Verdict.MEMORY_EXCEEDED
            report.message = str(e)
        except MplError as e:
            logger.error(f"{entry.id}: ошибка проверки: {e}")
            report.verdict = Verdict.ERROR
            report.message = str(e)
        except Exception as e:
            logger.error(f"{entry.id}: непредвиденная ошибка: {e}")
            report.verdict = Verdict.ERROR
            report.message = f"{type(e).__name__}: {e}"
        report.millis = int((time.perf_counter() - started) * 1000)
        logger.info(f"{entry.id}: {report.verdict.value} за {report.millis} мс"
                    + (f" (вариант {report.variant})" if report.variant else ""))
        return report

    def check_all(self, entries: List[CorpusEntry], level: Optional[Level] = None) -> List[CheckReport]:
        """Проверяет записи; при workers > 1 - в пуле процессов. Порядок отчётов - порядок записей."""
        if self.workers <= 1 or len(entries) <= 1:
            return [self.check_entry(e, level) for e in entries]
        jobs = [(e.id, level.value if level else None, self.config) for e in entries]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            results = list(pool.map(_check_in_worker, jobs))
        return [CheckReport.from_dict(data) for data in results]


def _check_in_worker(job: Tuple[str, Optional[str], VerifierConfig]) -> dict:
    from models import NumericConfig
    from services.numeric_runner import NumericRunner

    entry_id, level, config = job
    entry = get_entry(entry_id, config.data_dir)
    runner = NumericRunner(NumericConfig(**config.numeric), seed=config.seed)
    verifier = Verifier(config, runner)
    return verifier.check_entry(entry, Level(level) if level else None).to_dict()


def exit_code(reports: List[CheckReport], entries: List[CorpusEntry]) -> int:
    """
    0, если все ожидаемо проходящие записи прошли, иначе 1.

    Записи-заместители (proxy) в итог не входят.
    """
    expected = {e.id: e for e in entries}
    for report in reports:
        entry = expected.get(report.entry_id)
        if entry is None or not entry.expect_pass or entry.proxy:
            continue
        if report.verdict == Verdict.SKIPPED:
            continue
        if not report.verdict.is_success:
            return 1
    return 0
