#!/usr/bin/env python3
"""
Главный файл для запуска проверок тождеств полилогарифмов.

Подкоманды:
    check       символьная проверка записей корпуса на объявленных уровнях
    rank        ранги семейств I_31, I_22, I_13 после delta22
    specialize  проверка многопеременных записей в случайных рациональных точках
    numeric     численные проверки
    report      сборка нескольких отчётов JSON в один

Коды выхода: 0 - все ожидаемо проходящие записи прошли, 1 - есть
провалы, 2 - ошибка использования или ввода-вывода.
"""
import argparse
import logging
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from corpus.registry import (
    REQUIRED_IDS, entry_from_template, entry_variables, list_identities, resolve_data_dir
)
from dsl.parser import parse_corpus
from exceptions import MplError
from models import CheckReport, CorpusEntry, Level, NumericConfig, Verdict
from services import NumericRunner, Ranker, Specializer, Verifier, VerifierConfig, exit_code
from storage import FORMATS, ReportStore
from utils import Settings

logger = logging.getLogger(__name__)

LOG_FILE = 'mpl_checks.log'
SPECIALIZE_MIN_VARIABLES = 5


def setup_logging(verbose: bool = False) -> None:
    """Настройка логирования в файл и на stdout."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(LOG_FILE, encoding='utf-8'),
            logging.StreamHandler(sys.stdout)
        ],
        force=True
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--filter", help="префикс id или тег записи")
    common.add_argument("--seed", type=int, default=0, help="зерно случайных точек")
    common.add_argument("--out", help="файл отчёта")
    common.add_argument("--format", choices=FORMATS, help="формат отчёта")
    common.add_argument("--timing", action="store_true", help="записывать время проверок")
    common.add_argument("--data-dir", help="каталог файлов тождеств")
    common.add_argument("--settings", default="mpl_settings.json", help="файл настроек")
    common.add_argument("--verbose", "-v", action="store_true", help="подробный журнал")

    parser = argparse.ArgumentParser(description="Проверка тождеств кратных полилогарифмов")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="символьная проверка корпуса")
    check.add_argument("files", nargs="*", help="файлы .idf вместо корпуса")
    check.add_argument("--level", choices=[lv.value for lv in Level], help="уровень вместо объявленного")
    check.add_argument("--heavy", action="store_true", help="включить тяжёлые записи")
    check.add_argument("--workers", type=int, help="число процессов")
    check.add_argument("--precision", type=int, help="точность численных записей")

    commands.add_parser("rank", parents=[common], help="ранги семейств перестановок")

    specialize = commands.add_parser("specialize", parents=[common], help="проверка в рациональных точках")
    specialize.add_argument("--trials", type=int, help="число испытаний")
    specialize.add_argument("--level", choices=[lv.value for lv in Level], help="уровень вместо объявленного")
    specialize.add_argument("--heavy", action="store_true", help="включить тяжёлые записи")

    numeric = commands.add_parser("numeric", parents=[common], help="численные проверки")
    numeric.add_argument("--precision", type=int, help="десятичные знаки")
    numeric.add_argument("--points", help="точки поиска ветвей: 7/10,3/10;3/5,1/4")

    report = commands.add_parser("report", parents=[common], help="объединение отчётов JSON")
    report.add_argument("inputs", nargs="+", help="файлы отчётов JSON")
    return parser


def parse_points(text: Optional[str]) -> List[Tuple[Fraction, Fraction]]:
    """
    Точки вида "x1,y1;x2,y2" с рациональными координатами.

    Raises:
        ValueError: при неверной записи точки
    """
    if not text:
        return []
    points = []
    for chunk in text.split(";"):
        coords = [Fraction(c.strip()) for c in chunk.split(",")]
        if len(coords) != 2:
            raise ValueError(f"точка должна иметь две координаты: {chunk}")
        points.append((coords[0], coords[1]))
    return points


def numeric_config(settings: Settings, precision: Optional[int] = None,
                   points: Sequence[Tuple[Fraction, Fraction]] = ()) -> NumericConfig:
    precision = precision or settings.get("numeric.precision", 50)
    tolerance = settings.get("numeric.tolerance_exp", 30)
    if tolerance > precision - 5:
        logger.warning(f"Допуск 1e-{tolerance} понижен до 1e-{precision - 5} "
                       f"для точности {precision} знаков")
        tolerance = precision - 5
    return NumericConfig(precision=precision, tolerance_exp=tolerance,
                         epsilon=settings.get("numeric.epsilon", "1e-3"),
                         points=list(points))


def load_entries(args: argparse.Namespace) -> List[CorpusEntry]:
    """Записи из явных файлов или из корпуса с фильтром."""
    files = getattr(args, "files", None)
    if not files:
        return list_identities(args.filter, args.data_dir)
    entries = []
    for path in files:
        with open(path, 'r', encoding='utf-8') as f:
            corpus_file = parse_corpus(f.read(), os.path.basename(path))
        entries.extend(entry_from_template(t) for t in corpus_file.identities)
    entries = [e for e in entries if e.matches(args.filter)]
    entries.sort(key=lambda e: e.id)
    return entries


def skipped_heavy(entries: List[CorpusEntry], heavy: bool) -> Tuple[List[CorpusEntry], List[CheckReport]]:
    if heavy:
        return entries, []
    selected = [e for e in entries if not e.is_heavy]
    skipped = [CheckReport(e.id, e.level.value, Verdict.SKIPPED, message="тяжёлая запись, нужен --heavy")
               for e in entries if e.is_heavy]
    return selected, skipped


def cmd_check(args: argparse.Namespace, settings: Settings) -> Tuple[List[CheckReport], int]:
    entries = load_entries(args)
    selected, reports = skipped_heavy(entries, args.heavy)
    numeric = numeric_config(settings, args.precision)
    config = VerifierConfig(
        max_terms=settings.get("check.max_terms"),
        sketch_threshold=settings.get("check.sketch_threshold"),
        sketch_dimension=settings.get("check.sketch_dimension"),
        seed=args.seed,
        data_dir=args.data_dir,
        numeric={'precision': numeric.precision, 'tolerance_exp': numeric.tolerance_exp,
                 'epsilon': numeric.epsilon},
    )
    workers = args.workers or settings.get("check.workers", 1)
    verifier = Verifier(config, NumericRunner(numeric, seed=args.seed), workers)
    level = Level(args.level) if args.level else None
    reports.extend(verifier.check_all(selected, level))
    return reports, exit_code(reports, entries)


def cmd_rank(args: argparse.Namespace, settings: Settings) -> Tuple[List[CheckReport], int]:
    reports = Ranker().check_all(args.filter)
    failed = any(not r.verdict.is_success for r in reports)
    return reports, 1 if failed else 0


def cmd_specialize(args: argparse.Namespace, settings: Settings) -> Tuple[List[CheckReport], int]:
    entries = list_identities(args.filter, args.data_dir)
    if not args.filter:
        entries = [e for e in entries if len(entry_variables(e)) >= SPECIALIZE_MIN_VARIABLES]
    selected, reports = skipped_heavy(entries, args.heavy)
    options = settings.section("specialize")
    specializer = Specializer(
        seed=args.seed,
        trials=args.trials or options.get("trials", 3),
        retries=options.get("retries", 20),
        height=options.get("height", 50),
        max_terms=settings.get("check.max_terms"),
        sketch_threshold=settings.get("check.sketch_threshold"),
        sketch_dimension=settings.get("check.sketch_dimension"),
    )
    level = Level(args.level) if args.level else None
    reports.extend(specializer.check_all(selected, level))
    expected = {e.id for e in entries if e.expect_pass}
    failed = any(r.entry_id in expected and r.verdict not in (Verdict.PROXY_PASS, Verdict.SKIPPED)
                 for r in reports)
    return reports, 1 if failed else 0


def cmd_numeric(args: argparse.Namespace, settings: Settings) -> Tuple[List[CheckReport], int]:
    cfg = numeric_config(settings, args.precision, parse_points(args.points))
    runner = NumericRunner(cfg, seed=args.seed)
    entries = [e for e in list_identities(args.filter, args.data_dir) if e.level == Level.NUMERIC]
    reports = runner.check_all(entries)
    reports.extend(runner.classical_checks(args.filter))
    code = exit_code(reports, entries)
    if any(not r.verdict.is_success for r in reports if r.entry_id.startswith("numeric.")):
        code = 1
    return reports, code


def cmd_report(args: argparse.Namespace, settings: Settings) -> Tuple[List[CheckReport], int]:
    reports = []
    for path in args.inputs:
        reports.extend(ReportStore.load(path).reports)
    logger.info(f"Прочитано отчётов: {len(reports)} из {len(args.inputs)} файлов")
    failed = any(r.verdict in (Verdict.FAIL, Verdict.ERROR, Verdict.MEMORY_EXCEEDED) for r in reports)
    return reports, 1 if failed else 0


COMMANDS = {
    "check": cmd_check,
    "rank": cmd_rank,
    "specialize": cmd_specialize,
    "numeric": cmd_numeric,
    "report": cmd_report,
}


def emit(reports: List[CheckReport], args: argparse.Namespace, settings: Settings) -> None:
    """Записывает отчёт в файл или печатает текстовую сводку."""
    store = ReportStore(REQUIRED_IDS if args.command in ("check", "report") else (),
                        include_timing=args.timing)
    store.add(reports)
    fmt = args.format or settings.get("report.format", "json")
    if args.out:
        store.save(args.out, fmt)
    else:
        sys.stdout.write(store.render(args.format or "text"))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа; возвращает код выхода."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        settings = Settings(args.settings)
        if args.data_dir is None:
            args.data_dir = settings.get("corpus.data_dir")
        logger.info(f"Команда {args.command}, каталог корпуса: {resolve_data_dir(args.data_dir)}")
        reports, code = COMMANDS[args.command](args, settings)
        emit(reports, args, settings)
        logger.info(f"Завершено с кодом {code}")
        return code
    except (OSError, ValueError, MplError) as e:
        logger.critical(f"Ошибка ввода-вывода или параметров: {e}")
        return 2
    except Exception as e:
        logger.critical(f"Критическая ошибка: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
