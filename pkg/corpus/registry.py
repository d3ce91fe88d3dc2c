"""
Реестр корпуса тождеств: загрузка файлов .idf и отбор записей.

Каталог данных выбирается так: явный аргумент, затем переменная
окружения MPL_CORPUS_DIR, затем каталог data рядом с модулем.
"""
import glob
import logging
import os
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

from dsl import ast
from dsl.parser import parse_corpus
from corpus.generators import expand_template, generated_entries, orbit_builder
from exceptions import ParseError
from models import CorpusEntry, CostClass, IdentityExpr, Level

logger = logging.getLogger(__name__)

DEFAULT_DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
ENV_DATA_DIR = "MPL_CORPUS_DIR"

# Записи, которые обязан содержать полный корпус; по ним строится таблица покрытия.
REQUIRED_IDS = (
    "classical.inversion.li2",
    "classical.inversion.li3",
    "classical.inversion.li4",
    "classical.reflection.li2",
    "classical.distribution.li2",
    "classical.distribution.li3",
    "classical.distribution.li4",
    "dilog.five-term",
    "dilog.five-term.numeric",
    "classical.inversion.numeric",
    "depth1.stuffle",
    "depth1.li11-reduction",
    "weight3.li21",
    "weight3.li111",
    "weight3.split-independence",
    "weight4.nine-term",
    "weight4.nine-term.numeric",
    "depth2.nine-term-symbol",
    "depth2.delta-of-i31",
    "depth2.antisymmetry",
    "depth2.twoterm.identity",
    "depth2.twoterm.one-minus",
    "depth2.twoterm.inverse",
    "depth2.twoterm.inverse-one-minus",
    "depth2.twoterm.one-minus-inverse",
    "depth2.twoterm.ratio",
    "depth2.inversion-li4",
    "depth2.inversion333.symbol",
    "depth2.inversion333.numeric",
    "depth2.symmetries.31",
    "depth2.symmetries.22",
    "depth2.symmetries.13",
    "depth2.swap-sum-li4",
    "depth2.cyclic.22",
    "depth2.cyclic.31",
    "depth2.i31-via-i22",
    "depth2.i31-via-i22.symmetrised",
    "depth2.i31-via-i22.antisymmetrised",
    "depth2.convert.22-from-31",
    "depth2.convert.13-from-31",
    "depth2.convert.31-from-22",
    "depth2.convert.13-from-22",
    "depth2.convert.31-from-13",
    "depth2.convert.22-from-13",
    "depth2.xi-twenty-terms",
    "depth3.antisymmetrised.last-swap",
    "depth3.antisymmetrised.last-cycle",
    "depth3.via-i31",
    "depth4.swap-middle",
    "depth4.reverse-tail",
    "depth4.shuffle-tail",
    "depth4.cyclic-tail",
    "depth4.six-term",
    "depth4.eighteen-term",
    "depth4.alternating-swap",
    "s4.five-term-arguments",
    "s4.five-term-specialisation",
    "s4.tilde-specialisation",
    "s4.i31-of-five-term",
    "s4.six-point-specialisation",
    "s4.four-variable",
    "s4.four-variable.numeric",
    "kappa.reflection",
    "kappa.inversion",
    "orbits.two-five-point-sets",
    "orbits.nine-points",
)


def resolve_data_dir(data_dir: Optional[str] = None) -> str:
    """Каталог файлов тождеств с учётом MPL_CORPUS_DIR."""
    if data_dir:
        return data_dir
    return os.environ.get(ENV_DATA_DIR) or DEFAULT_DATA_DIR


@lru_cache(maxsize=64)
def _parse_file(path: str, mtime: float) -> ast.CorpusFile:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_corpus(f.read(), os.path.basename(path))


def load_corpus_files(data_dir: Optional[str] = None) -> List[ast.CorpusFile]:
    """
    Разбирает все файлы *.idf каталога в алфавитном порядке.

    Raises:
        ParseError: при ошибке разбора любого файла
        OSError: если каталог недоступен
    """
    directory = resolve_data_dir(data_dir)
    if not os.path.isdir(directory):
        raise OSError(f"каталог корпуса не найден: {directory}")
    files = []
    for path in sorted(glob.glob(os.path.join(directory, "*.idf"))):
        try:
            files.append(_parse_file(path, os.path.getmtime(path)))
        except ParseError as e:
            logger.error(f"Ошибка разбора {path}: {e}")
            raise
    logger.debug(f"Загружено {len(files)} файлов корпуса из {directory}")
    return files


def load_templates(data_dir: Optional[str] = None) -> Dict[str, ast.IdentityTemplate]:
    """
    Шаблоны всех тождеств по id.

    Raises:
        ParseError: если id повторяется
    """
    templates: Dict[str, ast.IdentityTemplate] = {}
    for corpus_file in load_corpus_files(data_dir):
        for template in corpus_file.identities:
            if template.name in templates:
                raise ParseError(f"{corpus_file.path}: повторный id {template.name}", template.line, 1)
            templates[template.name] = template
    return templates


def load_macros(filename: str, data_dir: Optional[str] = None) -> Dict[str, ast.MacroDef]:
    """Макросы одного файла корпуса (например, s4.idf)."""
    path = os.path.join(resolve_data_dir(data_dir), filename)
    return _parse_file(path, os.path.getmtime(path)).macros


def entry_from_template(template: ast.IdentityTemplate, builder=None) -> CorpusEntry:
    """CorpusEntry с метаданными блока identity."""
    return CorpusEntry(
        id=template.name,
        template=template,
        level=Level(template.level),
        expect_pass=template.expect_pass,
        cost=CostClass(template.cost),
        tags=tuple(template.tags),
        proxy=template.proxy,
        source=template.source,
        builder=builder,
    )


def _all_entries(data_dir: Optional[str]) -> List[CorpusEntry]:
    templates = load_templates(data_dir)
    entries = []
    for template in templates.values():
        builder = None
        if "fast-orbit" in template.flags:
            builder = orbit_builder(template.name)
        entries.append(entry_from_template(template, builder))
    for entry in generated_entries(data_dir):
        if entry.id in templates:
            raise ParseError(f"id {entry.id} задан и в файле, и генератором")
        entries.append(entry)
    return entries


def list_identities(tag_filter: Optional[str] = None, data_dir: Optional[str] = None,
                    include_heavy: bool = True) -> List[CorpusEntry]:
    """
    Записи корпуса, отобранные по префиксу id или тегу, в порядке id.

    Args:
        tag_filter: Префикс id ("depth2.twoterm") или тег ("weight2")
        data_dir: Каталог файлов тождеств
        include_heavy: Включать ли записи с cost=heavy

    Returns:
        Список CorpusEntry, отсортированный по id
    """
    entries = [e for e in _all_entries(data_dir)
               if e.matches(tag_filter) and (include_heavy or not e.is_heavy)]
    entries.sort(key=lambda e: e.id)
    logger.info(f"Отобрано записей корпуса: {len(entries)} (фильтр: {tag_filter or 'нет'})")
    return entries


def get_entry(entry_id: str, data_dir: Optional[str] = None) -> CorpusEntry:
    """
    Запись по точному id.

    Raises:
        KeyError: если записи нет
    """
    for entry in _all_entries(data_dir):
        if entry.id == entry_id:
            return entry
    raise KeyError(entry_id)


def entry_variants(entry: CorpusEntry) -> List[Optional[str]]:
    """None (основное выражение), затем имена вариантов по порядку."""
    if entry.builder is not None and entry.template is None:
        names = list(entry.builder.variants)
    elif entry.builder is not None:
        names = list(entry.builder.variants) or [n for n, _ in entry.template.variants]
    else:
        names = [n for n, _ in entry.template.variants]
    return [None] + names


def entry_expression(entry: CorpusEntry, values: Optional[Dict[str, Any]] = None,
                     variant: Optional[str] = None, limit: Optional[int] = None) -> IdentityExpr:
    """
    Раскрытое выражение записи: через построитель или шаблон.

    Args:
        values: None - символьно, Fraction - рациональная точка, mpmath - численная
        variant: Имя варианта
        limit: Наибольшее число членов раскрытия
    """
    if entry.builder is not None:
        return entry.builder(values, variant)
    return expand_template(entry.template, values, variant, limit)


def entry_variables(entry: CorpusEntry) -> Tuple[str, ...]:
    if entry.template is not None:
        return tuple(entry.template.variables)
    return tuple(entry.builder.variables)
