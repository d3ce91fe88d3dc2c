"""
Хранилище отчётов проверки.

Отчёты сохраняются в JSON с отсортированными ключами, в виде текста,
Markdown или HTML. HTML получается из Markdown пакетом markdown.
"""
import json
import logging
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import markdown

from models import CheckReport, Verdict

logger = logging.getLogger(__name__)

FORMATS = ("json", "text", "markdown", "html")
MISSING = "missing"


class ReportStore:
    """Класс для сборки и сохранения отчётов."""

    def __init__(self, required_ids: Sequence[str] = (), include_timing: bool = False):
        """
        Инициализация хранилища.

        Args:
            required_ids: Записи, которые должны попасть в таблицу покрытия
            include_timing: Сохранять ли время проверки (без него JSON воспроизводим побайтно)
        """
        self.required_ids = tuple(required_ids)
        self.include_timing = include_timing
        self.reports: List[CheckReport] = []

    def add(self, reports: Sequence[CheckReport]) -> None:
        self.reports.extend(reports)

    def sorted_reports(self) -> List[CheckReport]:
        """Отчёты в порядке (id, уровень); при повторе id остаётся последний."""
        latest: Dict[tuple, CheckReport] = {}
        for report in self.reports:
            latest[(report.entry_id, report.level)] = report
        return [latest[key] for key in sorted(latest)]

    def coverage(self) -> List[Dict[str, str]]:
        """
        Таблица покрытия: каждый обязательный id с последним вердиктом.

        Returns:
            Строки {'entry_id', 'verdict'}; вердикт "missing", если отчёта нет
        """
        latest: Dict[str, str] = {}
        for report in self.reports:
            latest[report.entry_id] = report.verdict.value
        return [{'entry_id': entry_id, 'verdict': latest.get(entry_id, MISSING)}
                for entry_id in self.required_ids]

    def missing(self) -> List[str]:
        return [row['entry_id'] for row in self.coverage() if row['verdict'] == MISSING]

    def summary(self) -> Dict[str, int]:
        counts = Counter(r.verdict.value for r in self.sorted_reports())
        return {v.value: counts.get(v.value, 0) for v in Verdict}

    def to_dict(self) -> dict:
        return {
            'reports': [r.to_dict(self.include_timing) for r in self.sorted_reports()],
            'coverage': self.coverage(),
            'summary': self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for report in self.sorted_reports():
            line = f"{report.entry_id:<45} {report.level:<13} {report.verdict.value}"
            if report.calibration:
                line += f" [{report.calibration}]"
            if report.residual_terms:
                line += f" остаток: {report.residual_terms}"
            if self.include_timing:
                line += f" {report.millis} мс"
            lines.append(line)
            if report.message:
                lines.append(f"    {report.message}")
            for witness in report.witnesses:
                lines.append(f"    {witness}")
        summary = ", ".join(f"{k}: {v}" for k, v in self.summary().items() if v)
        lines.append(f"Итого: {summary or 'нет отчётов'}")
        missing = self.missing()
        if missing:
            lines.append(f"Нет отчётов для: {', '.join(missing)}")
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        header = "| Запись | Уровень | Вердикт | Остаток | Вариант |"
        if self.include_timing:
            header += " мс |"
        rule = "|" + "---|" * (header.count("|") - 1)
        lines = ["# Отчёт проверки", "", header, rule]
        for report in self.sorted_reports():
            row = (f"| {report.entry_id} | {report.level} | {report.verdict.value} "
                   f"| {report.residual_terms} | {report.calibration or ''} |")
            if self.include_timing:
                row += f" {report.millis} |"
            lines.append(row)
        if self.required_ids:
            lines += ["", "## Покрытие корпуса", "", "| Запись | Вердикт |", "|---|---|"]
            for row in self.coverage():
                verdict = row['verdict']
                if verdict == MISSING:
                    verdict = f"**{verdict}**"
                lines.append(f"| {row['entry_id']} | {verdict} |")
        failures = [r for r in self.sorted_reports() if r.witnesses]
        if failures:
            lines += ["", "## Свидетели остатка"]
            for report in failures:
                lines += ["", f"### {report.entry_id}", ""]
                lines += [f"    {w}" for w in report.witnesses]
        return "\n".join(lines) + "\n"

    def to_html(self) -> str:
        body = markdown.markdown(self.to_markdown(), extensions=['tables'])
        return f"<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"></head><body>\n{body}\n</body></html>\n"

    def render(self, fmt: str = "json") -> str:
        """
        Raises:
            ValueError: для неизвестного формата
        """
        renderers = {
            "json": self.to_json,
            "text": self.to_text,
            "markdown": self.to_markdown,
            "html": self.to_html,
        }
        if fmt not in renderers:
            raise ValueError(f"неизвестный формат отчёта: {fmt}")
        return renderers[fmt]()

    def save(self, path: str, fmt: str = "json") -> None:
        """
        Записывает отчёт в файл.

        Raises:
            OSError: при ошибке записи
        """
        try:
            target = Path(path)
            if target.parent and not target.parent.exists():
                target.parent.mkdir(parents=True)
            target.write_text(self.render(fmt), encoding='utf-8')
            logger.info(f"Отчёт сохранён: {path} ({fmt}, записей: {len(self.sorted_reports())})")
        except OSError as e:
            logger.error(f"Ошибка при сохранении отчёта {path}: {e}")
            raise

    @classmethod
    def load(cls, path: str, required_ids: Optional[Sequence[str]] = None) -> 'ReportStore':
        """
        Читает отчёт JSON, ранее записанный save.

        Raises:
            OSError: при ошибке чтения
            ValueError: если файл не является отчётом JSON
        """
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except OSError as e:
            logger.error(f"Ошибка при чтении отчёта {path}: {e}")
            raise
        if not isinstance(data, dict) or 'reports' not in data:
            raise ValueError(f"{path}: не отчёт проверки")
        if required_ids is None:
            required_ids = [row['entry_id'] for row in data.get('coverage', [])]
        store = cls(required_ids, include_timing=any(r.get('millis') for r in data['reports']))
        store.add([CheckReport.from_dict(r) for r in data['reports']])
        return store
