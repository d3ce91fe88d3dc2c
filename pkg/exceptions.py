"""
Исключения движка символов и проверки тождеств.

Все ошибки наследуются от MplError; сервисный слой перехватывает
их по одной записи корпуса и продолжает прогон.
"""


class MplError(Exception):
    """Базовая ошибка библиотеки."""


# Точное ядро

class ZeroDenominator(MplError):
    """Знаменатель рациональной функции равен нулю."""


class PoleAtPoint(MplError):
    """Знаменатель обращается в ноль в точке специализации."""


class NotFactorable(MplError):
    """Функция не раскладывается над данным базисом."""


class UnboundPoint(MplError):
    """Переменная или точка шаблона не получила значения."""


# Символы

class Divergent(MplError):
    """Итерированный интеграл не определён для данных аргументов."""


class WrongWeight(MplError):
    """Операция не применима к тензору данного веса."""


class TermBudgetExceeded(MplError):
    """Превышен лимит живых тензорных членов."""

    def __init__(self, terms: int, limit: int):
        super().__init__(f"число членов {terms} превышает лимит {limit}")
        self.terms = terms
        self.limit = limit


# Язык тождеств

class ParseError(MplError):
    """Синтаксическая ошибка в файле тождеств."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (строка {line}, столбец {column})")
        self.line = line
        self.column = column


class DegenerateCrossRatio(MplError):
    """Двойное отношение вырождается в 0, 1 или бесконечность."""


# Численные проверки

class OutOfConvergenceDomain(MplError):
    """Аргументы вне области сходимости ряда."""


class OnBranchPoint(MplError):
    """Аргумент попал в точку ветвления."""


class OnSingularPoint(MplError):
    """Аргумент попал в особую точку однозначного полилогарифма."""


class BranchMismatch(MplError):
    """Невязка устойчива, но не мала: расходятся соглашения о ветвях."""

    def __init__(self, residual, prescription: str = ""):
        super().__init__(f"невязка {residual} при выборе ветвей {prescription}")
        self.residual = residual
        self.prescription = prescription


class ResampleExhausted(MplError):
    """Не удалось найти точку специализации без полюсов."""
