"""
Модели данных для проверки функциональных уравнений полилогарифмов.

Аргументы атомов - это значения одной "области": рациональные функции
(RationalFunction), рациональные числа (Fraction) для специализаций
или комплексные числа mpmath для численных проверок.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple


class _Infinity:
    """Проективная точка ∞; допустима только в двойных отношениях и границах интегралов."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class Level(Enum):
    """Уровень приближения, на котором проверяется тождество."""
    EXACT = "exact"
    MOD_PRODUCTS = "mod-products"
    # rho только на первых n-1 слотах: элементы B_{n-1} ⊗ F^×
    LEADING_MOD_PRODUCTS = "leading-mod-products"
    DELTA22 = "delta22"
    NUMERIC = "numeric"

    def implied(self, weight: int) -> Tuple['Level', ...]:
        """Более слабые символьные уровни, на которых тождество этого уровня обязано выполняться."""
        if self == Level.EXACT:
            levels = (Level.MOD_PRODUCTS, Level.LEADING_MOD_PRODUCTS, Level.DELTA22)
        elif self == Level.MOD_PRODUCTS:
            levels = (Level.DELTA22,)
        else:
            levels = ()
        return tuple(lv for lv in levels if lv != Level.DELTA22 or weight == 4)


class Verdict(Enum):
    """Итог проверки одной записи."""
    PASS = "pass"
    FAIL = "fail"
    PROXY_PASS = "proxy-pass"
    SKIPPED = "skipped"
    ERROR = "error"
    MEMORY_EXCEEDED = "memory-exceeded"

    @property
    def is_success(self) -> bool:
        return self in (Verdict.PASS, Verdict.PROXY_PASS)


class CostClass(Enum):
    """Класс стоимости записи корпуса."""
    CHEAP = "cheap"
    HEAVY = "heavy"


class AtomKind(Enum):
    """Вид атома в тождестве."""
    I = "I"
    LI = "Li"
    G = "G"
    LOG = "log"
    IPI = "ipi"
    TENSOR = "T"


@dataclass(frozen=True)
class MplAtom:
    """
    Атом тождества: I_{k1..kd}(args), Li_{k1..kd}(args), G, log, iπ
    или явный элементарный тензор.

    Для G последний аргумент - верхний предел z, остальные - буквы a1..an.
    """
    kind: AtomKind
    indices: Tuple[int, ...] = ()
    args: Tuple[Any, ...] = ()

    def __post_init__(self):
        if self.kind in (AtomKind.I, AtomKind.LI):
            if len(self.indices) != len(self.args) or not self.indices:
                raise ValueError(f"атом {self.kind.value}: индексов {len(self.indices)}, "
                                 f"аргументов {len(self.args)}")
            if any(k < 1 for k in self.indices):
                raise ValueError(f"индексы должны быть положительными: {self.indices}")

    @property
    def weight(self) -> int:
        if self.kind in (AtomKind.I, AtomKind.LI):
            return sum(self.indices)
        if self.kind == AtomKind.G:
            return len(self.args) - 1
        if self.kind == AtomKind.TENSOR:
            return len(self.args)
        return 1

    @property
    def depth(self) -> int:
        if self.kind in (AtomKind.I, AtomKind.LI):
            return len(self.indices)
        return 1

    def sort_key(self) -> tuple:
        return (self.kind.value, self.indices, tuple(str(a) for a in self.args))

    def __str__(self) -> str:
        args = ", ".join(str(a) for a in self.args)
        if self.kind in (AtomKind.I, AtomKind.LI):
            idx = ",".join(str(k) for k in self.indices)
            return f"{self.kind.value}({idx})[{args}]"
        if self.kind == AtomKind.G:
            letters = ", ".join(str(a) for a in self.args[:-1])
            return f"G[{letters}; {self.args[-1]}]"
        if self.kind == AtomKind.IPI:
            return "ipi"
        return f"{self.kind.value}[{args}]"


@dataclass(frozen=True)
class IdentityTerm:
    """Член тождества: коэффициент, умноженный на произведение атомов."""
    coeff: Fraction
    factors: Tuple[MplAtom, ...]

    @property
    def weight(self) -> int:
        return sum(a.weight for a in self.factors)

    def sort_key(self) -> tuple:
        return tuple(a.sort_key() for a in self.factors)


@dataclass
class IdentityExpr:
    """
    Формальная Q-линейная комбинация произведений атомов.

    Проверяемое утверждение: выражение равно нулю на уровне level.
    """
    name: str
    variables: Tuple[str, ...]
    terms: List[IdentityTerm]
    level: Level = Level.EXACT
    expect_pass: bool = True

    @property
    def weight(self) -> int:
        weights = {t.weight for t in self.terms}
        if len(weights) > 1:
            raise ValueError(f"{self.name}: смешанные веса {sorted(weights)}")
        return weights.pop() if weights else 0

    def merged(self) -> 'IdentityExpr':
        """Сливает одинаковые члены, удаляет нулевые и упорядочивает."""
        acc: Dict[Tuple[MplAtom, ...], Fraction] = {}
        for term in self.terms:
            key = tuple(sorted(term.factors, key=MplAtom.sort_key))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(term.coeff)
        terms = [IdentityTerm(c, k) for k, c in acc.items() if c != 0]
        terms.sort(key=IdentityTerm.sort_key)
        return IdentityExpr(self.name, self.variables, terms, self.level, self.expect_pass)

    def atoms(self) -> List[Tuple[Fraction, MplAtom]]:
        """Атомы однофакторных членов; произведения не допускаются."""
        result = []
        for term in self.merged().terms:
            if len(term.factors) != 1:
                raise ValueError(f"{self.name}: член-произведение {term}")
            result.append((term.coeff, term.factors[0]))
        return result

    def __len__(self) -> int:
        return len(self.terms)


@dataclass
class CorpusEntry:
    """
    Запись корпуса: шаблон тождества с привязками точек и метаданными.

    Args (поля):
        template: разобранный блок identity (dsl.ast.IdentityTemplate)
        builder: необязательный быстрый генератор вместо раскрытия шаблона
    """
    id: str
    template: Any
    level: Level
    expect_pass: bool = True
    cost: CostClass = CostClass.CHEAP
    tags: Tuple[str, ...] = ()
    proxy: bool = False
    source: str = ""
    builder: Optional[Any] = None

    @property
    def is_heavy(self) -> bool:
        return self.cost == CostClass.HEAVY

    def matches(self, tag_filter: Optional[str]) -> bool:
        """Фильтр по префиксу id или по тегу."""
        if not tag_filter:
            return True
        if self.id == tag_filter or self.id.startswith(tag_filter + "."):
            return True
        return tag_filter in self.tags


@dataclass
class NumericConfig:
    """Параметры численной проверки."""
    precision: int = 50
    tolerance_exp: int = 30
    epsilon: str = "1e-3"
    max_terms: int = 2_000_000
    points: List[Tuple[Any, ...]] = field(default_factory=list)

    def __post_init__(self):
        if self.tolerance_exp > self.precision - 5:
            raise ValueError(f"допуск 1e-{self.tolerance_exp} недостижим при "
                             f"точности {self.precision} знаков")

    @property
    def tolerance(self) -> str:
        return f"1e-{self.tolerance_exp}"


@dataclass
class CheckReport:
    """Результат проверки одной записи корпуса."""
    entry_id: str
    level: str
    verdict: Verdict
    residual_terms: int = 0
    witnesses: List[str] = field(default_factory=list)
    millis: int = 0
    basis_size: int = 0
    peak_terms: int = 0
    variant: Optional[str] = None
    message: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def calibration(self) -> Optional[str]:
        """Имя прошедшей формы записи: вариант или "expr", если их больше одной."""
        return self.details.get('calibration') or self.variant

    def to_dict(self, include_timing: bool = True) -> dict:
        """Преобразует отчёт в словарь для сериализации."""
        data = {
            'entry_id': self.entry_id,
            'level': self.level,
            'verdict': self.verdict.value,
            'residual_terms': self.residual_terms,
            'witnesses': list(self.witnesses),
            'basis_size': self.basis_size,
            'peak_terms': self.peak_terms,
            'variant': self.variant,
            'message': self.message,
            'details': dict(self.details),
        }
        data['millis'] = self.millis if include_timing else 0
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'CheckReport':
        """Создаёт отчёт из словаря."""
        return cls(
            entry_id=data.get('entry_id', ''),
            level=data.get('level', Level.EXACT.value),
            verdict=Verdict(data.get('verdict', Verdict.SKIPPED.value)),
            residual_terms=data.get('residual_terms', 0),
            witnesses=list(data.get('witnesses', [])),
            millis=data.get('millis', 0),
            basis_size=data.get('basis_size', 0),
            peak_terms=data.get('peak_terms', 0),
            variant=data.get('variant'),
            message=data.get('message', ''),
            details=dict(data.get('details', {})),
        )
