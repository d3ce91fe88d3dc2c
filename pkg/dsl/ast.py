"""
Синтаксическое дерево языка тождеств.

Узлы значений описывают аргументы атомов (точки, числа, арифметика,
двойные отношения, формальные суммы); узлы членов - линейные
комбинации произведений атомов, сокращения и орбиты.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union


# Значения

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Inf:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'ValueNode'
    right: 'ValueNode'


@dataclass(frozen=True)
class Neg:
    operand: 'ValueNode'


@dataclass(frozen=True)
class Call:
    """cr, cr1..cr6, V0, spl и пользовательские функции значений."""
    name: str
    args: Tuple['ValueNode', ...]


@dataclass(frozen=True)
class QuadNode:
    points: Tuple['ValueNode', ...]


ValueNode = Union[Num, Name, Inf, BinOp, Neg, Call, QuadNode]


# Члены

@dataclass(frozen=True)
class AtomNode:
    """I(k..)[..], Li(k..)[..], G[..; z], log[f], ipi, T[..] или [f]."""
    kind: str
    indices: Tuple[int, ...]
    args: Tuple[ValueNode, ...]


@dataclass(frozen=True)
class CycItem:
    names: Tuple[str, ...]


@dataclass(frozen=True)
class ShuffleItem:
    left: Tuple[str, ...]
    right: Tuple[str, ...]


PointItem = Union[str, CycItem, ShuffleItem]


@dataclass(frozen=True)
class ShortNode:
    """(a1 a2 ... a_{d+3})_{k1..kd}."""
    items: Tuple[PointItem, ...]
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class MacroNode:
    """Вызов t1..t6, u, f1..f9, t, cyc4, k3, k3r, w22 или макроса define."""
    name: str
    args: Tuple[ValueNode, ...]
    head: Tuple[ValueNode, ...] = ()
    indices: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Generator:
    """Образующая группы орбиты: sym, alt, cyc, swap, aswap."""
    kind: str
    left: Tuple[str, ...]
    right: Tuple[str, ...] = ()


@dataclass(frozen=True)
class OrbitNode:
    generators: Tuple[Generator, ...]
    signed: bool
    body: 'TermSum'


@dataclass(frozen=True)
class PowerNode:
    base: 'FactorNode'
    exponent: int


FactorNode = Union[AtomNode, ShortNode, MacroNode, OrbitNode, PowerNode, 'TermSum']


@dataclass(frozen=True)
class ProductNode:
    coeff: Fraction
    factors: Tuple[FactorNode, ...]


@dataclass(frozen=True)
class TermSum:
    products: Tuple[ProductNode, ...]


# Блоки файла

@dataclass
class MacroDef:
    name: str
    params: Tuple[str, ...]
    body: TermSum
    line: int = 0


@dataclass
class IdentityTemplate:
    """Блок identity: выражение, привязки точек и метаданные записи."""
    name: str
    expr: TermSum
    variables: Tuple[str, ...] = ()
    points: Tuple[str, ...] = ()
    bindings: Dict[str, ValueNode] = field(default_factory=dict)
    level: str = "exact"
    weight: int = 4
    expect_pass: bool = True
    cost: str = "cheap"
    tags: Tuple[str, ...] = ()
    proxy: bool = False
    flags: Tuple[str, ...] = ()
    variants: List[Tuple[str, TermSum]] = field(default_factory=list)
    source: str = ""
    line: int = 0
    macros: Dict[str, MacroDef] = field(default_factory=dict)

    @property
    def invert_on_negative(self) -> bool:
        return "invert-on-negative" in self.flags


@dataclass
class CorpusFile:
    macros: Dict[str, MacroDef]
    identities: List[IdentityTemplate]
    path: Optional[str] = None
