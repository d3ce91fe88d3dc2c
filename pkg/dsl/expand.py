"""
Раскрытие шаблонов тождеств в линейные комбинации атомов.

Значения аргументов вычисляются в одной из трёх областей:
рациональные функции от переменных шаблона (символьная проверка),
рациональные числа (специализация) или mpmath (численная проверка).
"""
import logging
from fractions import Fraction
from itertools import permutations, product
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath

from dsl import ast
from dsl.cross_ratio import (
    FormalSum, Quad, cr_product, cr_quad, cross_ratio, orbit_argument, split,
    v0_arguments
)
from exceptions import (
    DegenerateCrossRatio, ParseError, PoleAtPoint, TermBudgetExceeded,
    UnboundPoint
)
from kernel.polynomials import RationalFunction, make_ring
from models import INFINITY, AtomKind, IdentityExpr, IdentityTerm, Level, MplAtom

logger = logging.getLogger(__name__)

Term = Tuple[Fraction, Tuple[MplAtom, ...]]

_MAX_MACRO_DEPTH = 16


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def shuffles(left: Sequence[str], right: Sequence[str]) -> List[Tuple[str, ...]]:
    """Все перетасовки двух слов с сохранением порядка внутри каждого."""
    if not left:
        return [tuple(right)]
    if not right:
        return [tuple(left)]
    return ([(left[0],) + w for w in shuffles(left[1:], right)]
            + [(right[0],) + w for w in shuffles(left, right[1:])])


def group_elements(generators: Sequence[ast.Generator], signed: bool = False
                   ) -> List[Tuple[Dict[str, str], int]]:
    """
    Элементы группы орбиты как пары (переименование точек, знак).

    sym - все перестановки, alt - перестановки со знаком, cyc - повороты,
    swap/aswap - обмен двух наборов точек без знака/со знаком -1.
    Флаг signed превращает sym в alt.
    """
    elements: List[Tuple[Dict[str, str], int]] = [({}, 1)]
    for gen in generators:
        names = gen.left
        options: List[Tuple[Dict[str, str], int]] = []
        if gen.kind in ("sym", "alt"):
            with_sign = gen.kind == "alt" or signed
            for perm in permutations(range(len(names))):
                sign = permutation_sign(perm) if with_sign else 1
                options.append(({names[i]: names[perm[i]] for i in range(len(names))}, sign))
        elif gen.kind == "cyc":
            n = len(names)
            for k in range(n):
                options.append(({names[i]: names[(i + k) % n] for i in range(n)}, 1))
        elif gen.kind in ("swap", "aswap"):
            if len(gen.left) != len(gen.right):
                raise ParseError(f"{gen.kind}: наборы разной длины")
            exchange = {}
            for a, b in zip(gen.left, gen.right):
                exchange[a] = b
                exchange[b] = a
            options = [({}, 1), (exchange, -1 if gen.kind == "aswap" else 1)]
        else:
            raise ParseError(f"неизвестная образующая {gen.kind}")
        combined = []
        for m1, s1 in elements:
            for m2, s2 in options:
                m = dict(m2)
                for p in set(m1) | set(m2):
                    m[p] = m1.get(m2.get(p, p), m2.get(p, p))
                combined.append((m, s1 * s2))
        elements = combined
    return elements


class Expander:
    """
    Раскрывает выражения шаблона в окружении значений точек.

    Args:
        template: Шаблон тождества
        values: Значения переменных и точек
        literal: Перевод рационального литерала в область значений
        finalize: Приведение аргумента атома к каноническому виду
        limit: Наибольшее число членов после раскрытия
    """

    def __init__(self, template: ast.IdentityTemplate, values: Dict[str, Any],
                 literal: Callable[[Fraction], Any] = Fraction,
                 finalize: Optional[Callable[[Any], Any]] = None,
                 limit: Optional[int] = None):
        self.template = template
        self.literal = literal
        self.finalize = finalize or (lambda v: v)
        self.limit = limit
        self.macros = template.macros
        self.env = dict(values)
        for name, node in template.bindings.items():
            if name not in values:
                self.env[name] = self.value(node, self.env)
        for name in template.points + template.variables:
            if name not in self.env:
                raise UnboundPoint(f"{template.name}: точка {name} не задана")

    # Значения

    def value(self, node, env: Dict[str, Any]) -> Any:
        if isinstance(node, ast.Num):
            return self.literal(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise UnboundPoint(f"{self.template.name}: имя {node.id} не задано")
            return env[node.id]
        if isinstance(node, ast.Inf):
            return INFINITY
        if isinstance(node, ast.Neg):
            v = self.value(node.operand, env)
            if isinstance(v, (FormalSum, Quad)):
                return FormalSum.of(v, -1)
            return -self._finite(v)
        if isinstance(node, ast.BinOp):
            return self._binop(node, env)
        if isinstance(node, ast.QuadNode):
            if len(node.points) != 4:
                raise ParseError(f"четвёрка из {len(node.points)} точек")
            return Quad(tuple(self.value(p, env) for p in node.points))
        if isinstance(node, ast.Call):
            return self._call(node, env)
        raise ParseError(f"неизвестный узел значения {node!r}")

    def _finite(self, v: Any) -> Any:
        if v is INFINITY:
            raise DegenerateCrossRatio("∞ допустима только в двойных отношениях")
        return v

    def _binop(self, node: ast.BinOp, env) -> Any:
        left = self.value(node.left, env)
        if node.op == "^":
            exponent = node.right
            negative = isinstance(exponent, ast.Neg)
            if negative:
                exponent = exponent.operand
            if not isinstance(exponent, ast.Num) or exponent.value.denominator != 1:
                raise ParseError("показатель степени должен быть целым числом")
            n = int(exponent.value) * (-1 if negative else 1)
            return self._guard(lambda: self._finite(left) ** n)
        right = self.value(node.right, env)
        formal = (FormalSum, Quad)
        if isinstance(left, formal) or isinstance(right, formal):
            if node.op not in "+-":
                raise ParseError(f"операция {node.op} над формальной суммой")
            return FormalSum.of(left) + FormalSum.of(right, 1 if node.op == "+" else -1)
        left, right = self._finite(left), self._finite(right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return self._guard(lambda: left / right)

    def _guard(self, fn):
        try:
            return fn()
        except ZeroDivisionError as e:
            raise PoleAtPoint(f"{self.template.name}: деление на ноль") from e

    def _call(self, node: ast.Call, env) -> Any:
        args = [self.value(a, env) for a in node.args]
        name = node.name
        if name == "cr":
            if len(args) == 4:
                return self._guard(lambda: cross_ratio(*args))
            if len(args) == 1:
                arg = args[0]
                if isinstance(arg, Quad):
                    return self._guard(lambda: cr_quad(arg))
                if isinstance(arg, FormalSum):
                    return FormalSum([(c, self._guard(lambda q=q: cr_quad(q))) for c, q in arg.items])
            raise ParseError("cr ожидает четыре точки или формальную сумму четвёрок")
        if name.startswith("cr") and name[2:].isdigit():
            return self._guard(lambda: cr_product(int(name[2:]), args))
        if name == "V0":
            if len(args) != 2:
                raise ParseError("V0 ожидает два аргумента")
            x, y = (self._finite(a) for a in args)
            return FormalSum([(Fraction(1), v) for v in self._guard(lambda: v0_arguments(x, y))])
        if name == "spl":
            if len(args) != 2:
                raise ParseError("spl ожидает точку и четвёрку")
            e, target = args
            if isinstance(target, Quad):
                return split(e, target)
            if isinstance(target, FormalSum):
                result = FormalSum([])
                for c, q in target.items:
                    result = result + split(e, q).scaled(c)
                return result
            raise ParseError("spl применяется к четвёркам")
        raise ParseError(f"{self.template.name}: неизвестная функция {name}")

    # Члены

    def _check(self, terms: List[Term]) -> List[Term]:
        if self.limit is not None and len(terms) > self.limit:
            raise TermBudgetExceeded(len(terms), self.limit)
        return terms

    def expand_sum(self, node: ast.TermSum, env, depth: int = 0) -> List[Term]:
        result: List[Term] = []
        for prod_node in node.products:
            parts = [self.expand_factor(f, env, depth) for f in prod_node.factors]
            for choice in product(*parts):
                coeff = prod_node.coeff
                atoms: Tuple[MplAtom, ...] = ()
                for c, a in choice:
                    coeff = coeff * c
                    atoms = atoms + a
                if coeff:
                    result.append((coeff, atoms))
            self._check(result)
        return result

    def expand_factor(self, node, env, depth: int) -> List[Term]:
        if isinstance(node, ast.AtomNode):
            return self._atom(node, env)
        if isinstance(node, ast.ShortNode):
            return self._shorthand(node.items, node.indices, env)
        if isinstance(node, ast.MacroNode):
            return self._macro(node, env, depth)
        if isinstance(node, ast.OrbitNode):
            result = []
            for mapping, sign in group_elements(node.generators, node.signed):
                moved = dict(env)
                for p, q in mapping.items():
                    moved[p] = env[q] if q in env else self._unbound(q)
                for c, atoms in self.expand_sum(node.body, moved, depth):
                    result.append((c * sign, atoms))
                self._check(result)
            return result
        if isinstance(node, ast.PowerNode):
            base = self.expand_factor(node.base, env, depth)
            result: List[Term] = [(Fraction(1), ())]
            for _ in range(node.exponent):
                result = [(c1 * c2, a1 + a2) for c1, a1 in result for c2, a2 in base]
            return self._check(result)
        if isinstance(node, ast.TermSum):
            return self.expand_sum(node, env, depth)
        raise ParseError(f"неизвестный множитель {node!r}")

    def _multilinear(self, raw: Sequence[Any]) -> Iterable[Tuple[Fraction, Tuple[Any, ...]]]:
        options = []
        for v in raw:
            if isinstance(v, FormalSum):
                options.append(v.items)
            elif isinstance(v, Quad):
                raise ParseError("четвёрка точек вне cr")
            else:
                options.append([(Fraction(1), v)])
        for choice in product(*options):
            coeff = Fraction(1)
            for c, _ in choice:
                coeff *= c
            yield coeff, tuple(v for _, v in choice)

    def make_atom(self, kind: AtomKind, indices: Tuple[int, ...], args: Sequence[Any]) -> MplAtom:
        if kind != AtomKind.G and any(a is INFINITY for a in args):
            raise DegenerateCrossRatio(f"∞ в аргументе {kind.value}")
        return MplAtom(kind, indices, tuple(self.finalize(self._finite(a)) for a in args))

    def _atom(self, node: ast.AtomNode, env) -> List[Term]:
        kind = AtomKind(node.kind)
        indices = node.indices
        if kind == AtomKind.LI and not indices:
            indices = (self.template.weight,)
        raw = [self.value(a, env) for a in node.args]
        return [(c, (self.make_atom(kind, indices, args),)) for c, args in self._multilinear(raw)]

    def _li(self, value: Any) -> List[Term]:
        return [(c, (self.make_atom(AtomKind.LI, (self.template.weight,), args),))
                for c, args in self._multilinear([value])]

    def _shorthand(self, items, indices: Tuple[int, ...], env) -> List[Term]:
        words: List[Tuple[str, ...]] = [()]
        for item in items:
            if isinstance(item, ast.CycItem):
                n = len(item.names)
                pieces = [item.names[k:] + item.names[:k] for k in range(n)]
            elif isinstance(item, ast.ShuffleItem):
                pieces = shuffles(item.left, item.right)
            else:
                pieces = [(item,)]
            words = [w + piece for w in words for piece in pieces]
        result = []
        for word in words:
            if len(word) != len(indices) + 3:
                raise ParseError(f"сокращение ({' '.join(word)}) требует "
                                 f"{len(indices) + 3} точек для индексов {indices}")
            points = [env[p] if p in env else self._unbound(p) for p in word]
            args = [self._guard(lambda k=k: cross_ratio(points[0], points[1], points[2], points[k]))
                    for k in range(3, len(points))]
            result.append((Fraction(1), (self.make_atom(AtomKind.I, indices, args),)))
        return result

    def _unbound(self, name: str):
        raise UnboundPoint(f"{self.template.name}: точка {name} не задана")

    def _macro(self, node: ast.MacroNode, env, depth: int) -> List[Term]:
        name = node.name
        args = [self.value(a, env) for a in node.args]
        head = [self.value(a, env) for a in node.head]
        if len(name) == 2 and name[0] in "tf" and name[1].isdigit():
            j = int(name[1])
            if name[0] == "t" and 1 <= j <= 6 and len(args) == 6 and not head:
                return self._li(self._guard(lambda: cr_product(j, args)))
            if name[0] == "f" and 1 <= j <= 9 and len(args) == 6 and not head:
                return self._li(self._guard(lambda: orbit_argument(j, *args)))
        if name == "u" and len(args) == 4 and not head:
            return self._li(self._guard(lambda: cross_ratio(*args)))
        if name == "t" and len(head) == 1 and len(args) == 4:
            return self._three_one_sum(node, env)
        if name in ("k3", "k3r", "w22") and len(head) == 1 and len(args) == 1:
            return self._tensor_macro(name, head[0], args[0])
        macro = self.macros.get(name)
        if macro is None:
            raise ParseError(f"{self.template.name}: неизвестный макрос {name}")
        if depth > _MAX_MACRO_DEPTH:
            raise ParseError(f"{name}: слишком глубокая вложенность макросов")
        values = head + args
        if len(values) != len(macro.params):
            raise ParseError(f"макрос {name} ожидает {len(macro.params)} аргументов")
        result = []
        for coeff, chosen in self._multilinear(values):
            inner = dict(env)
            inner.update(zip(macro.params, chosen))
            for c, atoms in self.expand_sum(macro.body, inner, depth + 1):
                result.append((c * coeff, atoms))
        return self._check(result)

    def _three_one_sum(self, node: ast.MacroNode, env) -> List[Term]:
        """t(i1; i2..i5) = Σ_{j<k} (i1, остальные по порядку, i_j, i_k)_31."""
        names = []
        for a in node.head + node.args:
            if not isinstance(a, ast.Name):
                raise ParseError("t(i1; i2, i3, i4, i5) принимает только имена точек")
            names.append(a.id)
        first, rest = names[0], names[1:]
        result = []
        for j in range(4):
            for k in range(j + 1, 4):
                others = [p for i, p in enumerate(rest) if i not in (j, k)]
                word = (first, *others, rest[j], rest[k])
                result.extend(self._shorthand(word, (3, 1), env))
        return result

    def _tensor_macro(self, name: str, f: Any, g: Any) -> List[Term]:
        f, g = self._finite(f), self._finite(g)
        tensor = AtomKind.TENSOR
        if name == "k3":
            return [(Fraction(-1), (self.make_atom(tensor, (), (1 - f, f, f, g)),))]
        if name == "k3r":
            return [(Fraction(-1), (self.make_atom(tensor, (), (g, 1 - f, f, f)),))]
        return [(Fraction(1), (self.make_atom(tensor, (), (1 - f, f, 1 - g, g)),)),
                (Fraction(-1), (self.make_atom(tensor, (), (1 - g, g, 1 - f, f)),))]


def invert_negative(expr: IdentityExpr) -> IdentityExpr:
    """c·Li_n(f) с c < 0 заменяется на c·(-1)^(n-1)·Li_n(1/f)."""
    terms = []
    for term in expr.terms:
        atom = term.factors[0] if len(term.factors) == 1 else None
        if term.coeff < 0 and atom is not None and atom.kind == AtomKind.LI and atom.depth == 1:
            n = atom.indices[0]
            flipped = MplAtom(AtomKind.LI, atom.indices, (1 / atom.args[0],))
            terms.append(IdentityTerm(term.coeff * (-1) ** (n - 1), (flipped,)))
        else:
            terms.append(term)
    return IdentityExpr(expr.name, expr.variables, terms, expr.level, expr.expect_pass).merged()


def to_atoms(expr: IdentityExpr) -> List[Tuple[Fraction, MplAtom]]:
    """
    Список (коэффициент, атом) без повторов.

    Li_n(1/f) не склеивается с Li_n(f): такие совпадения решает уровень проверки.

    Raises:
        ValueError: если в выражении есть член-произведение
    """
    return expr.atoms()


def _select(template: ast.IdentityTemplate, variant: Optional[str]) -> ast.TermSum:
    if variant is None:
        return template.expr
    for name, body in template.variants:
        if name == variant:
            return body
    raise ParseError(f"{template.name}: нет варианта {variant}")


def expand_with(template: ast.IdentityTemplate, values: Dict[str, Any], *,
                variant: Optional[str] = None,
                literal: Callable[[Fraction], Any] = Fraction,
                finalize: Optional[Callable[[Any], Any]] = None,
                limit: Optional[int] = None) -> IdentityExpr:
    """Раскрывает шаблон в заданном окружении значений."""
    expander = Expander(template, values, literal, finalize, limit)
    terms = [IdentityTerm(c, atoms) for c, atoms in
             expander.expand_sum(_select(template, variant), expander.env)]
    name = template.name if variant is None else f"{template.name}/{variant}"
    expr = IdentityExpr(name, template.variables, terms, Level(template.level),
                        template.expect_pass).merged()
    if template.invert_on_negative:
        expr = invert_negative(expr)
    logger.debug(f"{name}: раскрыто {len(expr)} членов")
    return expr


def expand_symbolic(template: ast.IdentityTemplate, variant: Optional[str] = None,
                    limit: Optional[int] = None) -> IdentityExpr:
    """
    Раскрывает шаблон над рациональными функциями от его переменных.

    Args:
        template: Шаблон тождества
        variant: Имя варианта вместо основного выражения
        limit: Наибольшее число членов

    Returns:
        Слитое выражение с аргументами RationalFunction

    Raises:
        DegenerateCrossRatio, UnboundPoint, ParseError, TermBudgetExceeded
    """
    ring = make_ring(template.variables or ("x",))
    values = {v: RationalFunction.variable(ring, v) for v in template.variables}

    def finalize(v):
        if isinstance(v, RationalFunction):
            return v
        return RationalFunction.constant(ring, Fraction(v))

    return expand_with(template, values, variant=variant, finalize=finalize, limit=limit)


def expand_at(template: ast.IdentityTemplate, point: Dict[str, Any],
              variant: Optional[str] = None, limit: Optional[int] = None) -> IdentityExpr:
    """
    Раскрывает шаблон в рациональной точке.

    Raises:
        PoleAtPoint, DegenerateCrossRatio: если точка вырождена
    """
    values = {k: Fraction(v) for k, v in point.items()}
    return expand_with(template, values, variant=variant, limit=limit)


def expand_numeric(template: ast.IdentityTemplate, point: Dict[str, Any],
                   variant: Optional[str] = None) -> IdentityExpr:
    """Раскрывает шаблон в комплексной точке mpmath (точность задаёт вызывающий)."""
    def literal(q: Fraction):
        return mpmath.mpf(q.numerator) / q.denominator

    return expand_with(template, dict(point), variant=variant, literal=literal)
