"""
Разбор файлов тождеств (*.idf) на pyparsing.

Файл состоит из блоков define и identity, комментарии начинаются с '#'.
Пример:

    identity dilog.five-term {
      vars: x, y;
      level: mod-products;
      weight: 2;
      expr: [V0(x, y)];
    }
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import pyparsing as pp

from dsl import ast
from exceptions import ParseError

logger = logging.getLogger(__name__)

pp.ParserElement.enablePackrat()

UNICODE_MINUS = chr(0x2212)

_LEVELS = ("exact", "mod-products", "leading-mod-products", "delta22", "numeric")


@dataclass
class _Field:
    key: str
    body: list


def _suppress(s: str) -> pp.ParserElement:
    return pp.Suppress(pp.Literal(s))


def _fold_binary(tokens):
    items = tokens[0]
    if len(items) >= 3 and items[1] in ("^", "**"):
        # правая ассоциативность
        result = items[-1]
        for i in range(len(items) - 3, -1, -2):
            result = ast.BinOp("^", items[i], result)
        return result
    result = items[0]
    for i in range(1, len(items), 2):
        result = ast.BinOp(items[i], result, items[i + 1])
    return result


def _unary(tokens):
    sign, operand = tokens[0]
    return ast.Neg(operand) if sign == "-" else operand


def _build_value_grammar():
    ident = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*")
    integer = pp.Regex(r"\d+")
    value = pp.Forward()

    number = integer.copy().setParseAction(lambda t: ast.Num(Fraction(int(t[0]))))
    inf = pp.Keyword("inf").setParseAction(lambda t: ast.Inf())
    arg_list = pp.Optional(pp.delimitedList(value, delim=pp.oneOf(", ;")))
    call = (ident + _suppress("(") + pp.Group(arg_list) + _suppress(")")).setParseAction(
        lambda t: ast.Call(t[0], tuple(t[1])))
    quad = (_suppress("[") + pp.Group(pp.delimitedList(value)) + _suppress("]")).setParseAction(
        lambda t: ast.QuadNode(tuple(t[0])))
    name = ident.copy().setParseAction(lambda t: ast.Name(t[0]))
    operand = number | inf | call | quad | name

    pow_op = pp.Literal("**") | pp.Literal("^")
    mul_op = pp.Regex(r"\*(?!\*)|/")
    add_op = pp.oneOf("+ -")
    value <<= pp.infixNotation(operand, [
        (pow_op, 2, pp.opAssoc.RIGHT, _fold_binary),
        (pp.Literal("-"), 1, pp.opAssoc.RIGHT, _unary),
        (mul_op, 2, pp.opAssoc.LEFT, _fold_binary),
        (add_op, 2, pp.opAssoc.LEFT, _fold_binary),
    ])
    return value, ident, integer


def _indices(tokens) -> tuple:
    digits = []
    for tok in tokens:
        digits.extend(int(ch) for ch in tok if ch.isdigit())
    return tuple(digits)


def _build_term_grammar(value, ident, integer):
    term_sum = pp.Forward()
    value_list = pp.Group(pp.Optional(pp.delimitedList(value)))

    index_list = _suppress("(") + pp.Group(pp.delimitedList(integer)) + _suppress(")")
    atom_i = (pp.Keyword("I") + index_list + _suppress("[") + value_list + _suppress("]"))
    atom_li = (pp.Keyword("Li") + index_list + _suppress("[") + value_list + _suppress("]"))
    for atom in (atom_i, atom_li):
        atom.setParseAction(lambda t: ast.AtomNode(
            t[0], tuple(int(k) for k in t[1]), tuple(t[2])))
    atom_g = (pp.Keyword("G") + _suppress("[") + value_list + _suppress(";") + value
              + _suppress("]")).setParseAction(
        lambda t: ast.AtomNode("G", (), tuple(t[1]) + (t[2],)))
    atom_log = (pp.Keyword("log") + _suppress("[") + value + _suppress("]")).setParseAction(
        lambda t: ast.AtomNode("log", (), (t[1],)))
    atom_ipi = pp.Keyword("ipi").setParseAction(lambda t: ast.AtomNode("ipi", (), ()))
    atom_t = (pp.Keyword("T") + _suppress("[") + value_list + _suppress("]")).setParseAction(
        lambda t: ast.AtomNode("T", (), tuple(t[1])))
    atom_bracket = (_suppress("[") + value + _suppress("]")).setParseAction(
        lambda t: ast.AtomNode("Li", (), (t[0],)))

    subscript = _suppress("_") + (
        pp.Regex(r"\d+") | (_suppress("{") + pp.delimitedList(pp.Regex(r"\d+")) + _suppress("}")))
    subscript = pp.Group(subscript).setParseAction(lambda t: [_indices(t[0])])

    cyc_item = (_suppress("<") + pp.Group(pp.OneOrMore(ident)) + _suppress(">")).setParseAction(
        lambda t: ast.CycItem(tuple(t[0])))
    shuffle_item = (_suppress("{") + pp.Group(pp.OneOrMore(ident)) + _suppress("|")
                    + pp.Group(pp.OneOrMore(ident)) + _suppress("}")).setParseAction(
        lambda t: ast.ShuffleItem(tuple(t[0]), tuple(t[1])))
    point_item = cyc_item | shuffle_item | ident
    shorthand = (_suppress("(") + pp.Group(pp.OneOrMore(point_item)) + _suppress(")")
                 + subscript).setParseAction(lambda t: ast.ShortNode(tuple(t[0]), t[1]))

    cyc4 = (pp.Keyword("cyc4") + _suppress("(") + pp.Group(pp.delimitedList(ident))
            + _suppress(";") + ident + _suppress(")") + subscript).setParseAction(
        lambda t: ast.ShortNode((ast.CycItem(tuple(t[1])), t[2]), t[3]))

    names = pp.Group(pp.delimitedList(ident))
    gen_perm = (pp.oneOf("sym alt cyc") + _suppress("(") + names + _suppress(")")).setParseAction(
        lambda t: ast.Generator(t[0], tuple(t[1])))
    gen_swap = (pp.oneOf("aswap swap") + _suppress("(") + names + _suppress("|") + names
                + _suppress(")")).setParseAction(
        lambda t: ast.Generator(t[0], tuple(t[1]), tuple(t[2])))
    generator = gen_swap | gen_perm
    orbit = (pp.Keyword("orbit") + _suppress("(")
             + pp.Group(pp.delimitedList(generator, delim="*"))
             + pp.Optional(_suppress(",") + pp.Keyword("signed"), default="")
             + _suppress(";") + term_sum + _suppress(")")).setParseAction(
        lambda t: ast.OrbitNode(tuple(t[1]), t[2] == "signed", t[3]))

    macro_args = pp.Group(pp.Optional(pp.delimitedList(value)))
    macro = (ident + _suppress("(") + macro_args
             + pp.Optional(_suppress(";") + macro_args) + _suppress(")")).setParseAction(
        lambda t: ast.MacroNode(t[0], tuple(t[2]), tuple(t[1]))
        if len(t) > 2 else ast.MacroNode(t[0], tuple(t[1])))

    group = (_suppress("(") + term_sum + _suppress(")"))

    factor = (atom_i | atom_li | atom_g | atom_log | atom_ipi | atom_t | orbit | cyc4
              | shorthand | macro | atom_bracket | group)
    power = (factor + pp.Optional(_suppress("^") + integer)).setParseAction(
        lambda t: ast.PowerNode(t[0], int(t[1])) if len(t) > 1 else t[0])

    coeff = pp.Regex(r"\d+(?:/\d+)?") + pp.Optional(_suppress("*"))
    coeff.setParseAction(lambda t: Fraction(t[0]))
    product = (pp.Optional(coeff, default=Fraction(1))
               + pp.Group(power + pp.ZeroOrMore(_suppress(".") + power)))
    sign = pp.oneOf("+ -")
    first = pp.Optional(sign, default="+") + product
    other = sign + product

    def make_product(t):
        s, c, factors = t
        return ast.ProductNode(c if s == "+" else -c, tuple(factors))

    first.setParseAction(make_product)
    other.setParseAction(make_product)
    term_sum <<= (first + pp.ZeroOrMore(other)).setParseAction(
        lambda t: ast.TermSum(tuple(t)))
    return term_sum


def _build_file_grammar():
    value, ident, integer = _build_value_grammar()
    term_sum = _build_term_grammar(value, ident, integer)

    entry_id = pp.Regex(r"[A-Za-z][A-Za-z0-9_.\-]*")
    word = pp.Regex(r"[A-Za-z0-9_.\-]+")
    end = _suppress(";")

    def field(key, body):
        return (pp.Keyword(key) + _suppress(":") + body + end).setParseAction(
            lambda t: _Field(t[0], list(t[1:])))

    ident_list = pp.Group(pp.Optional(pp.delimitedList(ident)))
    binding = pp.Group(ident + _suppress("=") + value)
    fields = (
        field("vars", ident_list)
        | field("points", ident_list)
        | field("bind", pp.Group(pp.delimitedList(binding)))
        | field("level", pp.oneOf(" ".join(_LEVELS)))
        | field("weight", integer)
        | field("expected", pp.oneOf("pass fail"))
        | field("cost", pp.oneOf("cheap heavy"))
        | field("tags", pp.Group(pp.Optional(pp.delimitedList(word))))
        | field("proxy", pp.oneOf("yes no"))
        | field("flags", pp.Group(pp.Optional(pp.delimitedList(word))))
        | field("source", pp.Regex(r"[^;]*"))
        | field("expr", term_sum)
        | (pp.Keyword("variant") + word + _suppress(":") + term_sum + end).setParseAction(
            lambda t: _Field("variant", [t[1], t[2]]))
    )

    identity = (pp.Keyword("identity") + entry_id + _suppress("{")
                + pp.Group(pp.ZeroOrMore(fields)) + _suppress("}"))
    identity.setParseAction(lambda s, loc, t: _make_template(t[1], t[2], pp.lineno(loc, s)))

    define = (pp.Keyword("define") + ident + _suppress("(") + ident_list + _suppress(")")
              + _suppress("{") + term_sum + _suppress("}"))
    define.setParseAction(lambda s, loc, t: ast.MacroDef(
        t[1], tuple(t[2]), t[3], pp.lineno(loc, s)))

    grammar = pp.ZeroOrMore(define | identity) + pp.StringEnd()
    grammar.ignore(pp.pythonStyleComment)
    return grammar, term_sum


def _make_template(name: str, fields, line: int) -> ast.IdentityTemplate:
    template = ast.IdentityTemplate(name=name, expr=None, line=line)
    for f in fields:
        key, body = f.key, f.body
        if key == "vars":
            template.variables = tuple(body[0])
        elif key == "points":
            template.points = tuple(body[0])
        elif key == "bind":
            template.bindings = {b[0]: b[1] for b in body[0]}
        elif key == "level":
            template.level = body[0]
        elif key == "weight":
            template.weight = int(body[0])
        elif key == "expected":
            template.expect_pass = body[0] == "pass"
        elif key == "cost":
            template.cost = body[0]
        elif key == "tags":
            template.tags = tuple(body[0])
        elif key == "proxy":
            template.proxy = body[0] == "yes"
        elif key == "flags":
            template.flags = tuple(body[0])
        elif key == "source":
            template.source = body[0].strip()
        elif key == "expr":
            template.expr = body[0]
        elif key == "variant":
            template.variants.append((body[0], body[1]))
    return template


_GRAMMAR = None


def _grammar():
    global _GRAMMAR
    if _GRAMMAR is None:
        _GRAMMAR = _build_file_grammar()
    return _GRAMMAR


def _normalize(text: str) -> str:
    return text.replace(UNICODE_MINUS, "-")


def parse_corpus(text: str, path: Optional[str] = None) -> ast.CorpusFile:
    """
    Разбирает текст файла тождеств.

    Args:
        text: Содержимое файла
        path: Имя файла для сообщений об ошибках

    Returns:
        Макросы и шаблоны тождеств в порядке появления

    Raises:
        ParseError: при синтаксической ошибке или блоке без expr
    """
    grammar, _ = _grammar()
    try:
        blocks = grammar.parseString(_normalize(text), True)
    except pp.ParseBaseException as e:
        raise ParseError(f"{path or '<text>'}: {e.msg}", e.lineno, e.col) from None

    macros = {}
    identities: List[ast.IdentityTemplate] = []
    for block in blocks:
        if isinstance(block, ast.MacroDef):
            macros[block.name] = block
        else:
            if block.expr is None:
                raise ParseError(f"{path or '<text>'}: у {block.name} нет поля expr", block.line, 1)
            identities.append(block)
    for template in identities:
        template.macros = macros
        if not template.source and path:
            template.source = path
    logger.debug(f"{path or '<text>'}: {len(identities)} тождеств, {len(macros)} макросов")
    return ast.CorpusFile(macros, identities, path)


def parse_expression(text: str) -> ast.TermSum:
    """
    Разбирает одно выражение (правую часть поля expr).

    Raises:
        ParseError: при синтаксической ошибке
    """
    _, term_sum = _grammar()
    try:
        return term_sum.parseString(_normalize(text), True)[0]
    except pp.ParseBaseException as e:
        raise ParseError(e.msg, e.lineno, e.col) from None


def parse_identity(text: str) -> ast.IdentityTemplate:
    """Разбирает текст ровно с одним блоком identity."""
    corpus = parse_corpus(text)
    if len(corpus.identities) != 1:
        raise ParseError(f"ожидался один блок identity, найдено {len(corpus.identities)}")
    return corpus.identities[0]
