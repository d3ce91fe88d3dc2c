"""
Печать раскрытых выражений обратно в синтаксис файлов тождеств.
"""
from fractions import Fraction
from typing import Any

from models import AtomKind, IdentityExpr, IdentityTerm, MplAtom


def format_value(v: Any) -> str:
    text = str(v)
    if isinstance(v, Fraction) and v.denominator == 1 and v >= 0:
        return text
    return f"({text})"


def format_atom(atom: MplAtom) -> str:
    args = ", ".join(format_value(a) for a in atom.args)
    if atom.kind in (AtomKind.I, AtomKind.LI):
        indices = ",".join(str(k) for k in atom.indices)
        return f"{atom.kind.value}({indices})[{args}]"
    if atom.kind == AtomKind.G:
        letters = ", ".join(format_value(a) for a in atom.args[:-1])
        return f"G[{letters}; {format_value(atom.args[-1])}]"
    if atom.kind == AtomKind.IPI:
        return "ipi"
    return f"{atom.kind.value}[{args}]"


def format_term(term: IdentityTerm, first: bool = False) -> str:
    coeff = Fraction(term.coeff)
    sign = "-" if coeff < 0 else ("" if first else "+")
    magnitude = abs(coeff)
    body = " . ".join(format_atom(a) for a in term.factors)
    prefix = "" if magnitude == 1 else f"{magnitude}*"
    return f"{sign} {prefix}{body}".strip() if sign else f"{prefix}{body}"


def format_expr(expr: IdentityExpr, per_line: bool = True) -> str:
    """Выражение в синтаксисе поля expr; пустая сумма печатается как 0·ipi."""
    if not expr.terms:
        return "0*ipi"
    parts = [format_term(t, i == 0) for i, t in enumerate(expr.terms)]
    return ("\n  " if per_line else " ").join(parts)
