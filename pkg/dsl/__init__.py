"""
Язык описания тождеств: разбор, раскрытие шаблонов, печать.
"""
from .parser import parse_corpus, parse_expression, parse_identity
from .expand import (
    Expander, expand_at, expand_numeric, expand_symbolic, expand_with,
    group_elements, invert_negative, permutation_sign, to_atoms
)
from .printer import format_atom, format_expr

__all__ = [
    'parse_corpus', 'parse_expression', 'parse_identity',
    'Expander', 'expand_at', 'expand_numeric', 'expand_symbolic', 'expand_with',
    'group_elements', 'invert_negative', 'permutation_sign', 'to_atoms',
    'format_atom', 'format_expr',
]
