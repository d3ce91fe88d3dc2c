"""
Точное ядро: многочлены, рациональные функции, взаимно простые базисы.
"""
from .polynomials import (
    RationalFunction, make_ring, poly_gcd, primitive_normalized,
    ratfun_normalize, specialize
)
from .basis import FactorBasis, GroupWord, PrimeBasis, factor_over_basis, gcd_free_basis

__all__ = [
    'RationalFunction', 'make_ring', 'poly_gcd', 'primitive_normalized',
    'ratfun_normalize', 'specialize',
    'FactorBasis', 'GroupWord', 'PrimeBasis', 'factor_over_basis', 'gcd_free_basis',
]
