"""
Движок символов: тензорные суммы, рекурсия для итерированных интегралов, проекторы.
"""
from .tensors import (
    TensorSum, TermAccumulator, delta22_antisymmetrize, rebase, rho_project,
    shuffle, tensor_rank
)
from .iterated import SymbolCalculator, basis_for, symbol_iterated, symbol_mpl
from .sketch import TensorSketch

__all__ = [
    'TensorSum', 'TermAccumulator', 'delta22_antisymmetrize', 'rebase',
    'rho_project', 'shuffle', 'tensor_rank',
    'SymbolCalculator', 'basis_for', 'symbol_iterated', 'symbol_mpl',
    'TensorSketch',
]
