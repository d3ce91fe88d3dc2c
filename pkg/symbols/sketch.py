"""
Вероятностные эскизы тензоров над базисом простых чисел.

Каждое простое p получает случайный вектор φ(p) ∈ (Z/P)^k, слово
Σ e_p·p переходит в Σ e_p·φ(p), элементарный тензор - во внешнее
произведение векторов. Отображение полилинейно, поэтому перестановки
слотов, rho и delta22 переносятся на эскиз как перестановки осей.
"""
import logging
from fractions import Fraction
from typing import Dict, Sequence

import numpy as np

from kernel.basis import GroupWord
from symbols.tensors import DELTA22_GROUP, TensorSum, leading_rho_pattern, rho_pattern

logger = logging.getLogger(__name__)

MODULUS = 2 ** 31 - 1


class TensorSketch:
    """Эскиз тензора веса weight в виде массива формы (k,)*weight по модулю P."""

    def __init__(self, weight: int, dimension: int = 6, seed: int = 0, modulus: int = MODULUS):
        self.weight = weight
        self.dimension = dimension
        self.seed = seed
        self.modulus = modulus
        self.data = np.zeros((dimension,) * weight, dtype=np.int64)
        self._primes: Dict[int, np.ndarray] = {}
        self.terms_added = 0

    def _like(self, data: np.ndarray) -> 'TensorSketch':
        other = TensorSketch(self.weight, self.dimension, self.seed, self.modulus)
        other.data = data
        other._primes = self._primes
        return other

    def prime_vector(self, p: int) -> np.ndarray:
        vec = self._primes.get(p)
        if vec is None:
            rng = np.random.default_rng([self.seed, p])
            vec = rng.integers(0, self.modulus, size=self.dimension, dtype=np.int64)
            self._primes[p] = vec
        return vec

    def word_vector(self, word: GroupWord) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.int64)
        for p, e in word.exponents:
            vec = (vec + (e % self.modulus) * self.prime_vector(p)) % self.modulus
        return vec

    def _coeff(self, c) -> int:
        c = Fraction(c)
        return c.numerator * pow(c.denominator, -1, self.modulus) % self.modulus

    def add_vectors(self, vectors: Sequence[np.ndarray], coeff) -> None:
        """Добавляет c · v1 ⊗ ... ⊗ vn."""
        if len(vectors) != self.weight:
            raise ValueError(f"ожидалось {self.weight} векторов, получено {len(vectors)}")
        block = vectors[0]
        for v in vectors[1:]:
            block = np.multiply.outer(block, v) % self.modulus
        block = block * self._coeff(coeff) % self.modulus
        self.data = (self.data + block) % self.modulus
        self.terms_added += 1

    def add_words(self, words: Sequence[GroupWord], coeff) -> None:
        self.add_vectors([self.word_vector(w) for w in words], coeff)

    def add_tensor(self, t: TensorSum, coeff=1) -> None:
        """Добавляет тензор над PrimeBasis (индексы - простые числа)."""
        for key, c in t.terms.items():
            self.add_vectors([self.prime_vector(p) for p in key], Fraction(c) * Fraction(coeff))

    def _permuted_sum(self, pattern) -> np.ndarray:
        acc = np.zeros_like(self.data)
        for perm, sign in pattern:
            acc = (acc + sign * np.transpose(self.data, perm)) % self.modulus
        return acc

    def rho(self, leading: bool = False) -> 'TensorSketch':
        pattern = leading_rho_pattern(self.weight) if leading else rho_pattern(self.weight)
        return self._like(self._permuted_sum(pattern))

    def delta22(self) -> 'TensorSketch':
        if self.weight != 4:
            raise ValueError("delta22 определена только для веса 4")
        return self._like(self._permuted_sum(DELTA22_GROUP))

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.data))
