"""
Сервисы проверки: символьная, специализация, ранги и численная.
"""
from .verifier import Verifier, VerifierConfig, exit_code
from .specializer import Specializer
from .ranker import Ranker
from .numeric_runner import NumericRunner

__all__ = ['Verifier', 'VerifierConfig', 'exit_code', 'Specializer', 'Ranker', 'NumericRunner']
