"""
Ранги семейств перестановок после антисимметризации delta22.
"""
import logging
import time
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from dsl.expand import expand_symbolic
from dsl.parser import parse_identity
from models import CheckReport, Level, Verdict
from symbols.iterated import SymbolCalculator, basis_for
from symbols.tensors import TensorSum, delta22_antisymmetrize, tensor_rank

logger = logging.getLogger(__name__)

POINTS = "abcde"
POINT_BINDINGS = "a = 0, b = 1, c = inf, d = x, e = y"
BASIS_CERTIFICATE: Tuple[str, ...] = ("acedb", "adceb", "bdaec", "bedac", "cbeda", "cedba")
FAMILIES: Tuple[Tuple[int, int], ...] = ((3, 1), (2, 2), (1, 3))
EXPECTED_RANK = 6


@dataclass
class RankResult:
    """Ранг семейства и ранг подсемейства-сертификата."""
    indices: Tuple[int, int]
    rank: int
    size: int
    certificate_rank: int
    certificate: Tuple[str, ...] = BASIS_CERTIFICATE
    spans: bool = False


def family_template(indices: Tuple[int, int], words: Sequence[str]):
    """Блок identity с одним вариантом на каждую перестановку точек a..e."""
    suffix = "".join(str(k) for k in indices)
    variants = " ".join(f"variant {w}: ({' '.join(w)})_{suffix};" for w in words)
    text = (f"identity rank.{suffix} {{ vars: x, y; points: a, b, c, d, e; "
            f"bind: {POINT_BINDINGS}; expr: ({' '.join(POINTS)})_{suffix}; {variants} }}")
    return parse_identity(text)


def projected_family(indices: Tuple[int, int], words: Sequence[str]) -> Dict[str, TensorSum]:
    """delta22-образы символов (w)_{indices} для всех слов, над общим базисом."""
    template = family_template(indices, words)
    exprs = {w: expand_symbolic(template, variant=w) for w in words}
    basis = basis_for(exprs.values())
    calculator = SymbolCalculator(basis)
    logger.debug(f"Семейство {indices}: {len(words)} слов, базис из {len(basis)} букв")
    return {w: delta22_antisymmetrize(calculator.symbol_expr(e)) for w, e in exprs.items()}


class Ranker:
    """Класс для вычисления рангов семейств I_31, I_22, I_13."""

    def __init__(self, certificate: Tuple[str, ...] = BASIS_CERTIFICATE):
        self.certificate = certificate

    def rank_family(self, indices: Tuple[int, int]) -> RankResult:
        """
        Ранг 120 перестановок и проверка, что сертификат их порождает.

        Сертификат порождает семейство, если его ранг равен рангу
        всего семейства.
        """
        words = ["".join(p) for p in permutations(POINTS)]
        projected = projected_family(indices, words)
        rank = tensor_rank(list(projected.values()))
        certificate_rank = tensor_rank([projected[w] for w in self.certificate])
        spans = certificate_rank == rank
        logger.info(f"Ранг семейства {indices}: {rank}, сертификат: {certificate_rank}")
        return RankResult(indices, rank, len(words), certificate_rank, self.certificate, spans)

    def check_family(self, indices: Tuple[int, int]) -> CheckReport:
        """CheckReport: pass, если ранг равен 6 и сертификат порождает семейство."""
        suffix = "".join(str(k) for k in indices)
        started = time.perf_counter()
        result = self.rank_family(indices)
        passed = result.rank == EXPECTED_RANK and result.spans
        report = CheckReport(
            entry_id=f"rank.{suffix}",
            level=Level.DELTA22.value,
            verdict=Verdict.PASS if passed else Verdict.FAIL,
            details={'rank': result.rank, 'family_size': result.size,
                     'certificate': list(result.certificate),
                     'certificate_rank': result.certificate_rank},
        )
        report.millis = int((time.perf_counter() - started) * 1000)
        if not passed:
            report.message = f"ранг {result.rank}, ранг сертификата {result.certificate_rank}"
        return report

    def check_all(self, tag_filter: Optional[str] = None) -> List[CheckReport]:
        """Все три семейства или только то, чей id начинается с фильтра."""
        reports = []
        for indices in FAMILIES:
            entry_id = "rank." + "".join(str(k) for k in indices)
            if tag_filter and not entry_id.startswith(tag_filter):
                continue
            reports.append(self.check_family(indices))
        return reports
