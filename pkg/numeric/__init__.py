"""
Численные значения полилогарифмов и проверка тождеств на mpmath.
"""
from .polylogs import (
    eval_g, eval_g_quadrature, eval_i_depth2, eval_i_series, eval_li_classical,
    eval_li_increasing, eval_mpl_series, eval_sv, series_order
)
from .identities import (
    BranchPrescription, BranchResult, NumericEvaluator, all_prescriptions, eval_333_identity,
    eval_identity_numeric, eval_mpl, random_points
)

__all__ = [
    'eval_g', 'eval_g_quadrature', 'eval_i_depth2', 'eval_i_series',
    'eval_li_classical', 'eval_li_increasing', 'eval_mpl_series', 'eval_sv',
    'series_order',
    'BranchPrescription', 'BranchResult', 'NumericEvaluator', 'all_prescriptions', 'eval_333_identity',
    'eval_identity_numeric', 'eval_mpl', 'random_points',
]
