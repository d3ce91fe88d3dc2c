"""
Корпус тождеств: файлы данных, реестр записей и генераторы.
"""
from .registry import (
    REQUIRED_IDS, get_entry, list_identities, load_corpus_files, load_templates,
    resolve_data_dir
)
from .generators import (
    ExprBuilder, build_931, build_kappa_checks, build_orbit_family, build_s4,
    build_s4_display, build_s4_tilde, count_up_to_inverses, is_swap_invariant
)

__all__ = [
    'REQUIRED_IDS', 'get_entry', 'list_identities', 'load_corpus_files',
    'load_templates', 'resolve_data_dir',
    'ExprBuilder', 'build_931', 'build_kappa_checks', 'build_orbit_family',
    'build_s4', 'build_s4_display', 'build_s4_tilde', 'count_up_to_inverses',
    'is_swap_invariant',
]
