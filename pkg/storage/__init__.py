"""
Модуль для хранения отчётов проверки.
"""
from .report_store import ReportStore, FORMATS

__all__ = ['ReportStore', 'FORMATS']
