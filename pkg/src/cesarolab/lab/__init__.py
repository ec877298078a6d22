"""Experiments: exact identities asserted hard, inequalities measured as bound ratios."""
from .reports import CSV_COLUMNS, BoundRatioReport, HardAssertionError, WeakTypeCurve

__all__ = ["CSV_COLUMNS", "BoundRatioReport", "HardAssertionError", "WeakTypeCurve"]
