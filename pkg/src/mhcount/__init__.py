"""Exact point counts and bound checks for generalized Markoff-Hurwitz
equations ``(a_1 X_1^m + ... + a_n X_n^m + a)^k = b X_1 ... X_n`` over finite
fields."""

from .budgets import BudgetExceeded, Budgets
from .counting import (CountReport, count_diagonal, count_fast, count_infinity, count_naive,
                       count_Ni, count_nonzero_direct, count_nonzero_ie, count_pcl, count_report)
from .field import FieldCtx, build_field, mth_power_root_count
from .model import HypothesisError, MHInstance, all_ones, make_instance

__all__ = [
    "BudgetExceeded", "Budgets", "CountReport", "FieldCtx", "HypothesisError", "MHInstance",
    "all_ones", "build_field", "count_Ni", "count_diagonal", "count_fast", "count_infinity",
    "count_naive", "count_nonzero_direct", "count_nonzero_ie", "count_pcl", "count_report",
    "make_instance", "mth_power_root_count",
]
