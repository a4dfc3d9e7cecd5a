"""Exact F_p experiments with quaternionic pairings, C_p-modules and pro-p presentations."""

from .verdict import INCONCLUSIVE, REFUTED, VERIFIED, Verdict

__all__ = ["Verdict", "VERIFIED", "REFUTED", "INCONCLUSIVE"]
__version__ = "0.1.0"
