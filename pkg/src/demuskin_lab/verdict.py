"""Three-valued outcome of a bounded search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Any = None
    budget_spent: int = 0
    detail: dict = field(default_factory=dict, compare=False)

    @classmethod
    def verified(cls, witness=None, **detail) -> Verdict:
        return cls(VERIFIED, witness, 0, detail)

    @classmethod
    def refuted(cls, witness, **detail) -> Verdict:
        return cls(REFUTED, witness, 0, detail)

    @classmethod
    def inconclusive(cls, budget_spent: int, **detail) -> Verdict:
        return cls(INCONCLUSIVE, None, budget_spent, detail)

    @property
    def is_verified(self) -> bool:
        return self.status == VERIFIED

    @property
    def is_refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def is_inconclusive(self) -> bool:
        return self.status == INCONCLUSIVE

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.is_inconclusive:
            out["budget_spent"] = self.budget_spent
        if self.detail:
            out["detail"] = _jsonable(self.detail)
        return out


def conjunction(verdicts) -> Verdict:
    """First refutation wins; otherwise inconclusive if any part was."""
    pending = None
    for v in verdicts:
        if v.is_refuted:
            return v
        if v.is_inconclusive and pending is None:
            pending = v
    return pending if pending is not None else Verdict.verified()


def _jsonable(obj):
    import numpy as np

    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj
