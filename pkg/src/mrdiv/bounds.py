"""Shared result record for divergence bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class BoundResult:
    """A one-sided (or exact) divergence value in nats.

    kind: lower | upper | exact | heuristic.  status: converged | budget |
    formula.  ``extra`` carries solver artifacts (achieving POVM, optimizer,
    sensitivity reports) and is not serialized.
    """

    value_nats: float
    kind: str
    alpha: float
    mclass: str
    status: str = "converged"
    iterations: int = 0
    extra: dict = field(default_factory=dict, repr=False, compare=False)

    def to_json(self) -> dict:
        v = float(self.value_nats)
        return {
            "value_nats": "inf" if math.isinf(v) else v,
            "kind": self.kind,
            "alpha": "inf" if math.isinf(self.alpha) else self.alpha,
            "class": self.mclass,
            "status": self.status,
            "iterations": self.iterations,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoundResult":
        def _num(x):
            return math.inf if x == "inf" else float(x)

        return cls(
            value_nats=_num(obj["value_nats"]),
            kind=obj["kind"],
            alpha=_num(obj["alpha"]),
            mclass=obj["class"],
            status=obj.get("status", "converged"),
            iterations=int(obj.get("iterations", 0)),
        )
