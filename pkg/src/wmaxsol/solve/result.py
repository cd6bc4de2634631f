from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction


class Status(str, Enum):
    OPTIMAL = "OPTIMAL"
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"

    def __str__(self):
        return self.value


@dataclass
class SolveResult:
    """Outcome of a solver run.

    ``guarantee`` is a lower bound on ``measure / opt`` as an exact fraction;
    OPTIMAL results carry 1.
    """

    status: Status
    assignment: dict | None = None
    measure: int | None = None
    guarantee: Fraction | None = None
    solver: str = ""
    details: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is not Status.INFEASIBLE

    @classmethod
    def infeasible(cls, solver: str, **details) -> "SolveResult":
        return cls(Status.INFEASIBLE, solver=solver, details=dict(details))
