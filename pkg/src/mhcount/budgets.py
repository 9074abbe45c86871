"""Work budgets for the exhaustive routines.

Defaults can be overridden through the environment::

    MHCOUNT_BUDGET_NAIVE_EVALS     points evaluated by the naive counter
    MHCOUNT_BUDGET_FAST_PREFIXES   prefixes scanned by the fast counters
    MHCOUNT_BUDGET_PROBE_POINTS    points scanned by the geometry probes
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

ENV_PREFIX = "MHCOUNT_BUDGET_"


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Budgets:
    naive_evals: int = 10**8
    fast_prefixes: int = 10**8
    probe_points: int = 10**7

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"budget {f.name} must be positive")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> Budgets:
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                values[f.name] = int(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def check_budget(what: str, work: int, budget: int) -> None:
    if work > budget:
        raise BudgetExceeded(f"{what}: {work} exceeds budget {budget}")
