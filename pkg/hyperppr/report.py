#!env python
"""
    I hold LemmaReport, the verdict every inequality checker returns.
"""


# python libraries
import math
from dataclasses import dataclass, field
from typing import Any, Optional


import numpy as np


@dataclass(frozen=True)
class LemmaReport:
    """
        I am the outcome of checking one inequality lhs <= rhs + slack.

        A check whose hypotheses fail is not applicable; it holds vacuously
        and carries the reason in details and the offending vertex or set,
        if any, in witness.
    """
    name: str
    applicable: bool
    lhs: float = math.nan
    rhs: float = math.nan
    holds: bool = True
    witness: Optional[Any] = None
    slack: float = 0.0
    details: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, name: str, lhs: float, rhs: float, slack: float = 0.0, strict: bool = False,
                witness: Optional[Any] = None, **details) -> 'LemmaReport':
        """
            I build an applicable report, holds when lhs <= rhs + slack (or
            lhs < rhs + slack when strict).
        """
        holds = lhs < rhs + slack if strict else lhs <= rhs + slack
        return cls(name, True, float(lhs), float(rhs), bool(holds), witness, slack, details)

    @classmethod
    def inapplicable(cls, name: str, reason: str, witness: Optional[Any] = None, **details) -> 'LemmaReport':
        """
            I build a report for a check whose hypotheses do not hold.
        """
        return cls(name, False, witness=witness, details={'reason': reason, **details})

    @property
    def failed(self) -> bool:
        """ applicable and violated """
        return self.applicable and not self.holds

    def to_dict(self) -> dict:
        """
            I return the report as json friendly values.
        """
        return {
            'name': self.name,
            'applicable': self.applicable,
            'lhs': _plain(self.lhs),
            'rhs': _plain(self.rhs),
            'holds': self.holds,
            'witness': _plain(self.witness),
            'slack': self.slack,
            'details': {key: _plain(value) for key, value in self.details.items()},
        }


def _plain(value):
    if isinstance(value, (set, frozenset)):
        return sorted(int(v) for v in value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    return value
