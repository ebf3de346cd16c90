"""Parameter records for the two Marcum-Q integral families."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["Family", "IntegralSpec"]


class Family(str, enum.Enum):
    """Which argument of ``Q_m`` carries the ``sqrt(x)`` factor.

    ``G``: ``int x^{k-1} Q_m(a, b sqrt(x)) e^{-px} dx``
    ``F``: ``int x^{k-1} Q_m(a sqrt(x), b) e^{-px} dx``
    """

    G = "G"
    F = "F"


@dataclass(frozen=True)
class IntegralSpec:
    """The tuple ``(k, m, a, b, p)`` together with the integral family."""

    family: Family
    k: float
    m: float
    a: float
    b: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        for name in ("k", "m", "a", "b", "p"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
        if not self.k > 0.0:
            raise DomainError(f"k must be positive, got {self.k}")
        if not self.p > 0.0:
            raise DomainError(f"p must be positive, got {self.p}")
        if not self.m >= 0.5:
            raise DomainError(f"Marcum order m must be >= 0.5, got {self.m}")
        if not (self.a >= 0.0 and self.b >= 0.0):
            raise DomainError(f"a and b must be nonnegative, got a={self.a}, b={self.b}")

    @property
    def args(self):
        return self.k, self.m, self.a, self.b, self.p
