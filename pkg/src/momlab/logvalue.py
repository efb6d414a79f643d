"""Sign/log-magnitude numbers.

Determinants of the Toeplitz+Hankel matrices and the moment values built from
them span hundreds of orders of magnitude once the matrix order reaches a few
hundred, so every multiplicative pipeline in this package carries values as a
sign in {-1, 0, +1} plus the natural log of the absolute value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(log_abs)``.

    ``sign == 0`` represents exactly zero; ``log_abs`` is then meaningless and
    ignored by all operations.
    """

    sign: int
    log_abs: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign != 0 and math.isnan(self.log_abs):
            raise ValueError("log_abs is NaN for a nonzero value")

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls(0)
        if math.isnan(x):
            raise ValueError("cannot represent NaN")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "LogValue":
        return cls(sign, log_abs)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        """Value as a float; overflows to +-inf rather than raising."""
        if self.sign == 0:
            return 0.0
        if self.log_abs > 709.0:  # exp overflow threshold for float64
            return self.sign * math.inf
        return self.sign * math.exp(self.log_abs)

    def __mul__(self, other: "LogValue | float | int") -> "LogValue":
        if not isinstance(other, LogValue):
            other = LogValue.from_float(float(other))
        if self.sign == 0 or other.sign == 0:
            return LogValue(0)
        return LogValue(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other: "LogValue | float | int") -> "LogValue":
        if not isinstance(other, LogValue):
            other = LogValue.from_float(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by exact-zero LogValue")
        if self.sign == 0:
            return LogValue(0)
        return LogValue(self.sign * other.sign, self.log_abs - other.log_abs)

    def __pow__(self, p: float) -> "LogValue":
        if self.sign == 0:
            if p <= 0:
                raise ZeroDivisionError("0 raised to a non-positive power")
            return LogValue(0)
        if self.sign > 0:
            return LogValue(1, p * self.log_abs)
        if p != int(p):
            raise ValueError("non-integer power of a negative value")
        return LogValue(-1 if int(p) % 2 else 1, p * self.log_abs)

    def __neg__(self) -> "LogValue":
        return LogValue(-self.sign, self.log_abs)

    def __repr__(self):
        return f"LogValue(sign={self.sign}, log_abs={self.log_abs!r})"
