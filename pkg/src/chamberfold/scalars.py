"""Exact and tolerance-tagged float scalar backends.

Every numeric routine in the package takes a :class:`Backend` and leaves the
scalars themselves as plain Python numbers: :class:`fractions.Fraction` on the
exact backend, ``float`` on the float backend.  Only sign decisions go through
the backend, so the same elimination code serves both.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class Backend:
    exact: bool
    eps: float = 0.0

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def coerce(self, x):
        if self.exact:
            if isinstance(x, float):
                raise TypeError(f"float {x!r} on the exact backend; pass a Fraction or 'p/q' string")
            return Fraction(x)
        return float(x)

    def sign(self, x) -> int:
        if self.exact:
            return (x > 0) - (x < 0)
        if x > self.eps:
            return 1
        if x < -self.eps:
            return -1
        return 0

    def is_zero(self, x) -> bool:
        return self.sign(x) == 0

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def one(self):
        return Fraction(1) if self.exact else 1.0


EXACT = Backend(True, 0.0)


def float_backend(eps: float | None = None) -> Backend:
    """Float backend; ``CHAMBERFOLD_EPSILON`` overrides the default tolerance."""
    if eps is None:
        eps = float(os.environ.get("CHAMBERFOLD_EPSILON", DEFAULT_EPSILON))
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    return Backend(False, float(eps))


def parse_scalar(value, exact: bool):
    """Parse a JSON matrix entry: int, float, or a ``"p/q"`` string."""
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, str):
        q = Fraction(value.strip())
        return q if exact else float(q)
    if isinstance(value, (int, Rational)):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        if exact:
            raise ValueError(f"float entry {value!r} is not allowed on the exact backend")
        return value
    raise ValueError(f"not a number: {value!r}")


def is_rational_entry(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, Rational)):
        return True
    if isinstance(value, str):
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            return False
        return True
    return False


def format_scalar(x) -> str | float:
    """JSON form: ``"p/q"`` (or ``"p"``) for rationals, a plain number for floats."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return float(x)


def to_float(x) -> float:
    return float(x)


def is_finite(x) -> bool:
    return isinstance(x, Fraction) or math.isfinite(x)
