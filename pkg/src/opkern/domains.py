"""Domains on which kernels live: compact boxes (intervals, rectangles) and the real line."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class CompactBox:
    """Axis-aligned closed box ``[lower_1, upper_1] x ... x [lower_m, upper_m]``."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi):
            raise ValueError("lower/upper must have equal length")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("each lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self):
        return len(self.lower)

    @property
    def volume(self):
        return float(np.prod([b - a for a, b in zip(self.lower, self.upper)]))

    @property
    def diameter(self):
        return float(np.hypot.reduce([b - a for a, b in zip(self.lower, self.upper)]))

    def contains(self, x, tol=0.0):
        p = np.atleast_1d(np.asarray(x, dtype=float))
        if p.shape != (self.dim,):
            return False
        return bool(
            np.all(p >= np.array(self.lower) - tol)
            and np.all(p <= np.array(self.upper) + tol)
        )


@dataclass(frozen=True)
class RealLine:
    """The whole real line (one-dimensional)."""

    @property
    def dim(self):
        return 1

    def contains(self, x, tol=0.0):
        p = np.atleast_1d(np.asarray(x, dtype=float))
        return p.shape == (1,) and bool(np.isfinite(p[0]))


def interval(a, b):
    """Shorthand for a one-dimensional box."""
    return CompactBox((a,), (b,))


def check_point(domain, x, what="point"):
    """Validate membership and return the point as a float or 1-d array."""
    if not domain.contains(x, tol=1e-12):
        raise DomainError(f"{what} {x!r} is outside the domain {domain}")
    p = np.atleast_1d(np.asarray(x, dtype=float))
    return float(p[0]) if domain.dim == 1 else p
