"""Quadrature rules used to discretize integral operators.

Rules are flat lists of nodes and positive weights; boxes in two dimensions
get tensor-product rules. Weights always sum to the domain volume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import CompactBox, interval

GAUSS_LEGENDRE = "gauss_legendre"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights on a compact box.

    ``nodes`` has shape (N,) on intervals and (N, 2) on two-dimensional boxes;
    ``order`` is the number of points per axis.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    kind: str
    domain: CompactBox

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if self.weights.ndim != 1 or len(self.weights) != len(self.nodes):
            raise ValueError("weights must be one scalar per node")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def __len__(self):
        return len(self.weights)

    def point(self, i):
        """The i-th node in the form kernel evaluators expect."""
        return float(self.nodes[i]) if self.nodes.ndim == 1 else self.nodes[i]


def gauss_legendre(n, a, b):
    """n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2n-1."""
    if n <= 0:
        raise ValueError(f"need n >= 1, got {n}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    x, w = np.polynomial.legendre.leggauss(int(n))
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return QuadratureRule(mid + half * x, half * w, int(n), GAUSS_LEGENDRE, interval(a, b))


def trapezoid(n, a, b):
    """n-point trapezoid rule on [a, b] (endpoints included, n >= 2).

    Matches kernels sampled on uniform grids.
    """
    if n < 2:
        raise ValueError(f"trapezoid rule needs n >= 2, got {n}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    x = np.linspace(a, b, int(n))
    h = (b - a) / (n - 1)
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return QuadratureRule(x, w, int(n), TRAPEZOID, interval(a, b))


def box_rule(n, box, kind=GAUSS_LEGENDRE):
    """Tensor-product rule with n points per axis on a box of dimension <= 2."""
    if box.dim == 1:
        return _axis_rule(n, box.lower[0], box.upper[0], kind)
    if box.dim != 2:
        raise ValueError(f"tensor rules support dimension <= 2, got {box.dim}")
    rx = _axis_rule(n, box.lower[0], box.upper[0], kind)
    ry = _axis_rule(n, box.lower[1], box.upper[1], kind)
    nodes = np.column_stack(
        [np.repeat(rx.nodes, len(ry)), np.tile(ry.nodes, len(rx))]
    )
    weights = np.outer(rx.weights, ry.weights).ravel()
    return QuadratureRule(nodes, weights, int(n), kind, box)


def _axis_rule(n, a, b, kind):
    if kind == GAUSS_LEGENDRE:
        return gauss_legendre(n, a, b)
    if kind == TRAPEZOID:
        return trapezoid(n, a, b)
    raise ValueError(f"unknown quadrature kind {kind!r}")
