"""Nystrom assembly of block operators and quadrature refinement.

The discrete operator carries the symmetric sqrt-weight scaling
``A[(i,a),(j,b)] = sqrt(w_i) K_ab(x_i, x_j) sqrt(w_j)`` so that it acts on
weighted samples: the matrix is Hermitian exactly when the kernel is, and its
singular values approximate the operator's directly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .domains import CompactBox, RealLine
from .errors import ConvergenceError, NumericError
from .kernels import sample_grid
from .quadrature import GAUSS_LEGENDRE, QuadratureRule, box_rule


@dataclass(frozen=True)
class BlockOperator:
    """Discretized integral operator: an (N*d) x (N*d) matrix plus its rule.

    Immutable after construction and safe to share. ``history`` records
    (order, tracked singular values) tuples when produced by refinement.
    """

    matrix: np.ndarray
    rule: QuadratureRule
    matrix_dim: int
    source: object
    history: tuple = None

    @property
    def size(self):
        return self.matrix.shape[0]

    def kernel_block(self, i, j):
        """The raw d x d kernel sample K(x_i, x_j), weights divided out."""
        d = self.matrix_dim
        w = self.rule.weights
        return self.matrix[i * d:(i + 1) * d, j * d:(j + 1) * d] / np.sqrt(w[i] * w[j])


def assemble(spec, rule):
    """Assemble the sqrt-weight-scaled Nystrom matrix of a kernel on a rule."""
    if isinstance(spec.domain, RealLine):
        raise ValueError("cannot assemble on the real line; compactify first (see realline module)")
    _check_rule_domain(spec.domain, rule.domain)
    values = sample_grid(spec, rule.nodes, rule.nodes)  # (N, N, d, d)
    if np.iscomplexobj(values) and not values.imag.any():
        values = values.real
    sw = np.sqrt(rule.weights)
    scaled = values * sw[:, None, None, None] * sw[None, :, None, None]
    n, d = len(rule), spec.matrix_dim
    matrix = np.ascontiguousarray(scaled.transpose(0, 2, 1, 3).reshape(n * d, n * d))
    return BlockOperator(matrix, rule, d, spec)


def _check_rule_domain(kernel_box, rule_box):
    if not isinstance(kernel_box, CompactBox):
        raise ValueError("assembly needs a compact kernel domain")
    if kernel_box.dim != rule_box.dim:
        raise ValueError(f"rule dimension {rule_box.dim} != domain dimension {kernel_box.dim}")
    same = np.allclose(kernel_box.lower, rule_box.lower) and np.allclose(kernel_box.upper, rule_box.upper)
    if not same:
        raise ValueError(f"rule domain {rule_box} does not match kernel domain {kernel_box}")


def singular_values(op):
    """Descending singular values of the block matrix."""
    if not np.all(np.isfinite(op.matrix)):
        raise NumericError("block operator has non-finite entries")
    return np.linalg.svd(op.matrix, compute_uv=False)


def refine_until(spec, tol, k_track=5, n0=8, n_max=2048, kind=GAUSS_LEGENDRE):
    """Double the quadrature order until the top singular values settle.

    Tracks the leading ``k_track`` singular values; stops when their maximum
    relative change between consecutive refinements drops below ``tol``.
    Raises ConvergenceError (carrying the history) if ``n_max`` is exceeded.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    if n0 < 4:
        raise ValueError("n0 must be at least 4")
    history = []
    prev = None
    n = int(n0)
    while n <= n_max:
        rule = box_rule(n, spec.domain, kind=kind)
        op = assemble(spec, rule)
        vals = singular_values(op)[:k_track]
        history.append((n, vals))
        if prev is not None:
            k = min(len(vals), len(prev))
            # changes are measured at the operator's scale (the leading
            # singular value); per-value ratios blow up on zero tail values
            scale = max(vals[0], np.finfo(float).tiny)
            change = np.max(np.abs(vals[:k] - prev[:k])) / scale
            if change < tol:
                return BlockOperator(op.matrix, op.rule, op.matrix_dim, op.source,
                                     history=tuple(history))
        prev = vals
        n *= 2
    raise ConvergenceError(
        f"singular values did not settle to {tol} within n_max={n_max}", history
    )


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

_MAGIC = b"OPKB"


def save_binary(op, path):
    """Dump the operator: header (n, d, kind), body row-major complex pairs (LE float64)."""
    kind = op.rule.kind.encode("ascii")[:16].ljust(16, b"\0")
    mat = np.ascontiguousarray(op.matrix, dtype=complex)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", len(op.rule), op.matrix_dim))
        fh.write(kind)
        pairs = np.empty((mat.size, 2), dtype="<f8")
        pairs[:, 0] = mat.real.ravel()
        pairs[:, 1] = mat.imag.ravel()
        fh.write(pairs.tobytes())


def load_binary(path):
    """Read a dumped operator; returns (matrix, n, d, kind)."""
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path} is not a block-operator dump")
        n, d = struct.unpack("<II", fh.read(8))
        kind = fh.read(16).rstrip(b"\0").decode("ascii")
        body = np.frombuffer(fh.read(), dtype="<f8").reshape(-1, 2)
    matrix = (body[:, 0] + 1j * body[:, 1]).reshape(n * d, n * d)
    return matrix, n, d, kind


def save_csv(op, path):
    """CSV export for small operators: one row per matrix row, 're+imj' cells."""
    mat = np.asarray(op.matrix, dtype=complex)
    with open(path, "w", newline="") as fh:
        for row in mat:
            fh.write(",".join(f"{v.real:.17g}{v.imag:+.17g}j" for v in row))
            fh.write("\n")
