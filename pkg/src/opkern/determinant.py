"""Regular and 2-modified Fredholm determinants, series coefficients, zeros.

Determinants come in two routes: eigen-products over a computed spectrum, and
the coefficient series b_n of det(I + z K). The series realizes the tensor
quadrature sum

    b_n = (1/n!) sum over n-tuples of nodes of weight products times the
          masked sample determinant (multi-index form for matrix kernels)

through its exact cycle-sum reduction: grouping the determinant's
permutations by cycle type turns the tuple sum into traces of powers of the
weighted Nystrom matrix, so b_n follows from the Plemelj/Newton recursion

    n b_n = sum_{m=1..n} (-1)^(m-1) Tr(M^m) b_{n-m},

with Tr(M) replaced by 0 for the 2-modified (diagonal-deleted) variant. This
is an algebraic identity with the tuple sum, not an approximation; tests
check it against direct multi-index summation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .discretize import assemble
from .errors import EstimationError, TraceClassWarning
from .spectral import NOT_TRACE_CLASS_LIKELY, cached_trace_class

MAX_COEFF_ORDER = 8
TENSOR_QUADRATURE = "tensor_quadrature"
EIGEN_DERIVED = "eigen_derived"

_NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class DeterminantSeries:
    """Truncated Fredholm series: coefficients b_0 = 1, b_1, ..., b_N."""

    coeffs: np.ndarray
    method: str
    kernel_id: str
    modified: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.size == 0 or c[0] != 1.0:
            raise ValueError("a determinant series starts with b_0 = 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def truncation_estimate(self, z):
        """|b_N z^N|: the size of the last retained term."""
        return float(abs(self.coeffs[-1]) * abs(z) ** self.order)


@dataclass(frozen=True)
class GrowthEstimate:
    """Order-of-growth estimate from coefficient decay (finite-window, not certified)."""

    rho_hat: float
    window: tuple
    residual: float


def _warn_if_not_summable(sd):
    verdict = cached_trace_class(sd)
    if verdict is not None and verdict.verdict == NOT_TRACE_CLASS_LIKELY:
        warnings.warn(
            "spectrum looks non-summable; det1 is a finite truncation (consider det2)",
            TraceClassWarning,
            stacklevel=3,
        )


def det1(sd, z):
    """Regular Fredholm determinant: prod (1 + z lambda_l) over the resolved spectrum."""
    _warn_if_not_summable(sd)
    lam = np.asarray(sd.eigenvalues, dtype=complex)
    return complex(np.prod(1.0 + z * lam))


def det2(sd, z):
    """2-modified determinant: prod (1 + z lambda_l) exp(-z lambda_l)."""
    lam = np.asarray(sd.eigenvalues, dtype=complex)
    return complex(np.prod((1.0 + z * lam) * np.exp(-z * lam)))


def det2_via_R2(op, z, dim_cap=2000):
    """det2 at the matrix level: det((I + zA) exp(-zA)) via a dense matrix exponential."""
    a = np.asarray(op.matrix, dtype=complex)
    n = a.shape[0]
    if n > dim_cap:
        raise ValueError(f"matrix dimension {n} exceeds the dense-exponential cap {dim_cap}")
    prod = (np.eye(n) + z * a) @ scipy.linalg.expm(-z * a)
    return complex(np.linalg.det(prod))


# ---------------------------------------------------------------------------
# Fredholm coefficients
# ---------------------------------------------------------------------------

def _newton_coeffs(power_traces, n_max, modified):
    traces = list(power_traces)
    if modified and traces:
        traces[0] = 0.0
    b = [1.0 + 0.0j]
    for k in range(1, n_max + 1):
        acc = 0.0 + 0.0j
        for m in range(1, k + 1):
            acc += (-1) ** (m - 1) * traces[m - 1] * b[k - m]
        b.append(acc / k)
    return np.asarray(b)


def _matrix_power_traces(m, n_max):
    traces = [complex(np.trace(m))]
    if n_max >= 2:
        # contraction, not a matmul: Tr(M^2) stays cheap for large rules
        traces.append(complex(np.einsum("ij,ji->", m, m)))
    if n_max >= 3:
        power = m @ m
        for _ in range(3, n_max + 1):
            power = power @ m
            traces.append(complex(np.trace(power)))
    return traces


def fredholm_series(spec, rule, n_max, modified=False):
    """Coefficients b_0..b_N of the determinant series on the given rule."""
    if n_max < 0:
        raise ValueError("series order must be nonnegative")
    if n_max > MAX_COEFF_ORDER:
        raise ValueError(f"series order {n_max} exceeds the cap {MAX_COEFF_ORDER}")
    op = assemble(spec, rule)
    m = op.matrix
    traces = _matrix_power_traces(m, n_max) if n_max >= 1 else []
    coeffs = _newton_coeffs(traces, n_max, modified)
    return DeterminantSeries(coeffs, TENSOR_QUADRATURE, spec.name, modified)


def fredholm_coeff(spec, rule, n, modified=False):
    """Single series coefficient b_n (b_0 = 1 by convention)."""
    n = int(n)
    if n < 0:
        raise ValueError("coefficient order must be nonnegative")
    if n > MAX_COEFF_ORDER:
        raise ValueError(f"coefficient order {n} exceeds the cap {MAX_COEFF_ORDER}")
    if n == 0:
        return 1.0 + 0.0j
    return complex(fredholm_series(spec, rule, n, modified).coeffs[n])


def series_from_spectrum(sd, n_max, modified=False):
    """Series coefficients derived from computed eigenvalues (elementary symmetric sums)."""
    if n_max < 0:
        raise ValueError("series order must be nonnegative")
    if n_max > MAX_COEFF_ORDER:
        raise ValueError(f"series order {n_max} exceeds the cap {MAX_COEFF_ORDER}")
    lam = np.asarray(sd.eigenvalues, dtype=complex)
    traces = [complex(np.sum(lam ** m)) for m in range(1, n_max + 1)]
    coeffs = _newton_coeffs(traces, n_max, modified)
    return DeterminantSeries(coeffs, EIGEN_DERIVED, "spectrum", modified)


def series_eval(series, z):
    """sum b_n z^n; check truncation_estimate(z) for the last-term size."""
    powers = z ** np.arange(len(series.coeffs))
    return complex(np.sum(series.coeffs * powers))


def order_of_growth(series):
    """Estimate the order of growth of the entire function behind the series.

    The defining ratio n log n / log(1/|b_n|) approaches the order only along
    n -> infinity; at desk-scale N its Stirling bias dominates, so the
    estimate fits log(1/|b_n|) ~ (1/rho) n log n + beta n + gamma log n + c
    over the window of coefficients with 0 < |b_n| < 1 and reports rho from
    the leading coefficient (the lower-order regressors absorb the Stirling
    terms of n!-type decay). The window is recorded; this is a finite-window
    estimate, never a certified limit.
    """
    b = np.abs(series.coeffs)
    if np.count_nonzero(b[1:]) < 4:
        raise EstimationError("need at least 4 nonzero coefficients")
    ns = np.array([n for n in range(2, len(b)) if 0.0 < b[n] < 1.0])
    if ns.size == 0:
        raise EstimationError("no coefficients with modulus below 1: cannot estimate growth")
    if ns.size < 4:
        raise EstimationError("too few usable coefficients for the growth fit")
    y = np.log(1.0 / b[ns])
    design = np.column_stack([ns * np.log(ns), ns, np.log(ns), np.ones_like(ns, dtype=float)])
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.sqrt(np.mean((design @ sol - y) ** 2)))
    lead = sol[0]
    rho = float(np.inf) if lead <= 0 else float(1.0 / lead)
    return GrowthEstimate(rho_hat=rho, window=tuple(int(n) for n in ns), residual=resid)


def det_zeros(sd, radius):
    """Zeros of det1 inside |z| <= radius, via the eigenvalue correspondence z = -1/lambda."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    lam = np.asarray(sd.eigenvalues, dtype=complex)
    if lam.size == 0:
        return np.empty(0, dtype=complex)
    floor = max(np.abs(lam).max() * _NOISE_FLOOR, 1.0 / radius * (1.0 - 1e-12))
    keep = np.abs(lam) >= floor
    zeros = -1.0 / lam[keep]
    zeros = zeros[np.abs(zeros) <= radius * (1.0 + 1e-12)]
    order = np.lexsort((zeros.imag, zeros.real, np.abs(zeros)))
    return zeros[order]
