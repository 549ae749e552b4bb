"""Singular/eigen structure of block operators and trace diagnostics.

Everything downstream of the dense decomposition lives here: Schatten norms,
the two trace routes, the symmetrized kernel and its Mercer expansion, the
summability diagnostic, the secular rank-one eigenvalue update, and the
kernel-vs-symmetrized-kernel modulus identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .discretize import assemble
from .domains import RealLine
from .errors import DomainError, EstimationError, NumericError, PreconditionError
from .kernels import sample_grid

TRACE_CLASS_LIKELY = "trace_class_likely"
BORDERLINE = "borderline"
NOT_TRACE_CLASS_LIKELY = "not_trace_class_likely"

_RANK_FLOOR = 1e-12          # relative cutoff separating resolved values from noise
_FIT_WINDOW = (0.10, 0.30)   # fraction of the resolved spectrum used for the decay fit
_DECAY_HI, _DECAY_LO = 1.1, 0.9
_RESIDUAL_MAX = 0.1


@dataclass
class SpectralData:
    """Decomposition of a block operator.

    Singular values descend; eigenvalues are ordered by descending modulus
    (ties by real part, then imaginary part). Vector columns live in the
    weighted coordinates of the discrete L2 inner product. Treat instances as
    immutable; the private fields only cache derived matrices.
    """

    singular_values: np.ndarray
    eigenvalues: np.ndarray
    left_vectors: np.ndarray = None
    right_vectors: np.ndarray = None
    rule: object = None
    matrix_dim: int = 1
    op: object = None
    _psym: np.ndarray = field(default=None, repr=False)
    _verdict: object = field(default=None, repr=False)

    @classmethod
    def from_spectrum(cls, singular_values, eigenvalues=None):
        """Wrap known spectra (e.g. analytic ones) without vectors."""
        mu = np.asarray(singular_values, dtype=float)
        lam = mu.astype(complex) if eigenvalues is None else np.asarray(eigenvalues, dtype=complex)
        return cls(mu, lam)

    def sym_matrix(self):
        """(K K*)^(1/2) in weighted coordinates, cached."""
        if self._psym is None:
            if self.left_vectors is None:
                raise ValueError("no singular vectors available")
            u = self.left_vectors
            self._psym = (u * self.singular_values) @ u.conj().T
        return self._psym


def decompose(op):
    """Dense SVD + eigendecomposition of a block operator."""
    a = op.matrix
    if not np.all(np.isfinite(a)):
        raise NumericError("block operator has non-finite entries")
    u, s, vh = np.linalg.svd(a)
    lam = np.linalg.eigvals(a)
    order = np.lexsort((-lam.imag, -lam.real, -np.abs(lam)))
    return SpectralData(
        singular_values=s,
        eigenvalues=lam[order],
        left_vectors=u,
        right_vectors=vh.conj().T,
        rule=op.rule,
        matrix_dim=op.matrix_dim,
        op=op,
    )


def schatten_norm(sd, p):
    """(sum mu^p)^(1/p) over the computed spectrum."""
    if p < 1:
        raise ValueError(f"Schatten norms need p >= 1, got {p}")
    mu = np.asarray(sd.singular_values, dtype=float)
    if mu.size == 0:
        return 0.0
    top = mu.max()
    if top == 0.0:
        return 0.0
    # factor out the head to avoid overflow for large p
    return float(top * np.sum((mu / top) ** p) ** (1.0 / p))


def trace_eigs(sd):
    """Sum of eigenvalues."""
    return complex(np.sum(sd.eigenvalues))


def trace_diagonal(spec, rule):
    """Quadrature of x -> Tr K(x, x) over the compact domain."""
    if isinstance(spec.domain, RealLine):
        raise DomainError("trace_diagonal needs a compact domain; compactify first")
    total = 0.0 + 0.0j
    one_dim = rule.nodes.ndim == 1
    for i in range(len(rule)):
        x = float(rule.nodes[i]) if one_dim else rule.nodes[i]
        total += rule.weights[i] * np.trace(np.asarray(spec.evaluator(x, x), dtype=complex))
    return complex(total)


def _kernel_unit_blocks(matrix, rule, d):
    """Reshape an (N*d, N*d) matrix to (N, N, d, d) with the weights divided out."""
    n = len(rule)
    blocks = matrix.reshape(n, d, n, d).transpose(0, 2, 1, 3)
    sw = np.sqrt(rule.weights)
    return blocks / (sw[:, None, None, None] * sw[None, :, None, None])


def symmetrized_kernel(sd, x_idx, y_idx):
    """Node-sampled kernel of (K K*)^(1/2), in genuine kernel units."""
    n = len(sd.rule)
    if not (0 <= x_idx < n and 0 <= y_idx < n):
        raise IndexError(f"node index out of range [0, {n})")
    d = sd.matrix_dim
    p = sd.sym_matrix()
    w = sd.rule.weights
    block = p[x_idx * d:(x_idx + 1) * d, y_idx * d:(y_idx + 1) * d]
    return block / np.sqrt(w[x_idx] * w[y_idx])


def _require_psd(sd, tol_rel=1e-10):
    a = sd.op.matrix
    scale = max(sd.singular_values[0], np.finfo(float).tiny)
    if np.linalg.norm(a - a.conj().T) > 1e-8 * scale:
        raise PreconditionError("source operator is not Hermitian")
    lam = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    if lam[0] < -tol_rel * scale:
        raise PreconditionError(
            f"source operator is not nonnegative definite: eigenvalue {lam[0]:.3e}"
        )
    return lam[::-1]


def mercer_sup_error(sd, ranks):
    """Sup-norm error of the rank-r eigen-expansions of a PSD kernel.

    For each r, the maximum over node pairs of the Frobenius norm of
    P(x, y) - sum_{l <= r} lambda_l phi_l(x) (x) phi_l(y), in kernel units.
    """
    if sd.op is None:
        raise ValueError("mercer_sup_error needs a decomposition with its operator")
    _require_psd(sd)
    a = 0.5 * (sd.op.matrix + sd.op.matrix.conj().T)
    lam, vec = np.linalg.eigh(a)
    lam, vec = lam[::-1], vec[:, ::-1]
    d = sd.matrix_dim
    sw = np.sqrt(sd.rule.weights)
    denom = sw[:, None] * sw[None, :]
    out = []
    for r in ranks:
        r = int(r)
        if not 0 <= r <= len(lam):
            raise ValueError(f"rank {r} out of range [0, {len(lam)}]")
        tail = (vec[:, r:] * lam[r:]) @ vec[:, r:].conj().T
        blocks = tail.reshape(len(sw), d, len(sw), d).transpose(0, 2, 1, 3)
        norms = np.sqrt(np.sum(np.abs(blocks) ** 2, axis=(2, 3))) / denom
        out.append(float(norms.max()))
    return out


def diagonal_trace_condition(sd):
    """Nuclear norm of the symmetrized kernel: per-node diagonal and global sup.

    Returns {"sup_B1": max over all node pairs, "per_node": diagonal values}.
    """
    d = sd.matrix_dim
    blocks = _kernel_unit_blocks(sd.sym_matrix(), sd.rule, d)
    nuc = np.sum(np.linalg.svd(blocks, compute_uv=False), axis=2)
    return {
        "sup_B1": float(nuc.max()),
        "per_node": [float(v) for v in np.diagonal(nuc)],
    }


@dataclass(frozen=True)
class TraceClassVerdict:
    """Summability diagnosis of a computed spectrum."""

    partial_sums: tuple
    fitted_decay: float
    residual: float
    verdict: str
    rationale: str


def trace_class_diagnostic(sd):
    """Diagnose summability from the decay of the resolved singular values.

    Fits log mu_l against log l over the leading window of the resolved
    spectrum; the reported residual is the standard error of the fitted
    exponent. Verdict thresholds: decay > 1.1 with a clean fit is likely
    trace class, decay < 0.9 likely not, in between borderline.
    """
    mu = np.asarray(sd.singular_values, dtype=float)
    if mu.size < 20:
        raise EstimationError(f"need at least 20 singular values, got {mu.size}")
    ladder = []
    csum = np.cumsum(mu)
    length = 1
    while length < mu.size:
        ladder.append((length, float(csum[length - 1])))
        length *= 2
    ladder.append((mu.size, float(csum[-1])))

    top = mu[0]
    if top == 0.0:
        return TraceClassVerdict(tuple(ladder), np.inf, 0.0, TRACE_CLASS_LIKELY, "zero operator")
    resolved = mu[mu > top * _RANK_FLOOR]
    m = resolved.size
    if m < 20:
        return TraceClassVerdict(
            tuple(ladder), np.inf, 0.0, TRACE_CLASS_LIKELY,
            f"finite numerical rank {m}: tail at numerical zero",
        )
    lo, hi = int(_FIT_WINDOW[0] * m), int(_FIT_WINDOW[1] * m)
    if hi - lo < 4:
        raise EstimationError("resolved spectrum too short for a decay fit")
    ell = np.arange(lo + 1, hi + 1, dtype=float)
    logl, logm = np.log(ell), np.log(resolved[lo:hi])
    slope, intercept = np.polyfit(logl, logm, 1)
    res = logm - (slope * logl + intercept)
    rms = float(np.sqrt(np.mean(res ** 2)))
    stderr = float(rms / (np.sqrt(len(ell)) * np.std(logl)))
    decay = float(-slope)

    if decay > _DECAY_HI and stderr < _RESIDUAL_MAX:
        verdict = TRACE_CLASS_LIKELY
        why = f"fitted decay {decay:.3f} > {_DECAY_HI} with slope stderr {stderr:.3g}"
    elif decay < _DECAY_LO:
        verdict = NOT_TRACE_CLASS_LIKELY
        why = f"fitted decay {decay:.3f} < {_DECAY_LO}"
    else:
        verdict = BORDERLINE
        why = f"fitted decay {decay:.3f} in [{_DECAY_LO}, {_DECAY_HI}] or noisy fit (stderr {stderr:.3g})"
    return TraceClassVerdict(tuple(ladder), decay, stderr, verdict, why)


def cached_trace_class(sd):
    """trace_class_diagnostic with a per-decomposition cache; None if too short."""
    if sd._verdict is None:
        try:
            sd._verdict = trace_class_diagnostic(sd)
        except EstimationError:
            sd._verdict = False
    return sd._verdict or None


# ---------------------------------------------------------------------------
# Secular rank-one update
# ---------------------------------------------------------------------------

def secular_rank_one_update(eigs, mults=None, v_norms_sq=None):
    """Eigenvalues of A + v v* from those of Hermitian A.

    ``eigs`` are the distinct eigenvalues in strictly descending order with
    multiplicities ``mults`` (default all ones); ``v_norms_sq`` holds the
    squared norm of the component of v in each eigenspace. Eigenvalues with a
    zero component are retained in full; those with multiplicity m and a
    nonzero component are retained with multiplicity m - 1; the remaining
    eigenvalues are the roots of

        f(mu) = 1 + sum_k ||v_k||^2 / (nu_k - mu),

    one in each gap between consecutive active eigenvalues and one above the
    largest, located by bisection (f is increasing between its poles).
    """
    nu = np.asarray(eigs, dtype=float)
    if nu.ndim != 1 or nu.size == 0:
        raise ValueError("eigs must be a nonempty 1-d array")
    if np.any(np.diff(nu) >= 0):
        raise ValueError("eigs must be strictly descending")
    mult = np.ones(nu.size, dtype=int) if mults is None else np.asarray(mults, dtype=int)
    if np.any(mult < 1):
        raise ValueError("multiplicities must be >= 1")
    if v_norms_sq is None:
        raise ValueError("v_norms_sq is required")
    v2 = np.asarray(v_norms_sq, dtype=float)
    if v2.shape != nu.shape or mult.shape != nu.shape:
        raise ValueError("eigs, mults and v_norms_sq must have equal length")
    if np.any(v2 < 0):
        raise ValueError("v_norms_sq must be nonnegative")

    retained = []
    for value, m, vv in zip(nu, mult, v2):
        keep = m if vv == 0.0 else m - 1
        retained.extend([value] * keep)

    active = v2 > 0.0
    poles = nu[active]
    weights = v2[active]
    if poles.size == 0:
        return np.sort(np.asarray(retained))[::-1]

    def f(mu):
        return 1.0 + np.sum(weights / (poles - mu))

    total = float(weights.sum())
    roots = []
    for j in range(poles.size):
        lo = poles[j]
        hi = poles[j - 1] if j > 0 else poles[0] + total
        roots.append(_bisect_increasing(f, lo, hi, open_hi=(j > 0)))
    out = np.concatenate([np.asarray(retained, dtype=float), np.asarray(roots)])
    return np.sort(out)[::-1]


def _bisect_increasing(f, lo, hi, open_hi, max_expand=200, max_iter=200):
    # f -> -inf at lo+ and is increasing on (lo, hi); the root lies in
    # (lo, hi] (hi exclusive when it is itself a pole).
    gap = hi - lo
    a = lo + gap * 0.25
    for _ in range(max_expand):
        if f(a) < 0.0:
            break
        a = lo + (a - lo) * 0.25
    else:
        raise NumericError("could not bracket the secular root from below")
    if open_hi:
        b = hi - gap * 1e-3
        for _ in range(max_expand):
            if f(b) > 0.0:
                break
            b = hi - (hi - b) * 0.25
        else:
            raise NumericError("could not bracket the secular root from above")
    else:
        b = hi
        if f(b) < -1e-12 * max(1.0, abs(b)):
            raise NumericError("secular function negative at the guaranteed upper bound")
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        if f(mid) < 0.0:
            a = mid
        else:
            b = mid
        if (b - a) <= 1e-15 * max(1.0, abs(a), abs(b)):
            break
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# Modulus identity
# ---------------------------------------------------------------------------

def modulus_identity_residual(spec, rule, pairs):
    """Largest discrepancy in the modulus identity linking K and its symmetrized kernel.

    For node pairs (i, i'), the partial modulus
    int ||K(x_i, y) - K(x_i', y)||^2 dy equals the same quantity with the
    symmetrized kernel P in place of K, and both equal
    sum_l mu_l^2 ||psi_l(x_i) - psi_l(x_i')||^2. All three are computed by
    independent routes; the maximum pairwise discrepancy over the given pairs
    is returned.
    """
    if isinstance(spec.domain, RealLine):
        raise DomainError("modulus identity needs a compact domain")
    op = assemble(spec, rule)
    sd = decompose(op)
    d = spec.matrix_dim
    w = rule.weights
    sw = np.sqrt(w)

    kvals = sample_grid(spec, rule.nodes, rule.nodes)          # (N, N, d, d)
    pvals = _kernel_unit_blocks(sd.sym_matrix(), rule, d)       # (N, N, d, d)
    u = sd.left_vectors
    mu = sd.singular_values

    worst = 0.0
    for i, ip in pairs:
        dk = kvals[i] - kvals[ip]
        lhs = float(np.sum(w * np.sum(np.abs(dk) ** 2, axis=(1, 2))))
        dp = pvals[i] - pvals[ip]
        rhs = float(np.sum(w * np.sum(np.abs(dp) ** 2, axis=(1, 2))))
        psi_i = u[i * d:(i + 1) * d, :] / sw[i]
        psi_ip = u[ip * d:(ip + 1) * d, :] / sw[ip]
        closed = float(np.sum(mu ** 2 * np.sum(np.abs(psi_i - psi_ip) ** 2, axis=0)))
        worst = max(worst, abs(lhs - rhs), abs(lhs - closed), abs(rhs - closed))
    return worst


def save_spectrum_csv(sd, path):
    """Write (index, mu, Re lambda, Im lambda) rows."""
    mu = sd.singular_values
    lam = sd.eigenvalues
    k = max(len(mu), len(lam))
    with open(path, "w", newline="") as fh:
        fh.write("index,mu,re_lambda,im_lambda\n")
        for i in range(k):
            m = f"{mu[i]:.17g}" if i < len(mu) else ""
            re = f"{lam[i].real:.17g}" if i < len(lam) else ""
            im = f"{lam[i].imag:.17g}" if i < len(lam) else ""
            fh.write(f"{i + 1},{m},{re},{im}\n")
