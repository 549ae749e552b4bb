"""Matrix-valued kernels: specification type, example gallery, and regularity diagnostics.

A kernel is a map K(x, y) into d x d complex matrices over a domain (interval,
box, or the real line). Specs are immutable; evaluators are pure functions, so
everything here is safe to share across threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .domains import CompactBox, RealLine, check_point, interval
from .errors import DomainError, EstimationError, EvaluationError

_CONSTANT_FLOOR = 1e-13


@dataclass(frozen=True)
class KernelSpec:
    """A matrix-valued kernel on a domain.

    ``evaluator(x, y)`` returns the d x d matrix value at a single point pair.
    ``batch_evaluator(xs, ys)``, when present, returns values on the grid
    ``xs x ys`` as an (len(xs), len(ys), d, d) array and is used to vectorize
    assembly. ``metadata`` records known facts (symmetry flags, exponents)
    consumed only by diagnostics and tests.
    """

    name: str
    domain: object
    matrix_dim: int
    evaluator: object
    batch_evaluator: object = None
    metadata: dict = field(default_factory=dict)

    def is_hermitian(self):
        return bool(self.metadata.get("hermitian", False))


@dataclass(frozen=True)
class RegularityReport:
    """Result of the Hoelder-modulus regression."""

    gamma_hat: float
    c_hat: float
    residual: float
    pass_half: bool


def eval_kernel(spec, x, y):
    """Evaluate K(x, y), validating the points and the result.

    Returns a (d, d) complex array; raises DomainError for points outside the
    domain and EvaluationError if the evaluator fails or returns non-finite
    entries.
    """
    px = check_point(spec.domain, x, "x")
    py = check_point(spec.domain, y, "y")
    try:
        value = spec.evaluator(px, py)
    except Exception as exc:  # noqa: BLE001 - evaluators are user-supplied
        raise EvaluationError(f"evaluator of {spec.name!r} failed at ({x!r}, {y!r}): {exc}") from exc
    value = np.asarray(value, dtype=complex)
    if value.shape != (spec.matrix_dim, spec.matrix_dim):
        raise EvaluationError(
            f"evaluator of {spec.name!r} returned shape {value.shape}, "
            f"expected ({spec.matrix_dim}, {spec.matrix_dim})"
        )
    if not np.all(np.isfinite(value)):
        raise EvaluationError(f"evaluator of {spec.name!r} returned non-finite entries at ({x!r}, {y!r})")
    return value


def sample_grid(spec, xs, ys):
    """Kernel values on the grid xs x ys as an (Nx, Ny, d, d) array.

    Uses the batch evaluator when available, otherwise loops over pairs.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if spec.batch_evaluator is not None:
        out = np.asarray(spec.batch_evaluator(xs, ys))
        want = (len(xs), len(ys), spec.matrix_dim, spec.matrix_dim)
        if out.shape != want:
            raise EvaluationError(f"batch evaluator of {spec.name!r} returned shape {out.shape}, expected {want}")
        return out
    d = spec.matrix_dim
    one_dim = xs.ndim == 1
    out = np.empty((len(xs), len(ys), d, d), dtype=complex)
    for i in range(len(xs)):
        xi = float(xs[i]) if one_dim else xs[i]
        for j in range(len(ys)):
            yj = float(ys[j]) if one_dim else ys[j]
            out[i, j] = np.asarray(spec.evaluator(xi, yj), dtype=complex)
    if not np.all(np.isfinite(out)):
        raise EvaluationError(f"kernel {spec.name!r} produced non-finite samples")
    return out


def frobenius_norm(m):
    """Hilbert-Schmidt norm of a matrix value."""
    return float(np.linalg.norm(np.asarray(m), "fro"))


def nuclear_norm(m):
    """Trace norm of a matrix value (sum of its singular values)."""
    return float(np.sum(np.linalg.svd(np.asarray(m), compute_uv=False)))


def matrix_schatten(m, p):
    if p == 2:
        return frobenius_norm(m)
    if p == 1:
        return nuclear_norm(m)
    raise ValueError(f"matrix Schatten norm implemented for p in (1, 2), got {p}")


# ---------------------------------------------------------------------------
# Regularity diagnostics
# ---------------------------------------------------------------------------

def _product_space_directions(m):
    # Unit directions in the (x, y) product space R^{2m}: each single-axis
    # move, plus synchronous and antisynchronous moves of matching axes.
    dirs = []
    for k in range(2 * m):
        e = np.zeros(2 * m)
        e[k] = 1.0
        dirs.append(e)
    for k in range(m):
        e = np.zeros(2 * m)
        e[k] = e[m + k] = 1.0 / np.sqrt(2.0)
        dirs.append(e.copy())
        e[m + k] = -1.0 / np.sqrt(2.0)
        dirs.append(e)
    return dirs


def holder_modulus(spec, grid, lags):
    """Estimate the Hoelder exponent of a kernel on a compact domain.

    For each lag h, measures the largest Frobenius-norm difference of kernel
    values between point pairs separated by exactly h in the product space,
    anchored on a per-axis grid with ``grid`` nodes; then fits
    log(modulus) ~ gamma * log(h) by least squares. The slope is clamped to
    [0, 1]. A kernel with (numerically) zero modulus reports gamma_hat = 1,
    c_hat = 0.
    """
    if isinstance(spec.domain, RealLine):
        raise DomainError("holder_modulus needs a compact domain")
    box = spec.domain
    m = box.dim
    if int(grid) < 8:
        raise ValueError(f"need at least 8 grid nodes per axis, got {grid}")
    lags = np.asarray(lags, dtype=float)
    if lags.size == 0 or np.any(lags <= 0):
        raise ValueError("lags must be nonempty and strictly positive")
    diam = np.sqrt(2.0) * box.diameter
    if np.any(lags > diam):
        raise ValueError(f"lags must not exceed the product-space diameter {diam:.3g}")
    if np.unique(lags).size < 2:
        raise EstimationError("degenerate lag set: need at least two distinct lags")

    axes = [np.linspace(a, b, int(grid)) for a, b in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, *axes, indexing="ij")
    anchors = np.stack([g.ravel() for g in mesh], axis=-1)  # (n_anchor, 2m)
    dirs = _product_space_directions(m)

    lo = np.concatenate([box.lower, box.lower])
    hi = np.concatenate([box.upper, box.upper])
    moduli = np.zeros(len(lags))
    for li, h in enumerate(lags):
        best = 0.0
        for u in dirs:
            q = anchors + h * u
            ok = np.all((q >= lo - 1e-12) & (q <= hi + 1e-12), axis=1)
            if not np.any(ok):
                continue
            p_ok, q_ok = anchors[ok], np.clip(q[ok], lo, hi)
            for pr, qr in zip(p_ok, q_ok):
                px, py = _split_pair(pr, m)
                qx, qy = _split_pair(qr, m)
                diff = np.asarray(spec.evaluator(px, py)) - np.asarray(spec.evaluator(qx, qy))
                val = frobenius_norm(diff)
                if val > best:
                    best = val
        moduli[li] = best

    scale = max(moduli.max(), 1.0)
    if moduli.max() <= _CONSTANT_FLOOR * scale:
        return RegularityReport(gamma_hat=1.0, c_hat=0.0, residual=0.0, pass_half=True)
    keep = moduli > 0
    if keep.sum() < 2:
        raise EstimationError("not enough nonzero moduli to fit an exponent")
    logh, logm = np.log(lags[keep]), np.log(moduli[keep])
    slope, intercept = np.polyfit(logh, logm, 1)
    resid = float(np.sqrt(np.mean((logm - (slope * logh + intercept)) ** 2)))
    gamma = float(np.clip(slope, 0.0, 1.0))
    return RegularityReport(
        gamma_hat=gamma,
        c_hat=float(np.exp(intercept)),
        residual=resid,
        pass_half=bool(gamma > 0.5),
    )


def _split_pair(pt, m):
    if m == 1:
        return float(pt[0]), float(pt[1])
    return pt[:m], pt[m:]


def _ball_nodes(box, center, r, quad_pts):
    """Quadrature nodes/weights for the radius-r ball at ``center`` clipped to ``box``.

    Exact clipping: intervals in one dimension, per-angle radial clipping in two.
    Returns (points, weights); the weights sum to the clipped volume.
    """
    gx, gw = np.polynomial.legendre.leggauss(int(quad_pts))
    if box.dim == 1:
        c = float(np.atleast_1d(center)[0])
        a = max(box.lower[0], c - r)
        b = min(box.upper[0], c + r)
        if not a < b:
            raise DomainError("clipped ball is empty")
        pts = 0.5 * (a + b) + 0.5 * (b - a) * gx
        return pts, 0.5 * (b - a) * gw
    c = np.asarray(center, dtype=float)
    thetas = np.pi * (gx + 1.0)  # Gauss nodes mapped to [0, 2pi)
    tw = np.pi * gw
    pts, wts = [], []
    for th, wth in zip(thetas, tw):
        u = np.array([np.cos(th), np.sin(th)])
        tmax = r
        for ax in range(2):
            if u[ax] > 1e-15:
                tmax = min(tmax, (box.upper[ax] - c[ax]) / u[ax])
            elif u[ax] < -1e-15:
                tmax = min(tmax, (box.lower[ax] - c[ax]) / u[ax])
        if tmax <= 0:
            continue
        t = 0.5 * tmax * (gx + 1.0)
        wt = 0.5 * tmax * gw
        pts.append(c[None, :] + t[:, None] * u[None, :])
        wts.append(wth * wt * t)  # polar Jacobian
    if not pts:
        raise DomainError("clipped ball is empty")
    return np.vstack(pts), np.concatenate(wts)


def local_average(spec, r, x, y, quad_pts=12, with_volume=False):
    """Average of K over the clipped ball product B_r(x) x B_r(y).

    Near the boundary the balls are clipped to the domain and the average is
    taken over the clipped measure; ``with_volume=True`` additionally returns
    the clipped product volume.
    """
    if isinstance(spec.domain, RealLine):
        raise DomainError("local_average needs a compact domain")
    if r <= 0:
        raise ValueError("radius must be positive")
    px = check_point(spec.domain, x, "x")
    py = check_point(spec.domain, y, "y")
    xp, xw = _ball_nodes(spec.domain, px, r, quad_pts)
    yp, yw = _ball_nodes(spec.domain, py, r, quad_pts)
    values = sample_grid(spec, xp, yp)  # (Kx, Ky, d, d)
    volume = xw.sum() * yw.sum()
    avg = np.einsum("i,j,ijab->ab", xw, yw, values) / volume
    if with_volume:
        return avg, float(volume)
    return avg


def maximal_function(spec, radii, x, y, p=2, quad_pts=12):
    """Discrete Hardy-Littlewood maximal value of ||K||_{B_p} at (x, y).

    Maximum over the given radii of the clipped ball-product average of the
    Schatten-p norm of the kernel value (p=1 nuclear, p=2 Frobenius).
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any(radii <= 0):
        raise ValueError("radii must be nonempty and positive")
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    px = check_point(spec.domain, x, "x")
    py = check_point(spec.domain, y, "y")
    best = -np.inf
    for r in radii:
        xp, xw = _ball_nodes(spec.domain, px, r, quad_pts)
        yp, yw = _ball_nodes(spec.domain, py, r, quad_pts)
        values = sample_grid(spec, xp, yp)
        if p == 2:
            norms = np.sqrt(np.sum(np.abs(values) ** 2, axis=(2, 3)))
        else:
            norms = np.sum(np.linalg.svd(values, compute_uv=False), axis=2)
        avg = float(np.einsum("i,j,ij->", xw, yw, norms) / (xw.sum() * yw.sum()))
        best = max(best, avg)
    return best


def hermitian_split(spec):
    """Split K into Hermitian parts: K = H - i*S with both H and S Hermitian.

    H(x,y) = (K(x,y) + K(y,x)*) / 2 and S(x,y) = (i/2)(K(x,y) - K(y,x)*).
    """

    def h_eval(x, y, _e=spec.evaluator):
        a = np.asarray(_e(x, y), dtype=complex)
        b = np.asarray(_e(y, x), dtype=complex)
        return 0.5 * (a + b.conj().T)

    def s_eval(x, y, _e=spec.evaluator):
        a = np.asarray(_e(x, y), dtype=complex)
        b = np.asarray(_e(y, x), dtype=complex)
        return 0.5j * (a - b.conj().T)

    h_batch = s_batch = None
    if spec.batch_evaluator is not None:

        def h_batch(xs, ys, _b=spec.batch_evaluator):
            a = np.asarray(_b(xs, ys), dtype=complex)
            b = np.asarray(_b(ys, xs), dtype=complex)
            return 0.5 * (a + b.transpose(1, 0, 3, 2).conj())

        def s_batch(xs, ys, _b=spec.batch_evaluator):
            a = np.asarray(_b(xs, ys), dtype=complex)
            b = np.asarray(_b(ys, xs), dtype=complex)
            return 0.5j * (a - b.transpose(1, 0, 3, 2).conj())

    meta = {"hermitian": True}
    h = KernelSpec(spec.name + ":H", spec.domain, spec.matrix_dim, h_eval, h_batch, meta)
    s = KernelSpec(spec.name + ":S", spec.domain, spec.matrix_dim, s_eval, s_batch, dict(meta))
    return h, s


# ---------------------------------------------------------------------------
# Gallery
# ---------------------------------------------------------------------------

def _scalar(fn):
    # Wrap a scalar-valued numpy-broadcastable function as a d=1 kernel pair.
    def ev(x, y):
        return np.array([[fn(x, y)]], dtype=float)

    def batch(xs, ys):
        return fn(np.asarray(xs)[:, None], np.asarray(ys)[None, :])[:, :, None, None]

    return ev, batch


def _constant_matrix(mat):
    mat = np.asarray(mat)

    def ev(x, y):
        return mat

    def batch(xs, ys):
        return np.broadcast_to(mat, (len(xs), len(ys)) + mat.shape)

    return ev, batch


def _envelope_matrix(profile, mat):
    # profile(x, y) scalar envelope times a fixed matrix
    mat = np.asarray(mat)

    def ev(x, y):
        return profile(x, y) * mat

    def batch(xs, ys):
        env = profile(np.asarray(xs)[:, None], np.asarray(ys)[None, :])
        return env[:, :, None, None] * mat

    return ev, batch


_PROFILES = {
    "one": lambda x: np.ones_like(np.asarray(x, dtype=float)),
    "exp": lambda x: np.exp(np.asarray(x, dtype=float)),
    "sin": lambda x: np.sin(np.pi * np.asarray(x, dtype=float)),
    "cos": lambda x: np.cos(np.pi * np.asarray(x, dtype=float)),
    "gauss": lambda x: np.exp(-np.asarray(x, dtype=float) ** 2),
}


def _bounds_box(bounds, default=(0.0, 1.0)):
    if bounds is None:
        bounds = default
    arr = np.asarray(bounds, dtype=float)
    if arr.ndim == 1:
        return interval(arr[0], arr[1])
    return CompactBox(tuple(arr[:, 0]), tuple(arr[:, 1]))


def make_zero(matrix_dim=1, bounds=None):
    d = int(matrix_dim)
    z = np.zeros((d, d))
    ev, batch = _constant_matrix(z)
    return KernelSpec("zero", _bounds_box(bounds), d, ev, batch, {"hermitian": True, "psd": True})


def make_min(bounds=None):
    """min(x, y): scalar, Hermitian, nonnegative definite on [0, 1]."""
    ev, batch = _scalar(np.minimum)
    return KernelSpec(
        "min", _bounds_box(bounds), 1, ev, batch,
        {"hermitian": True, "psd": True, "holder_gamma": 1.0},
    )


def make_brownian_bridge(bounds=None):
    """min(x, y) - x*y: the Brownian-bridge covariance on [0, 1]."""
    ev, batch = _scalar(lambda x, y: np.minimum(x, y) - x * y)
    return KernelSpec(
        "brownian_bridge", _bounds_box(bounds), 1, ev, batch,
        {"hermitian": True, "psd": True, "holder_gamma": 1.0},
    )


def make_constant_l2(matrix_dim=4, bounds=None):
    """Constant kernel diag(1, 1/2, ..., 1/d): a harmonic-spectrum truncation.

    Its singular values are exactly 1/n, so partial trace sums grow like
    log(d); the canonical constant kernel that is Hilbert-Schmidt but not
    summable as d grows.
    """
    d = int(matrix_dim)
    mat = np.diag(1.0 / np.arange(1, d + 1))
    ev, batch = _constant_matrix(mat)
    return KernelSpec(
        "constant_l2", _bounds_box(bounds), d, ev, batch,
        {"hermitian": True, "psd": True, "holder_gamma": 1.0, "exact_mu": "1/n, n <= d"},
    )


def make_shift_l2(matrix_dim=4, bounds=None):
    """Constant nilpotent kernel with 1/n on the superdiagonal.

    Same singular values 1/n as ``constant_l2`` (up to rank d-1) but every
    eigenvalue is zero.
    """
    d = int(matrix_dim)
    mat = np.zeros((d, d))
    for n in range(1, d):
        mat[n - 1, n] = 1.0 / n
    ev, batch = _constant_matrix(mat)
    return KernelSpec(
        "shift_l2", _bounds_box(bounds), d, ev, batch,
        {"hermitian": False, "holder_gamma": 1.0, "exact_mu": "1/n, n <= d-1", "nilpotent": True},
    )


def make_semi_separable_exp(alpha=1.0, matrix=None, matrix_dim=1, bounds=None):
    """exp(-alpha |x-y|) * M on the real line (or a box when bounds are given)."""
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    d = int(matrix_dim)
    mat = np.eye(d) if matrix is None else np.asarray(matrix, dtype=float)
    d = mat.shape[0]
    ev, batch = _envelope_matrix(lambda x, y: np.exp(-alpha * np.abs(x - y)), mat)
    domain = RealLine() if bounds is None else _bounds_box(bounds)
    herm = bool(np.allclose(mat, mat.conj().T))
    return KernelSpec(
        "semi_separable_exp", domain, d, ev, batch,
        {"hermitian": herm, "decay_alpha": alpha},
    )


def make_separable(g="exp", h=None, matrix=None, matrix_dim=1, bounds=None):
    """Rank-one kernel g(x) h(y) * M on a compact interval.

    Profiles are named: one, exp, sin, cos, gauss. With h omitted the kernel
    is symmetric (h = g); distinct profiles give a non-normal operator.
    """
    if g not in _PROFILES:
        raise ValueError(f"unknown profile {g!r}; choose from {sorted(_PROFILES)}")
    hname = g if h is None else h
    if hname not in _PROFILES:
        raise ValueError(f"unknown profile {hname!r}; choose from {sorted(_PROFILES)}")
    gfun, hfun = _PROFILES[g], _PROFILES[hname]
    d = int(matrix_dim)
    mat = np.eye(d) if matrix is None else np.asarray(matrix, dtype=float)
    d = mat.shape[0]
    ev, batch = _envelope_matrix(lambda x, y: gfun(x) * hfun(y), mat)
    herm = hname == g and bool(np.allclose(mat, mat.conj().T))
    return KernelSpec(
        f"separable[{g},{hname}]", _bounds_box(bounds), d, ev, batch,
        {"hermitian": herm, "psd": herm},
    )


def make_power(gamma=0.75, bounds=None):
    """|x - y|^gamma: the Hoelder-exponent probe family on [0, 1]."""
    gamma = float(gamma)
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    ev, batch = _scalar(lambda x, y: np.abs(x - y) ** gamma)
    return KernelSpec(
        f"power[{gamma}]", _bounds_box(bounds), 1, ev, batch,
        {"hermitian": True, "holder_gamma": gamma},
    )


GALLERY = {
    "zero": (make_zero, "identically zero kernel"),
    "min": (make_min, "min(x,y), eigenvalues 4/((2k-1)^2 pi^2)"),
    "brownian_bridge": (make_brownian_bridge, "min(x,y)-xy, eigenvalues 1/(k pi)^2"),
    "constant_l2": (make_constant_l2, "constant diag(1,...,1/d), singular values 1/n"),
    "shift_l2": (make_shift_l2, "constant nilpotent superdiagonal 1/n"),
    "semi_separable_exp": (make_semi_separable_exp, "exp(-alpha|x-y|) M, real line or box"),
    "separable": (make_separable, "rank-one g(x)h(y) M on an interval"),
    "power": (make_power, "|x-y|^gamma Hoelder probe"),
}


def make_gallery(gallery_id, **params):
    """Instantiate a gallery kernel by id."""
    try:
        factory, _ = GALLERY[gallery_id]
    except KeyError:
        raise ValueError(f"unknown gallery kernel {gallery_id!r}; available: {sorted(GALLERY)}") from None
    return factory(**params)


def gallery_listing():
    """(id, description, default spec) rows for the CLI listing."""
    rows = []
    for gid, (factory, doc) in GALLERY.items():
        spec = factory()
        rows.append((gid, doc, spec))
    return rows


# ---------------------------------------------------------------------------
# Grid-sampled kernels and config ingestion
# ---------------------------------------------------------------------------

def make_grid_kernel(name, samples, bounds):
    """Kernel interpolating dense samples bilinearly.

    ``samples`` has shape (nx, ny, d, d) over a uniform grid (endpoints
    included) on the interval ``bounds``. Evaluation outside the sample hull
    is a domain error (enforced by the domain bounds themselves).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 4 or samples.shape[2] != samples.shape[3]:
        raise ValueError(f"samples must have shape (nx, ny, d, d), got {samples.shape}")
    nx, ny, d, _ = samples.shape
    if nx < 2 or ny < 2:
        raise ValueError("need at least 2 samples per axis")
    box = _bounds_box(bounds)
    if box.dim != 1:
        raise ValueError("grid kernels are supported on intervals")
    a, b = box.lower[0], box.upper[0]

    def locate(t, n):
        s = (np.asarray(t, dtype=float) - a) / (b - a) * (n - 1)
        i = np.clip(np.floor(s).astype(int), 0, n - 2)
        return i, s - i

    def batch(xs, ys):
        ix, fx = locate(xs, nx)
        iy, fy = locate(ys, ny)
        fx = fx[:, None, None, None]
        fy = fy[None, :, None, None]
        v00 = samples[np.ix_(ix, iy)]
        v10 = samples[np.ix_(ix + 1, iy)]
        v01 = samples[np.ix_(ix, iy + 1)]
        v11 = samples[np.ix_(ix + 1, iy + 1)]
        return ((1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10
                + (1 - fx) * fy * v01 + fx * fy * v11)

    def ev(x, y):
        return batch(np.array([x]), np.array([y]))[0, 0]

    return KernelSpec(name, box, d, ev, batch, {"grid_sampled": True})


def load_grid_samples(path, matrix_dim, shape=None):
    """Load a dense sample array, binary (little-endian float64) or CSV.

    Layout is row-major over (x-index, y-index, row, col). For a square grid
    the per-axis count is inferred when ``shape`` is omitted.
    """
    path = str(path)
    if path.endswith(".csv"):
        with open(path, newline="") as fh:
            flat = np.array([float(v) for row in csv.reader(fh) for v in row if v.strip()])
    else:
        flat = np.fromfile(path, dtype="<f8")
    d = int(matrix_dim)
    if shape is None:
        n2 = flat.size // (d * d)
        n = int(round(np.sqrt(n2)))
        if n * n * d * d != flat.size:
            raise ValueError(f"cannot infer a square grid from {flat.size} values with d={d}")
        shape = (n, n)
    nx, ny = shape
    return flat.reshape(nx, ny, d, d)


def kernel_from_config(cfg, base_dir="."):
    """Build a KernelSpec from a parsed key-value configuration tree."""
    import os

    kind = cfg.get("type")
    if kind is None:
        raise ValueError("kernel config needs a 'type' (gallery id or 'grid')")
    params = dict(cfg.get("params") or {})
    dom_cfg = cfg.get("domain") or {}
    bounds = dom_cfg.get("bounds")
    dom_kind = dom_cfg.get("kind", "interval")
    if kind == "grid":
        if "grid_file" not in cfg:
            raise ValueError("grid kernels need a 'grid_file'")
        d = int(cfg.get("matrix_dim", 1))
        gpath = os.path.join(base_dir, cfg["grid_file"])
        samples = load_grid_samples(gpath, d, shape=params.get("grid_shape"))
        return make_grid_kernel(cfg.get("name", "grid"), samples, bounds or (0.0, 1.0))
    if dom_kind == "real_line":
        params.setdefault("bounds", None)
    elif bounds is not None:
        params["bounds"] = bounds
    if "matrix_dim" in cfg and kind in ("zero", "constant_l2", "shift_l2", "semi_separable_exp", "separable"):
        params.setdefault("matrix_dim", int(cfg["matrix_dim"]))
    return make_gallery(kind, **params)
