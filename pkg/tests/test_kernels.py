"""Kernel gallery, evaluation, and regularity diagnostics."""

import numpy as np
import pytest

from opkern import (
    DomainError,
    EstimationError,
    KernelSpec,
    eval_kernel,
    hermitian_split,
    holder_modulus,
    interval,
    local_average,
    make_gallery,
    make_grid_kernel,
    maximal_function,
    sample_grid,
)
from opkern.kernels import kernel_from_config, load_grid_samples

from oracles import fine_grid_ball_average


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def test_constant_l2_values():
    spec = make_gallery("constant_l2", matrix_dim=4)
    expected = np.diag([1.0, 0.5, 1.0 / 3.0, 0.25])
    for x, y in [(0.1, 0.9), (0.5, 0.5), (0.0, 1.0)]:
        assert np.allclose(eval_kernel(spec, x, y), expected, atol=1e-15)


def test_min_kernel_value():
    spec = make_gallery("min")
    assert eval_kernel(spec, 0.3, 0.7)[0, 0] == pytest.approx(0.3, abs=1e-15)


def test_shift_l2_values():
    spec = make_gallery("shift_l2", matrix_dim=4)
    got = eval_kernel(spec, 0.2, 0.8)
    expected = np.zeros((4, 4))
    for n in range(1, 4):
        expected[n - 1, n] = 1.0 / n
    assert np.allclose(got, expected, atol=1e-15)


def test_domain_validation():
    spec = make_gallery("min")
    with pytest.raises(DomainError):
        eval_kernel(spec, -0.1, 0.5)
    with pytest.raises(DomainError):
        eval_kernel(spec, 0.5, 1.5)


def test_batch_matches_pointwise():
    for gid, params in [("min", {}), ("brownian_bridge", {}), ("constant_l2", {"matrix_dim": 3}),
                        ("power", {"gamma": 0.6}), ("separable", {"g": "exp", "h": "sin"})]:
        spec = make_gallery(gid, **params)
        xs = np.linspace(0.05, 0.95, 7)
        grid = sample_grid(spec, xs, xs)
        for i in (0, 3, 6):
            for j in (1, 5):
                assert np.allclose(grid[i, j], eval_kernel(spec, xs[i], xs[j]), atol=1e-14)


def test_hermitian_gallery_symmetry():
    rng = np.random.default_rng(7)
    for gid, params in [("min", {}), ("brownian_bridge", {}), ("constant_l2", {"matrix_dim": 5}),
                        ("power", {"gamma": 0.3})]:
        spec = make_gallery(gid, **params)
        assert spec.is_hermitian()
        for _ in range(6):
            x, y = rng.uniform(0, 1, size=2)
            a = eval_kernel(spec, x, y)
            b = eval_kernel(spec, y, x)
            assert np.linalg.norm(a - b.conj().T) < 1e-14


# ---------------------------------------------------------------------------
# Hoelder modulus
# ---------------------------------------------------------------------------

LAGS = [0.4, 0.2, 0.1, 0.05, 0.025]


def test_holder_power_kernel():
    spec = make_gallery("power", gamma=0.75)
    report = holder_modulus(spec, grid=16, lags=LAGS)
    assert report.gamma_hat == pytest.approx(0.75, abs=0.05)
    assert report.pass_half


def test_holder_constant_kernel():
    spec = make_gallery("constant_l2", matrix_dim=4)
    report = holder_modulus(spec, grid=8, lags=LAGS)
    assert report.gamma_hat == 1.0
    assert report.c_hat <= 1e-12


def test_holder_min_kernel_is_lipschitz():
    report = holder_modulus(make_gallery("min"), grid=16, lags=LAGS)
    assert report.gamma_hat == pytest.approx(1.0, abs=0.05)


def test_holder_degenerate_lags():
    with pytest.raises(EstimationError):
        holder_modulus(make_gallery("min"), grid=8, lags=[0.1, 0.1, 0.1])
    with pytest.raises(ValueError):
        holder_modulus(make_gallery("min"), grid=4, lags=LAGS)


# ---------------------------------------------------------------------------
# Local averages and the maximal function
# ---------------------------------------------------------------------------

def test_local_average_constant():
    spec = make_gallery("constant_l2", matrix_dim=3)
    got = local_average(spec, 0.3, 0.5, 0.5)
    assert np.allclose(got, np.diag([1.0, 0.5, 1.0 / 3.0]), atol=1e-14)


def test_local_average_affine_midpoint():
    spec = KernelSpec(
        "affine", interval(0.0, 1.0), 1,
        lambda x, y: np.array([[x + y]]),
        lambda xs, ys: (np.asarray(xs)[:, None] + np.asarray(ys)[None, :])[:, :, None, None],
    )
    got = local_average(spec, 0.1, 0.4, 0.3, quad_pts=16)
    assert got[0, 0] == pytest.approx(0.7, abs=1e-10)


def test_local_average_power_rate():
    # on the diagonal the average scales like r^gamma
    spec = make_gallery("power", gamma=0.75)
    radii = np.array([0.1, 0.05, 0.025, 0.0125])
    vals = [abs(local_average(spec, r, 0.4, 0.4, quad_pts=24)[0, 0]) for r in radii]
    slope = np.polyfit(np.log(radii), np.log(vals), 1)[0]
    assert slope >= 0.70


def test_maximal_function_constant_values():
    spec = make_gallery("constant_l2", matrix_dim=4)
    got2 = maximal_function(spec, [0.1, 0.2], 0.5, 0.5, p=2)
    assert got2 == pytest.approx(np.sqrt(1 + 0.25 + 1 / 9 + 1 / 16), rel=1e-12)
    got1 = maximal_function(spec, [0.1, 0.2], 0.5, 0.5, p=1)
    assert got1 == pytest.approx(1 + 0.5 + 1 / 3 + 0.25, rel=1e-12)


def test_maximal_function_min_corner():
    spec = make_gallery("min")
    got = maximal_function(spec, [0.125, 0.25, 0.5], 1.0, 1.0, p=1, quad_pts=220)
    oracle = max(
        fine_grid_ball_average(np.minimum, 1.0, 1.0, r, (0.0, 1.0)) for r in (0.125, 0.25, 0.5)
    )
    assert got == pytest.approx(oracle, abs=1e-6)


def test_maximal_function_monotone_in_radii():
    spec = make_gallery("brownian_bridge")
    base = maximal_function(spec, [0.1, 0.2], 0.3, 0.6, p=2)
    more = maximal_function(spec, [0.1, 0.2, 0.35], 0.3, 0.6, p=2)
    assert more >= base - 1e-15


# ---------------------------------------------------------------------------
# Hermitian split
# ---------------------------------------------------------------------------

def test_split_of_hermitian_kernel():
    h, s = hermitian_split(make_gallery("min"))
    for x, y in [(0.2, 0.9), (0.5, 0.5)]:
        assert np.linalg.norm(h.evaluator(x, y) - np.array([[min(x, y)]])) < 1e-14
        assert np.linalg.norm(s.evaluator(x, y)) < 1e-14


def test_split_shift_kernel():
    h, _ = hermitian_split(make_gallery("shift_l2", matrix_dim=3))
    got = h.evaluator(0.3, 0.4)
    expected = np.zeros((3, 3), dtype=complex)
    for n in range(1, 3):
        expected[n - 1, n] = 0.5 / n
        expected[n, n - 1] = 0.5 / n
    assert np.linalg.norm(got - expected) < 1e-14


def test_split_reconstruction_random_kernel():
    rng = np.random.default_rng(11)
    coeff = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))

    def ev(x, y):
        return coeff * np.exp(x - 2 * y) + np.array([[x * y, 1], [0, y]])

    spec = KernelSpec("random2", interval(0.0, 1.0), 2, ev)
    h, s = hermitian_split(spec)
    for _ in range(25):
        x, y = rng.uniform(0, 1, size=2)
        recon = h.evaluator(x, y) - 1j * s.evaluator(x, y)
        assert np.linalg.norm(recon - ev(x, y)) <= 1e-14
        # both parts satisfy the Hermitian kernel symmetry
        assert np.linalg.norm(h.evaluator(x, y) - h.evaluator(y, x).conj().T) < 1e-14
        assert np.linalg.norm(s.evaluator(x, y) - s.evaluator(y, x).conj().T) < 1e-14


def test_split_idempotent_on_h():
    h, _ = hermitian_split(make_gallery("shift_l2", matrix_dim=4))
    h2, s2 = hermitian_split(h)
    for x, y in [(0.1, 0.7), (0.6, 0.2)]:
        assert np.linalg.norm(h2.evaluator(x, y) - h.evaluator(x, y)) < 1e-14
        assert np.linalg.norm(s2.evaluator(x, y)) < 1e-14


# ---------------------------------------------------------------------------
# Grid kernels and config ingestion
# ---------------------------------------------------------------------------

def test_grid_kernel_interpolates(tmp_path):
    xs = np.linspace(0.0, 1.0, 21)
    samples = np.minimum(xs[:, None], xs[None, :])[:, :, None, None]
    spec = make_grid_kernel("sampled-min", samples, (0.0, 1.0))
    # exact at sample points, close between them
    assert eval_kernel(spec, 0.5, 0.25)[0, 0] == pytest.approx(0.25, abs=1e-14)
    assert eval_kernel(spec, 0.52, 0.27)[0, 0] == pytest.approx(0.27, abs=5e-3)
    with pytest.raises(DomainError):
        eval_kernel(spec, 1.2, 0.5)


def test_grid_binary_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    samples = rng.standard_normal((6, 6, 2, 2))
    path = tmp_path / "grid.bin"
    samples.astype("<f8").tofile(path)
    loaded = load_grid_samples(path, 2)
    assert np.array_equal(loaded, samples)


def test_grid_csv_load(tmp_path):
    samples = np.arange(16.0).reshape(4, 4, 1, 1)
    path = tmp_path / "grid.csv"
    with open(path, "w") as fh:
        for row in samples.reshape(4, 4):
            fh.write(",".join(str(v) for v in row) + "\n")
    loaded = load_grid_samples(path, 1)
    assert np.array_equal(loaded, samples)


def test_kernel_from_config():
    spec = kernel_from_config(
        {"type": "power", "params": {"gamma": 0.6}, "domain": {"kind": "interval", "bounds": [0, 2]}}
    )
    assert spec.domain.upper == (2.0,)
    assert eval_kernel(spec, 0.0, 1.0)[0, 0] == pytest.approx(1.0)
    spec = kernel_from_config({"type": "semi_separable_exp", "domain": {"kind": "real_line"},
                               "params": {"alpha": 0.9}})
    assert eval_kernel(spec, -3.0, 5.0)[0, 0] == pytest.approx(np.exp(-0.9 * 8.0), rel=1e-12)
    with pytest.raises(ValueError):
        kernel_from_config({"type": "does-not-exist"})


def test_local_average_reports_clipped_volume():
    spec = make_gallery("min")
    _, vol = local_average(spec, 0.3, 0.1, 0.9, with_volume=True, quad_pts=8)
    # x-ball clipped to [0, 0.4], y-ball to [0.6, 1.0]
    assert vol == pytest.approx(0.4 * 0.4, abs=1e-12)


def test_evaluation_error_wraps_failures():
    from opkern import EvaluationError

    bad = KernelSpec("bad", interval(0.0, 1.0), 1, lambda x, y: 1 / 0.0)
    with pytest.raises(EvaluationError):
        eval_kernel(bad, 0.2, 0.3)
    nonfinite = KernelSpec("nan", interval(0.0, 1.0), 1,
                           lambda x, y: np.array([[np.nan]]))
    with pytest.raises(EvaluationError):
        eval_kernel(nonfinite, 0.2, 0.3)
