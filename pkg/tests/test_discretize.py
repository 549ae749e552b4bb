"""Nystrom assembly, refinement, and operator export."""

import numpy as np
import pytest

from opkern import (
    CompactBox,
    ConvergenceError,
    KernelSpec,
    assemble,
    box_rule,
    gauss_legendre,
    interval,
    make_gallery,
    refine_until,
    singular_values,
)
from opkern.discretize import load_binary, save_binary, save_csv

from oracles import min_kernel_eigs


def test_constant_l2_assembly_structure():
    spec = make_gallery("constant_l2", matrix_dim=3)
    rule = gauss_legendre(2, 0.0, 1.0)
    op = assemble(spec, rule)
    assert op.matrix.shape == (6, 6)
    sw = np.sqrt(rule.weights)
    diag = np.diag([1.0, 0.5, 1.0 / 3.0])
    for i in range(2):
        for j in range(2):
            block = op.matrix[3 * i:3 * i + 3, 3 * j:3 * j + 3]
            assert np.allclose(block, sw[i] * sw[j] * diag, atol=1e-15)
    # brute-force SVD oracle on the assembled 6x6
    svals = np.linalg.svd(np.asarray(op.matrix), compute_uv=False)
    assert np.allclose(svals[:3], [1.0, 0.5, 1.0 / 3.0], atol=1e-12)
    assert np.all(svals[3:] < 1e-14)


def test_zero_kernel_assembles_to_zero():
    op = assemble(make_gallery("zero", matrix_dim=2), gauss_legendre(5, 0.0, 1.0))
    assert np.all(op.matrix == 0)


def test_min_kernel_top_singular_value():
    op = assemble(make_gallery("min"), gauss_legendre(200, 0.0, 1.0))
    top = singular_values(op)[0]
    assert abs(top - 4.0 / np.pi ** 2) / (4.0 / np.pi ** 2) < 1e-4


def test_hermitian_source_gives_hermitian_matrix():
    for gid in ("min", "brownian_bridge"):
        op = assemble(make_gallery(gid), gauss_legendre(40, 0.0, 1.0))
        a = op.matrix
        assert np.linalg.norm(a - a.conj().T) <= 1e-13 * np.linalg.norm(a)


def test_skew_part_gives_skew_matrix():
    from opkern import hermitian_split

    spec = make_gallery("separable", g="exp", h="sin")
    h, s = hermitian_split(spec)
    rule = gauss_legendre(30, 0.0, 1.0)
    ah = assemble(h, rule).matrix
    assert np.linalg.norm(ah - ah.conj().T) <= 1e-13 * max(1.0, np.linalg.norm(ah))
    # i*S is Hermitian, so S itself assembles to a Hermitian matrix too
    as_ = assemble(s, rule).matrix
    assert np.linalg.norm(as_ - as_.conj().T) <= 1e-13 * max(1.0, np.linalg.norm(as_))


def test_domain_mismatch_rejected():
    spec = make_gallery("min")
    with pytest.raises(ValueError):
        assemble(spec, gauss_legendre(8, 0.0, 2.0))
    with pytest.raises(ValueError):
        assemble(make_gallery("semi_separable_exp"), gauss_legendre(8, -1.0, 1.0))


def test_box_2d_assembly():
    box = CompactBox((0.0, 0.0), (1.0, 1.0))

    def ev(x, y):
        return np.array([[np.exp(x[0] + x[1]) * np.exp(y[0] + y[1])]])

    spec = KernelSpec("rank-one-2d", box, 1, ev)
    op = assemble(spec, box_rule(10, box))
    svals = singular_values(op)
    # rank one: top value is int exp(2(x1+x2)) = ((e^2-1)/2)^2
    expected = ((np.e ** 2 - 1) / 2.0) ** 2
    assert svals[0] == pytest.approx(expected, rel=1e-10)
    assert svals[1] < 1e-10 * svals[0]


def test_refine_until_min_kernel():
    op = refine_until(make_gallery("min"), tol=1e-6, k_track=5, n0=8)
    assert op.history is not None and len(op.history) >= 2
    top5 = singular_values(op)[:5]
    exact = min_kernel_eigs(5)
    # the kink on the diagonal limits Gauss-Nystrom to O(n^-2); at the
    # tol=1e-6 stopping point the deepest tracked value carries ~2e-5
    assert np.max(np.abs(top5 - exact) / exact) < 5e-5
    assert abs(top5[0] - exact[0]) / exact[0] < 1e-6


def test_refine_until_constant_converges_immediately():
    op = refine_until(make_gallery("constant_l2", matrix_dim=3), tol=1e-8, k_track=3, n0=4)
    assert len(op.history) == 2
    assert op.rule.order == 8


def test_refine_until_power_kernel():
    op = refine_until(make_gallery("power", gamma=0.6), tol=1e-4, k_track=5, n0=8, n_max=512)
    assert op.rule.order <= 512


def test_refine_until_exhaustion_carries_history():
    with pytest.raises(ConvergenceError) as err:
        refine_until(make_gallery("power", gamma=0.6), tol=1e-12, k_track=5, n0=8, n_max=32)
    assert len(err.value.history) >= 2


def test_isometry_against_analytic_hs_norm():
    # Frobenius norm of the discrete operator vs the exact L2 norm of the kernel
    spec = make_gallery("constant_l2", matrix_dim=6)
    op = assemble(spec, gauss_legendre(200, 0.0, 1.0))
    exact = np.sqrt(np.sum(1.0 / np.arange(1, 7) ** 2))
    assert abs(np.linalg.norm(op.matrix) - exact) / exact < 1e-6

    spec = make_gallery("separable", g="exp", h="sin")
    op = assemble(spec, gauss_legendre(200, 0.0, 1.0))
    exact = np.sqrt((np.e ** 2 - 1) / 2.0 * 0.5)  # int e^{2x} dx * int sin^2(pi y) dy
    assert abs(np.linalg.norm(op.matrix) - exact) / exact < 1e-6


def test_doubling_never_hurts_tracked_values():
    exact = min_kernel_eigs(3)
    errs = []
    for n in (25, 50, 100, 200):
        vals = singular_values(assemble(make_gallery("min"), gauss_legendre(n, 0.0, 1.0)))[:3]
        errs.append(np.max(np.abs(vals - exact) / exact))
    assert all(errs[i + 1] <= errs[i] + 1e-8 for i in range(len(errs) - 1))


def test_binary_export_roundtrip(tmp_path):
    spec = make_gallery("separable", g="exp", h="sin", matrix=[[1.0, 2.0], [0.0, 1.0]])
    op = assemble(spec, gauss_legendre(6, 0.0, 1.0))
    path = tmp_path / "op.bin"
    save_binary(op, path)
    matrix, n, d, kind = load_binary(path)
    assert (n, d, kind) == (6, 2, "gauss_legendre")
    assert np.allclose(matrix, op.matrix, atol=0)


def test_csv_export(tmp_path):
    op = assemble(make_gallery("min"), gauss_legendre(3, 0.0, 1.0))
    path = tmp_path / "op.csv"
    save_csv(op, path)
    rows = path.read_text().strip().splitlines()
    assert len(rows) == 3
    first = complex(rows[0].split(",")[0])
    assert first == pytest.approx(op.matrix[0, 0])
