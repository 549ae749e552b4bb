"""opkern: spectral analysis and Fredholm determinants of matrix-valued integral kernels."""

import os as _os

# Honor the worker cap before numpy configures its thread pools. Only takes
# effect when opkern is imported first (the CLI entry point guarantees this).
_cap = _os.environ.get("OPKERN_THREADS")
if _cap:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)
del _os

__version__ = "0.1.0"

from .domains import CompactBox, RealLine, interval
from .errors import (
    ConvergenceError,
    DomainError,
    EstimationError,
    EvaluationError,
    NumericError,
    OpKernError,
    PreconditionError,
    TraceClassWarning,
)
from .kernels import (
    GALLERY,
    KernelSpec,
    RegularityReport,
    eval_kernel,
    gallery_listing,
    hermitian_split,
    holder_modulus,
    kernel_from_config,
    local_average,
    make_gallery,
    make_grid_kernel,
    maximal_function,
    sample_grid,
)
from .quadrature import QuadratureRule, box_rule, gauss_legendre, trapezoid
from .discretize import BlockOperator, assemble, refine_until, save_binary, save_csv, singular_values
from .spectral import (
    BORDERLINE,
    NOT_TRACE_CLASS_LIKELY,
    TRACE_CLASS_LIKELY,
    SpectralData,
    TraceClassVerdict,
    decompose,
    diagonal_trace_condition,
    mercer_sup_error,
    modulus_identity_residual,
    save_spectrum_csv,
    schatten_norm,
    secular_rank_one_update,
    symmetrized_kernel,
    trace_class_diagnostic,
    trace_diagonal,
    trace_eigs,
)
from .determinant import (
    DeterminantSeries,
    GrowthEstimate,
    det1,
    det2,
    det2_via_R2,
    det_zeros,
    fredholm_coeff,
    fredholm_series,
    order_of_growth,
    series_eval,
    series_from_spectrum,
)
from .realline import (
    TransformParams,
    choose_delta,
    estimate_decay,
    phi,
    phi_inv,
    phi_prime,
    spectrum_via_transform,
    transform_kernel,
)
