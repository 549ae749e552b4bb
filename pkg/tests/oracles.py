"""Independent oracles used by the test suite.

Everything here deliberately avoids the library's own code paths: brute-force
quadrature, dense eigensolves, bisection root finding, and closed forms.
"""

import numpy as np


def min_kernel_eigs(count):
    """Analytic eigenvalues of the min(x,y) operator on [0,1]: 4/((2k-1)^2 pi^2)."""
    k = np.arange(1, count + 1)
    return 4.0 / ((2 * k - 1) ** 2 * np.pi ** 2)


def brownian_bridge_eigs(count):
    """Analytic eigenvalues of min(x,y) - xy on [0,1]: 1/(k pi)^2."""
    k = np.arange(1, count + 1)
    return 1.0 / (k * np.pi) ** 2


def min_tail_sum(rank):
    """sum_{l > rank} of the analytic min-kernel eigenvalues (trace 1/2 minus head)."""
    return 0.5 - float(np.sum(min_kernel_eigs(rank)))


def legendre_root_bisection(degree, lo, hi, iters=200):
    """Root of the Legendre polynomial P_degree in [lo, hi] by plain bisection."""

    def p(x):
        return np.polynomial.legendre.legval(x, [0] * degree + [1])

    a, b = lo, hi
    fa = p(a)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if p(mid) == 0.0:
            return mid
        if (fa < 0) == (p(mid) < 0):
            a, fa = mid, p(mid)
        else:
            b = mid
    return 0.5 * (a + b)


def fredholm_coeff_multiindex(kernel_samples, weights, n, modified):
    """Direct multi-index realization of the series coefficient b_n.

    ``kernel_samples`` is the (N, N, d, d) array of kernel values at the rule
    nodes. Sums the masked sample determinant over every n-tuple of nodes and
    every multi-index in {1..d}^n:

        b_n = (1/n!) sum_nodes w_1..w_n sum_j det[ K_{j_a j_b}(x_a, x_b) mask ]

    with mask = (1 - delta_ab) when ``modified``. Exponential cost; small
    cases only.
    """
    from itertools import product
    from math import factorial

    big_n = len(weights)
    d = kernel_samples.shape[2]
    total = 0.0 + 0.0j
    for nodes in product(range(big_n), repeat=n):
        wprod = np.prod([weights[i] for i in nodes])
        tuple_sum = 0.0 + 0.0j
        for comps in product(range(d), repeat=n):
            m = np.empty((n, n), dtype=complex)
            for a in range(n):
                for b in range(n):
                    if modified and a == b:
                        m[a, b] = 0.0
                    else:
                        m[a, b] = kernel_samples[nodes[a], nodes[b], comps[a], comps[b]]
            tuple_sum += np.linalg.det(m)
        total += wprod * tuple_sum
    return total / factorial(n)


def fine_grid_ball_average(fn, center_x, center_y, r, box, n=1500):
    """Midpoint-rule average of a scalar function over a clipped ball product (1-d domain)."""
    a, b = box
    ax, bx = max(a, center_x - r), min(b, center_x + r)
    ay, by = max(a, center_y - r), min(b, center_y + r)
    xs = ax + (bx - ax) * (np.arange(n) + 0.5) / n
    ys = ay + (by - ay) * (np.arange(n) + 0.5) / n
    vals = fn(xs[:, None], ys[None, :])
    return float(np.mean(vals))


def dense_rank_one_update_eigs(diag_values, v):
    """Eigenvalues of diag(d) + v v^T by a dense symmetric eigensolve, descending."""
    a = np.diag(np.asarray(diag_values, dtype=float)) + np.outer(v, v)
    return np.linalg.eigvalsh(a)[::-1]


def quad_2d_midpoint(fn, box, n=2000):
    """Brute-force midpoint quadrature of fn(x, y) over box x box (1-d domain)."""
    a, b = box
    xs = a + (b - a) * (np.arange(n) + 0.5) / n
    vals = fn(xs[:, None], xs[None, :])
    return float(np.sum(vals) * ((b - a) / n) ** 2)
