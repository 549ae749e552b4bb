"""Quadrature rules: nodes, weights, exactness, and argument validation."""

import numpy as np
import pytest

from opkern import box_rule, gauss_legendre, interval, trapezoid

from oracles import legendre_root_bisection


def test_one_point_rule_is_midpoint():
    rule = gauss_legendre(1, 0.0, 2.0)
    assert rule.nodes.tolist() == [1.0]
    assert rule.weights.tolist() == [2.0]


def test_two_point_nodes_match_legendre_roots():
    # independent oracle: bisection on the degree-2 Legendre polynomial
    root = legendre_root_bisection(2, 0.1, 1.0)
    rule = gauss_legendre(2, -1.0, 1.0)
    assert rule.nodes[1] == pytest.approx(root, abs=1e-13)
    assert rule.nodes[0] == pytest.approx(-root, abs=1e-13)
    assert np.allclose(rule.weights, [1.0, 1.0], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 7, 40, 201])
def test_weights_sum_to_length(n):
    rule = gauss_legendre(n, -0.5, 2.25)
    assert abs(rule.weights.sum() - 2.75) < 1e-13
    assert np.all(rule.weights > 0)


def test_polynomial_exactness():
    rule = gauss_legendre(5, 0.0, 1.0)
    for degree in range(2 * 5):
        integral = np.sum(rule.weights * rule.nodes ** degree)
        assert integral == pytest.approx(1.0 / (degree + 1), rel=1e-13)


def test_trapezoid_rule():
    rule = trapezoid(101, 0.0, 1.0)
    assert abs(rule.weights.sum() - 1.0) < 1e-13
    assert rule.nodes[0] == 0.0 and rule.nodes[-1] == 1.0
    # trapezoid integrates x exactly
    assert np.sum(rule.weights * rule.nodes) == pytest.approx(0.5, abs=1e-13)


def test_box_rule_tensor_product():
    box = interval(0.0, 1.0)
    assert box_rule(4, box).order == 4
    box2 = type(box)((0.0, -1.0), (2.0, 1.0))
    rule = box_rule(3, box2)
    assert rule.nodes.shape == (9, 2)
    assert abs(rule.weights.sum() - 4.0) < 1e-12
    # exact for a bilinear polynomial
    val = np.sum(rule.weights * rule.nodes[:, 0] * rule.nodes[:, 1])
    assert val == pytest.approx(2.0 * 0.0, abs=1e-12)


def test_argument_errors():
    with pytest.raises(ValueError):
        gauss_legendre(0, 0.0, 1.0)
    with pytest.raises(ValueError):
        gauss_legendre(4, 1.0, 1.0)
    with pytest.raises(ValueError):
        trapezoid(1, 0.0, 1.0)
