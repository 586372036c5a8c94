import numpy as np
import pytest

from rhombidome import IntegralCurve


def regular_polygon_curve(k: int) -> IntegralCurve:
    """Regular unit-side k-gon in the z = 0 plane, centered at the origin."""
    radius = 1.0 / (2.0 * np.sin(np.pi / k))
    angles = 2.0 * np.pi * np.arange(k) / k
    vertices = np.column_stack([radius * np.cos(angles),
                                radius * np.sin(angles),
                                np.zeros(k)])
    curve = IntegralCurve([vertices])
    curve.validate()
    return curve


def folded_rhombus_curve(angle: float = np.pi / 2) -> IntegralCurve:
    """Unit rhombus folded by ``angle`` along the diagonal (a, c)."""
    s3 = np.sqrt(3.0) / 2.0
    a = np.array([0.0, 0.0, 0.0])
    c = np.array([1.0, 0.0, 0.0])
    b = np.array([0.5, s3, 0.0])
    d = np.array([0.5, -s3 * np.cos(angle), s3 * np.sin(angle)])
    curve = IntegralCurve([np.vstack([a, b, c, d])])
    curve.validate()
    return curve


@pytest.fixture
def regular_pentagon() -> IntegralCurve:
    return regular_polygon_curve(5)


@pytest.fixture
def regular_hexagon() -> IntegralCurve:
    return regular_polygon_curve(6)


@pytest.fixture
def unit_square() -> IntegralCurve:
    vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                         [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]])
    return IntegralCurve([vertices])


@pytest.fixture
def unit_triangle() -> IntegralCurve:
    vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                         [0.5, np.sqrt(3.0) / 2.0, 0.0]])
    return IntegralCurve([vertices])
