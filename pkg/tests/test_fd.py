import numpy as np
import pytest

from mobiusflat.fd import FDScheme, diff1, diff1_batch, diff2, diff2_batch


def poly_field(pts):
    pts = np.atleast_2d(pts)
    x, y = pts[:, 0], pts[:, 1]
    return x**3 * y + 2.0 * y**2 - x


def vector_field(pts):
    pts = np.atleast_2d(pts)
    x, y = pts[:, 0], pts[:, 1]
    return np.stack([np.sin(x) * np.cos(y), x * y], axis=1)


def test_scheme_validation():
    with pytest.raises(ValueError):
        FDScheme(order=3)


def test_default_step_scaling():
    s = FDScheme(order=4)
    h = s.steps_at(np.array([0.0, 10.0]))
    assert h[1] == pytest.approx(10.0 * h[0])
    assert s.base_step() == pytest.approx(np.finfo(float).eps ** (1 / 6))


def test_diff1_polynomial_exact_for_order4():
    # order-4 first differences are exact on cubics
    p = np.array([0.7, -0.4])
    d = diff1(poly_field, p, FDScheme(step=0.05, order=4))
    x, y = p
    assert d[0] == pytest.approx(3 * x**2 * y - 1.0, abs=1e-9)
    assert d[1] == pytest.approx(x**3 + 4 * y, abs=1e-9)


def test_diff2_polynomial():
    p = np.array([0.7, -0.4])
    dd = diff2(poly_field, p, FDScheme(step=0.05, order=4))
    x, y = p
    expected = np.array([[6 * x * y, 3 * x**2], [3 * x**2, 4.0]])
    assert np.allclose(dd, expected, atol=1e-8)
    assert np.allclose(dd, dd.T)


def test_vector_valued_derivatives():
    p = np.array([0.3, 0.9])
    d = diff1(vector_field, p, FDScheme(order=4))
    x, y = p
    assert d[0, 0] == pytest.approx(np.cos(x) * np.cos(y), abs=1e-10)
    assert d[1, 0] == pytest.approx(-np.sin(x) * np.sin(y), abs=1e-10)
    assert d[0, 1] == pytest.approx(y, abs=1e-10)
    assert d[1, 1] == pytest.approx(x, abs=1e-10)


def test_batched_matches_single():
    pts = np.array([[0.1, 0.2], [0.5, -0.3], [1.5, 2.0]])
    sch = FDScheme(order=4)
    batch = diff1_batch(vector_field, pts, sch)
    for i, p in enumerate(pts):
        assert np.allclose(batch[i], diff1(vector_field, p, sch))
    batch2 = diff2_batch(vector_field, pts, sch)
    for i, p in enumerate(pts):
        assert np.allclose(batch2[i], diff2(vector_field, p, sch))


@pytest.mark.parametrize("order,slope", [(2, 2.0), (4, 4.0)])
def test_convergence_order(order, slope):
    # truncation error of d^2/dx^2 sin at steps where rounding is negligible
    def f(pts):
        return np.sin(np.atleast_2d(pts)[:, 0])

    p = np.array([0.6])
    steps = [0.4, 0.2, 0.1] if order == 2 else [0.6, 0.3, 0.15]
    errs = []
    for h in steps:
        dd = diff2(f, p, FDScheme(step=h, order=order))[0, 0]
        errs.append(abs(dd + np.sin(0.6)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(rates - slope) < 0.5)
