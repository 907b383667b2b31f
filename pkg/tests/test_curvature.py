import numpy as np
import pytest

from mobiusflat.curvature import (
    Convention,
    codazzi_defect,
    conformal_scalar,
    convert_scalar,
    metric_field_curvature,
    riemann_symmetry_residuals,
    schouten_coordinate_field,
    schouten_tensor,
)
from mobiusflat.errors import DegenerateGeometryError, InputError
from mobiusflat.fd import FDScheme
from mobiusflat.zoo import sphere_chart_metric

FINE = FDScheme(step=0.005, order=4)


def flat_field(m):
    def field(pts):
        pts = np.atleast_2d(pts)
        return np.broadcast_to(np.eye(m), (pts.shape[0], m, m)).copy()

    return field


def conformal_field(m, u):
    """e^{2u} * euclidean metric on R^m."""

    def field(pts):
        pts = np.atleast_2d(pts)
        return np.exp(2.0 * u(pts))[:, None, None] * np.eye(m)

    return field


def warped_field(n, eps, kappa):
    """kappa(s)^2 (ds^2 + cross-section of curvature -eps), s = first coord."""

    def field(pts):
        pts = np.atleast_2d(pts)
        k = pts.shape[0]
        out = np.zeros((k, n, n))
        out[:, 0, 0] = 1.0
        if eps == 0:
            idx = np.arange(1, n)
            out[:, idx, idx] = 1.0
        elif eps == -1:
            out[:, 1:, 1:] = sphere_chart_metric(pts[:, 1:])
        else:  # hyperbolic cross-section, half-space coordinates (t, y...)
            idx = np.arange(1, n)
            out[:, idx, idx] = 1.0 / pts[:, 1][:, None] ** 2
        return kappa(pts[:, 0])[:, None, None] ** 2 * out

    return field


def warped_scalar_closed_form(n, eps, k, ks, kss):
    """Full-trace scalar of kappa^2 (ds^2 + I_{-eps}): the independent oracle.

    R = (n-1) kappa^-2 [ -(n-2) eps - 2 w'' - (n-2) w'^2 ],  w = log kappa.
    """
    w1 = ks / k
    w2 = kss / k - (ks / k) ** 2
    return (n - 1) / k**2 * (-(n - 2) * eps - 2.0 * w2 - (n - 2) * w1**2)


def warped_point(n, value_first, rest=None):
    p = np.full(n, 0.5 * np.pi) if rest is None else np.full(n, rest)
    p[0] = value_first
    return p


class TestKnownScalars:
    def test_flat_is_flat(self):
        b = metric_field_curvature(flat_field(4), np.array([0.3, -1.0, 2.0, 0.1]), FINE)
        assert np.max(np.abs(b.riemann)) < 1e-9
        assert abs(b.scalar) < 1e-9

    def test_round_two_sphere(self):
        field = lambda pts: sphere_chart_metric(np.atleast_2d(pts))
        b = metric_field_curvature(field, np.array([1.1, 0.7]), FINE)
        assert b.scalar == pytest.approx(2.0, abs=1e-8)

    @pytest.mark.parametrize("n", [3, 4])
    def test_round_sphere_scalar_and_ricci(self, n):
        field = lambda pts: sphere_chart_metric(np.atleast_2d(pts))
        p = np.linspace(1.0, 1.8, n)
        b = metric_field_curvature(field, p, FINE)
        assert b.scalar == pytest.approx(n * (n - 1), abs=1e-7)
        assert np.allclose(b.ricci, (n - 1) * np.eye(n), atol=1e-7)

    def test_hyperbolic_space(self):
        def field(pts):
            pts = np.atleast_2d(pts)
            return np.eye(3) / pts[:, 0][:, None, None] ** 2

        b = metric_field_curvature(field, np.array([0.8, 0.0, 0.0]), FINE)
        assert b.scalar == pytest.approx(-6.0, abs=2e-7)

    def test_constant_kappa_product_sphere_section(self):
        # kappa^2 (ds^2 + I_{S^{n-1}}): full-trace scalar (n-1)(n-2)/kappa^2
        n, k0 = 4, 1.3
        field = warped_field(n, -1, lambda s: np.full_like(s, k0))
        p = warped_point(n, 0.2)
        b = metric_field_curvature(field, p, FINE)
        assert b.scalar == pytest.approx((n - 1) * (n - 2) / k0**2, rel=1e-7)

    def test_warped_nonconstant_matches_closed_form(self):
        n = 4
        kap = lambda s: 1.0 + 0.3 * np.sin(s)
        for eps, rest in [(0, 0.3), (-1, 0.5 * np.pi), (1, 1.2)]:
            field = warped_field(n, eps, kap)
            for s0 in (0.4, 1.1):
                p = warped_point(n, s0, rest)
                b = metric_field_curvature(field, p, FINE)
                k, ks, kss = 1 + 0.3 * np.sin(s0), 0.3 * np.cos(s0), -0.3 * np.sin(s0)
                assert b.scalar == pytest.approx(
                    warped_scalar_closed_form(n, eps, k, ks, kss), rel=1e-6
                )

    def test_degenerate_metric_rejected(self):
        def field(pts):
            pts = np.atleast_2d(pts)
            return np.broadcast_to(np.diag([1.0, -1.0]), (pts.shape[0], 2, 2)).copy()

        with pytest.raises(DegenerateGeometryError):
            metric_field_curvature(field, np.zeros(2), FINE)


class TestConventions:
    def test_half_is_sum_over_pairs(self):
        field = lambda pts: sphere_chart_metric(np.atleast_2d(pts))
        p = np.array([1.2, 0.9, 2.1])
        b = metric_field_curvature(field, p, FINE, convention=Convention.HALF_TRACE)
        explicit = sum(
            b.riemann[i, j, i, j] for i in range(3) for j in range(3) if i > j
        )
        assert b.scalar == pytest.approx(explicit, rel=1e-12)
        assert b.scalar_as(Convention.FULL_TRACE) == pytest.approx(2 * b.scalar)
        assert b.scalar_as(Convention.NORMALIZED) == pytest.approx(2 * b.scalar / (3 * 2))

    def test_convert_scalar_round_trip(self):
        v = 7.3
        for src in Convention:
            for dst in Convention:
                w = convert_scalar(v, src, dst, 5)
                assert convert_scalar(w, dst, src, 5) == pytest.approx(v)


class TestSymmetriesAndConvergence:
    def test_residuals_small_on_analytic_field(self):
        field = warped_field(4, -1, lambda s: 1.0 + 0.3 * np.sin(s))
        b = metric_field_curvature(field, warped_point(4, 0.7), FINE)
        res = riemann_symmetry_residuals(b)
        assert max(res.values()) < 1e-7

    def test_fourth_order_convergence(self):
        field = warped_field(4, -1, lambda s: 1.0 + 0.3 * np.sin(s))
        p = warped_point(4, 0.7)
        k, ks, kss = (
            1 + 0.3 * np.sin(0.7),
            0.3 * np.cos(0.7),
            -0.3 * np.sin(0.7),
        )
        exact = warped_scalar_closed_form(4, -1, k, ks, kss)
        errs = []
        for h in (0.16, 0.08, 0.04):
            b = metric_field_curvature(field, p, FDScheme(step=h, order=4))
            errs.append(abs(b.scalar - exact))
        rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all(rates > 3.5)

    def test_symmetry_residuals_roundoff_exact(self):
        # the curvature is assembled as the exact Riemann algebra of the
        # differenced metric 2-jet, so the pair symmetries and the first
        # Bianchi sum hold to roundoff at every step; truncation shows up
        # only as displacement of the jet (measured by the value-error
        # convergence tests below), never as symmetry violation
        def field(pts):
            pts = np.atleast_2d(pts)
            x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
            out = np.zeros((pts.shape[0], 3, 3))
            out[:, 0, 0] = 1.0 + 0.2 * np.sin(x) * np.cos(y)
            out[:, 1, 1] = 1.0 + 0.2 * np.cos(x + z)
            out[:, 2, 2] = 1.0 + 0.2 * np.sin(y + z)
            out[:, 0, 1] = out[:, 1, 0] = 0.15 * np.sin(x + y)
            out[:, 1, 2] = out[:, 2, 1] = 0.15 * np.cos(y) * np.sin(z)
            out[:, 0, 2] = out[:, 2, 0] = 0.1 * np.sin(z - x)
            return out

        p = np.array([0.4, -0.3, 0.7])
        for h in (0.2, 0.1, 0.05):
            b = metric_field_curvature(field, p, FDScheme(step=h, order=4))
            res = riemann_symmetry_residuals(b)
            assert max(res.values()) < 1e-12, (h, res)

    def test_second_order_scheme_converges_at_two(self):
        field = warped_field(4, -1, lambda s: 1.0 + 0.3 * np.sin(s))
        p = warped_point(4, 0.7)
        k, ks, kss = 1 + 0.3 * np.sin(0.7), 0.3 * np.cos(0.7), -0.3 * np.sin(0.7)
        exact = warped_scalar_closed_form(4, -1, k, ks, kss)
        errs = []
        for h in (0.08, 0.04, 0.02):
            b = metric_field_curvature(field, p, FDScheme(step=h, order=2))
            errs.append(abs(b.scalar - exact))
        rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all(np.abs(rates - 2.0) < 0.5)


class TestConformalScalar:
    def test_zero_u_is_identity(self):
        field = warped_field(3, -1, lambda s: np.ones_like(s))
        p = warped_point(3, 0.4)
        base = metric_field_curvature(field, p, FINE)
        u = lambda pts: np.zeros(np.atleast_2d(pts).shape[0])
        assert conformal_scalar(base, u, p, FINE) == pytest.approx(base.scalar, rel=1e-10)

    def test_constant_u_is_homothety(self):
        field = lambda pts: sphere_chart_metric(np.atleast_2d(pts))
        p = np.array([1.2, 0.8])
        base = metric_field_curvature(field, p, FINE)
        c = 0.37
        u = lambda pts: np.full(np.atleast_2d(pts).shape[0], c)
        assert conformal_scalar(base, u, p, FINE) == pytest.approx(
            np.exp(-2 * c) * base.scalar, rel=1e-9
        )

    def test_stereographic_factor_gives_round_sphere(self):
        # e^{2u} * flat with u = log(2/(1+|x|^2)) on R^2: scalar 2 at 5 points
        u = lambda pts: np.log(2.0 / (1.0 + np.sum(np.atleast_2d(pts) ** 2, axis=1)))
        rng = np.random.default_rng(2)
        for p in rng.uniform(-1.5, 1.5, size=(5, 2)):
            base = metric_field_curvature(flat_field(2), p, FINE)
            assert conformal_scalar(base, u, p, FINE) == pytest.approx(2.0, abs=1e-8)

    def test_two_route_agreement_on_smooth_field(self):
        # direct curvature of e^{2u} delta vs the conformal-change route
        def u(pts):
            pts = np.atleast_2d(pts)
            return 0.3 * np.sin(pts[:, 0]) * np.cos(pts[:, 1]) + 0.1 * pts[:, 2]

        field = conformal_field(4, u)
        rng = np.random.default_rng(3)
        for p in rng.uniform(-1.0, 1.0, size=(4, 4)):
            direct = metric_field_curvature(field, p, FINE).scalar
            base = metric_field_curvature(flat_field(4), p, FINE)
            via = conformal_scalar(base, u, p, FINE)
            assert abs(direct - via) < 1e-5


class TestSchouten:
    def test_flat_is_zero(self):
        b = metric_field_curvature(flat_field(4), np.zeros(4), FINE)
        assert np.max(np.abs(schouten_tensor(b))) < 1e-10

    @pytest.mark.parametrize("n", [3, 4])
    def test_round_sphere_value(self, n):
        # Ricci = (n-1) Id and full R = n(n-1) give S = (n-2)/2 Id
        field = lambda pts: sphere_chart_metric(np.atleast_2d(pts))
        p = np.linspace(1.0, 1.7, n)
        b = metric_field_curvature(field, p, FINE)
        s = schouten_tensor(b, Convention.FULL_TRACE)
        assert np.allclose(s, (n - 2) / 2.0 * np.eye(n), atol=1e-7)

    def test_dimension_guard(self):
        b = metric_field_curvature(flat_field(2), np.zeros(2), FINE)
        with pytest.raises(InputError):
            schouten_tensor(b)


class TestCodazzi:
    def test_flat_identity_field_is_parallel(self):
        sfield = lambda pts: np.broadcast_to(
            0.7 * np.eye(4), (np.atleast_2d(pts).shape[0], 4, 4)
        ).copy()
        d = codazzi_defect(sfield, flat_field(4), np.zeros(4), FINE)
        assert d < 1e-12

    def test_conformally_flat_metric_has_codazzi_schouten(self):
        def u(pts):
            pts = np.atleast_2d(pts)
            return 0.25 * np.sin(pts[:, 0]) * np.cos(pts[:, 1]) + 0.1 * pts[:, 3]

        field = conformal_field(4, u)
        sch = FDScheme(step=0.02, order=4)
        sfield = schouten_coordinate_field(field, sch, Convention.FULL_TRACE)
        d = codazzi_defect(sfield, field, np.array([0.4, -0.2, 0.7, 0.1]), sch)
        assert d < 2e-6

    def test_generic_metric_fails_codazzi(self):
        def field(pts):
            pts = np.atleast_2d(pts)
            out = np.broadcast_to(np.eye(4), (pts.shape[0], 4, 4)).copy()
            out[:, 0, 0] = 1.0 + 0.4 * np.sin(pts[:, 0]) * np.sin(pts[:, 1])
            return out

        sch = FDScheme(step=0.02, order=4)
        sfield = schouten_coordinate_field(field, sch, Convention.FULL_TRACE)
        d = codazzi_defect(sfield, field, np.array([0.4, -0.2, 0.7, 0.1]), sch)
        assert d > 1e-2
