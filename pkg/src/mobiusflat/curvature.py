"""Riemannian curvature of an explicit metric field by finite differences.

The core object is a *metric field*: a vectorized callable mapping (K, m)
chart points to (K, m, m) symmetric positive matrices.  From first and
second derivatives of the field we assemble Christoffel symbols, the
Riemann tensor

    R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
                + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb},

its fully lowered form, Ricci, and the scalar curvature.  With this sign
convention the unit round sphere has positive scalar curvature (full trace
n(n-1)).

Scalar-curvature normalizations differ across sources, so every consumer
states one explicitly:

    HALF_TRACE  = sum_{i>j} R_ijij   (orthonormal frame)
    FULL_TRACE  = 2 * HALF_TRACE     (the trace of Ricci; the common one)
    NORMALIZED  = FULL_TRACE / (n (n-1))
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, InputError
from .fd import FDScheme, diff1, diff2
from .linalg import gram_schmidt_frame, jacobi_eigh, require_symmetric


class Convention(enum.Enum):
    HALF_TRACE = "half"
    FULL_TRACE = "full"
    NORMALIZED = "normalized"


def convert_scalar(value: float, src: Convention, dst: Convention, n: int) -> float:
    """Convert a scalar-curvature value between normalizations."""
    full = {
        Convention.HALF_TRACE: 2.0 * value,
        Convention.FULL_TRACE: value,
        Convention.NORMALIZED: value * n * (n - 1),
    }[src]
    return {
        Convention.HALF_TRACE: 0.5 * full,
        Convention.FULL_TRACE: full,
        Convention.NORMALIZED: full / (n * (n - 1)),
    }[dst]


@dataclass(frozen=True)
class CurvatureBundle:
    """Curvature data of a metric field at one point.

    christoffel[k, i, j] = Gamma^k_ij in chart coordinates; riemann, ricci
    and scalar are components in the deterministic Gram-Schmidt orthonormal
    frame (columns of ``frame``), so the convention sums above apply as
    written.
    """

    point: np.ndarray
    metric: np.ndarray
    frame: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    convention: Convention

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    def scalar_as(self, convention: Convention) -> float:
        return convert_scalar(self.scalar, self.convention, convention, self.dim)


def _check_metric(g: np.ndarray) -> np.ndarray:
    g = require_symmetric(g, tol=1e-8, what="metric field value")
    w, _ = jacobi_eigh(g)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] <= 1e-12 * scale:
        raise DegenerateGeometryError(
            f"metric field is indefinite or near singular (min eigenvalue {w[0]:.3e})"
        )
    return g


def christoffel_symbols(metric_field, p: np.ndarray, scheme: FDScheme | None = None):
    """(g, Gamma) of a metric field at p; Gamma[k, i, j] = Gamma^k_ij."""
    if scheme is None:
        scheme = FDScheme(step=0.02, order=4, scaled=False)
    p = np.asarray(p, dtype=float)
    g = _check_metric(np.asarray(metric_field(p[None, :]))[0])
    dg = diff1(metric_field, p, scheme)
    ginv = np.linalg.inv(g)
    bracket = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    return g, 0.5 * np.einsum("kl,lij->kij", ginv, bracket)


def metric_field_curvature(
    metric_field,
    p: np.ndarray,
    scheme: FDScheme | None = None,
    convention: Convention = Convention.FULL_TRACE,
) -> CurvatureBundle:
    """Full curvature bundle of a metric field at p.

    The default step (0.02, order 4) is wider than the immersion-level
    default because metric fields are often themselves finite-difference
    pipelines whose evaluation noise is amplified by the second
    derivatives taken here.
    """
    if scheme is None:
        scheme = FDScheme(step=0.02, order=4, scaled=False)
    p = np.asarray(p, dtype=float)
    m = p.size

    g = _check_metric(np.asarray(metric_field(p[None, :]))[0])
    dg = diff1(metric_field, p, scheme)  # (m, m, m): dg[a, i, j] = d_a g_ij
    ddg = diff2(metric_field, p, scheme)  # (m, m, m, m): d_a d_b g_ij

    ginv = np.linalg.inv(g)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)
    bracket = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, bracket)

    # d_a Gamma^k_ij from first+second metric derivatives
    dginv = -np.einsum("kp,apq,ql->akl", ginv, dg, ginv)
    dbracket = (
        np.einsum("ailj->alij", ddg) + np.einsum("ajli->alij", ddg) - np.einsum("alij->alij", ddg)
    )
    dgamma = 0.5 * np.einsum("akl,lij->akij", dginv, bracket) + 0.5 * np.einsum(
        "kl,alij->akij", ginv, dbracket
    )

    # R^a_{bcd} = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
    riem_up = (
        np.einsum("cadb->abcd", dgamma)
        - np.einsum("dacb->abcd", dgamma)
        + np.einsum("ace,edb->abcd", gamma, gamma)
        - np.einsum("ade,ecb->abcd", gamma, gamma)
    )
    riem = np.einsum("ae,ebcd->abcd", g, riem_up)

    frame = gram_schmidt_frame(g)
    riem_on = np.einsum("abcd,ai,bj,ck,dl->ijkl", riem, frame, frame, frame, frame)
    ricci_on = np.einsum("ikjk->ij", riem_on)
    full = float(np.einsum("ii->", ricci_on))
    scalar = convert_scalar(full, Convention.FULL_TRACE, convention, m)

    return CurvatureBundle(
        point=p,
        metric=g,
        frame=frame,
        christoffel=gamma,
        riemann=riem_on,
        ricci=ricci_on,
        scalar=scalar,
        convention=convention,
    )


def riemann_symmetry_residuals(bundle: CurvatureBundle) -> dict[str, float]:
    """Max-abs residuals of the pair symmetries and the first Bianchi sum.

    The tensor is assembled as the exact Riemann algebra of the differenced
    metric 2-jet, so these are all roundoff-level regardless of the step;
    truncation displaces the jet (value errors) without breaking the
    algebraic symmetries.  Antisymmetry in the last index pair is exact by
    construction and not reported.
    """
    r = bundle.riemann
    return {
        "antisym_first_pair": float(np.max(np.abs(r + np.einsum("ijkl->jikl", r)))),
        "pair_exchange": float(np.max(np.abs(r - np.einsum("ijkl->klij", r)))),
        "bianchi_first": float(
            np.max(
                np.abs(r + np.einsum("ijkl->iklj", r) + np.einsum("ijkl->iljk", r))
            )
        ),
    }


def conformal_scalar(
    base: CurvatureBundle, u_field, p: np.ndarray, scheme: FDScheme | None = None
) -> float:
    """Full-trace scalar curvature of e^{2u} g0 by the conformal change rule.

    R~ = e^{-2u} (R0 - 2 (n-1) Lap u - (n-1)(n-2) |grad u|^2),

    with the Laplacian and gradient taken in g0.  This is the independent
    route used to cross-check ``metric_field_curvature`` on conformally
    rescaled metrics.
    """
    if scheme is None:
        scheme = FDScheme(step=0.02, order=4, scaled=False)
    p = np.asarray(p, dtype=float)
    n = base.dim
    u0 = float(np.asarray(u_field(p[None, :]))[0])
    du = diff1(u_field, p, scheme)  # (m,)
    ddu = diff2(u_field, p, scheme)  # (m, m)
    ginv = np.linalg.inv(base.metric)
    hess = ddu - np.einsum("kij,k->ij", base.christoffel, du)
    lap = float(np.einsum("ij,ij->", ginv, hess))
    grad2 = float(du @ ginv @ du)
    r0 = base.scalar_as(Convention.FULL_TRACE)
    return float(np.exp(-2.0 * u0) * (r0 - 2.0 * (n - 1) * lap - (n - 1) * (n - 2) * grad2))


def schouten_tensor(bundle: CurvatureBundle, convention: Convention | None = None) -> np.ndarray:
    """S = Ricci - R / (2 (n-1)) Id in the orthonormal frame.

    The normalization of R in this definition is ambiguous across sources;
    the convention argument (default: the bundle's own) selects one, and
    the verification harness audits which choice makes S a Codazzi tensor.
    """
    n = bundle.dim
    if n < 3:
        raise InputError("Schouten tensor needs dimension >= 3")
    conv = convention or bundle.convention
    r = bundle.scalar_as(conv)
    return bundle.ricci - r / (2.0 * (n - 1)) * np.eye(n)


def schouten_coordinate_field(
    metric_field, scheme: FDScheme | None = None, convention: Convention = Convention.FULL_TRACE
):
    """Vectorized field p -> S_ab in chart coordinates (for FD derivatives)."""

    def field(pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        out = np.empty((pts.shape[0], pts.shape[1], pts.shape[1]))
        for i, q in enumerate(pts):
            b = metric_field_curvature(metric_field, q, scheme, Convention.FULL_TRACE)
            r = convert_scalar(b.scalar, Convention.FULL_TRACE, convention, b.dim)
            inv_frame = np.linalg.inv(b.frame)
            ric_coord = inv_frame.T @ b.ricci @ inv_frame
            out[i] = ric_coord - r / (2.0 * (b.dim - 1)) * b.metric
        return out

    return field


def codazzi_defect(
    schouten_field,
    metric_field,
    p: np.ndarray,
    scheme: FDScheme | None = None,
) -> float:
    """max_{a,b,c} |S_ab;c - S_ac;b| in the orthonormal frame at p.

    The covariant derivative uses the Christoffel symbols of the metric
    field; the Schouten field must supply chart-coordinate components.
    """
    if scheme is None:
        scheme = FDScheme(step=0.02, order=4, scaled=False)
    p = np.asarray(p, dtype=float)
    bundle = metric_field_curvature(metric_field, p, scheme)
    s0 = np.asarray(schouten_field(p[None, :]))[0]
    ds = diff1(schouten_field, p, scheme)  # (c, a, b) = d_c S_ab
    gamma = bundle.christoffel
    nabla = (
        np.einsum("cab->abc", ds)
        - np.einsum("dca,db->abc", gamma, s0)
        - np.einsum("dcb,ad->abc", gamma, s0)
    )
    e = bundle.frame
    nabla_on = np.einsum("abc,ai,bj,ck->ijk", nabla, e, e, e)
    return float(np.max(np.abs(nabla_on - np.einsum("ijk->ikj", nabla_on))))
