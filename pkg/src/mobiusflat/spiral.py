"""Spiral curves with prescribed-curvature dynamics in the three 2d model spaces.

The geodesic curvature kappa(s) of the generating curve evolves by a second
order ODE of the family

    kappa_ss = c2 * kappa_s**2 / (2 kappa) + c1 * kappa / 2 - R * kappa**3,

with two supported coefficient conventions for (c2, c1):

* ``standard``:  c2 = 4 - n,   c1 = -eps (n - 2).  With this choice the
  warped metric kappa(s)^2 (ds^2 + I_{-eps}) has constant scalar curvature,
  equal to 2 (n - 1) R in the full-trace normalization (see
  ``checks.check_warped_metric_scalar`` for the empirical audit).
* ``alternate``: c2 = n + 2,   c1 = +eps (n - 2).  An alternative sign and
  coefficient convention for the same equation that circulates in this
  problem area; kept selectable so the harness can compare the two.  It does
  not keep the warped-metric scalar curvature constant.

Curves are reconstructed alongside kappa in the model space N^2(eps):
the Euclidean plane (eps = 0), the unit 2-sphere (eps = +1), or the
Poincare half-plane (eps = -1), by co-integrating the unit-speed frame
equations with the same fixed-step RK4 stepper.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ChartDomainError, DegenerateGeometryError, InputError

STANDARD = "standard"
ALTERNATE = "alternate"

PLANE = "plane"
SPHERE = "sphere"
HALF_PLANE = "half-plane"

_MODEL_BY_EPS = {0: PLANE, 1: SPHERE, -1: HALF_PLANE}
_CURVE_DIM = {PLANE: 3, SPHERE: 6, HALF_PLANE: 3}
_CURVE_COLUMNS = {
    PLANE: ("x", "y", "theta"),
    SPHERE: ("g1", "g2", "g3", "t1", "t2", "t3"),
    HALF_PLANE: ("x", "y", "phi"),
}


@dataclass(frozen=True)
class SpiralParams:
    """Dimension n >= 3, model curvature eps in {-1, 0, +1}, constant R."""

    n: int
    epsilon: int
    R: float
    variant: str = STANDARD

    def __post_init__(self):
        if self.n < 3:
            raise InputError(f"hypersurface dimension must be >= 3, got {self.n}")
        if self.epsilon not in (-1, 0, 1):
            raise InputError(f"epsilon must be -1, 0 or +1, got {self.epsilon}")
        if self.variant not in (STANDARD, ALTERNATE):
            raise InputError(f"unknown spiral variant {self.variant!r}")

    @property
    def model(self) -> str:
        return _MODEL_BY_EPS[self.epsilon]


@dataclass(frozen=True)
class SpiralState:
    s: float
    kappa: float
    kappa_s: float


@dataclass(frozen=True)
class CurveState:
    """Model-space curve state at arc length s.

    plane: (x, y, theta);  sphere: gamma, tangent in R^3;
    half-plane: (x, y, phi) with y > 0.
    """

    model: str
    coords: np.ndarray


@dataclass(frozen=True)
class IntegratorControls:
    s_max: float = 10.0
    step: float = 1e-3
    kappa_floor: float = 1e-6
    kappa_ceiling: float = 1e6
    store_stride: int = 1

    def __post_init__(self):
        if self.step <= 0 or self.s_max <= 0:
            raise InputError("step and s_max must be positive")
        if not (0 < self.kappa_floor < self.kappa_ceiling):
            raise InputError("need 0 < kappa_floor < kappa_ceiling")
        if self.store_stride < 1:
            raise InputError("store_stride must be >= 1")


def kappa_accel(params: SpiralParams, kappa, kappa_s):
    """kappa_ss for the selected coefficient convention (vectorized)."""
    kappa = np.asarray(kappa, dtype=float)
    kappa_s = np.asarray(kappa_s, dtype=float)
    n, eps, big_r = params.n, params.epsilon, params.R
    safe = np.where(np.abs(kappa) < 1e-300, 1e-300, kappa)
    if params.variant == STANDARD:
        return (4 - n) * kappa_s**2 / (2.0 * safe) - eps * (n - 2) * kappa / 2.0 - big_r * kappa**3
    return (n + 2) * kappa_s**2 / (2.0 * safe) + eps * (n - 2) * kappa / 2.0 - big_r * kappa**3


def spiral_rhs(state: SpiralState, params: SpiralParams, kappa_floor: float = 1e-6):
    """(d kappa / ds, d kappa_s / ds) at the given state."""
    if state.kappa <= kappa_floor:
        raise DegenerateGeometryError(
            f"kappa = {state.kappa:.3e} at or below the floor {kappa_floor:.3e}"
        )
    return state.kappa_s, float(kappa_accel(params, state.kappa, state.kappa_s))


def equilibrium_kappa(params: SpiralParams) -> float | None:
    """Constant-kappa solution of the spiral equation, if one exists."""
    n, eps, big_r = params.n, params.epsilon, params.R
    if eps == 0 or big_r == 0.0:
        return None
    if params.variant == STANDARD:
        val = -eps * (n - 2) / (2.0 * big_r)
    else:
        val = eps * (n - 2) / (2.0 * big_r)
    return float(np.sqrt(val)) if val > 0 else None


def first_integral(params: SpiralParams, kappa, kappa_s):
    """Conserved quantity of the spiral equation (vectorized).

    Obtained by the linear reduction of kappa_s**2 as a function of kappa
    with integrating factor kappa**(-c2):

    standard : E = kappa_s^2 k^(n-4) + eps k^(n-2) + (2R/n) k^n
    alternate: E = kappa_s^2 k^-(n+2) + eps (n-2)/(n k^n) - 2R / ((n-2) k^(n-2))
    """
    k = np.asarray(kappa, dtype=float)
    ks = np.asarray(kappa_s, dtype=float)
    n, eps, big_r = params.n, params.epsilon, params.R
    if params.variant == STANDARD:
        return ks**2 * k ** (n - 4) + eps * k ** (n - 2) + (2.0 * big_r / n) * k**n
    return (
        ks**2 * k ** (-(n + 2))
        + eps * (n - 2) / n * k ** (-n)
        - 2.0 * big_r / (n - 2) * k ** (-(n - 2))
    )


# ---------------------------------------------------------------------------
# joint (kappa, curve) dynamics


def default_curve_start(model: str) -> np.ndarray:
    if model == PLANE:
        return np.array([0.0, 0.0, 0.0])
    if model == HALF_PLANE:
        return np.array([0.0, 1.0, 0.0])
    return np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0])


def _joint_rhs(params: SpiralParams, model: str, y: np.ndarray) -> np.ndarray:
    out = np.empty_like(y)
    kappa, kappa_s = y[:, 0], y[:, 1]
    out[:, 0] = kappa_s
    out[:, 1] = kappa_accel(params, kappa, kappa_s)
    if y.shape[1] == 2:
        return out
    if model == PLANE:
        theta = y[:, 4]
        out[:, 2] = np.cos(theta)
        out[:, 3] = np.sin(theta)
        out[:, 4] = kappa
    elif model == HALF_PLANE:
        yy, phi = y[:, 3], y[:, 4]
        out[:, 2] = yy * np.cos(phi)
        out[:, 3] = yy * np.sin(phi)
        out[:, 4] = kappa - np.cos(phi)
    else:
        gam, tan = y[:, 2:5], y[:, 5:8]
        out[:, 2:5] = tan
        out[:, 5:8] = kappa[:, None] * np.cross(gam, tan) - gam
    return out


def _renormalize_sphere(y: np.ndarray) -> None:
    gam = y[:, 2:5]
    gam /= np.linalg.norm(gam, axis=1)[:, None]
    tan = y[:, 5:8]
    tan -= np.einsum("ki,ki->k", tan, gam)[:, None] * gam
    tan /= np.linalg.norm(tan, axis=1)[:, None]


def _rk4_step(params: SpiralParams, model: str, y: np.ndarray, h: float) -> np.ndarray:
    k1 = _joint_rhs(params, model, y)
    k2 = _joint_rhs(params, model, y + 0.5 * h * k1)
    k3 = _joint_rhs(params, model, y + 0.5 * h * k2)
    k4 = _joint_rhs(params, model, y + h * k3)
    out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if model == SPHERE and y.shape[1] > 2:
        _renormalize_sphere(out)
    return out


@dataclass(frozen=True)
class SpiralTrajectory:
    """Arc-length samples of (kappa, kappa_s) plus, optionally, the curve."""

    params: SpiralParams
    controls: IntegratorControls
    s: np.ndarray
    kappa: np.ndarray
    kappa_s: np.ndarray
    curve: np.ndarray | None  # (K, curve_dim) in model coordinates
    termination: str
    first_integral_constant: float
    initial_curve: np.ndarray = field(default=None)

    @property
    def model(self) -> str:
        return self.params.model

    @property
    def s_end(self) -> float:
        return float(self.s[-1])

    def first_integral_drift(self) -> float:
        e = first_integral(self.params, self.kappa, self.kappa_s)
        return float(np.max(np.abs(e - self.first_integral_constant)))

    @property
    def samples(self):
        """(SpiralState, CurveState) views in sample order."""
        out = []
        for i in range(self.s.size):
            cs = None
            if self.curve is not None:
                cs = CurveState(model=self.model, coords=self.curve[i].copy())
            out.append((SpiralState(float(self.s[i]), float(self.kappa[i]), float(self.kappa_s[i])), cs))
        return out

    # -- smooth evaluation between nodes (cubic Hermite on stored data) -----

    def _check_range(self, sq: np.ndarray) -> None:
        if np.any(sq < self.s[0] - 1e-12) or np.any(sq > self.s[-1] + 1e-12):
            raise ChartDomainError(
                f"arc length query outside trajectory range [{self.s[0]:.6g}, {self.s[-1]:.6g}]"
            )

    def _hermite(self, vals: np.ndarray, ders: np.ndarray, sq: np.ndarray) -> np.ndarray:
        sq = np.asarray(sq, dtype=float)
        self._check_range(sq)
        idx = np.clip(np.searchsorted(self.s, sq, side="right") - 1, 0, self.s.size - 2)
        h = self.s[idx + 1] - self.s[idx]
        t = (sq - self.s[idx]) / h
        t2, t3 = t * t, t * t * t
        h00 = 2 * t3 - 3 * t2 + 1
        h10 = t3 - 2 * t2 + t
        h01 = -2 * t3 + 3 * t2
        h11 = t3 - t2
        sh = (-1,) + (1,) * (vals.ndim - 1)
        return (
            h00.reshape(sh) * vals[idx]
            + (h10 * h).reshape(sh) * ders[idx]
            + h01.reshape(sh) * vals[idx + 1]
            + (h11 * h).reshape(sh) * ders[idx + 1]
        )

    def kappa_at(self, sq) -> np.ndarray:
        return self._hermite(self.kappa, self.kappa_s, np.asarray(sq, dtype=float))

    def kappa_s_at(self, sq) -> np.ndarray:
        acc = kappa_accel(self.params, self.kappa, self.kappa_s)
        return self._hermite(self.kappa_s, acc, np.asarray(sq, dtype=float))

    def curve_at(self, sq) -> np.ndarray:
        """Model coordinates of the reconstructed curve at arbitrary s."""
        if self.curve is None:
            raise InputError("trajectory has no reconstructed curve; run reconstruct_curve")
        full = np.concatenate(
            [self.kappa[:, None], self.kappa_s[:, None], self.curve], axis=1
        )
        ders = _joint_rhs(self.params, self.model, full)
        return self._hermite(self.curve, ders[:, 2:], np.asarray(sq, dtype=float))

    def curve_velocity_at(self, sq) -> np.ndarray:
        coords = self.curve_at(sq)
        kap = self.kappa_at(sq)
        full = np.concatenate(
            [np.atleast_1d(kap)[:, None], np.zeros((np.atleast_1d(kap).size, 1)), np.atleast_2d(coords)],
            axis=1,
        )
        return _joint_rhs(self.params, self.model, full)[:, 2:]


def _integrate(
    params: SpiralParams,
    y0: np.ndarray,
    controls: IntegratorControls,
    with_curve: bool,
):
    """Fixed-step RK4 with floor/ceiling event bisection; single trajectory."""
    model = params.model
    h = controls.step
    n_steps = int(np.ceil(controls.s_max / h - 1e-12))
    y = y0[None, :].copy()
    stored_s = [0.0]
    stored = [y[0].copy()]
    termination = "horizon"
    s_now = 0.0

    def crossing(state_row):
        return state_row[0] <= controls.kappa_floor or state_row[0] >= controls.kappa_ceiling

    for i in range(n_steps):
        step_h = min(h, controls.s_max - s_now)
        y_new = _rk4_step(params, model, y, step_h)
        if crossing(y_new[0]):
            lo, hi = 0.0, step_h
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                y_mid = _rk4_step(params, model, y, mid)
                if crossing(y_mid[0]):
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-10:
                    break
            y = _rk4_step(params, model, y, hi)
            mid_gap = np.sqrt(controls.kappa_floor * controls.kappa_ceiling)
            termination = "kappa_floor" if y[0, 0] < mid_gap else "kappa_ceiling"
            s_now += hi
            stored_s.append(s_now)
            stored.append(y[0].copy())
            break
        y = y_new
        s_now += step_h
        if (i + 1) % controls.store_stride == 0 or i == n_steps - 1:
            stored_s.append(s_now)
            stored.append(y[0].copy())

    arr = np.asarray(stored)
    s_arr = np.asarray(stored_s)
    curve = arr[:, 2:] if with_curve else None
    e0 = float(first_integral(params, arr[0, 0], arr[0, 1]))
    return SpiralTrajectory(
        params=params,
        controls=controls,
        s=s_arr,
        kappa=arr[:, 0],
        kappa_s=arr[:, 1],
        curve=curve,
        termination=termination,
        first_integral_constant=e0,
        initial_curve=y0[2:].copy() if with_curve else None,
    )


def integrate_spiral(
    params: SpiralParams, initial: SpiralState, controls: IntegratorControls
) -> SpiralTrajectory:
    """Integrate the kappa subsystem with classic fixed-step RK4.

    Floor and ceiling crossings terminate cleanly with the event time
    refined by bisection on the step size (to 1e-10 in s).
    """
    if not (controls.kappa_floor < initial.kappa < controls.kappa_ceiling):
        raise InputError("initial kappa must lie strictly between floor and ceiling")
    if initial.kappa <= 0:
        raise InputError("initial kappa must be positive")
    y0 = np.array([initial.kappa, initial.kappa_s])
    return _integrate(params, y0, controls, with_curve=False)


def reconstruct_curve(
    traj: SpiralTrajectory, initial_curve: np.ndarray | None = None
) -> SpiralTrajectory:
    """Fill the model-space curve by co-integrating the frame equations.

    The kappa subsystem is autonomous, so re-integrating the joint system
    reproduces the stored kappa samples bit for bit.
    """
    start = (
        np.asarray(initial_curve, dtype=float)
        if initial_curve is not None
        else default_curve_start(traj.model)
    )
    if start.size != _CURVE_DIM[traj.model]:
        raise InputError(f"curve start for model {traj.model} needs {_CURVE_DIM[traj.model]} coords")
    if traj.model == HALF_PLANE and start[1] <= 0:
        raise ChartDomainError("half-plane curve start must have y > 0")
    y0 = np.concatenate([[traj.kappa[0], traj.kappa_s[0]], start])
    out = _integrate(traj.params, y0, traj.controls, with_curve=True)
    if out.model == HALF_PLANE and np.any(out.curve[:, 1] <= 0):
        raise ChartDomainError("curve left the half-plane y > 0: integration fault")
    return out


def integrate_grid(
    params: SpiralParams,
    initial_states: np.ndarray,
    controls: IntegratorControls,
    curve_start: np.ndarray | None = None,
) -> list[SpiralTrajectory]:
    """Joint integration of many initial states in one vectorized sweep.

    All trajectories share the curve start and the controls.  Rows that
    cross the floor or ceiling freeze at the step boundary (no bisection
    refinement in batch mode) and are tagged accordingly.  Each returned
    trajectory matches what integrate_spiral + reconstruct_curve produce up
    to the event handling above, since RK4 stepping is elementwise.
    """
    initial_states = np.atleast_2d(np.asarray(initial_states, dtype=float))
    b = initial_states.shape[0]
    model = params.model
    start = (
        np.asarray(curve_start, dtype=float)
        if curve_start is not None
        else default_curve_start(model)
    )
    if np.any(initial_states[:, 0] <= 0):
        raise InputError("initial kappa must be positive")
    y = np.concatenate([initial_states, np.tile(start, (b, 1))], axis=1)
    h = controls.step
    n_steps = int(np.ceil(controls.s_max / h - 1e-12))
    alive = np.ones(b, dtype=bool)
    end_sample = np.full(b, -1, dtype=int)
    terminations = np.array(["horizon"] * b, dtype=object)

    stored = [y.copy()]
    stored_s = [0.0]
    s_now = 0.0
    with np.errstate(all="ignore"):
        for i in range(n_steps):
            step_h = min(h, controls.s_max - s_now)
            y_new = _rk4_step(params, model, y, step_h)
            crossed = alive & (
                (y_new[:, 0] <= controls.kappa_floor)
                | (y_new[:, 0] >= controls.kappa_ceiling)
                | ~np.isfinite(y_new[:, 0])
            )
            if np.any(crossed):
                mid_gap = np.sqrt(controls.kappa_floor * controls.kappa_ceiling)
                for row in np.nonzero(crossed)[0]:
                    terminations[row] = (
                        "kappa_floor" if y_new[row, 0] < mid_gap else "kappa_ceiling"
                    )
                    end_sample[row] = len(stored) - 1
                alive &= ~crossed
            y_new[~alive] = y[~alive]
            y = y_new
            s_now += step_h
            if (i + 1) % controls.store_stride == 0 or i == n_steps - 1:
                stored.append(y.copy())
                stored_s.append(s_now)

    arr = np.asarray(stored)  # (K, B, d)
    s_arr = np.asarray(stored_s)
    out = []
    for row in range(b):
        stop = end_sample[row] + 1 if end_sample[row] >= 0 else s_arr.size
        out.append(
            SpiralTrajectory(
                params=params,
                controls=controls,
                s=s_arr[:stop],
                kappa=arr[:stop, row, 0],
                kappa_s=arr[:stop, row, 1],
                curve=arr[:stop, row, 2:],
                termination=str(terminations[row]),
                first_integral_constant=float(
                    first_integral(params, arr[0, row, 0], arr[0, row, 1])
                ),
                initial_curve=start.copy(),
            )
        )
    return out


def prescribed_curvature_trajectory(
    n: int,
    epsilon: int,
    kappa_fn,
    kappa_s_fn,
    controls: IntegratorControls,
    initial_curve: np.ndarray | None = None,
) -> SpiralTrajectory:
    """Curve with an arbitrary prescribed geodesic curvature kappa(s).

    Used for negative controls: the curvature need not solve the spiral
    equation.  The frame equations are integrated with kappa evaluated
    analytically at the RK4 stage points; kappa_s_fn supplies the exact
    derivative for smooth interpolation between nodes.
    """
    params = SpiralParams(n, epsilon, 0.0, variant=STANDARD)
    model = params.model
    start = (
        np.asarray(initial_curve, dtype=float)
        if initial_curve is not None
        else default_curve_start(model)
    )

    def rhs(s, c):
        kap = float(kappa_fn(np.asarray([s]))[0])
        full = np.concatenate([[kap, 0.0], c])[None, :]
        return _joint_rhs(params, model, full)[0, 2:]

    h = controls.step
    n_steps = int(np.ceil(controls.s_max / h - 1e-12))
    c = start.copy()
    s_now = 0.0
    stored_s, stored = [0.0], [c.copy()]
    for i in range(n_steps):
        step_h = min(h, controls.s_max - s_now)
        k1 = rhs(s_now, c)
        k2 = rhs(s_now + 0.5 * step_h, c + 0.5 * step_h * k1)
        k3 = rhs(s_now + 0.5 * step_h, c + 0.5 * step_h * k2)
        k4 = rhs(s_now + step_h, c + step_h * k3)
        c = c + (step_h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if model == SPHERE:
            row = c[None, :]
            joint = np.concatenate([np.zeros((1, 2)), row], axis=1)
            _renormalize_sphere(joint)
            c = joint[0, 2:]
        s_now += step_h
        if (i + 1) % controls.store_stride == 0 or i == n_steps - 1:
            stored_s.append(s_now)
            stored.append(c.copy())

    s_arr = np.asarray(stored_s)
    kap = np.asarray(kappa_fn(s_arr), dtype=float)
    kap_s = np.asarray(kappa_s_fn(s_arr), dtype=float)
    return SpiralTrajectory(
        params=params,
        controls=controls,
        s=s_arr,
        kappa=kap,
        kappa_s=kap_s,
        curve=np.asarray(stored),
        termination="horizon",
        first_integral_constant=float(first_integral(params, kap[0], kap_s[0])),
        initial_curve=start,
    )


# ---------------------------------------------------------------------------
# closure detection


@dataclass(frozen=True)
class ClosureResult:
    status: str  # "closed" | "open" | "inconclusive"
    period: float | None
    defect: float

    @property
    def closed(self) -> bool | None:
        if self.status == "inconclusive":
            return None
        return self.status == "closed"


def _pos_angle_split(model: str, coords: np.ndarray):
    if model in (PLANE, HALF_PLANE):
        return coords[..., 0:2], coords[..., 2]
    return coords, None


def curve_defect(model: str, coords: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Positional + tangent mismatch between curve states and a reference.

    plane: Euclidean distance; half-plane: hyperbolic distance
    acosh(1 + (dx^2 + dy^2) / (2 y y0)); sphere: chordal distances of
    position and tangent.  Angles compare modulo 2 pi.
    """
    coords = np.atleast_2d(coords)
    if model == SPHERE:
        return np.linalg.norm(coords[:, 0:3] - ref[0:3], axis=1) + np.linalg.norm(
            coords[:, 3:6] - ref[3:6], axis=1
        )
    pos, ang = _pos_angle_split(model, coords)
    rpos, rang = _pos_angle_split(model, ref)
    if model == PLANE:
        d = np.linalg.norm(pos - rpos, axis=1)
    else:
        sq = np.sum((pos - rpos) ** 2, axis=1)
        d = np.arccosh(1.0 + sq / (2.0 * pos[:, 1] * rpos[1]))
    dang = np.abs(np.mod(ang - rang + np.pi, 2.0 * np.pi) - np.pi)
    return d + dang


def _full_defect(traj: SpiralTrajectory, coords, kappa, kappa_s) -> np.ndarray:
    return (
        curve_defect(traj.model, coords, traj.curve[0])
        + np.abs(np.atleast_1d(kappa) - traj.kappa[0])
        + np.abs(np.atleast_1d(kappa_s) - traj.kappa_s[0])
    )


def closure_test(
    traj: SpiralTrajectory,
    tol_closed: float = 1e-6,
    tol_open: float = 1e-3,
    s_min: float | None = None,
) -> ClosureResult:
    """Scan for a return to the initial curve state, then refine by search.

    defect(s) = position distance + tangent angle distance
                + |kappa(s) - kappa(0)| + |kappa_s(s) - kappa_s(0)|,
    minimized over stored samples with s >= s_min, then refined by local
    re-integration around the best sample.
    """
    if traj.curve is None:
        raise InputError("closure test needs a reconstructed curve")
    if s_min is None:
        s_min = min(1.0, 0.25 * traj.s_end)
    mask = traj.s >= s_min
    if not np.any(mask):
        return ClosureResult("inconclusive", None, float("inf"))

    defects = _full_defect(traj, traj.curve[mask], traj.kappa[mask], traj.kappa_s[mask])
    k_rel = int(np.argmin(defects))
    k = int(np.nonzero(mask)[0][k_rel])
    coarse = float(defects[k_rel])

    # refine within the bracket of neighbouring stored samples by
    # re-stepping from the left sample with the trajectory's own stepper
    lo_idx = max(k - 1, 0)
    hi_idx = min(k + 1, traj.s.size - 1)
    y_left = np.concatenate([[traj.kappa[lo_idx], traj.kappa_s[lo_idx]], traj.curve[lo_idx]])
    span = float(traj.s[hi_idx] - traj.s[lo_idx])
    h = traj.controls.step

    def probe(offset: float) -> float:
        y = y_left[None, :].copy()
        remaining = offset
        while remaining > h * (1 + 1e-12):
            y = _rk4_step(traj.params, traj.model, y, h)
            remaining -= h
        if remaining > 0:
            y = _rk4_step(traj.params, traj.model, y, remaining)
        return float(_full_defect(traj, y[:, 2:], y[:, 0], y[:, 1])[0])

    offsets = np.linspace(0.0, span, 33)
    vals = np.array([probe(o) for o in offsets])
    j = int(np.argmin(vals))
    a = offsets[max(j - 1, 0)]
    b = offsets[min(j + 1, offsets.size - 1)]
    gr = 0.5 * (np.sqrt(5.0) - 1.0)
    x1, x2 = b - gr * (b - a), a + gr * (b - a)
    f1, f2 = probe(x1), probe(x2)
    for _ in range(60):
        if b - a < 1e-11:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - gr * (b - a)
            f1 = probe(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + gr * (b - a)
            f2 = probe(x2)
    best = min(coarse, f1, f2)
    best_s = float(traj.s[lo_idx] + (x1 if f1 <= f2 else x2))

    if best < tol_closed:
        return ClosureResult("closed", best_s, best)
    if traj.termination != "horizon":
        return ClosureResult("inconclusive", None, best)
    if best > tol_open:
        return ClosureResult("open", None, best)
    return ClosureResult("inconclusive", None, best)


# ---------------------------------------------------------------------------
# round-trip curvature recovery and export


def recomputed_curvature(traj: SpiralTrajectory) -> tuple[np.ndarray, np.ndarray]:
    """Geodesic curvature recomputed from the stored curve by differencing.

    plane:      kappa = x' y'' - x'' y'            (unit speed)
    sphere:     kappa = det[gamma, gamma', gamma'']
    half-plane: kappa = (x' y'' - x'' y') / y^2 + x' / y

    Uses order-4 central differences on the sample grid (4 nodes clipped at
    each end; an event-shortened final interval is dropped).  Returns
    (s values, recomputed kappa) on the surviving interior nodes.
    """
    if traj.curve is None:
        raise InputError("needs a reconstructed curve")
    diffs = np.diff(traj.s)
    h = float(diffs[0])
    bad = np.nonzero(np.abs(diffs - h) > 1e-9)[0]
    if bad.size:  # event-terminated runs end with one shortened interval
        stop = int(bad[0]) + 1
        traj = replace(traj, s=traj.s[:stop], kappa=traj.kappa[:stop],
                       kappa_s=traj.kappa_s[:stop], curve=traj.curve[:stop])
    if traj.s.size < 9:
        raise InputError("trajectory too short for the differencing stencil")

    def d(arr):
        out = (arr[:-4] - 8 * arr[1:-3] + 8 * arr[3:-1] - arr[4:]) / (12 * h)
        return out

    s_mid = traj.s[4:-4]
    if traj.model == SPHERE:
        # each application of d() trims 2 samples from both ends
        gam = traj.curve[:, 0:3]
        g2 = d(d(gam))
        g1 = d(gam)[2:-2]
        gmid = gam[4:-4]
        return s_mid, np.einsum("ij,ij->i", np.cross(gmid, g1), g2)
    x, y = traj.curve[:, 0], traj.curve[:, 1]
    x1, y1 = d(x), d(y)
    x2, y2 = d(d(x)), d(d(y))
    x1, y1 = x1[2:-2], y1[2:-2]
    if traj.model == PLANE:
        return s_mid, x1 * y2 - x2 * y1
    ymid = y[4:-4]
    return s_mid, (x1 * y2 - x2 * y1) / ymid**2 + x1 / ymid


def export_csv(traj: SpiralTrajectory, path=None) -> str:
    """CSV with columns s, kappa, kappa_s, model coordinates, E."""
    p = traj.params
    buf = io.StringIO()
    buf.write(
        f"# n={p.n} epsilon={p.epsilon} R={p.R!r} variant={p.variant} "
        f"model={p.model} step={traj.controls.step!r} termination={traj.termination}\n"
    )
    cols = ["s", "kappa", "kappa_s"]
    data = [traj.s, traj.kappa, traj.kappa_s]
    if traj.curve is not None:
        cols += list(_CURVE_COLUMNS[traj.model])
        data += [traj.curve[:, i] for i in range(traj.curve.shape[1])]
    cols.append("E")
    data.append(first_integral(p, traj.kappa, traj.kappa_s))
    buf.write(",".join(cols) + "\n")
    mat = np.column_stack(data)
    for row in mat:
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
