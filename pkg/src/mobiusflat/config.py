"""Flat key = value run configuration.

One setting per line, ``#`` starts a comment, keys match RunConfig fields
exactly, unknown keys are rejected.  Example::

    n = 4
    epsilon = -1
    R = 0.75
    family = rotational
    seed = 7
    conventions = half,full,normalized
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .report import config_hash

FAMILIES = ("cylinder", "cone", "rotational", "torus")
VARIANTS = ("standard", "alternate")
CONVENTIONS = ("half", "full", "normalized")
CHECK_NAMES = (
    "moebius_metric_match",
    "trace_identities",
    "moebius_form_structure",
    "commutator_closure",
    "principal_multiplicity",
    "schouten_codazzi",
    "two_route_scalar",
    "scalar_constancy",
    "warped_metric_scalar",
    "torus_scalar_audit",
    "blaschke_trace_audit",
    "sigma_invariance",
    "fd_convergence",
)


@dataclass
class RunConfig:
    # spiral parameters and initial state
    n: int = 4
    epsilon: int = -1
    R: float = 0.75
    spiral_variant: str = "standard"
    kappa0: float = 1.25
    kappa_s0: float = 0.05
    # integrator controls
    s_max: float = 4.5
    step: float = 1e-3
    kappa_floor: float = 1e-6
    kappa_ceiling: float = 1e6
    # finite differencing
    fd_step: float = 0.0  # 0 = automatic (pointwise default; the suite picks a noise-aware step)
    fd_order: int = 4
    curvature_step: float = 0.02
    # sampling
    samples: int = 20
    jitter: float = 0.1
    seed: int = 0
    # hypersurface selection (build / invariants)
    family: str = "rotational"
    torus_r: float = 0.5
    # verification scope
    conventions: str = "half,full,normalized"
    checks: str = "all"
    # rigidity experiment
    horizon: float = 200.0
    grid_size: int = 5
    grid_spread: float = 0.2
    # tolerances
    tol_metric_match: float = 1e-6
    tol_trace: float = 1e-8
    tol_form: float = 1e-8
    tol_commutator: float = 1e-8
    tol_multiplicity: float = 1e-8
    tol_codazzi: float = 1e-4
    tol_two_route: float = 1e-5
    tol_constancy: float = 1e-5
    tol_first_integral: float = 1e-9
    tol_roundtrip: float = 1e-6
    tol_closed: float = 1e-6
    tol_open: float = 1e-3
    tol_sigma: float = 1e-5
    # mesh export
    slice_axes: str = "0,1"
    slice_res: int = 24
    obj_axes: str = "auto"

    def convention_list(self) -> list[str]:
        if not self.conventions.strip():
            return []
        return [c.strip() for c in self.conventions.split(",") if c.strip()]

    def check_list(self) -> list[str]:
        if self.checks.strip() == "all":
            return list(CHECK_NAMES)
        if not self.checks.strip():
            return []
        return [c.strip() for c in self.checks.split(",") if c.strip()]

    def canonical_text(self) -> str:
        lines = [f"{f.name} = {getattr(self, f.name)!r}" for f in fields(self)]
        return "\n".join(sorted(lines)) + "\n"

    def hash(self) -> str:
        return config_hash(self.canonical_text())

    def validate(self) -> "RunConfig":
        if self.n < 3:
            raise ConfigError("n must be >= 3")
        if self.epsilon not in (-1, 0, 1):
            raise ConfigError("epsilon must be one of -1, 0, 1")
        if self.spiral_variant not in VARIANTS:
            raise ConfigError(f"spiral_variant must be one of {VARIANTS}")
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}")
        if not 0.0 < self.torus_r < 1.0:
            raise ConfigError("torus_r must lie in (0, 1)")
        if self.fd_order not in (2, 4):
            raise ConfigError("fd_order must be 2 or 4")
        for name in (
            "s_max",
            "step",
            "kappa_floor",
            "kappa_ceiling",
            "curvature_step",
            "horizon",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.kappa_floor >= self.kappa_ceiling:
            raise ConfigError("kappa_floor must be below kappa_ceiling")
        if self.samples < 1 or self.grid_size < 1 or self.slice_res < 2:
            raise ConfigError("samples, grid_size and slice_res must be positive")
        for f in fields(self):
            if f.name.startswith("tol_") and getattr(self, f.name) <= 0:
                raise ConfigError(f"{f.name} must be positive")
        for c in self.convention_list():
            if c not in CONVENTIONS:
                raise ConfigError(f"unknown convention {c!r}")
        for c in self.check_list():
            if c not in CHECK_NAMES:
                raise ConfigError(f"unknown check {c!r}")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    typ = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if typ == "int":
            return int(raw)
        if typ == "float":
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as {typ}") from exc


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw)
    return RunConfig(**values).validate()


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig().validate()
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
