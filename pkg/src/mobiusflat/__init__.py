"""Moebius geometry of conformally flat hypersurfaces, numerically.

Library layout:

* ``fd``, ``linalg``    -- finite-difference stencils, small-matrix eigensolvers
* ``immersion``         -- fundamental forms and normals of explicit immersions
* ``curvature``         -- Riemann/Ricci/scalar of metric fields, Schouten, Codazzi
* ``moebius``           -- conformal density, Moebius metric, B, A, C invariants
* ``spiral``            -- prescribed-curvature curve ODE in the 2d model spaces
* ``zoo``               -- cylinder/cone/rotational/torus generators, model maps
* ``checks``, ``report``-- verification harness with structured reports
* ``cli``               -- command-line front end (spiral/build/invariants/verify/rigidity)
"""

from .curvature import (
    Convention,
    CurvatureBundle,
    codazzi_defect,
    conformal_scalar,
    convert_scalar,
    metric_field_curvature,
    riemann_symmetry_residuals,
    schouten_coordinate_field,
    schouten_tensor,
)
from .errors import (
    ChartDomainError,
    ConfigError,
    DegenerateGeometryError,
    InputError,
    MobiusFlatError,
    UmbilicPointError,
)
from .fd import FDScheme
from .immersion import (
    ImmersionHandle,
    MetricSample,
    first_fundamental_form,
    jacobian,
    principal_curvatures,
    second_fundamental_form,
    unit_normal,
)
from .moebius import (
    MoebiusData,
    SurfaceFields,
    blaschke_A,
    fields_from_immersion,
    get_fields,
    moebius_B,
    moebius_data,
    moebius_density,
    moebius_form,
    moebius_metric,
    moebius_scalar,
)
from .spiral import (
    ClosureResult,
    IntegratorControls,
    SpiralParams,
    SpiralState,
    SpiralTrajectory,
    closure_test,
    equilibrium_kappa,
    first_integral,
    integrate_spiral,
    reconstruct_curve,
    spiral_rhs,
)
from .zoo import (
    HypersurfaceSpec,
    build_hypersurface,
    cone_immersion,
    cylinder_immersion,
    hyperboloid_to_hemisphere,
    inverse_stereographic,
    lift_to_sphere,
    rotational_immersion,
    scale_immersion,
    stereographic,
    torus_immersion,
)

__version__ = "0.1.0"
