"""Toric Sasaki-Einstein volume minimization and momentum-construction profiles.

Modules
-------
cone_model       moment cones, Gorenstein point, slice polytopes, volume functional
reeb_minimizer   critical Reeb vector and rational/irrational classification
profiles         closed-form Kähler-Einstein and soliton profiles phi(tau)
coordinates      t <-> tau, the potential F and the zero-section constant e^{c0}
curvature_check  Ricci/soliton residuals, D-homothetic constants, cone asymptotics
cli_reports      command line and deterministic JSON/CSV reports
"""

__version__ = "0.1.0"

from .cone_model import (  # noqa: E402
    GorensteinPoint,
    MomentCone,
    ReebVector,
    SlicePolytope,
    barycenter,
    build_cone,
    gorenstein_point,
    monte_carlo_volume,
    preset_cone,
    slice_polytope,
    volume_functional,
)
from .coordinates import (  # noqa: E402
    coordinate_map,
    potential_F,
    scaling_constant_e_c0,
    t_of_tau,
    tau_of_t,
)
from .curvature_check import (  # noqa: E402
    asymptotic_decay,
    d_homothetic,
    einstein_residual,
    ricci_phi,
    soliton_residual,
)
from .profiles import (  # noqa: E402
    eval_phi,
    ke_profile,
    residual,
    soliton_profile,
    solve_soliton_mu,
)
from .reeb_minimizer import classify_regularity, minimize_volume  # noqa: E402
