"""kinshock: a transport-projection kinetic solver for scalar conservation laws.

The macroscopic density is lifted to a kinetic profile f(x, v) in
[0, 1]; each step streams the profile along the per-velocity
characteristic speeds and then collapses every spatial cell onto the
explicit minimizer of a staircase band-entropy problem. Jumps larger
than the entropy scale travel at chord (shock) speeds, sub-scale
structure disperses at characteristic speeds, and the accumulated
projection defect is bounded by the initial entropy.
"""

from .config import ConfigError, ScenarioConfig, parse_config
from .flux import FluxModel, builtin_flux, cell_mean_speeds, tabulate
from .oracles import (block_average, enumerate_profiles, exact_riemann_burgers,
                      godunov_reference, greedy_minimizer, l1_error,
                      RiemannSolution, solve_riemann)
from .projection import (FieldProjection, ProjectionOutcome, band_index,
                         collapse_profiles, entropy_moment,
                         minimal_entropy_moment, project_field, project_slice)
from .scheme import (FrontTrack, InvariantViolation, RunDiagnostics,
                     ShockSpeedEstimate, front_tracker, moments, run,
                     shock_speed_estimate)
from .state import (KineticField, SpatialGrid, VelocityGrid, from_macroscopic,
                    load_snapshot, mass, save_snapshot, translate_distance)
from .transport import TransportConfig, max_stable_dt, transport_step

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ScenarioConfig", "parse_config",
    "FluxModel", "builtin_flux", "cell_mean_speeds", "tabulate",
    "block_average", "enumerate_profiles", "exact_riemann_burgers",
    "godunov_reference", "greedy_minimizer", "l1_error",
    "RiemannSolution", "solve_riemann",
    "FieldProjection", "ProjectionOutcome", "band_index", "collapse_profiles",
    "entropy_moment", "minimal_entropy_moment", "project_field", "project_slice",
    "FrontTrack", "InvariantViolation", "RunDiagnostics", "ShockSpeedEstimate",
    "front_tracker", "moments", "run", "shock_speed_estimate",
    "KineticField", "SpatialGrid", "VelocityGrid", "from_macroscopic",
    "load_snapshot", "mass", "save_snapshot", "translate_distance",
    "TransportConfig", "max_stable_dt", "transport_step",
]
