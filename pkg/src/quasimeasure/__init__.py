"""Topological measures on a planar grid and their quasi-integrals.

The package realizes set functions that are additive on disjoint unions and
regular but need not extend to Borel measures, evaluates the non-linear
functionals they induce via exact Riemann-Stieltjes integration of step
distribution functions, and reconstructs the measure back from the
functional for round-trip verification.
"""

from .errors import (
    ConfigError,
    DomainError,
    FrameError,
    FrameMismatchError,
    GeometryError,
    InfiniteMeasureError,
    QuasimeasureError,
    SupportOverlapError,
    TieBreakError,
    VariantError,
)
from .fields import (
    PiecewiseLinearMap,
    ScalarField,
    add,
    build_plateau,
    compose,
    field_to_csv,
    neg_part,
    pos_part,
    scale,
    sublevel_region,
    sup_distance,
    sup_norm,
    superlevel_region,
    support_region,
    truncate,
    zero_field,
)
from .grid import Frame
from .integration import (
    DistributionFn,
    ExtensionConsistencyReport,
    QuasiIntegral,
    QuasiIntegralResult,
    distribution_function,
    extension_consistency,
    interval_mass,
    linear_oracle,
    quasi_integral,
)
from .measures import (
    AtomicMeasure,
    DensityMeasure,
    PointCountMeasure,
    TopologicalMeasure,
    tm_eval,
)
from .reconstruct import (
    BumpSchedule,
    ReconstructionReport,
    RoundTripEntry,
    mu_rho_compact,
    mu_rho_open,
    roundtrip,
)
from .regions import (
    Region,
    SolidDecomposition,
    connected_components,
    count_points,
    dilate,
    empty_region,
    erode,
    frame_interior,
    holes,
    is_solid,
    rect_region,
    region_from_rle,
    region_to_rle,
    solid_decomposition,
    solid_hull,
)
from .scenario import Scenario, execute_scenario, load_scenario, run_scenario

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure", "BumpSchedule", "ConfigError", "DensityMeasure",
    "DistributionFn", "DomainError", "ExtensionConsistencyReport", "Frame",
    "FrameError", "FrameMismatchError", "GeometryError",
    "InfiniteMeasureError", "PiecewiseLinearMap", "PointCountMeasure",
    "QuasiIntegral", "QuasiIntegralResult", "QuasimeasureError",
    "ReconstructionReport", "Region", "RoundTripEntry", "ScalarField",
    "Scenario", "SolidDecomposition", "SupportOverlapError",
    "TieBreakError", "TopologicalMeasure", "VariantError", "add",
    "build_plateau", "compose", "connected_components", "count_points",
    "dilate", "distribution_function", "empty_region", "erode",
    "execute_scenario", "extension_consistency", "field_to_csv",
    "frame_interior", "holes", "interval_mass", "is_solid", "linear_oracle",
    "load_scenario", "mu_rho_compact", "mu_rho_open", "neg_part",
    "pos_part", "quasi_integral", "rect_region", "region_from_rle",
    "region_to_rle", "roundtrip", "run_scenario", "scale",
    "solid_decomposition", "solid_hull", "sublevel_region", "sup_distance",
    "sup_norm", "superlevel_region", "support_region", "tm_eval", "truncate",
    "zero_field",
]
