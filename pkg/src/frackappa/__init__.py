"""Static response of one-dimensional space-fractional quantum systems.

Core pipeline: fractional-derivative operators (`fracop`), Hamiltonian
assembly, spectra and offset calibration (`hamiltonian`), transition
moments, sum-rule weights and polarizabilities (`response`), the
constrained three-level model (`threelevel`), and sweep orchestration with
CSV output (`sweep`).  `service` wraps it all in an HTTP app and `cli` is
a thin client for it.
"""

__version__ = "0.1.0"

from .constants import ATOMIC_UNITS, PhysicalConstants
from .exceptions import CalibrationError, ConfigurationError, NumericError
from .fracop import (
    OperatorMatrix,
    gl_weights,
    inner_product,
    left_matrix,
    riesz_matrix,
    right_matrix,
)
from .grid import Grid1D
from .hamiltonian import (
    CQHO,
    CalibrationResult,
    FractionalOrder,
    GridPolicy,
    SlantWell,
    Spectrum,
    SymmetricHO,
    Tabulated,
    assemble,
    calibrate_offset,
    canonical_position,
    fractional_offset,
    potential_on_grid,
    solve,
    solve_potential,
)
from .response import (
    ConvergenceDeltas,
    FiniteFieldResult,
    LambdaMatrix,
    ResponseReport,
    TransitionTable,
    TrkResidual,
    build_report,
    convergence_report,
    finite_field_kappa,
    finite_field_scan,
    lambda_matrix,
    sos_kappa1,
    sos_kappa2,
    transition_moments,
    trk_residual,
)
from .threelevel import (
    ApparentResponse,
    ConstrainedMoments,
    FractionalMaximum,
    ThreeLevelDomainError,
    ThreeLevelParams,
    apparent_intrinsic,
    constrained_moments,
    kappa2_max_fractional,
    kappa2_max_standard,
    measured_params,
    moment_x10,
    moment_x11bar,
    moment_x12,
    moment_x20,
    moment_x22bar,
    tl_kappa1,
    tl_kappa2,
    x10_max,
)

__all__ = [
    "ATOMIC_UNITS",
    "ApparentResponse",
    "CQHO",
    "CalibrationError",
    "CalibrationResult",
    "ConfigurationError",
    "ConstrainedMoments",
    "ConvergenceDeltas",
    "FiniteFieldResult",
    "FractionalMaximum",
    "FractionalOrder",
    "Grid1D",
    "GridPolicy",
    "LambdaMatrix",
    "NumericError",
    "OperatorMatrix",
    "PhysicalConstants",
    "ResponseReport",
    "SlantWell",
    "Spectrum",
    "SymmetricHO",
    "Tabulated",
    "ThreeLevelDomainError",
    "ThreeLevelParams",
    "TransitionTable",
    "TrkResidual",
    "apparent_intrinsic",
    "assemble",
    "build_report",
    "calibrate_offset",
    "canonical_position",
    "constrained_moments",
    "convergence_report",
    "finite_field_kappa",
    "finite_field_scan",
    "fractional_offset",
    "gl_weights",
    "inner_product",
    "kappa2_max_fractional",
    "kappa2_max_standard",
    "lambda_matrix",
    "left_matrix",
    "measured_params",
    "moment_x10",
    "moment_x11bar",
    "moment_x12",
    "moment_x20",
    "moment_x22bar",
    "potential_on_grid",
    "riesz_matrix",
    "right_matrix",
    "solve",
    "solve_potential",
    "sos_kappa1",
    "sos_kappa2",
    "tl_kappa1",
    "tl_kappa2",
    "transition_moments",
    "trk_residual",
    "x10_max",
]
