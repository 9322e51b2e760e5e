"""Impartial fitting of a linear functional relationship to noisy data.

Classical regression minimises errors in one designated variable, so each
choice of dependent variable yields a different line.  The impartial fit
treats every variable as noisy and none as special: coefficient
magnitudes are the square roots of the precision-matrix diagonal, giving
one symmetric relationship whose form does not depend on measurement
units or on which variable is later solved for.  The package also ships
the comparison estimators (directed least squares, the bivariate
geometric-mean line, orthogonal regression), diagnostics, bootstrap
intervals, and a lattice simulation harness behind the ``impartial``
command-line tool.
"""

from impartial._backend import BACKEND
from impartial.data import Dataset, MomentSummary, parse_csv, standardize, summarize
from impartial.diagnostics import (
    DiagnosticsReport,
    GreenallReport,
    ResidualStats,
    diagnostics_report,
    greenall_report,
    partial_correlations,
    r_squared_all,
    reliability,
    residual_stats,
    sign_violations,
)
from impartial.errors import (
    AllReplicatesFailed,
    AmbiguousDirection,
    BadHeader,
    DegenerateNullSpace,
    ImpartialError,
    InvalidLevel,
    NoConvergence,
    NonFinite,
    NonNumericCell,
    NotPositiveDefinite,
    NumericalInconsistency,
    OutOfRange,
    RaggedRow,
    SignUndefined,
    TooFewObservations,
    TooFewRows,
    ZeroCoefficient,
    ZeroVariance,
)
from impartial.fit import (
    BivariateFit,
    ImpartialFit,
    OlsFit,
    OrthogonalFit,
    SolvedForm,
    gmfr_bivariate,
    impartial_fit,
    ols_all,
    ols_single,
    orthogonal_fit,
    pairwise_slope,
    solve_for,
)
from impartial.linalg import (
    EigenDecomposition,
    SquareSym,
    cholesky,
    jacobi_eigen,
    spd_inverse,
)
from impartial.options import DEFAULT_OPTIONS, NumericOptions
from impartial.resample import BootstrapResult, bootstrap
from impartial.rng import derive_stream, gaussian, resample_indices, uniform
from impartial.simulate import (
    EstimatorStats,
    LatticeSample,
    MonteCarloResult,
    SimConfig,
    benchmark_config,
    generate_lattice,
    lattice_points,
    monte_carlo,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # data
    "Dataset",
    "MomentSummary",
    "parse_csv",
    "standardize",
    "summarize",
    # linear algebra
    "EigenDecomposition",
    "SquareSym",
    "cholesky",
    "jacobi_eigen",
    "spd_inverse",
    "NumericOptions",
    "DEFAULT_OPTIONS",
    # estimators
    "BivariateFit",
    "ImpartialFit",
    "OlsFit",
    "OrthogonalFit",
    "SolvedForm",
    "gmfr_bivariate",
    "impartial_fit",
    "ols_all",
    "ols_single",
    "orthogonal_fit",
    "pairwise_slope",
    "solve_for",
    # diagnostics
    "DiagnosticsReport",
    "GreenallReport",
    "ResidualStats",
    "diagnostics_report",
    "greenall_report",
    "partial_correlations",
    "r_squared_all",
    "reliability",
    "residual_stats",
    "sign_violations",
    # randomness, bootstrap, simulation
    "derive_stream",
    "gaussian",
    "uniform",
    "resample_indices",
    "BootstrapResult",
    "bootstrap",
    "EstimatorStats",
    "LatticeSample",
    "MonteCarloResult",
    "SimConfig",
    "benchmark_config",
    "generate_lattice",
    "lattice_points",
    "monte_carlo",
    # errors
    "ImpartialError",
    "AllReplicatesFailed",
    "AmbiguousDirection",
    "BadHeader",
    "DegenerateNullSpace",
    "InvalidLevel",
    "NoConvergence",
    "NonFinite",
    "NonNumericCell",
    "NotPositiveDefinite",
    "NumericalInconsistency",
    "OutOfRange",
    "RaggedRow",
    "SignUndefined",
    "TooFewObservations",
    "TooFewRows",
    "ZeroCoefficient",
    "ZeroVariance",
]
