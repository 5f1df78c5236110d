"""Solver toolkit for subdiffusion equations with a constant time delay.

The package couples a piecewise-linear finite element discretisation in
space with a Grunwald-Letnikov convolution quadrature in time, and ships a
semi-analytic spectral reference solver plus a convergence-study harness.
"""

from subdelay.fem import (
    FEFunction,
    Mesh1D,
    TridiagonalMatrix,
    assemble_mass,
    assemble_stiffness,
    interpolate,
    l2_norm,
    solve_tridiagonal,
    uniform_mesh,
)
from subdelay.oracle import (
    EigenMode,
    ModalSolution,
    OracleSolution,
    ProbeReport,
    QuadSettings,
    eigenpair,
    modal_solution,
    oracle_solution,
    singularity_probe,
)
from subdelay.problems import (
    BuiltinProblem,
    PowerSum,
    ShiftedPower,
    available_problems,
    expand_about_zero,
    get_problem,
    polynomial_flat_problem,
    single_mode_problem,
)
from subdelay.quadrature import (
    GLKernel,
    KBetaHelper,
    a_coeffs,
    build_kernel,
    caputo_gl,
    caputo_gl_gform,
    frac_integral_gl,
    frac_integral_gl_gform,
    gl_weights,
    p_coeffs,
)
from subdelay.solver import (
    Forcing,
    ProblemSpec,
    SolutionHistory,
    StabilityReport,
    StepMatrices,
    TimeGrid,
    build_step_matrices,
    delayed_integral_J,
    forcing_term_F,
    history_term_H,
    init_history,
    run,
    stability_bound_check,
    step,
)
from subdelay.special import (
    MLConvergenceError,
    MLParams,
    log_gamma,
    mittag_leffler,
    mittag_leffler_array,
    reciprocal_gamma,
)
from subdelay.studies import (
    ConvergenceReport,
    emit_table,
    endpoint_error,
    parse_table,
    spatial_study,
    tabulate,
    temporal_study,
    window_error,
)

__version__ = "0.1.0"

__all__ = [
    "BuiltinProblem",
    "ConvergenceReport",
    "EigenMode",
    "FEFunction",
    "Forcing",
    "GLKernel",
    "KBetaHelper",
    "MLConvergenceError",
    "MLParams",
    "Mesh1D",
    "ModalSolution",
    "OracleSolution",
    "PowerSum",
    "ProbeReport",
    "ProblemSpec",
    "QuadSettings",
    "ShiftedPower",
    "SolutionHistory",
    "StabilityReport",
    "StepMatrices",
    "TimeGrid",
    "TridiagonalMatrix",
    "a_coeffs",
    "assemble_mass",
    "assemble_stiffness",
    "available_problems",
    "build_kernel",
    "build_step_matrices",
    "caputo_gl",
    "caputo_gl_gform",
    "delayed_integral_J",
    "eigenpair",
    "emit_table",
    "endpoint_error",
    "expand_about_zero",
    "forcing_term_F",
    "frac_integral_gl",
    "frac_integral_gl_gform",
    "get_problem",
    "gl_weights",
    "history_term_H",
    "init_history",
    "interpolate",
    "l2_norm",
    "log_gamma",
    "mittag_leffler",
    "mittag_leffler_array",
    "modal_solution",
    "oracle_solution",
    "p_coeffs",
    "parse_table",
    "polynomial_flat_problem",
    "reciprocal_gamma",
    "run",
    "singularity_probe",
    "single_mode_problem",
    "solve_tridiagonal",
    "spatial_study",
    "stability_bound_check",
    "step",
    "tabulate",
    "temporal_study",
    "uniform_mesh",
    "window_error",
    "__version__",
]
