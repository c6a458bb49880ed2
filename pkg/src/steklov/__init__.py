"""Boundary-integral Steklov-Helmholtz eigenvalue solver and experiments.

Single-layer Nystrom discretization with Kussmaul-Martensen quadrature,
graded meshes for corners, a wavenumber-robust eigensolver (BIO-MOD) that
survives interior Dirichlet resonances, analytic reference spectra, and a
layer of spectral-geometry experiments (scale-invariant functionals,
quasimode comparisons, annulus sweeps, particle-swarm shape search).
"""

__version__ = "0.1.0"

from .geometry import (
    BoundaryCurve,
    GeometryError,
    ShapeVector,
    SmoothArc,
    annulus,
    area,
    curvature,
    disk,
    ellipse,
    fourier_shape,
    isoceles_triangle,
    kite,
    l_shape,
    load_shape,
    make_named_shape,
    omega_a,
    omega_b,
    perimeter,
    polygon,
    semicircle_mixed,
    shape_from_config,
    square,
    transformed,
)
from .mesh import (
    Discretization,
    MeshError,
    graded_grid,
    make_discretization,
    probe_params,
    uniform_grid,
)
from .operators import (
    AssemblyError,
    LayerOperators,
    assemble,
    dump_operators,
    load_operators,
    log_weights,
    singular_values,
)
from .solver import (
    ProbeMismatchWarning,
    SingularOperatorError,
    SolverError,
    Spectrum,
    eigenfunction_at,
    mre,
    solve_bio,
    solve_biomod,
)
from .reference import (
    DiskSpectrumQuery,
    OracleError,
    annulus_radial_spectrum,
    disk_spectrum,
    disk_spectrum_exceptional,
    exceptional_wavenumbers,
    square_spectrum,
)
from .functionals import (
    AdmissibleWindowWarning,
    AnnulusSweepResult,
    ExceptionalValueError,
    F,
    FunctionalError,
    FunctionalSpec,
    G,
    annulus_sweep,
    evaluate_functional,
    f1_upper_bound,
    negative_count,
    quasimode_deviation,
)
from .swarm import (
    SwarmConfig,
    SwarmError,
    SwarmResult,
    objective_eval,
    optimize_shape,
    write_artifacts,
)
