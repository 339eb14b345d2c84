"""esdlab: a numerical laboratory for empirical spectral distributions.

Submodules:
  rng            counter-based splittable random streams
  ensembles      entry distributions, base matrices, matrix assembly
  numerics       dense spectral kernels and linear-algebra identity checks
  measures       ESDs, transforms, bounded-Lipschitz and KS distances
  hermitization  log-determinant fields and Girko's identity
  limits         circular law, Dozier-Silverstein solver, Stieltjes inversion
  harness        experiment configs, runners, CSV/SVG emission, CLI
"""

from .ensembles import (
    BaseMatrixSpec,
    ScalarDistribution,
    assemble,
    base_diagonal_from_measure,
    base_explicit,
    base_low_rank,
    base_two_block,
    base_zero,
    build_base_matrix,
    build_iid_matrix,
    kappa_controlled_estimate,
    sample_array,
    sample_scalar,
    scalar_distribution,
)
from .errors import (
    BranchError,
    ConfigurationError,
    DegenerateInputError,
    EsdLabError,
    NumericalFailureError,
    SingularityError,
    SolverFailureError,
)
from .hermitization import (
    GirkoQuadrature,
    LatticeSpec,
    LogPotentialGrid,
    girko_kernel,
    girko_reconstruct,
    log_det_at,
    log_det_field,
    log_potential,
    regularized_log_det,
)
from .limits import (
    CircularLaw,
    MeasureH,
    StieltjesSolution,
    circular_density,
    circular_log_potential,
    circular_radial_cdf,
    invert_stieltjes,
    mp_cdf,
    mp_density,
    mp_reference,
    solve_ds,
    support_criterion,
)
from .measures import (
    EmpiricalMeasure1D,
    EmpiricalMeasure2D,
    TestFunctionDictionary,
    bl_distance,
    characteristic_function,
    dilation_esd,
    esd_eigen,
    esd_gram,
    ks_two_sample,
    ks_vs_cdf,
    radial_angular_ks,
    second_moment,
    stieltjes_g,
)
from .numerics import (
    MINUS_INFINITY,
    eigenvalues,
    hs_norm,
    leave_one_out_distances,
    log_abs_det,
    row_distances,
    singular_values,
    verify_interlacing,
    verify_weyl,
)
from .rng import RngStream

__version__ = "0.1.0"
