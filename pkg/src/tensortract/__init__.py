"""Analysis toolkit for linear tensor-product problems on RKHS.

Univariate eigenpairs (analytic rules plus a quadrature oracle), exact
information-complexity counting for arbitrary linear information,
tractability classification, and exact minimal standard-information errors
on finite-dimensional models.
"""

from .complexity import (ComplexityQuery, ComplexityResult, TractabilityReport,
                         brute_force_count, check_goodcase_sobolev_min,
                         classify, count_info_complexity_all, en_all,
                         estimate_decay, initial_error_ratio_integration,
                         qpt_exponent)
from .eigensolve import (FamilySpectrum, family_eigenpair, family_eigenvalues,
                         family_spectrum, korobov_eigenvalues,
                         sobolev_cosh_eigenpair, sobolev_cosh_eigenvalues,
                         sobolev_min_eigenpair, sobolev_min_eigenvalues,
                         solve_cot_root)
from .errors import (DimensionError, DomainError, NumericError, ParameterError,
                     ResourceLimitError, TruncationError)
from .nystrom import (QuadratureGrid, RefinedSpectrum, midpoint_grid,
                      nystrom_spectrum, richardson_refine)
from .reduction import (DiscreteProblem, Functional, build_Ig, e0_functional,
                        subcube_indicator_functional, piecewise_constant_instance,
                        cube_mean_functional, fixed_info_radius,
                        load_problem, minimal_error_std, random_problem,
                        random_problem_with_multiplicity, save_problem,
                        top_eigenpair, verify_domination,
                        verify_e0_characterization)
from .spectra import (QUAD_TOL, REL_TIE, Eigenpair, EigenSequence, KernelSpec,
                      gram_matrix, kernel_eval, tensor_kernel_eval)

__version__ = "0.1.0"
