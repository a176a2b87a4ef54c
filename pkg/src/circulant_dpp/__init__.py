"""Translation-invariant L-ensembles on periodic lattices.

Exact finite-size spectral formulas, the four limiting regimes (fixed-spacing
lattice, fixed circle, bulk, complex Hermitian), Fredholm-determinant gap and
counting probabilities, exact determinantal sampling, and a verification
suite that cross-checks every closed form against independent oracles.
"""

from .models import (CirculantEnsemble, ComplexOddFamily, FermionParams,
                     RealEvenDFamily, RealEvenFamily, fermion_to_gas,
                     gaussian_family, gaussian_family_d, generating_function,
                     inverse_argument_family, momentum_indices, user_family)
from .finite import (LMatrix, brute_force_correlation, brute_force_partition,
                     build_circulant, cauchy_determinant_check,
                     circulant_eigenvalues, correlation, kernel_finite,
                     kernel_trace, log_partition_function, macchi_kernel,
                     partition_function, validate_lmatrix)
from .limits import (CorrelationKernel, complex_thermo_spectral_density,
                     ddim_kernel, ddim_kernel_cartesian, ddim_pressure_cartesian,
                     ddim_pressure_radial, ddim_spectral_density,
                     fermion_correlation_kernel, fermion_kernel,
                     finite_L_eigenvalue, finite_L_kernel,
                     finite_L_log_partition, gaudin_asymptotic,
                     gaudin_correlation_kernel, gaudin_density,
                     gaudin_field_fugacity, gaudin_kernel, gaudin_pressure,
                     gaudin_truncated_two_point, gaussian_series_kernel,
                     lattice_density, lattice_kernel, lattice_pressure,
                     lattice_spectral_density, sine_correlation_kernel,
                     sine_kernel, thermo_correlation_kernel, thermo_density,
                     thermo_kernel, thermo_pressure, thermo_spectral_density)
from .fredholm import (CountingDistribution, FredholmProblem,
                       FredholmConvergenceError, counting_distribution,
                       counting_mean, fredholm_det, fredholm_det_series,
                       gap_asymptote, gap_probability, iik_equivalence,
                       log_fredholm_det, momentum_log_det, nystrom_eigenvalues,
                       sigma_pde_residual, sigma_small_x_check,
                       sine_sigma_ode_residual)
from .sampling import (DensityEstimate, HoleTableRow, MonteCarloEstimate,
                       PointSample, TensorLattice, bernoulli_probabilities,
                       cardinality_statistics, estimate_density, estimate_gap,
                       estimate_two_point, exact_block_gap, exact_occupancy,
                       exact_pair_probability, hole_probability_check,
                       kernel_separation, replicate_rng, sample, square_block)
from .verify import CheckResult, VerificationReport, run_suite

__version__ = "0.1.0"
