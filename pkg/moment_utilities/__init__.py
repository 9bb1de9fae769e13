from .misc_helpers import MomentUtilitiesError, DomainError, QuadratureError, ConvergenceError, MomentDomainError, EstimationError, InsufficientDataError, DegenerateSampleError, InfeasibleMomentError, SingularCovarianceError, SimulationError, ConfigError, SampleParseError, user_errors_group, make_list  # NOQA
from .special import QuadratureConfig, SCRIPT_QUADRATURE, ln_gamma, ln_beta, reg_inc_gamma, reg_inc_gamma_upper, reg_inc_beta, normal_pdf, normal_cdf, normal_sf, normal_quantile, chisq_pdf, chisq_cdf, chisq_sf, chisq_quantile, trapezoid_integrate, unit_interval_integrate  # NOQA
from .distributions import LawSpec, MomentSet, support, pdf, cdf, sf, quantile, sample, raw_moment, theoretical_moments  # NOQA
from .estimation import EmpiricalMoments, ParamEstimate, empirical_moments, moments_from_summary, estimator_map, estimate  # NOQA
from .asymptotics import QuadraticInfluence, Covariance2, delta_gradient, influence_pair, covariance_exact_moments, covariance_exact_quadrature, covariance_plugin, covariance_replication, coordinate_influences, empirical_process  # NOQA
from .hypothesis_tests import TestReport, marginal_test, omnibus_test  # NOQA
from .montecarlo import SimulationConfig, SimulationReport, run_simulation, run_sweep, error_table, ratio_table, qq_plot_data, parzen_density, empirical_process_replicates  # NOQA
from .report_writers import write_report, write_sweep  # NOQA
