"""Numerical classification of positive measures into L^p Kato and Dynkin
classes for symmetric Markov processes with two-sided heat kernel estimates."""

from .classification import (ClassificationReport, ClassifyConfig, LimitFit,
                             classify_limit, classify_measure, estimate_eta,
                             fit_order_delta, lq_sufficient, lq_unif_norm,
                             schechter_norm, schechter_sufficient,
                             threshold_p_star)
from .config import RunConfig, parse_config_text
from .errors import (ConfigError, DiagnosticsError, DomainError,
                     InsufficientDataError, KatolabError, ValidationError)
from .functionals import (CenterStrategy, GreenKernelSpec, green_value,
                          kato_functional, resolvent_functional,
                          semigroup_functional, sup_over_centers)
from .kernels import (GaussianKernelModel, HeatKernelModel, KernelBounds,
                      ScalingKernelModel, StableEstimateModel,
                      StretchedExponentialModel, eval_heat_kernel,
                      eval_resolvent_kernel, eval_time_integrated_kernel,
                      kernel_invariant_suite, make_kernel_model,
                      relativistic_psi, stable_jump_constant,
                      synthetic_scaling_model, time_integrated_bounds)
from .measures import (AhlforsAbstract, Density, FunctionalEstimate,
                       MeasureRep, PointMasses, RadialDensity, SphereSurface,
                       integrate_global, integrate_over_ball, lebesgue,
                       make_measure)
from .montecarlo import (PathConfig, expected_additive_functional,
                         quadrature_additive_functional, simulate_paths)
from .profiles import RadialProfile, log_profile, parse_profile, power_profile
from .quadrature import integrate_outward, integrate_to_zero
from .rearrangement import (DistributionFunction, g_criterion,
                            layer_cake_criterion, radial_criterion,
                            right_continuous_inverse)
from .space import SpaceModel, sphere_surface_area, unit_ball_volume

__version__ = "0.1.0"

__all__ = [
    "AhlforsAbstract", "CenterStrategy", "ClassificationReport",
    "ClassifyConfig", "ConfigError", "Density", "DiagnosticsError",
    "DistributionFunction", "DomainError", "FunctionalEstimate",
    "GaussianKernelModel", "GreenKernelSpec", "HeatKernelModel",
    "InsufficientDataError", "KatolabError", "KernelBounds", "LimitFit",
    "MeasureRep", "PathConfig", "PointMasses",
    "RadialDensity", "RadialProfile", "RunConfig", "ScalingKernelModel",
    "SpaceModel", "SphereSurface", "StableEstimateModel",
    "StretchedExponentialModel",
    "ValidationError", "classify_limit", "classify_measure",
    "estimate_eta", "eval_heat_kernel", "eval_resolvent_kernel",
    "eval_time_integrated_kernel", "expected_additive_functional",
    "fit_order_delta", "g_criterion", "green_value", "integrate_global",
    "integrate_outward", "integrate_over_ball", "integrate_to_zero",
    "kato_functional", "kernel_invariant_suite", "layer_cake_criterion",
    "lebesgue", "log_profile", "lq_sufficient", "lq_unif_norm",
    "make_kernel_model", "make_measure", "parse_config_text",
    "parse_profile", "power_profile", "quadrature_additive_functional",
    "radial_criterion", "relativistic_psi", "resolvent_functional",
    "right_continuous_inverse", "schechter_norm", "schechter_sufficient",
    "semigroup_functional", "simulate_paths", "sphere_surface_area",
    "stable_jump_constant", "sup_over_centers", "synthetic_scaling_model",
    "threshold_p_star", "time_integrated_bounds", "unit_ball_volume",
]
