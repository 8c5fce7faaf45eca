"""Smooth majorants of weights on the real line, entire-product zero
perturbation with explicit constants, and criterion-sum convergence
diagnostics."""

from .errors import (BernsmoothError, BudgetExhaustedError, DomainError,
                     EvaluationError, PreconditionError,
                     SupportViolationError)
from .numerics import (GridSupResult, QuadratureResult, central_diff,
                       evaluation_budget, grid_sup, integrate_bump)
from .reports import BoundReport
from .weights import (StepWeight, Weight, builtin_weight, class_check,
                      eval_weight, step_weight, upper_baire,
                      weight_from_json)
from .smoothing import (SmoothingConfig, beta, default_omega, kappa, kernel,
                        mollified, omega_rho, phi, smooth_weight,
                        smooth_weight_with_derivative, verify_corollary1)
from .entire import (EntireProduct, PerturbationPlan, ZeroSet,
                     cauchy_bound_check, counting, derivative_at_zero,
                     eval_product, lemma1_constants, perturb,
                     ratio_bound_check, separation_check, theta,
                     type_estimate, zero_family, zeros_from_json)
from .criteria import (CriterionReport, debranges_sum, singular_profile,
                       subproduct_sums)

__version__ = "0.1.0"
