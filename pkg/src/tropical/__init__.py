"""Tropical and idempotent mathematics: semirings, linear algebra, calculus,
dequantization, polytopes, Hamilton-Jacobi evolution, dimensions and amoebas."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .semiring import (BOTTOM, MAXPLUS, MINPLUS, TOP, Semiring, add,  # noqa: E402,F401
                       dequantized_add_limit_gap, leq, mul, parse_semiring, scalar_star,
                       subtropical)
from .linalg import (SemiringMatrix, WeightedDigraph, gauss_seidel_iterate,  # noqa: E402,F401
                     jacobi_iterate, kleene_closure, mat_add, mat_mul, shortest_paths,
                     solve_bellman)
from .calculus import (Grid, GridFunction, Kernel, apply_kernel,  # noqa: E402,F401
                       idempotent_integral, inverse_legendre, legendre_transform,
                       measure_integral, scalar_product, sup_convolution)
from .dequantize import (GeneralizedPolynomial, check_hom_product,  # noqa: E402,F401
                         check_hom_sum, dequantize_h, newton_set, tropicalize)
from .convex import (Polytope, hull_union, minkowski_sum,  # noqa: E402,F401
                     semiring_law_check, support_function)
from .hjb import (HJProblem, cole_hopf_residual, dequantization_convergence,  # noqa: E402,F401
                  hopf_lax_step, superposition_check, viscous_step)
from .fractal import (PointCloud, box_count, hb_dimension,  # noqa: E402,F401
                      pointwise_measure_dimension)
from .amoeba import (PlaneCurve, TropicalCurve, deform, hausdorff_distance,  # noqa: E402,F401
                     sample_amoeba, tropical_curve)
