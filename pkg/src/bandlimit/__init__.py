"""Sharp constants and extremal functions for band-limited optimization problems.

Two independent pipelines bound the radially-decreasing variant of the
delta-point minimization problem, a Sonin-lid family gives a third route,
and a weighted-derivative generalization has its sharp constants in closed
form.  All integral evaluation runs through an adaptive quadrature core
with rigorous oscillatory-tail handling; matrix problems are solved densely
with exact-rational assembly where conditioning demands it.
"""

__version__ = "1.0.0"

from .quad import (DecayDeclaration, QuadratureError, QuadResult, TrigTail,
                   find_roots, hybrid_line_integral, integrate_finite,
                   integrate_line)
from .specfun import (BandFunction, FourierProfile, PiecewiseProfile,
                      bessel_g, bessel_g_prime, f0, f_half, f_half_hat,
                      fejer, h0, h0_hat, hk, sinc_pw, sinc_pw_prime)
from .eigen import (EigenError, SymMatrix, eig_gen_min, eig_sym, jacobi_eigh,
                    pencil_min_exact, rational_quadform)
from .monotone_poly import (MonotoneSolution, assemble_ND, basis_eval,
                            certify_d2_exact, solve_poly)
from .monotone_l2 import (L2Solution, assemble_Q, check_orthonormal,
                          extremizer_zeros, solve_l2)
from .represent import (MonotoneProfile, derivative_identity_check, h_to_f,
                        make_profile, quotient)
from .lids import (AlphaMinimum, SoninLid, bessel_lid, bessel_lid_ratio,
                   closed_form_lid_ratio, fejer_lid, lid_eval,
                   lid_monotone_check, minimize_alpha)
from .sharp_ineq import (PWFunction, WeightPoly, binomial_inequality_check,
                         extremal_g, extremal_pw, functional, indicator_pw,
                         log_corollary_constant, poly_pw,
                         random_admissible_pw, sharp_constant,
                         time_side_functional)
