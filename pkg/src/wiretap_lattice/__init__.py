"""Nested lattice coset codes for Rayleigh fading wiretap channels.

Build a fine/coarse lattice pair, evaluate the eavesdropper's average
correct-decision probability in closed form for fast and block fading, and
check those closed forms against quadrature and Monte Carlo simulation.
"""

from .channel import (SimConfig, SimResult, mc_average_theta, sample_rayleigh,
                      simulate_correct_decision, sweep)
from .coset import (CosetCode, LatticePair, build_coset_code, coset_label, encode)
from .criteria import (CriterionReport, FadingParams, Formula, average_fading_sum,
                       block_fading_asymptotic, block_fading_pce, block_norm_criterion,
                       fading_factor, fast_fading_asymptotic, fast_fading_pce, gaussian_pcb,
                       gaussian_pce_leading, gaussian_pce_second_order, gaussian_theta_sum,
                       norm_sum_criterion)
from .errors import *  # noqa: F401,F403
from .lattice import (Lattice, ShellEnumeration, catalog_lattice, enumerate_points,
                      integer_lattice, nearest_point, second_moment, volume)
from .numfield import (AlgebraicInteger, NumberField, canonical_embedding_lattice,
                       conjugate_row_codeword, conjugate_row_lattice, cyclotomic_real_field,
                       diversity, field_norm, make_field, quadratic_field,
                       row_norm_product_identity_check)

__version__ = "0.1.0"
