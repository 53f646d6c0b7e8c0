"""
Block fading with conjugate rows
================================

With coherence time L the codeword is an n x L matrix.  Each column is an
embedded algebraic integer, so row i is sigma_i of the first row and no
nonzero codeword has a zero row.
"""

import numpy as np

from wiretap_lattice import (FadingParams, LatticePair, block_fading_asymptotic,
                             block_fading_pce, block_norm_criterion, conjugate_row_codeword,
                             conjugate_row_lattice, cyclotomic_real_field,
                             row_norm_product_identity_check)
from wiretap_lattice.numfield import block_rows_nonzero

K = cyclotomic_real_field(7)
L = 2
n = K.degree
lat = conjugate_row_lattice(K, L)
print(f"{K.name}: degree {n}, lattice dim {lat.dim}")

first_row = [[1, 0, 2], [0, -1, 1]]
print("codeword rows\n", np.round(conjugate_row_codeword(K, first_row), 4))
lhs, rhs = row_norm_product_identity_check(K, first_row)
print("prod of squared row norms", lhs, " norm of |x_1|^2", rhs)

print("no zero rows within radius 5:", block_rows_nonzero(lat, L, n, 5.0))

pair = LatticePair(lat, lat.scaled(2))
for gdb in (20, 30, 40):
    p = FadingParams.from_gamma_e(10 ** (gdb / 10), L=L)
    exact = block_fading_pce(pair, p, 7.0, n, auto_extend=False, include_origin=False)
    asym = block_fading_asymptotic(pair, p, 7.0, n)
    print(f"{gdb} dB: exact {exact.value:.4e}  high-SNR {asym.value:.4e}  "
          f"ratio {exact.value / asym.value:.5f}")

print("norm sum:", block_norm_criterion(K, L, 7.0).value)
