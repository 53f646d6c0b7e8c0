"""
Fast fading: why full diversity matters
=======================================

At high SNR Eve's probability behaves like a sum of inverse coordinate
products over the coarse lattice.  A lattice with a zero coordinate in some
point loses that decay, so algebraic lattices with full diversity win.
"""

from wiretap_lattice import (FadingParams, LatticePair, canonical_embedding_lattice, diversity,
                             fast_fading_asymptotic, fast_fading_pce, integer_lattice,
                             norm_sum_criterion, quadratic_field, volume)

K = quadratic_field(5)
alg = canonical_embedding_lattice(K)
# rescale Z^2 to the same volume for a fair comparison
z2 = integer_lattice(2).scaled(volume(alg) ** 0.5)

print("diversity of Z^2   :", diversity(z2, 6.0))
print("diversity of O_K   :", diversity(alg, 6.0))

print("\ngamma_e [dB]   Z^2 bound        O_K bound        O_K high-SNR form")
for gdb in (10, 20, 30, 40):
    p = FadingParams.from_gamma_e(10 ** (gdb / 10))
    a = fast_fading_pce(LatticePair(z2, z2.scaled(2)), p, 8.0, auto_extend=False,
                        include_origin=False)
    b = fast_fading_pce(LatticePair(alg, alg.scaled(2)), p, 8.0, auto_extend=False,
                        include_origin=False)
    c = fast_fading_asymptotic(LatticePair(alg, alg.scaled(2)), p, 8.0)
    print(f"{gdb:>12}   {a.value:.4e}       {b.value:.4e}       {c.value:.4e}")

# the high-SNR sum is a sum of inverse cubed field norms
ns = norm_sum_criterion(K, 8.0)
print("\nsum |N(x)|^-3 over the ball:", ns.value, "from", ns.terms_used, "points")
