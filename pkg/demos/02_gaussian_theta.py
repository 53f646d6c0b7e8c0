"""
Eve on a Gaussian channel: the theta series
===========================================

Eve's chance of guessing the right coset is governed by the theta series of
the coarse lattice at q = exp(-1/(2 sigma^2)).
"""

import math

from wiretap_lattice import (FadingParams, build_coset_code, gaussian_pcb, gaussian_pce_leading,
                             gaussian_pce_second_order, gaussian_theta_sum, integer_lattice)
from wiretap_lattice.oracles import poisson_theta_z

Z1 = integer_lattice(1)

# theta of Z at sigma^2 = 1 against the Poisson dual sum
theta = gaussian_theta_sum(Z1, 1.0, 3.0)
print("theta_Z(1)       =", repr(theta.value), "terms", theta.terms_used)
print("Poisson dual sum =", repr(poisson_theta_z(1.0)))
print("sqrt(2 pi)       =", repr(math.sqrt(2 * math.pi)))

# Bob keeps only the zero coset
code = build_coset_code(Z1, Z1.scaled(2))
est = gaussian_pcb(code, FadingParams(sigma_b2=1.0), 10**5, seed=0)
print(f"\nBob, Z/2Z, sigma_b = 1: {est.value:.5f} +- {est.std_err:.5f}")

# Eve's leading term and its second-order correction shrink as her noise grows
code = build_coset_code(integer_lattice(2), integer_lattice(2).scaled(2))
for s2 in (0.5, 1.0, 4.0):
    p = FadingParams(sigma_e2=s2)
    lead = gaussian_pce_leading(code, p, 3.0)
    second = gaussian_pce_second_order(code, p, 3.0)
    print(f"sigma_e^2 = {s2}: leading {lead.value:.6f}  second order {second.value:.6f} "
          f"{' '.join(lead.flags)}")
