"""
Checking the closed forms by simulation
=======================================

The Rayleigh average inside the criteria has a closed form.  Here it is
compared with a Monte Carlo average, and a full channel simulation shows
Eve's correct-decision probability falling with her SNR.
"""

from wiretap_lattice import (FadingParams, average_fading_sum, build_coset_code,
                             integer_lattice, mc_average_theta, sweep)

coarse = integer_lattice(2).scaled(2)
for L in (1, 2):
    lat = integer_lattice(2 * L).scaled(2)
    p = FadingParams(sigma_e2=0.5, sigma_he2=1.0, L=L)
    closed = average_fading_sum(lat, p, 6.0)
    mc = mc_average_theta(lat, p, L, 6.0, 10**5, seed=1)
    print(f"L = {L}: closed form {closed:.6f}  Monte Carlo {mc.value:.6f} +- {mc.std_err:.6f}")

code = build_coset_code(integer_lattice(2), coarse)
print("\ngamma_e [dB]  P(Eve correct)")
for gdb, res in sweep(code, [30, 20, 10, 0, -10], trials=50000, seed=0):
    print(f"{gdb:>12}  {res.p_correct:.4f} +- {res.std_err:.4f}")
print("random guessing:", 1 / code.index)
