"""
Coset codes from nested lattices
================================

Alice sends secret labels as cosets of a coarse lattice inside a fine one.
The point inside the coset is picked at random.
"""

import numpy as np

from wiretap_lattice import build_coset_code, coset_label, encode, integer_lattice
from wiretap_lattice.lattice import Lattice, volume

# Z^2 inside itself scaled by 2: four cosets, two secret bits
fine = integer_lattice(2)
coarse = fine.scaled(2)
code = build_coset_code(fine, coarse)
print("index", code.index, "invariants", code.invariants, "secret bits", code.secret_bits)
print("representatives\n", code.reps)

# the index is the volume ratio
print("index * vol(fine) =", code.index * volume(fine), " vol(coarse) =", volume(coarse))

# encode each label with a random coarse point and read the label back
rng = np.random.default_rng(0)
for label in range(code.index):
    r = coarse.point(rng.integers(-3, 4, size=2))
    x = encode(code, label, r)
    print(f"label {label}: sent {x}, decoded label {coset_label(code, x)}")

# a non-diagonal sublattice; the Smith form picks the labelling
fine = Lattice.from_rows([[1, 0], [0.5, 0.8]])
coarse = Lattice(fine.generator @ np.array([[3, 1], [0, 2]]))
code = build_coset_code(fine, coarse)
print("\nskewed pair: index", code.index, "invariants", code.invariants)
