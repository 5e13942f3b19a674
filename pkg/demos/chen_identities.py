"""Chen's identities for iterated integrals with coefficients in O(S2).

Random polynomial paths in C^2 are lifted through the coordinate swap, and
the shuffle, inverse and composition identities are checked numerically.
"""
import numpy as np

from malcev.verify import chen_instance, composition_error, inverse_error, shuffle_error

rng = np.random.default_rng(7)
print(" k   shuffle    inverse    composition")
for k in range(8):
    inst = chen_instance(rng)
    print(f"{k:2d}   {shuffle_error(inst):.2e}   {inverse_error(inst):.2e}   {composition_error(inst):.2e}")
