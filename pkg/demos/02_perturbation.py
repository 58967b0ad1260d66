"""
Weights as compositions
=======================

Convex weight vectors live on the simplex. Perturbation multiplies them
part by part and renormalises; the uniform vector leaves anything unchanged.
"""

# %%
import numpy as np

from jwa.composition import closure, make_composition, perturb, uniform

a = make_composition([0.60, 0.30, 0.10])
b = make_composition([0.45, 0.50, 0.05])
print("a + b          ", np.round(perturb(a, b).parts, 5))
print("uniform + b    ", perturb(uniform(3), b).parts)

# %%
# Closure makes the scale of the raw numbers irrelevant.
print(closure([2, 1, 1]), closure([200, 100, 100]))

# %%
# Perturbing a vector with itself sharpens it: the largest part grows and the
# smallest shrinks. A part in between can move either way.
c = make_composition([0.5, 0.4, 0.1])
print("c + c          ", np.round(perturb(c, c).parts, 4))

# %%
# Zero parts are fine as long as the two vectors overlap somewhere.
print(perturb([0.5, 0.5, 0.0], [0.0, 0.5, 0.5]))
try:
    perturb([1.0, 0.0], [0.0, 1.0])
except ValueError as exc:
    print("error:", exc)
