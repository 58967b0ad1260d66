"""
Which aggregation axioms hold
=============================

All five operators stay within the data range and return ``c`` for constant
input. JWA reduces to OWA when the source weights are uniform and to LWA
when the order weights are uniform, but it is not confined between them.
"""

# %%
import numpy as np

from jwa import operators as ops
from jwa.composition import uniform

rng = np.random.default_rng(0)
n = 6
x = rng.normal(50, 10, n)
w = rng.dirichlet(np.ones(n))
v = rng.dirichlet(np.ones(n))

for tag in ops.OPERATORS:
    r = ops.aggregate(tag, x, w, v)
    print(f"{tag:6s} {r.value:8.3f}   range [{x.min():.3f}, {x.max():.3f}]")

# %%
print("JWA(uniform w) - OWA:", ops.jwa(x, uniform(n), v).value - ops.owa(x, v).value)
print("JWA(uniform v) - LWA:", ops.jwa(x, w, uniform(n)).value - ops.lwa(x, w).value)

# %%
# When the ranked source weights equal the order weights, LWA and OWA agree
# but JWA does not.
x3 = [90, 50, 10]
v3 = [0.45, 0.50, 0.05]
print(ops.lwa(x3, v3).value, ops.owa(x3, v3).value, round(ops.jwa(x3, v3, v3).value, 4))

# %%
# JWA is increasing in each input only while the ranking stays fixed. Moving
# the second source past the third changes which source weight meets which
# rank weight, and the aggregate drops.
w3 = [0.60, 0.30, 0.10]
for x2 in (49.8, 49.9, 50.1, 50.2):
    print(x2, round(ops.jwa([90, x2, 50], w3, v3).value, 3))
