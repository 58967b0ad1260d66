"""
Three experts, two kinds of weight
==================================

Three experts estimate how many units to produce. We trust expert 1 most
(source weights 0.6 / 0.3 / 0.1) and, separately, we want to avoid
under-production, so the order weights favour the middle and highest
estimates (0.45 for the max, 0.50 for the middle, 0.05 for the min).
"""

# %%
from jwa import jwa, lwa, owa, owawa, sdowa, joint_weights

x = [90, 50, 10]
w = [0.60, 0.30, 0.10]
v = [0.45, 0.50, 0.05]  # descending: max, mid, min

# %%
# Source weights and order weights each give their own answer.
print(f"LWA   {lwa(x, w).value:6.2f}")
print(f"OWA   {owa(x, v).value:6.2f}")

# %%
# Averaging those answers can only land between 66 and 70, whatever the mix.
print(f"OWAWA {owawa(x, w, v, alpha=0.5).value:6.2f}")
sd = sdowa(x, w, v)
print(f"SDOWA {sd.value:6.2f}  (LWA share G = {sd.params['G']:.4f})")

# %%
# Expert 1 is both the most trusted source and the holder of the top
# estimate, and expert 3 is the least trusted and the lowest. Combining the
# weights before aggregating reinforces both facts, so the result leaves
# the [66, 70] interval.
perm, joint = joint_weights(x, w, v)
print("rank order:", [f"expert {i + 1}" for i in perm.order])
print("joint weights:", [round(p, 2) for p in joint])
print(f"JWA   {jwa(x, w, v).value:6.2f}")
