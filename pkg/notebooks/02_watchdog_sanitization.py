# %% [markdown]
# # Watchdog sanitization with an X-invariant mechanism
#
# Symbols whose log alpha-lift exceeds epsilon are merged into one output.
# The sanitizer only needs the merged lift; the choice of R does not matter.

# %%
import numpy as np

from alphalift import lift_profile
from alphalift.experiments import toy_joint
from alphalift.watchdog import (
    apply_mechanism,
    optimal_leakage,
    output_alpha_lift,
    partition,
    x_invariant_mechanism,
)

joint = toy_joint(0.6)
part = partition(joint, 2, 0.17)
print("high risk:", part.high_risk_labels(), " merged lift:", part.merged_lift)

# %%
for R in ([0.5, 0.5], [0.9, 0.1], [1.0, 0.0]):
    mech = x_invariant_mechanism(part, R)
    print(R, np.round(output_alpha_lift(joint, mech, 2), 6))

# %% [markdown]
# The sanitized joint and the smallest achievable leakage.

# %%
sanitized = apply_mechanism(joint, x_invariant_mechanism(part))
print(sanitized.pmf)
print(lift_profile(sanitized, 2).alpha_lift)
print(optimal_leakage(joint, part))
