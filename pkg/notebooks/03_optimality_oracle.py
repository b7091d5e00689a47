# %% [markdown]
# # Can any randomization beat the merged lift?
#
# Random row-stochastic randomizations of the high-risk block are drawn and
# their worst and expected output lifts compared with the X-invariant one.

# %%
from alphalift import INF, random_joint
from alphalift.oracle import verify_strict_tradeoff, verify_x_invariant_optimality
from alphalift.watchdog import partition_from_set

joint = random_joint(4, 5, seed=11)
for alpha in (1.5, 2, 10, INF):
    part = partition_from_set(joint, alpha, [0, 2, 4])
    rep = verify_x_invariant_optimality(joint, part, 10_000, seed=1)
    print(f"alpha={alpha}: merged {rep.merged_lift:.5f}, best sampled worst-case "
          f"{rep.best_sampled_max:.5f}, violations {rep.violations}")

# %% [markdown]
# Pushing every output but one below the merged lift forces the last above it.

# %%
part = partition_from_set(joint, 2, [0, 2, 4])
print("premises triggered:", verify_strict_tradeoff(joint, part, 10_000, seed=2))
