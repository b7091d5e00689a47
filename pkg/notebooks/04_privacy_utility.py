# %% [markdown]
# # Privacy-utility tradeoff along the alpha-lift ordering
#
# The high-risk set grows one symbol at a time in descending alpha-lift order.
# Utility loss is measured by the normalized mutual-information loss.

# %%
from alphalift import INF, random_joint
from alphalift.experiments import PUT_COLUMNS, put_rows, put_sweep, write_csv

joint = random_joint(8, 12, seed=3)
points = put_sweep(joint, [1.5, 10, INF])
print(write_csv(put_rows(points), PUT_COLUMNS))

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    for alpha in ("1.5", "10", "inf"):
        pts = [p for p in points if str(p.alpha) == alpha]
        plt.plot([p.nmil for p in pts], [p.min_max_sibson for p in pts], marker="o", label=alpha)
    plt.xlabel("NMIL")
    plt.ylabel("max Sibson MI")
    plt.legend(title="alpha")
    plt.show()
