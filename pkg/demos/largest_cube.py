# %% [markdown]
# # Largest certified cube
#
# Cubes are grown around candidate centers with a doubling step; boxes of
# centers that cannot beat the current best are dropped early. The result
# is certified, and no enclosed cube is larger than ``edge + 2 * alpha``.

# %%
from orthoglide import CubeParams, grow_cube_at, largest_cube

# %%
# Centered at the origin the cube is limited by its corner on the negative
# diagonal, where sigma_max reaches 4 at about t = -0.236.
print("half-edge at origin:", grow_cube_at((0.0, 0.0, 0.0), CubeParams(alpha=0.001)))

# %%
# Moving the center up the diagonal buys room; alpha=0.01 runs in a few seconds.
pruned = []
cube = largest_cube(CubeParams(alpha=0.01), on_prune=lambda c, R: pruned.append(len(c)))
print(cube.to_dict())
print("centers pruned:", sum(pruned))
