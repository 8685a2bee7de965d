# %% [markdown]
# # Velocity transmission factors
#
# At each tool-center point the Jacobian relates joint rates to Cartesian
# velocities. The eigenvalues of ``J J^T`` (and their square roots, the
# transmission factors) say how evenly that happens.

# %%
import numpy as np

from orthoglide import spectrum_at
from orthoglide.kinematics import det_A, spectra

# %%
# At the origin the three legs are aligned with the joint axes and every factor is one.
s = spectrum_at((0.0, 0.0, 0.0))
print("origin:", s.sigma, s.psi)

# %%
# Walking along the main diagonal, the largest eigenvalue passes 4 near
# t = -0.236, while on the positive side it stays below 4 up to t = 0.4.
t = np.linspace(-0.5, 0.5, 11)
P = np.stack([t, t, t], axis=1)
for ti, ev, d in zip(t, spectra(P), det_A(P)):
    print(f"t={ti:+.2f}  sigma={np.array2string(ev, precision=4)}  det(A)={d:+.4f}")

# %%
# Close to a parallel singularity (det(A) -> 0) the largest eigenvalue blows up.
p = np.array([-0.27593540308703823, 0.6755628054674194, 0.6836471348274094])
print("det(A) =", det_A(p), " sigma =", spectra(p[None])[0])
