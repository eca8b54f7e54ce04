"""Check the immersion integrator against the helicoid, whose immersion is known in closed form.

With h(z) = z the integrator must reproduce (sinh y sin x, -sinh y cos x, x).
"""
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT
from weierstrass_disks import HelicoidData, QuadratureConfig, eval_F_batch, helicoid_oracle

x = np.linspace(-1, 1, 101)
z = x[:, None] + 1j * x[None, :]
F = eval_F_batch(HelicoidData(), z, QuadratureConfig(abs_tol=1e-10)).F
err = np.linalg.norm(F - helicoid_oracle(z), axis=-1)
print(f"max |F - closed form| on [-1,1]^2: {err.max():.2e}")

fig, ax = plt.subplots(figsize=(5, 4))
im = ax.imshow(np.log10(err.T + 1e-18), origin="lower", extent=(-1, 1, -1, 1))
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.set_title("log10 integration error, helicoid")
fig.colorbar(im)
fig.savefig(OUT / "helicoid_error.png", dpi=120)
