"""Curvature at the blowup points grows like a^-4 while staying bounded elsewhere."""
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT
from weierstrass_disks import ConstructionParams, blowup_sweep, gauss_curvature

a_values = [0.1, 0.05, 0.025, 0.0125, 0.00625]
sweep = blowup_sweep([-0.2, 0.2], a_values, delta=0.1)
for j, s in enumerate(sweep.slopes, start=1):
    print(f"slope of log|K(b_{j})| against log(1/a): {s:.4f}")
print("sup |K| at distance >= 0.1 from the points:", np.round(sweep.sup_off_axis, 1))

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.loglog(a_values, sweep.K_at_b, "o-")
ax1.loglog(a_values, np.array(a_values) ** -4.0, "k--", label="a^-4")
ax1.set_xlabel("a")
ax1.set_ylabel("|K(b_j)|")
ax1.legend(["j = 1", "j = 2", "a^-4"])

x = np.linspace(-0.5, 0.5, 2001)
for a in a_values[:3]:
    K = gauss_curvature(ConstructionParams([-0.2, 0.2], a), x + 0j).K
    ax2.semilogy(x, -K, label=f"a = {a}")
ax2.set_xlabel("x (on the axis y = 0)")
ax2.set_ylabel("|K|")
ax2.legend()
fig.tight_layout()
fig.savefig(OUT / "curvature_blowup.png", dpi=120)
