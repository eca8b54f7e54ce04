"""Successive differences of F_a on a compact set away from the blowup points shrink as a -> 0."""
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT
from weierstrass_disks import ConstructionParams, convergence_table

a_values = [0.1, 0.05, 0.025, 0.0125]
tab = convergence_table([ConstructionParams([0.0], a) for a in a_values], delta=0.1)
pairs = [f"{a1:g}->{a2:g}" for a1, a2 in zip(a_values, a_values[1:])]
for name in ("dF", "dD1", "dD2"):
    print(f"{name:4s} raw    {np.round(getattr(tab, name), 5)}")
    print(f"{name:4s} scaled {np.round(getattr(tab, name + '_scaled'), 5)}")

fig, ax = plt.subplots(figsize=(5, 4))
for name in ("dF_scaled", "dD1_scaled", "dD2_scaled"):
    ax.semilogy(pairs, getattr(tab, name), "o-", label=name)
ax.set_ylabel("sup difference / cosh^2 v")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "convergence.png", dpi=120)
