"""Count how many times the level-set direction turns between heights b + t and b + 2t.

As a -> 0 the jump in u approaches 1/(2t), so the number of turns grows like 1/(4 pi t).
"""
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT
from weierstrass_disks import ConstructionParams, sheet_count

ts = np.geomspace(0.002, 0.2, 30)
fig, ax = plt.subplots(figsize=(5, 4))
for a in (1e-2, 1e-3, 1e-4):
    p = ConstructionParams([0.0], a)
    ax.loglog(ts, [sheet_count(p, 1, t).turns for t in ts], label=f"a = {a:g}")
ax.loglog(ts, 1 / (4 * np.pi * ts), "k--", label="1/(4 pi t)")
ax.set_xlabel("t")
ax.set_ylabel("turns")
ax.legend()
fig.savefig(OUT / "spiraling.png", dpi=120)

sc = sheet_count(ConstructionParams([0.0], 1e-4), 1, 0.05)
print(f"t = 0.05, a = 1e-4: jump {sc.u_jump:.4f}, turns {sc.turns:.4f}, "
      f"predicted {sc.predicted:.4f}")
