"""Build a mesh of one family member, cut it to the ball B_R and save OBJ and PLY files."""
import matplotlib.pyplot as plt

from _common import OUT
from weierstrass_disks import (ConstructionParams, GridSpec, ball_radius, build_mesh,
                               check_separation, write_mesh)

params = ConstructionParams([-0.3, 0.0, 0.3], 0.05)
grid = GridSpec(nx=200, ny=41)

full = build_mesh(params, grid)
write_mesh(full, "obj", OUT / "three_points.obj")
_, r0 = check_separation(params, grid)
R = ball_radius(r0)
clipped = build_mesh(params, grid, clip_radius=R)
write_mesh(clipped, "ply", OUT / "three_points_ball.ply", binary=True)
print(f"full mesh: {full.n_vertices} vertices; r0 = {r0:.4g}, R = {R:.4g}; "
      f"clipped: {clipped.n_vertices} vertices")

fig = plt.figure(figsize=(6, 6))
ax = fig.add_subplot(projection="3d")
P = full.positions
ax.plot_trisurf(P[:, 0], P[:, 1], P[:, 2], triangles=full.triangles, cmap="viridis",
                linewidth=0)
ax.set_title("F_a, three blowup heights")
fig.savefig(OUT / "three_points_mesh.png", dpi=120)
