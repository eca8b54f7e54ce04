"""Structured surface meshes and their OBJ / PLY / JSON serialisation."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .domain import GridSpec, build_domain, mesh_columns
from .holo import HelicoidData, as_data
from .immersion import QuadratureConfig, eval_F_batch

HELICOID_RECT = (-1.0, 1.0, -1.0, 1.0)


@dataclass
class SurfaceMesh:
    positions: np.ndarray            # (N, 3)
    domain: np.ndarray               # (N,) complex domain points
    triangles: np.ndarray            # (M, 3) int
    piece: np.ndarray = None         # (N,) 0-based piece index, -1 for helicoid
    sheet: np.ndarray = None         # (N,) sign of y
    angle_ref: np.ndarray = None     # (N,) u(x, 0), direction angle of the level set
    shape: tuple | None = None       # (columns, rows) of the structured grid, if any
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.positions)
        if self.piece is None:
            self.piece = np.full(n, -1)
        if self.sheet is None:
            self.sheet = np.sign(np.asarray(self.domain).imag)
        if self.angle_ref is None:
            self.angle_ref = np.zeros(n)

    @property
    def n_vertices(self):
        return len(self.positions)


def grid_triangles(ncols: int, nrows: int):
    """Two triangles per cell of a column-major structured grid, counter-clockwise in (x, y)."""
    i, j = np.meshgrid(np.arange(ncols - 1), np.arange(nrows - 1), indexing="ij")
    v00 = (i * nrows + j).ravel()
    v10 = v00 + nrows
    v11 = v10 + 1
    v01 = v00 + 1
    return np.concatenate([np.stack([v00, v10, v11], 1), np.stack([v00, v11, v01], 1)])


def _domain_points(data, grid: GridSpec, rule: str):
    t = np.linspace(-1.0, 1.0, grid.ny)
    t[grid.ny // 2] = 0.0
    if isinstance(data, HelicoidData):
        x0, x1, y0, y1 = grid.clip or HELICOID_RECT
        x = np.linspace(x0, x1, grid.nx)
        y = y0 + (y1 - y0) * (t + 1) / 2
        z = x[:, None] + 1j * y[None, :]
        return z, np.full(z.shape, -1)
    spec = build_domain(data.params, rule)
    x, w = mesh_columns(spec, grid)
    if grid.clip is None:
        y = w[:, None] * t[None, :]
    else:
        ylo = np.maximum(-w, grid.clip[2])
        yhi = np.minimum(w, grid.clip[3])
        y = ylo[:, None] + (yhi - ylo)[:, None] * (t[None, :] + 1) / 2
    z = x[:, None] + 1j * y
    return z, np.repeat(spec.piece_of(x)[:, None], grid.ny, axis=1)


def build_mesh(data, grid: GridSpec | None = None, quad: QuadratureConfig | None = None,
               clip_radius: float | None = None, rule: str = "midpoint") -> SurfaceMesh:
    """Sample the domain, evaluate the immersion and triangulate.

    ``data`` is ``ConstructionParams`` or ``HelicoidData``; the helicoid is
    sampled on ``grid.clip`` (default ``[-1, 1]^2``).  Pieces are stitched
    along shared split columns.  With ``clip_radius`` the mesh is cut to the
    closed ball of that radius.
    """
    grid = grid or GridSpec()
    quad = quad or QuadratureConfig()
    data = as_data(data)
    z, piece = _domain_points(data, grid, rule)
    s = eval_F_batch(data, z, quad)
    u0 = data.h(z.real).real
    ncols, nrows = z.shape
    mesh = SurfaceMesh(
        positions=s.F.reshape(-1, 3), domain=z.ravel(),
        triangles=grid_triangles(ncols, nrows), piece=piece.ravel(),
        sheet=np.sign(z.imag).ravel(), angle_ref=u0.ravel(), shape=(ncols, nrows),
        provenance={**data.describe(), "grid": grid.to_dict(), "quadrature": quad.to_dict(),
                    "splits": rule})
    if clip_radius is not None:
        mesh = clip_to_ball(mesh, clip_radius, data)
    return mesh


def ball_radius(r0: float) -> float:
    """Radius ``min(r0 / 2, 1/4)`` of the ball the disks are cut to."""
    return min(r0 / 2.0, 0.25)


def _sphere_cross(p, q, R):
    # smallest t in [0, 1] with |p + t (q - p)| = R, p inside, q outside
    d = q - p
    A = d @ d
    B = 2 * (p @ d)
    C = p @ p - R * R
    disc = max(B * B - 4 * A * C, 0.0)
    return (-B + np.sqrt(disc)) / (2 * A)


def clip_to_ball(mesh: SurfaceMesh, R: float, data=None) -> SurfaceMesh:
    """Keep the part of ``mesh`` inside the closed ball of radius ``R``.

    Triangles straddling the sphere are cut along the crossing points of
    their edges; new vertices get linearly interpolated attributes, with
    the domain point clamped back into its column.
    """
    V = mesh.positions
    inside = np.linalg.norm(V, axis=1) <= R
    T = mesh.triangles
    n_in = inside[T].sum(axis=1)
    keep = T[n_in == 3]

    new_pos, new_dom, new_src = [], [], []
    cache = {}
    base = len(V)

    def crossing(i, j):
        key = (i, j)
        if key not in cache:
            t = _sphere_cross(V[i], V[j], R)
            p = V[i] + t * (V[j] - V[i])
            p *= min(1.0, R / np.linalg.norm(p))
            cache[key] = base + len(new_pos)
            new_pos.append(p)
            new_dom.append(mesh.domain[i] + t * (mesh.domain[j] - mesh.domain[i]))
            new_src.append(i)
        return cache[key]

    extra = []
    for tri in T[(n_in > 0) & (n_in < 3)]:
        poly = []
        for e in range(3):
            i, j = int(tri[e]), int(tri[(e + 1) % 3])
            if inside[i]:
                poly.append(i)
            if inside[i] != inside[j]:
                poly.append(crossing(i, j) if inside[i] else crossing(j, i))
        for k in range(1, len(poly) - 1):
            extra.append((poly[0], poly[k], poly[k + 1]))

    pos = np.vstack([V] + ([np.array(new_pos)] if new_pos else []))
    dom = np.concatenate([mesh.domain, np.array(new_dom, dtype=complex)])
    src = np.concatenate([np.arange(base), np.array(new_src, dtype=int)])
    if data is not None and not isinstance(data, HelicoidData) and new_dom:
        spec = build_domain(data.params, mesh.provenance.get("splits", "midpoint"))
        w = spec.column_width(dom.real)
        dom = dom.real + 1j * np.clip(dom.imag, -w, w)
    tris = np.vstack([keep] + ([np.array(extra, dtype=int)] if extra else []))

    used = np.zeros(len(pos), dtype=bool)
    used[tris.ravel()] = True
    remap = np.cumsum(used) - 1
    prov = dict(mesh.provenance, clip_radius=R)
    return SurfaceMesh(
        positions=pos[used], domain=dom[used], triangles=remap[tris],
        piece=mesh.piece[src][used], sheet=np.sign(dom.imag)[used],
        angle_ref=mesh.angle_ref[src][used], shape=None, provenance=prov)


def triangle_normals(mesh: SurfaceMesh):
    P = mesh.positions[mesh.triangles]
    return np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0])


# -- file formats ---------------------------------------------------------

def write_mesh(mesh: SurfaceMesh, fmt: str, path, binary: bool = False):
    """Write ``mesh`` as ``"obj"`` or ``"ply"`` (ASCII unless ``binary`` for PLY)."""
    fmt = fmt.lower()
    path = Path(path)
    V, T = mesh.positions, mesh.triangles
    if fmt == "obj":
        if binary:
            raise ValueError("OBJ has no binary variant")
        lines = [f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}" for p in V]
        lines += [f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}" for t in T]
        path.write_text("\n".join(lines) + ("\n" if lines else ""))
    elif fmt == "ply":
        kind = "binary_little_endian" if binary else "ascii"
        header = (f"ply\nformat {kind} 1.0\nelement vertex {len(V)}\n"
                  "property double x\nproperty double y\nproperty double z\n"
                  f"element face {len(T)}\nproperty list uchar int vertex_indices\nend_header\n")
        if binary:
            with open(path, "wb") as fh:
                fh.write(header.encode("ascii"))
                fh.write(np.asarray(V, dtype="<f8").tobytes())
                for t in T:
                    fh.write(struct.pack("<Biii", 3, *map(int, t)))
        else:
            body = [f"{p[0]:.9g} {p[1]:.9g} {p[2]:.9g}" for p in V]
            body += [f"3 {t[0]} {t[1]} {t[2]}" for t in T]
            path.write_text(header + "\n".join(body) + ("\n" if body else ""))
    else:
        raise ValueError(f"unsupported mesh format {fmt!r}; use 'obj' or 'ply'")


def read_mesh(path):
    """Read back an OBJ or PLY file written by :func:`write_mesh`; returns ``(V, T)``."""
    path = Path(path)
    if path.suffix.lower() == ".obj":
        V, T = [], []
        for line in path.read_text().splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                V.append([float(c) for c in parts[1:4]])
            elif parts[0] == "f":
                T.append([int(c.split("/")[0]) - 1 for c in parts[1:4]])
        return np.array(V, dtype=float).reshape(-1, 3), np.array(T, dtype=int).reshape(-1, 3)
    raw = path.read_bytes()
    end = raw.index(b"end_header\n") + len(b"end_header\n")
    header = raw[:end].decode("ascii").splitlines()
    nv = int(next(h for h in header if h.startswith("element vertex")).split()[-1])
    nf = int(next(h for h in header if h.startswith("element face")).split()[-1])
    if "format ascii 1.0" in header:
        rows = raw[end:].decode("ascii").split("\n")
        V = np.array([[float(c) for c in r.split()] for r in rows[:nv]]).reshape(-1, 3)
        T = np.array([[int(c) for c in r.split()[1:]] for r in rows[nv:nv + nf]]).reshape(-1, 3)
        return V, T
    V = np.frombuffer(raw[end:end + 24 * nv], dtype="<f8").reshape(-1, 3)
    rec = np.dtype([("n", "u1"), ("i", "<i4", 3)])
    T = np.frombuffer(raw[end + 24 * nv:], dtype=rec, count=nf)["i"].astype(int)
    return V.copy(), T.reshape(-1, 3)


def write_report(report, path):
    """Serialise a verification report as deterministic JSON."""
    doc = report.to_dict() if hasattr(report, "to_dict") else report
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

