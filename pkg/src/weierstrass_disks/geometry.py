"""Normal, Gauss curvature and curvature sweeps in the pinch parameter."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import build_domain
from .holo import DomainError, as_data
from .params import ConstructionParams


@dataclass
class CurvatureSample:
    z: np.ndarray
    K: np.ndarray
    normal: np.ndarray
    conf: np.ndarray
    K_weierstrass: np.ndarray = field(repr=False)


def unit_normal(g):
    """Normal ``(2 Re g, 2 Im g, |g|^2 - 1) / (|g|^2 + 1)`` from the Gauss map value ``g``."""
    g = np.asarray(g, dtype=complex)
    m = np.abs(g) ** 2
    return np.stack([2 * g.real, 2 * g.imag, m - 1], axis=-1) / (m + 1)[..., None]


def curvature_from_h(dzh, v):
    """``K = -|h'|^2 / cosh^4 v``."""
    return -np.abs(dzh) ** 2 / np.cosh(v) ** 4


def curvature_weierstrass(g, dzg, phi=1.0):
    """``K = -[4 |g'| |g| / (|phi| (1 + |g|^2)^2)]^2`` for general Weierstrass data."""
    mg = np.abs(g)
    return -(4 * np.abs(dzg) * mg / (np.abs(phi) * (1 + mg**2) ** 2)) ** 2


def gauss_curvature(data, z, check_domain: bool = True) -> CurvatureSample:
    """Curvature and normal at ``z`` through both closed forms.

    ``K`` is the ``h``-form; ``K_weierstrass`` recomputes it from
    ``g = exp(i h)`` and ``g' = i h' g``.
    """
    data = as_data(data)
    z = np.asarray(z, dtype=complex)
    if check_domain and not np.all(data.contains(z)):
        raise DomainError("curvature requested outside the domain")
    h = data.h(z)
    dzh = data.dzh(z)
    g = np.exp(1j * h)
    K = curvature_from_h(dzh, h.imag)
    Kw = curvature_weierstrass(g, 1j * dzh * g)
    return CurvatureSample(z=z, K=K, normal=unit_normal(g), conf=np.cosh(h.imag) ** 2,
                           K_weierstrass=Kw)


def second_ff_norm(data, z, check_domain: bool = True):
    """``|A|^2 = -2K``; principal curvatures of a minimal surface are ``+-kappa``."""
    return -2.0 * gauss_curvature(data, z, check_domain).K


@dataclass
class BlowupSweep:
    points: tuple
    a_values: np.ndarray
    delta: float
    K_at_b: np.ndarray          # (len(a), n), |K_a(b_j)|
    sup_off_axis: np.ndarray    # (len(a),)
    lower_bound_ok: bool
    slopes: np.ndarray          # least-squares slope of log|K(b_j)| vs log(1/a), per j
    sup_ratio: float            # relative change of sup_off_axis between the two smallest a

    def rows(self):
        for i, a in enumerate(self.a_values):
            for j in range(len(self.points)):
                yield (float(a), j + 1, float(self.K_at_b[i, j]), self.delta,
                       float(self.sup_off_axis[i]))


def off_axis_sup(params: ConstructionParams, delta: float, nx: int = 200, ny: int = 41,
                 rtol: float = 0.01, max_refine: int = 6):
    """Grid estimate of ``sup |K_a|`` over ``{min_j |x - b_j| >= delta}``.

    The grid is doubled until the maximum moves by less than ``rtol``.
    """
    spec = build_domain(params)
    b = np.asarray(params.points)
    edges = np.unique(np.clip(np.concatenate([spec.lo, spec.hi, b - delta, b + delta]), -0.5, 0.5))
    best = None
    for _ in range(max_refine):
        xs = [np.linspace(lo, hi, max(2, int(nx * (hi - lo)) + 2))
              for lo, hi in zip(edges[:-1], edges[1:])]
        x = np.unique(np.concatenate(xs))
        x = x[np.min(np.abs(x[:, None] - b[None, :]), axis=1) >= delta - 1e-15]
        if x.size == 0:
            raise ValueError("no sample column is delta-away from every b_j")
        w = spec.column_width(x)
        t = np.linspace(-1.0, 1.0, ny)
        z = x[:, None] + 1j * w[:, None] * t[None, :]
        cur = float(np.max(np.abs(gauss_curvature(params, z, check_domain=False).K)))
        if best is not None and abs(cur - best) <= rtol * abs(best):
            return cur
        best = cur
        nx, ny = 2 * nx, 2 * ny - 1
    return best


def blowup_sweep(points, a_values, delta: float) -> BlowupSweep:
    """Tabulate ``|K_a(b_j)|`` and the delta-away sup over decreasing ``a``."""
    a_values = np.asarray(a_values, dtype=float)
    if a_values.size < 2 or np.any(np.diff(a_values) >= 0):
        raise ValueError("a_values must be strictly decreasing with at least two entries")
    if delta <= 0:
        raise ValueError("delta must be positive")
    points = tuple(points)
    n = len(points)
    Kb = np.empty((a_values.size, n))
    sup = np.empty(a_values.size)
    lower_ok = True
    for i, a in enumerate(a_values):
        p = ConstructionParams(points, a)
        Kb[i] = np.abs(gauss_curvature(p, np.asarray(points, dtype=complex)).K)
        lower_ok &= bool(np.all(Kb[i] >= (0.5 ** np.arange(n) / a**2) ** 2 * (1 - 1e-14)))
        sup[i] = off_axis_sup(p, delta)
    slopes = np.array([np.polyfit(np.log(1 / a_values), np.log(Kb[:, j]), 1)[0]
                       for j in range(n)])
    ratio = abs(sup[-1] - sup[-2]) / sup[-2]
    return BlowupSweep(points=points, a_values=a_values, delta=float(delta), K_at_b=Kb,
                       sup_off_axis=sup, lower_bound_ok=lower_ok, slopes=slopes,
                       sup_ratio=float(ratio))


def angle_defect_curvature(vertices, triangles):
    """Discrete Gauss curvature ``(2 pi - sum of angles) / (area / 3)`` per vertex.

    Boundary vertices get ``nan``.
    """
    V = np.asarray(vertices, dtype=float)
    T = np.asarray(triangles, dtype=int)
    nv = V.shape[0]
    angle_sum = np.zeros(nv)
    area = np.zeros(nv)
    P = V[T]
    tri_area = 0.5 * np.linalg.norm(np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0]), axis=1)
    for c in range(3):
        e1 = P[:, (c + 1) % 3] - P[:, c]
        e2 = P[:, (c + 2) % 3] - P[:, c]
        cosang = np.einsum("ij,ij->i", e1, e2) / (
            np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1))
        np.add.at(angle_sum, T[:, c], np.arccos(np.clip(cosang, -1, 1)))
        np.add.at(area, T[:, c], tri_area / 3)
    # boundary: a vertex is interior iff every incident edge is shared by two triangles
    edges = np.sort(np.concatenate([T[:, [0, 1]], T[:, [1, 2]], T[:, [2, 0]]]), axis=1)
    uniq, counts = np.unique(edges, axis=0, return_counts=True)
    boundary = np.zeros(nv, dtype=bool)
    boundary[uniq[counts == 1].ravel()] = True
    K = (2 * np.pi - angle_sum) / np.where(area > 0, area, np.nan)
    K[boundary] = np.nan
    return K

