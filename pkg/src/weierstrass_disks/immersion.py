"""The minimal immersion ``F(x, y)`` built from ``g = exp(i h)``, ``phi = dz``.

With ``h = u + i v`` the differentials are

    dF/dx = (sinh v cos u, sinh v sin u, 1)
    dF/dy = (cosh v sin u, -cosh v cos u, 0)

and ``v`` vanishes on the real axis, so ``F(x, 0) = (0, 0, x)``.  The
remaining vertical leg is integrated with a vectorised adaptive
Gauss-Kronrod (7, 15) rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .holo import DomainError, as_data

# Kronrod 15-point nodes (non-negative half) and weights; every other node is Gauss 7.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
KRONROD_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


class QuadratureError(RuntimeError):
    def __init__(self, message, achieved):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the vertical-leg integrator.

    ``height_fault`` is a negative-control hook: a nonzero value adds
    ``height_fault * y`` to the third coordinate, emulating a broken
    integrand.  Leave it at 0 for real runs.
    """

    abs_tol: float = 1e-10
    max_depth: int = 40
    rule: str = "gauss-kronrod-7-15"
    height_fault: float = 0.0

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.rule != "gauss-kronrod-7-15":
            raise ValueError(f"unsupported quadrature rule {self.rule!r}")

    def to_dict(self) -> dict:
        return {"abs_tol": self.abs_tol, "max_depth": self.max_depth, "rule": self.rule}


@dataclass
class ImmersionSample:
    z: np.ndarray
    F: np.ndarray
    Fx: np.ndarray
    Fy: np.ndarray
    u: np.ndarray
    v: np.ndarray
    quad_error: np.ndarray


def tangents(u, v):
    """Closed-form ``(dF/dx, dF/dy)`` from ``u``, ``v`` arrays."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    sv, cv, su, cu = np.sinh(v), np.cosh(v), np.sin(u), np.cos(u)
    Fx = np.stack([sv * cu, sv * su, np.ones_like(u)], axis=-1)
    Fy = np.stack([cv * su, -cv * cu, np.zeros_like(u)], axis=-1)
    return Fx, Fy


def _dFdy(data, x, t):
    h = data.h(x + 1j * t)
    cv = np.cosh(h.imag)
    return cv * np.sin(h.real), -cv * np.cos(h.real)


def integrate_vertical(data, x, y0, y1, tol, max_depth=40, strict=True):
    """Integrate ``dF/dy`` from ``y0`` to ``y1`` at abscissa ``x``, elementwise.

    ``tol`` is the absolute error budget of each integral (array or scalar);
    it is spread over subintervals in proportion to their length.

    Returns ``(I1, I2, err)``: the first two components and the summed
    error estimates.
    """
    x, y0, y1, tol = np.broadcast_arrays(*(np.asarray(q, dtype=float) for q in (x, y0, y1, tol)))
    shape = x.shape
    x, y0, y1, tol = (q.ravel() for q in (x, y0, y1, tol))
    m = x.size
    out1 = np.zeros(m)
    out2 = np.zeros(m)
    err = np.zeros(m)
    span = np.abs(y1 - y0)
    density = np.where(span > 0, tol / np.where(span > 0, span, 1.0), np.inf)

    owner = np.flatnonzero(span > 0)
    lo, hi = y0[owner], y1[owner]
    depth = 0
    while owner.size:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * KRONROD_NODES[None, :]
        f1, f2 = _dFdy(data, x[owner][:, None], t)
        k1 = half * (f1 @ KRONROD_WEIGHTS)
        k2 = half * (f2 @ KRONROD_WEIGHTS)
        g1 = half * (f1 @ GAUSS_WEIGHTS)
        g2 = half * (f2 @ GAUSS_WEIGHTS)
        e = np.hypot(k1 - g1, k2 - g2)
        ok = e <= density[owner] * np.abs(hi - lo)
        if depth >= max_depth:
            ok[:] = True
        np.add.at(out1, owner[ok], k1[ok])
        np.add.at(out2, owner[ok], k2[ok])
        np.add.at(err, owner[ok], e[ok])
        keep = ~ok
        owner = np.concatenate([owner[keep], owner[keep]])
        lo, hi = np.concatenate([lo[keep], mid[keep]]), np.concatenate([mid[keep], hi[keep]])
        depth += 1
    if strict and np.any(err > tol):
        worst = float(np.max(err - tol))
        raise QuadratureError(
            f"quadrature did not reach abs_tol within max_depth={max_depth}", worst)
    return out1.reshape(shape), out2.reshape(shape), err.reshape(shape)


def _check_inside(data, z):
    inside = np.asarray(data.contains(z))
    if not np.all(inside):
        bad = np.atleast_1d(z)[~np.atleast_1d(inside)][0]
        raise DomainError(f"point {bad} lies outside the domain")


def _assemble(data, z, I1, I2, err, quad):
    x, y = z.real, z.imag
    F = np.stack([I1, I2, x + quad.height_fault * y], axis=-1)
    h = data.h(z)
    Fx, Fy = tangents(h.real, h.imag)
    return ImmersionSample(z=z, F=F, Fx=Fx, Fy=Fy, u=h.real, v=h.imag, quad_error=err)


def eval_F(data, z, quad: QuadratureConfig | None = None) -> ImmersionSample:
    """Immersion at ``z`` (scalar or array), each point integrated independently.

    ``data`` is a ``ConstructionParams`` or a holomorphic-data object such as
    ``HelicoidData``.
    """
    quad = quad or QuadratureConfig()
    data = as_data(data)
    z = np.asarray(z, dtype=complex)
    _check_inside(data, z)
    I1, I2, err = integrate_vertical(data, z.real, 0.0, z.imag, quad.abs_tol, quad.max_depth)
    return _assemble(data, z, I1, I2, err, quad)


def eval_F_batch(data, zs, quad: QuadratureConfig | None = None) -> ImmersionSample:
    """Immersion at many points, sharing the vertical integral within each column.

    Points with the same real part are sorted by ``|y|`` on each side of the
    axis and integrated segment by segment outward from ``y = 0``; each
    column's error budget is ``abs_tol`` in total.
    """
    quad = quad or QuadratureConfig()
    data = as_data(data)
    zs = np.asarray(zs, dtype=complex)
    shape = zs.shape
    z = zs.ravel()
    _check_inside(data, z)
    x, y = z.real, z.imag

    # chains: points grouped by (x, sign y), ordered by |y|
    side = np.sign(y)
    order = np.lexsort((np.abs(y), side, x))
    xs, ys, ss = x[order], y[order], side[order]
    new_chain = np.ones(z.size, dtype=bool)
    new_chain[1:] = (xs[1:] != xs[:-1]) | (ss[1:] != ss[:-1])
    prev = np.concatenate([[0.0], ys[:-1]])
    prev = np.where(new_chain, 0.0, prev)

    chain_id = np.cumsum(new_chain) - 1
    reach = np.zeros(chain_id[-1] + 1 if z.size else 0)
    np.maximum.at(reach, chain_id, np.abs(ys))
    seg_tol = quad.abs_tol * np.abs(ys - prev) / np.where(reach[chain_id] > 0, reach[chain_id], 1.0)
    seg_tol = np.maximum(seg_tol, 1e-300)

    s1, s2, se = integrate_vertical(data, xs, prev, ys, seg_tol, quad.max_depth, strict=False)
    c1, c2, ce = (_chain_cumsum(q, new_chain) for q in (s1, s2, se))
    if np.any(ce > quad.abs_tol):
        raise QuadratureError("column integration exceeded abs_tol",
                              float(np.max(ce - quad.abs_tol)))
    I1, I2, err = np.empty(z.size), np.empty(z.size), np.empty(z.size)
    I1[order], I2[order], err[order] = c1, c2, ce
    s = _assemble(data, z, I1, I2, err, quad)
    return ImmersionSample(
        z=zs, F=s.F.reshape(shape + (3,)), Fx=s.Fx.reshape(shape + (3,)),
        Fy=s.Fy.reshape(shape + (3,)), u=s.u.reshape(shape), v=s.v.reshape(shape),
        quad_error=s.quad_error.reshape(shape))


def _chain_cumsum(vals, starts):
    out = np.empty_like(vals)
    bounds = np.append(np.flatnonzero(starts), vals.size)
    for i0, i1 in zip(bounds[:-1], bounds[1:]):
        out[i0:i1] = np.cumsum(vals[i0:i1])
    return out


def helicoid_oracle(z):
    """Closed form ``(sinh y sin x, -sinh y cos x, x)`` of the helicoid immersion."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    return np.stack([np.sinh(y) * np.sin(x), -np.sinh(y) * np.cos(x), x], axis=-1)


def weierstrass_integrand(h):
    """Complex integrand ``(1/2 (1/g - g), i/2 (1/g + g), 1)`` for ``g = exp(i h)``, ``phi = dz``."""
    g = np.exp(1j * np.asarray(h))
    return np.stack([0.5 * (1 / g - g), 0.5j * (1 / g + g), np.ones_like(g)], axis=-1)
