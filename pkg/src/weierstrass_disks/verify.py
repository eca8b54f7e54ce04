"""Numerical certification of the embedding estimates, compactness and spiraling.

Each ``check_*`` returns a :class:`CheckRecord`.  Inequalities that hold
exactly are asserted with a slack of ``SLACK`` for rounding and
quadrature error; quantities that are only known to exist (``r0``) are
measured and reported.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .domain import GridSpec, build_domain, omega_zero, sample_grid
from .export import SurfaceMesh, build_mesh
from .holo import FamilyData, HelicoidData, as_data
from .immersion import QuadratureConfig, eval_F_batch
from .intersect import self_intersections
from .params import ConstructionParams

SLACK = 1e-9
HELICOID_RECT = (-1.0, 1.0, -1.0, 1.0)


@dataclass
class CheckRecord:
    name: str
    anchor: str
    passed: bool
    margin: float
    tolerance: float
    worst_z: complex | None = None
    asserted: bool = True
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.margin = float(self.margin) + 0.0  # no negative zero

    def to_dict(self) -> dict:
        wz = None if self.worst_z is None else [float(np.real(self.worst_z)), float(np.imag(self.worst_z))]
        return {"name": self.name, "anchor": self.anchor, "pass": bool(self.passed),
                "margin": _finite(self.margin), "tolerance": float(self.tolerance),
                "worst_z": wz, "asserted": self.asserted, "details": _jsonable(self.details)}


@dataclass
class VerificationReport:
    params: dict
    grid: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    def add(self, *records):
        self.checks.extend(records)
        return self

    def to_dict(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.name)
        return {"params": _jsonable(self.params), "grid": _jsonable(self.grid),
                "pass": self.passed, "checks": [c.to_dict() for c in checks]}


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else (1e308 if x > 0 else -1e308)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return _finite(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# -- sampling ---------------------------------------------------------------

@dataclass
class _Samples:
    z: np.ndarray       # (cols, ny)
    piece: np.ndarray   # (cols, ny)
    F: np.ndarray       # (cols, ny, 3)
    u: np.ndarray
    v: np.ndarray
    Fy: np.ndarray
    center: int         # row index of y = 0


def _samples(data, grid: GridSpec, quad: QuadratureConfig) -> _Samples:
    data = as_data(data)
    if isinstance(data, HelicoidData):
        x0, x1, y0, y1 = grid.clip or HELICOID_RECT
        t = np.linspace(-1.0, 1.0, grid.ny)
        t[grid.ny // 2] = 0.0
        half = max(abs(y0), abs(y1))
        x = np.linspace(x0, x1, grid.nx)
        z = x[:, None] + 1j * half * t[None, :]
        piece = np.zeros(z.shape, dtype=int)
    else:
        x, y, piece = sample_grid(build_domain(data.params), grid)
        z = x + 1j * y
    s = eval_F_batch(data, z, quad)
    return _Samples(z=z, piece=piece, F=s.F, u=s.u, v=s.v, Fy=s.Fy, center=grid.ny // 2)


def _argworst(values, z):
    idx = np.unravel_index(np.argmax(values), values.shape)
    return complex(z[idx])


# -- strip estimates ------------------------------------------------------

def check_height(data, grid: GridSpec, quad: QuadratureConfig | None = None) -> CheckRecord:
    """Third coordinate equals ``x``."""
    quad = quad or QuadratureConfig()
    s = _samples(data, grid, quad)
    err = np.abs(s.F[..., 2] - s.z.real)
    m = float(err.max())
    return CheckRecord("height", "x3(F(x, y)) = x", m <= quad.abs_tol, m, quad.abs_tol,
                       _argworst(err, s.z))


def check_u_oscillation(data, grid: GridSpec, quad: QuadratureConfig | None = None):
    """``|u(x, y) - u(x, 0)| < 1`` on every column, plus the two bounds leading to it.

    Returns a list of records: the oscillation itself and, for the construction
    family, the pointwise bound on ``|du/dy|`` and its integrated form.
    """
    data = as_data(data)
    quad = quad or QuadratureConfig()
    s = _samples(data, grid, quad)
    osc = np.abs(s.u - s.u[:, s.center:s.center + 1])
    m = float(osc.max())
    records = [CheckRecord("u_oscillation", "max |u(x,y) - u(x,0)| < 1", m < 1.0, 1.0 - m, 1.0,
                           _argworst(osc, s.z), details={"max_oscillation": m})]
    if isinstance(data, FamilyData):
        p = data.params
        x, y = s.z.real, np.abs(s.z.imag)
        S = np.stack([(x - b) ** 2 + p.a**2 for b in p.points])
        d = np.stack([np.abs(x - b) for b in p.points])
        wts = (0.5 ** np.arange(p.n)).reshape(-1, 1, 1)
        du_bound = 4 * np.sum(wts * d * y / S**2, axis=0)
        du = np.abs(data.dzh(s.z).imag)
        gap = du - du_bound
        records.append(CheckRecord(
            "u_dy_bound", "|du/dy| <= 4 sum 2^(1-j) |x-b_j||y| / ((x-b_j)^2+a^2)^2",
            bool(np.all(gap <= SLACK * np.maximum(1, du_bound))),
            float(-np.max(gap)), SLACK, _argworst(gap, s.z)))
        int_bound = 2 * np.sum(wts * d * y**2 / S**2, axis=0)
        gap = osc - int_bound
        records.append(CheckRecord(
            "u_oscillation_bound", "|u(x,y)-u(x,0)| <= 2 sum 2^(1-j) |x-b_j| y^2 / ((x-b_j)^2+a^2)^2",
            bool(np.all(gap <= SLACK)), float(-np.max(gap)), SLACK, _argworst(gap, s.z)))
    return records


def check_graph_property(data, grid: GridSpec, quad: QuadratureConfig | None = None) -> CheckRecord:
    """``<gamma'(y), gamma'(0)> > cosh(v)/2`` and monotone projection of each level curve."""
    quad = quad or QuadratureConfig()
    s = _samples(data, grid, quad)
    c = s.center
    g0 = s.Fy[:, c:c + 1, :]
    inner = np.sum(s.Fy * g0, axis=-1)
    margin = inner - np.cosh(s.v) / 2
    u0 = s.u[:, c:c + 1]
    direction = np.stack([np.sin(u0), -np.cos(u0)], axis=-1)
    proj = np.sum(s.F[..., :2] * direction, axis=-1)
    steps = np.diff(proj, axis=1)
    monotone = bool(np.all(steps > 0))
    m = float(margin.min())
    return CheckRecord(
        "graph_property", "<gamma'(y), gamma'(0)> > cosh(v)/2; F(x, .) is a graph",
        m > 0 and monotone, m, 0.0, _argworst(-margin, s.z),
        details={"projection_monotone": monotone, "min_projection_step": float(steps.min())})


def separation_bound(params: ConstructionParams, k: int, x):
    """Lower bound ``S^(3/4)/16 * exp(S^(-1/4) / (11 * 2^(n-1)))``, ``S = (x-b_k)^2 + a^2``."""
    S = (np.asarray(x) - params.points[k]) ** 2 + params.a**2
    return S**0.75 / 16 * np.exp(S**-0.25 / (11 * 2 ** (params.n - 1)))


def check_separation(data, grid: GridSpec, quad: QuadratureConfig | None = None):
    """Distance from the axis point ``F(x, 0)`` to the column ends ``F(x, +-w_k(x))``.

    Returns ``(record, r0_estimate)``.  For the construction family the record also
    certifies the exponential lower bound on ``<gamma(+-w) - gamma(0), gamma'(0)>``
    and the lower bounds on ``dv/dy`` and ``min |v|`` it rests on.
    """
    data = as_data(data)
    quad = quad or QuadratureConfig()
    s = _samples(data, grid, quad)
    c = s.center
    ends = s.F[:, [0, -1], :] - s.F[:, c:c + 1, :]
    dist = np.linalg.norm(ends, axis=-1)
    r0 = float(dist.min())
    zcol = s.z[:, [0, -1]]
    details = {}
    ok = r0 > 0
    margin = r0
    if isinstance(data, FamilyData):
        p = data.params
        x = s.z[:, c].real
        k = s.piece[:, c]
        bound = np.array([separation_bound(p, kk, xx) for kk, xx in zip(k, x)])
        g0 = s.Fy[:, c, :]
        lo_side = -np.sum(ends[:, 0, :] * g0, axis=-1)
        hi_side = np.sum(ends[:, 1, :] * g0, axis=-1)
        inner = np.minimum(lo_side, hi_side)
        rel = (inner - bound) / bound
        bound_ok = bool(np.all(rel > -SLACK))
        ok = ok and bound_ok
        margin = min(r0, float(rel.min()))
        details.update(
            bound_respected=bound_ok, min_bound_ratio=float((inner / bound).min()),
            r0_per_piece=[float(dist[k == kk].min()) for kk in range(p.n)],
            **_v_bounds(p, s))
        ok = ok and details["dv_dy_bound_ok"] and details["min_v_bound_ok"]
    worst = complex(zcol.ravel()[np.argmin(dist.ravel())])
    rec = CheckRecord("separation", "|F(x, +-w_k(x)) - F(x, 0)| > r0 > 0", bool(ok), margin,
                      0.0, worst, details={"r0_estimate": r0, **details})
    return rec, r0


def _v_bounds(p: ConstructionParams, s: _Samples):
    x, y = s.z.real, s.z.imag
    wts = (0.5 ** np.arange(p.n)).reshape(-1, 1, 1)
    S = np.stack([(x - b) ** 2 + p.a**2 for b in p.points])
    dvdy = FamilyData(p).dzh(s.z).real
    lower = 0.375 * np.sum(wts / S, axis=0)
    dv_ok = bool(np.all(dvdy > lower * (1 - SLACK)))
    # min |v| on y_k/2 <= |y| <= y_k, against S_k^(-1/4) / (11 * 2^(n-1))
    k = s.piece
    Sk = np.take_along_axis(S, k[None], axis=0)[0]
    yk = 0.5 * Sk**0.75
    band = (np.abs(y) >= yk / 2 - 1e-15) & (np.abs(y) <= yk + 1e-15)
    vmin_bound = Sk**-0.25 / (11 * 2 ** (p.n - 1))
    ratio = np.where(band, np.abs(s.v) / vmin_bound, np.inf)
    return {"dv_dy_bound_ok": dv_ok, "min_dv_dy_ratio": float((dvdy / lower).min()),
            "min_v_bound_ok": bool(ratio.min() > 1 - SLACK), "min_v_ratio": float(ratio.min())}


# -- embedding and sheets ---------------------------------------------------

def check_embedding(mesh: SurfaceMesh, r0: float | None = None):
    """No two non-adjacent triangles meet; off-axis part splits into two multi-valued graphs.

    Returns a list: the intersection record, a degeneracy record, and (when
    ``r0`` is given) the two-sheet decomposition record.
    """
    res = self_intersections(mesh.positions, mesh.triangles)
    n_hit = len(res.pairs)
    worst = None
    if n_hit:
        worst = complex(mesh.domain[mesh.triangles[res.pairs[0, 0], 0]])
    out = [
        CheckRecord("embedding", "F is an embedding (no triangle self-intersections)",
                    n_hit == 0, -float(n_hit), 0.0, worst,
                    details={"intersecting_pairs": n_hit, "candidate_pairs": res.candidates}),
        CheckRecord("mesh_degeneracy", "zero-area triangles", len(res.degenerate) == 0,
                    -float(len(res.degenerate)), 0.0, None,
                    details={"degenerate_triangles": len(res.degenerate)}),
    ]
    if r0 is not None:
        out.append(check_two_sheets(mesh, r0))
    return out


def sheet_angles(mesh: SurfaceMesh):
    """Unwrapped angle of each vertex about the vertical axis.

    The level-set line at height ``x`` points along ``(sin u0, -cos u0)``,
    i.e. angle ``u0 - pi/2``; the ``y < 0`` half points the opposite way.
    """
    ref = mesh.angle_ref - np.pi / 2 + np.where(mesh.sheet < 0, np.pi, 0.0)
    raw = np.arctan2(mesh.positions[:, 1], mesh.positions[:, 0])
    return ref + np.angle(np.exp(1j * (raw - ref)))


def check_two_sheets(mesh: SurfaceMesh, r0: float) -> CheckRecord:
    """Inside ``0 < r < r0`` the surface is two connected multi-valued graphs.

    Each sheet is mapped to ``(theta, r)`` with ``theta`` unwrapped; the
    image triangles must not overlap (coplanar intersection test) and must
    all carry the same orientation.
    """
    r = np.hypot(mesh.positions[:, 0], mesh.positions[:, 1])
    off = (r > 0) & (r < r0)
    theta = sheet_angles(mesh)
    T = mesh.triangles
    info = {}
    ok = True
    on_axis_leak = bool(np.any(off & (mesh.sheet == 0)))
    ok &= not on_axis_leak
    for name, sgn in (("upper", 1), ("lower", -1)):
        sel = off & (mesh.sheet == sgn)
        tri = T[np.all(sel[T], axis=1)]
        idx = np.flatnonzero(sel)
        if idx.size == 0:
            info[name] = {"vertices": 0}
            ok = False
            continue
        # the sheet is {0 < |y| < y*(x)}, connected through y -> 0; the axis row stands in
        # for that limit so coarse columns with no vertex inside r0 do not split it
        link = sel | (mesh.sheet == 0)
        lidx = np.flatnonzero(link)
        local = -np.ones(len(r), dtype=int)
        local[lidx] = np.arange(lidx.size)
        e = np.concatenate([T[:, [0, 1]], T[:, [1, 2]], T[:, [2, 0]]])
        e = e[np.all(link[e], axis=1)]
        g = coo_matrix((np.ones(len(e)), (local[e[:, 0]], local[e[:, 1]])), shape=(lidx.size,) * 2)
        _, labels = connected_components(g, directed=False)
        ncomp = np.unique(labels[local[idx]]).size
        flat = np.stack([theta, r, np.zeros_like(r)], axis=1)
        P = flat[tri]
        orient = np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0])[:, 2]
        consistent = bool(np.all(orient > 0) or np.all(orient < 0))
        overlaps = len(self_intersections(flat, tri).pairs) if len(tri) else 0
        info[name] = {"vertices": int(idx.size), "components": int(ncomp),
                      "orientation_consistent": consistent, "overlapping_pairs": overlaps,
                      "turns": float(np.ptp(theta[idx]) / (2 * np.pi))}
        ok &= ncomp == 1 and consistent and overlaps == 0
    return CheckRecord("two_sheets", "{0 < r < r0} is two multi-valued graphs", bool(ok),
                       float(r0), 0.0, None, details={"r0": r0, "on_axis_leak": on_axis_leak, **info})


@dataclass
class SheetCount:
    j: int
    t: float
    a: float
    u_jump: float
    turns: float
    predicted: float
    weighted_limit: float
    full_limit: float


def sheet_count(params: ConstructionParams, j: int, t: float) -> SheetCount:
    """Turns of the level-set direction between heights ``b_j + t`` and ``b_j + 2t``.

    ``j`` is 1-based, matching ``b_j``.  ``predicted`` is ``1/(4 pi t)``;
    ``weighted_limit`` is the ``a -> 0`` value ``2^(1-j) / (2t)`` of the
    jump in ``u`` coming from ``b_j`` alone, and ``full_limit`` adds the
    smooth contributions ``2^(1-i) (1/(x1 - b_i) - 1/(x2 - b_i))`` of the
    other points.
    """
    if not 1 <= j <= params.n:
        raise ValueError(f"point index j must be in 1..{params.n}")
    if t <= 0:
        raise ValueError("t must be positive")
    spec = build_domain(params)
    lo, hi = spec.lo[j - 1], spec.hi[j - 1]
    b = params.points[j - 1]
    if not (lo <= b + t and b + 2 * t <= hi):
        raise ValueError(f"[b_j + t, b_j + 2t] = [{b + t}, {b + 2 * t}] leaves piece {j}")
    u = FamilyData(params).h(np.array([b + t, b + 2 * t], dtype=complex)).real
    jump = float(abs(u[0] - u[1]))
    full = abs(sum(0.5**i * (1 / (b + t - bi) - 1 / (b + 2 * t - bi))
                   for i, bi in enumerate(params.points)))
    return SheetCount(j=j, t=float(t), a=params.a, u_jump=jump, turns=jump / (2 * np.pi),
                      predicted=1 / (4 * np.pi * t), weighted_limit=0.5 ** (j - 1) / (2 * t),
                      full_limit=float(full))


# -- compactness --------------------------------------------------------------

def _limit_rotation(points, a, x):
    """Per-component angle ``sum_j 2^(1-j) sign(x - b_j) pi / (2a)`` that ``u_a(x, 0)`` drifts by."""
    x = np.asarray(x, dtype=float)
    return sum(0.5**j * np.sign(x - b) * np.pi / (2 * a) for j, b in enumerate(points))


@dataclass
class ConvergenceTable:
    a_values: list
    dF: list
    dD1: list
    dD2: list
    dF_scaled: list
    dD1_scaled: list
    dD2_scaled: list


def convergence_table(params_list, delta: float, nx: int = 200, ny: int = 21, h: float = 1e-3,
                      quad: QuadratureConfig | None = None, align: bool = False, data=None):
    """Sup-norm differences of ``F`` and its finite-difference derivatives on ``K_delta``.

    Samples are kept ``2h`` inside the region so every stencil point stays in
    every domain.  ``*_scaled`` divide pointwise by ``cosh^2 v`` of the
    smaller ``a`` of each pair.  With ``align`` each ``F_a`` is first rotated
    about the vertical axis by its drift angle on each component.
    """
    quad = quad or QuadratureConfig()
    params_list = list(params_list)
    region = omega_zero([build_domain(p) for p in params_list], delta)
    X, Y = region.sample(nx, ny, margin=2 * h)
    Z = X + 1j * Y
    datas = data or [FamilyData(p) for p in params_list]
    stencil = {"c": 0, "xp": h, "xm": -h, "yp": 1j * h, "ym": -1j * h,
               "pp": h + 1j * h, "pm": h - 1j * h, "mp": -h + 1j * h, "mm": -h - 1j * h}
    keys = list(stencil)
    allz = np.stack([Z + stencil[k] for k in keys])

    def jets(d, p):
        F = eval_F_batch(d, allz, quad).F
        if align:
            ang = -_limit_rotation(p.points, p.a, allz.real)
            c, s = np.cos(ang), np.sin(ang)
            F = np.stack([c * F[..., 0] - s * F[..., 1], s * F[..., 0] + c * F[..., 1], F[..., 2]], -1)
        f = dict(zip(keys, F))
        D1 = np.concatenate([(f["xp"] - f["xm"]) / (2 * h), (f["yp"] - f["ym"]) / (2 * h)], -1)
        D2 = np.concatenate([(f["xp"] - 2 * f["c"] + f["xm"]) / h**2,
                             (f["yp"] - 2 * f["c"] + f["ym"]) / h**2,
                             (f["pp"] - f["pm"] - f["mp"] + f["mm"]) / (4 * h * h)], -1)
        v = d.h(Z).imag
        return f["c"], D1, D2, np.cosh(v) ** 2

    J = [jets(d, p) for d, p in zip(datas, params_list)]
    tab = ConvergenceTable([p.a for p in params_list], [], [], [], [], [], [])
    for A, B in zip(J[:-1], J[1:]):
        for i, (raw, scaled) in enumerate(((tab.dF, tab.dF_scaled), (tab.dD1, tab.dD1_scaled),
                                           (tab.dD2, tab.dD2_scaled))):
            diff = np.abs(B[i] - A[i]).max(axis=-1)
            raw.append(float(diff.max()))
            scaled.append(float((diff / B[3]).max()))
    return tab


def check_convergence(params_list, delta: float, grid: GridSpec | None = None,
                      quad: QuadratureConfig | None = None, tol: float = 1e-3, h: float = 1e-3,
                      align: bool = False, data=None) -> CheckRecord:
    """Cauchy-sequence proxy for C^2 convergence on compact subsets as ``a -> 0``.

    Passes iff the conformally scaled sup-differences of ``F``, ``DF`` and
    ``D^2 F`` all decrease strictly and the last scaled ``F`` difference is
    below ``tol``.  Also records the (trivially true) fact that, for the
    smallest ``a``, heights between consecutive planes ``x3 = b_j`` stay
    between them.
    """
    params_list = list(params_list)
    if len(params_list) < 3:
        raise ValueError("need at least three values of a")
    a = [p.a for p in params_list]
    if any(a2 >= a1 for a1, a2 in zip(a, a[1:])):
        raise ValueError("a values must be strictly decreasing")
    grid = grid or GridSpec(nx=200, ny=21)
    tab = convergence_table(params_list, delta, grid.nx, grid.ny, h, quad, align, data)

    def decreasing(seq):
        return all(b < a_ for a_, b in zip(seq, seq[1:]))

    dec = {name: decreasing(getattr(tab, name)) for name in
           ("dF_scaled", "dD1_scaled", "dD2_scaled")}
    last = tab.dF_scaled[-1]
    ok = all(dec.values()) and last < tol

    p = params_list[-1]
    planes = np.concatenate([[-0.5], p.points, [0.5]])
    layer_ok = True
    spec = build_domain(p)
    x, y, _ = sample_grid(spec, grid)
    F3 = eval_F_batch(p, (x + 1j * y)[:, [0, grid.ny // 2, -1]], quad).F[..., 2]
    xc = x[:, 0]
    for lo, hi in zip(planes[:-1], planes[1:]):
        sel = (xc > lo + delta) & (xc < hi - delta)
        if sel.any():
            layer_ok &= bool(np.all((F3[sel] > lo) & (F3[sel] < hi)))

    return CheckRecord(
        "convergence", "F_a converges in C^2 on compact subsets (Cauchy proxy)",
        bool(ok and layer_ok), tol - last, tol, None,
        details={**{k: v for k, v in asdict(tab).items()}, "decreasing": dec,
                 "layers_between_planes": layer_ok, "aligned": align, "delta": delta})


# -- full run -----------------------------------------------------------------

# fixed decreasing sequence; sequences starting at larger a are not yet monotone
DEFAULT_CONVERGENCE_A = (0.1, 0.05, 0.025, 0.0125)


def run_all(params: ConstructionParams, grid: GridSpec, quad: QuadratureConfig | None = None,
            a_list=None, delta: float = 0.1, align: bool = True,
            embed_grid: GridSpec | None = None) -> VerificationReport:
    """Every asserted check for one family member, plus measured quantities."""
    quad = quad or QuadratureConfig()
    rep = VerificationReport(params=params.to_dict(),
                             grid={**grid.to_dict(), "quadrature": quad.to_dict(), "delta": delta})
    rep.add(check_height(params, grid, quad))
    rep.add(*check_u_oscillation(params, grid, quad))
    rep.add(check_graph_property(params, grid, quad))
    sep, r0 = check_separation(params, grid, quad)
    rep.add(sep)
    mesh = build_mesh(params, embed_grid or grid, quad)
    rep.add(*check_embedding(mesh, r0))
    a_list = list(a_list) if a_list else list(DEFAULT_CONVERGENCE_A)
    plist = [params.with_a(a) for a in a_list]
    rep.add(check_convergence(plist, delta, GridSpec(nx=200, ny=21), quad, align=align))
    for j in range(1, params.n + 1):
        spec = build_domain(params)
        room = spec.hi[j - 1] - params.points[j - 1]
        t = min(0.05, room / 2.5)
        sc = sheet_count(params, j, t)
        rep.add(CheckRecord(f"sheet_count_{j}", "N_t ~ 1/(4 pi t) turns near b_j", True,
                            sc.turns, 0.0, complex(params.points[j - 1] + t), asserted=False,
                            details=asdict(sc)))
    return rep
