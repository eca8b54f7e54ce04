"""The pinched strip domain and its sampling grids.

The domain is a union of pieces, one per blowup point.  Piece ``k`` covers
the x-range ``[s_{k-1}, s_k]`` and the vertical band
``|y| <= ((x - b_k)**2 + a**2)**0.75 / 2``.  With the default midpoint
splits every x in piece ``k`` has ``b_k`` as its nearest blowup point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import ConstructionParams

SPLIT_RULES = ("midpoint", "literal")


@dataclass(frozen=True)
class DomainSpec:
    params: ConstructionParams
    lo: np.ndarray = field(repr=False)
    hi: np.ndarray = field(repr=False)
    rule: str = "midpoint"

    @property
    def splits(self) -> np.ndarray:
        """``s_0 = -1/2, ..., s_n = 1/2`` (only meaningful for the midpoint rule)."""
        return np.concatenate([self.lo[:1], self.hi])

    @property
    def n(self) -> int:
        return self.params.n

    def half_width(self, k: int, x):
        """Half-width ``w_k(x)`` of piece ``k`` (0-based)."""
        b = self.params.points[k]
        return 0.5 * ((np.asarray(x, dtype=float) - b) ** 2 + self.params.a**2) ** 0.75

    def column_width(self, x):
        """Union half-width at ``x``: max of ``w_k(x)`` over pieces whose x-range holds ``x``.

        Zero (and ``contains`` false) outside every piece.
        """
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, -np.inf)
        for k in range(self.n):
            inside = (x >= self.lo[k]) & (x <= self.hi[k])
            out = np.where(inside, np.maximum(out, self.half_width(k, x)), out)
        return out

    def piece_of(self, x):
        """0-based index of the first piece whose x-range contains ``x``, -1 if none."""
        x = np.asarray(x, dtype=float)
        idx = np.full(x.shape, -1, dtype=int)
        for k in reversed(range(self.n)):
            inside = (x >= self.lo[k]) & (x <= self.hi[k])
            idx = np.where(inside, k, idx)
        return idx


@dataclass(frozen=True)
class GridSpec:
    """Per-piece structured sampling.

    ``clip`` is an optional ``(x0, x1, y0, y1)`` rectangle intersected with
    each piece, for studies on compact subsets.
    """

    nx: int = 200
    ny: int = 41
    clip: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if self.nx < 2:
            raise ValueError("nx must be >= 2")
        if self.ny < 3 or self.ny % 2 == 0:
            raise ValueError("ny must be odd and >= 3 so that y = 0 is sampled")

    def to_dict(self) -> dict:
        return {"nx": self.nx, "ny": self.ny, "clip": list(self.clip) if self.clip else None}


def build_domain(params: ConstructionParams, rule: str = "midpoint") -> DomainSpec:
    """Piece x-ranges for ``params``.

    ``rule="literal"`` reads the piece bounds as differences ``(b_{j+1} - b_j)/2``
    instead of midpoints; it is kept only for side-by-side comparison and does
    not in general tile ``[-1/2, 1/2]``.
    """
    if rule not in SPLIT_RULES:
        raise ValueError(f"unknown split rule {rule!r}; expected one of {SPLIT_RULES}")
    b = np.asarray(params.points)
    if rule == "midpoint":
        inner = 0.5 * (b[:-1] + b[1:])
    else:
        inner = 0.5 * (b[1:] - b[:-1])
    lo = np.concatenate([[-0.5], inner])
    hi = np.concatenate([inner, [0.5]])
    return DomainSpec(params=params, lo=lo, hi=hi, rule=rule)


def contains(spec: DomainSpec, z):
    """Closed membership test; accepts scalars or arrays of complex points."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    res = np.abs(y) <= spec.column_width(x)
    return bool(res) if res.ndim == 0 else res


def sample_grid(spec: DomainSpec, grid: GridSpec):
    """Structured samples of every piece.

    Returns ``(x, y, piece)`` arrays of shape ``(n_pieces * nx, ny)``; row
    ``k * nx + i`` is column ``i`` of piece ``k``.  Columns at a shared split
    appear once per piece, each with its own piece half-width.
    """
    xs, ys, ks = [], [], []
    t = np.linspace(-1.0, 1.0, grid.ny)
    t[grid.ny // 2] = 0.0
    for k in range(spec.n):
        lo, hi = spec.lo[k], spec.hi[k]
        if grid.clip is not None:
            lo, hi = max(lo, grid.clip[0]), min(hi, grid.clip[1])
        if lo > hi:
            continue
        x = np.linspace(lo, hi, grid.nx)
        w = spec.half_width(k, x)
        if grid.clip is None:
            y = w[:, None] * t[None, :]
        else:
            y0 = np.maximum(-w, grid.clip[2])
            y1 = np.minimum(w, grid.clip[3])
            y = y0[:, None] + (y1 - y0)[:, None] * (t[None, :] + 1.0) / 2.0
        xs.append(np.repeat(x[:, None], grid.ny, axis=1))
        ys.append(y)
        ks.append(np.full((grid.nx, grid.ny), k))
    if not xs:
        empty = np.zeros((0, grid.ny))
        return empty, empty, empty.astype(int)
    return np.vstack(xs), np.vstack(ys), np.vstack(ks)


def mesh_columns(spec: DomainSpec, grid: GridSpec):
    """Column abscissas and union half-widths for a single merged mesh.

    Shared split columns are emitted once, with the union width, so that
    adjacent pieces stitch into one structured grid.
    """
    cols = []
    for k in range(spec.n):
        lo, hi = spec.lo[k], spec.hi[k]
        if grid.clip is not None:
            lo, hi = max(lo, grid.clip[0]), min(hi, grid.clip[1])
        if lo > hi:
            continue
        x = np.linspace(lo, hi, grid.nx)
        if cols and np.isclose(cols[-1][-1], x[0], rtol=0, atol=1e-15):
            x = x[1:]
        cols.append(x)
    x = np.concatenate(cols) if cols else np.zeros(0)
    return x, spec.column_width(x)


@dataclass(frozen=True)
class CompactSubset:
    """``{z in every listed domain : min_j |Re z - b_j| >= delta}``.

    ``intervals`` are the closed x-intervals making up the region.
    """

    specs: tuple[DomainSpec, ...]
    delta: float
    intervals: tuple[tuple[float, float], ...]

    def half_width(self, x):
        x = np.asarray(x, dtype=float)
        w = np.min([s.column_width(x) for s in self.specs], axis=0)
        return np.where(self._x_ok(x), w, -np.inf)

    def _x_ok(self, x):
        ok = np.zeros(np.shape(x), dtype=bool)
        for lo, hi in self.intervals:
            ok |= (x >= lo) & (x <= hi)
        return ok

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        res = np.abs(z.imag) <= self.half_width(z.real)
        return bool(res) if res.ndim == 0 else res

    def sample(self, nx: int, ny: int, margin: float = 0.0):
        """Grid on the region; ``margin`` shrinks each column (for finite-difference stencils)."""
        total = sum(hi - lo for lo, hi in self.intervals)
        t = np.linspace(-1.0, 1.0, ny)
        xs, ys = [], []
        for lo, hi in self.intervals:
            m = max(2, int(round(nx * (hi - lo) / total))) if total > 0 else 2
            x = np.linspace(lo + margin, hi - margin, m)
            w = np.maximum(self.half_width(x) - margin, 0.0)
            xs.append(np.repeat(x[:, None], ny, axis=1))
            ys.append(w[:, None] * t[None, :])
        return np.vstack(xs), np.vstack(ys)


def omega_zero(specs, delta: float) -> CompactSubset:
    """Compact piece of the limit domain used for convergence studies.

    ``specs`` are domains of one point set over several values of ``a``.
    Raises ``ValueError`` if the region is empty.
    """
    specs = tuple(specs)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not specs:
        raise ValueError("need at least one domain")
    b = np.asarray(specs[0].params.points)
    # complement of the open delta-neighbourhoods of the b_j inside [-1/2, 1/2]
    intervals = []
    lo = -0.5
    for bj in b:
        hi = bj - delta
        if hi >= lo:
            intervals.append((lo, min(hi, 0.5)))
        lo = max(lo, bj + delta)
    if lo <= 0.5:
        intervals.append((lo, 0.5))
    intervals = [(lo, hi) for lo, hi in intervals if hi >= lo]
    if not intervals:
        raise ValueError(f"compact subset is empty for delta={delta}")
    return CompactSubset(specs=specs, delta=float(delta), intervals=tuple(intervals))
