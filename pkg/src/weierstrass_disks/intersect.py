"""Triangle mesh self-intersection search.

Broad phase: uniform spatial hash of triangle bounding boxes.  Narrow phase:
two triangles meet iff an edge of one meets the other, tested with
orientation determinants; coplanar configurations fall back to a 2-D test
in the dominant projection plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MAX_CELLS_PER_TRI = 64


@dataclass
class IntersectionResult:
    pairs: np.ndarray        # (m, 2) triangle index pairs that intersect
    degenerate: np.ndarray   # indices of zero-area triangles
    candidates: int          # pairs reaching the narrow phase


def candidate_pairs(V, T, cell: float | None = None):
    """Pairs ``i < j`` of non-adjacent triangles whose bounding boxes overlap."""
    P = V[T]
    lo = P.min(axis=1)
    hi = P.max(axis=1)
    ext = (hi - lo).max(axis=1)
    if cell is None:
        cell = 2.0 * float(np.median(ext)) if T.shape[0] else 1.0
        cell = max(cell, 1e-12)
    origin = lo.min(axis=0) if T.shape[0] else np.zeros(3)
    c0 = np.floor((lo - origin) / cell).astype(np.int64)
    c1 = np.floor((hi - origin) / cell).astype(np.int64)
    span = c1 - c0 + 1
    # very long triangles would flood the hash; they go to a brute-force list instead
    counts = span.prod(axis=1)
    big = counts > _MAX_CELLS_PER_TRI
    small = np.flatnonzero(~big)

    tri = np.repeat(small, counts[small])
    start = np.repeat(np.cumsum(counts[small]) - counts[small], counts[small])
    local = np.arange(tri.size) - start
    sy, sz = span[tri, 1], span[tri, 2]
    ix = c0[tri, 0] + local // (sy * sz)
    iy = c0[tri, 1] + (local // sz) % sy
    iz = c0[tri, 2] + local % sz
    dims = c1.max(axis=0) + 2 if T.shape[0] else np.ones(3, dtype=np.int64)
    key = (ix * dims[1] + iy) * dims[2] + iz
    order = np.argsort(key, kind="stable")
    key, tri = key[order], tri[order]

    out = []
    d = 1
    while d < key.size:
        same = key[d:] == key[:-d]
        if not same.any():
            break
        out.append(np.stack([tri[:-d][same], tri[d:][same]], axis=1))
        d += 1
    bigs = np.flatnonzero(big)
    if bigs.size:
        allt = np.arange(T.shape[0])
        bb = np.stack(np.meshgrid(bigs, allt, indexing="ij"), axis=-1).reshape(-1, 2)
        out.append(bb[bb[:, 0] != bb[:, 1]])
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    pairs = np.sort(np.concatenate(out), axis=1)
    pairs = np.unique(pairs, axis=0)
    i, j = pairs[:, 0], pairs[:, 1]
    overlap = np.all((lo[i] <= hi[j]) & (lo[j] <= hi[i]), axis=1)
    pairs = pairs[overlap]
    shared = (T[pairs[:, 0]][:, :, None] == T[pairs[:, 1]][:, None, :]).any(axis=(1, 2))
    return pairs[~shared]


def _inside2d(p, a, b, c):
    def cross(o, q, r):
        return (q[:, 0] - o[:, 0]) * (r[:, 1] - o[:, 1]) - (q[:, 1] - o[:, 1]) * (r[:, 0] - o[:, 0])

    d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
    neg = (d1 < 0) | (d2 < 0) | (d3 < 0)
    pos = (d1 > 0) | (d2 > 0) | (d3 > 0)
    return ~(neg & pos)


def _segments_cross2d(p, q, r, s):
    def cross(o, a, b):
        return (a[:, 0] - o[:, 0]) * (b[:, 1] - o[:, 1]) - (a[:, 1] - o[:, 1]) * (b[:, 0] - o[:, 0])

    d1, d2 = cross(r, s, p), cross(r, s, q)
    d3, d4 = cross(p, q, r), cross(p, q, s)
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def _drop_axis(pts, axis):
    keep = np.array([[1, 2], [0, 2], [0, 1]])[axis]
    return np.take_along_axis(pts, keep, axis=1)


def segment_triangle(P, Q, A, B, C, eps):
    """Vectorised closed test: does segment ``PQ`` meet triangle ``ABC``?"""
    n = np.cross(B - A, C - A)
    nn = np.linalg.norm(n, axis=1)
    nn_safe = np.where(nn > 0, nn, 1.0)
    dP = np.einsum("ij,ij->i", n, P - A) / nn_safe
    dQ = np.einsum("ij,ij->i", n, Q - A) / nn_safe
    coplanar = (np.abs(dP) <= eps) & (np.abs(dQ) <= eps)
    hit = np.zeros(P.shape[0], dtype=bool)

    cross_plane = ~coplanar & (dP * dQ <= 0) & (dP != dQ)
    if cross_plane.any():
        k = cross_plane
        t = dP[k] / (dP[k] - dQ[k])
        X = P[k] + t[:, None] * (Q[k] - P[k])
        nk = n[k]
        a, b, c = A[k], B[k], C[k]
        s1 = np.einsum("ij,ij->i", np.cross(b - a, X - a), nk)
        s2 = np.einsum("ij,ij->i", np.cross(c - b, X - b), nk)
        s3 = np.einsum("ij,ij->i", np.cross(a - c, X - c), nk)
        tol = -eps * nn[k] * np.maximum(np.linalg.norm(b - a, axis=1), 1e-300)
        hit[k] = (s1 >= tol) & (s2 >= tol) & (s3 >= tol)

    if coplanar.any():
        k = coplanar
        axis = np.argmax(np.abs(n[k]), axis=1)
        p2, q2 = _drop_axis(P[k], axis), _drop_axis(Q[k], axis)
        a2, b2, c2 = (_drop_axis(M[k], axis) for M in (A, B, C))
        h = _inside2d(p2, a2, b2, c2) | _inside2d(q2, a2, b2, c2)
        for e0, e1 in ((a2, b2), (b2, c2), (c2, a2)):
            h |= _segments_cross2d(p2, q2, e0, e1)
        hit[k] = h
    # zero-area targets are reported separately, never as intersections
    hit &= nn > 0
    return hit


def triangles_intersect(V, T, pairs, eps: float | None = None, chunk: int = 200_000):
    """Boolean mask over ``pairs``: do the two triangles share any point?"""
    if eps is None:
        eps = 1e-12 * max(1.0, float(np.ptp(V, axis=0).max()) if V.size else 1.0)
    out = np.zeros(len(pairs), dtype=bool)
    for s in range(0, len(pairs), chunk):
        pr = pairs[s:s + chunk]
        TA, TB = V[T[pr[:, 0]]], V[T[pr[:, 1]]]
        hit = np.zeros(len(pr), dtype=bool)
        for X, Y in ((TA, TB), (TB, TA)):
            for e in range(3):
                P, Q = X[:, e], X[:, (e + 1) % 3]
                hit |= segment_triangle(P, Q, Y[:, 0], Y[:, 1], Y[:, 2], eps)
        out[s:s + chunk] = hit
    return out


def self_intersections(vertices, triangles, cell: float | None = None) -> IntersectionResult:
    """All intersecting pairs of non-adjacent triangles (sharing no vertex)."""
    V = np.asarray(vertices, dtype=float)
    T = np.asarray(triangles, dtype=np.int64)
    if T.size == 0:
        return IntersectionResult(np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.int64), 0)
    P = V[T]
    area2 = np.linalg.norm(np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0]), axis=1)
    scale = max(float(np.ptp(V, axis=0).max()), 1e-300)
    degenerate = np.flatnonzero(area2 <= 1e-14 * scale**2)
    pairs = candidate_pairs(V, T, cell)
    hit = triangles_intersect(V, T, pairs)
    return IntersectionResult(pairs=pairs[hit], degenerate=degenerate, candidates=len(pairs))
