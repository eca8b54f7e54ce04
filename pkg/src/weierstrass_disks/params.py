"""Construction parameters for one member of the family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class ConstructionParams:
    """Blowup heights ``b_1 < ... < b_n`` and pinch parameter ``a``.

    The base point of the immersion is always ``z0 = 0``.
    """

    points: tuple[float, ...]
    a: float

    def __init__(self, points: Sequence[float] | float, a: float):
        if isinstance(points, (int, float)):
            points = (points,)
        pts = tuple(float(b) for b in points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "a", float(a))
        self._validate()

    def _validate(self):
        pts = self.points
        if len(pts) < 1:
            raise ValueError("need at least one blowup point")
        if any(b2 <= b1 for b1, b2 in zip(pts, pts[1:])):
            raise ValueError(f"points must be strictly increasing, got {pts}")
        if any(not -0.5 < b < 0.5 for b in pts):
            raise ValueError(f"points must lie in (-1/2, 1/2), got {pts}")
        # a = 1/2 is admitted: every construction step still holds there
        if not 0.0 < self.a <= 0.5:
            raise ValueError(f"pinch parameter a must lie in (0, 1/2], got {self.a}")

    @property
    def n(self) -> int:
        return len(self.points)

    def with_a(self, a: float) -> "ConstructionParams":
        return ConstructionParams(self.points, a)

    def to_dict(self) -> dict:
        return {"points": list(self.points), "a": self.a}
