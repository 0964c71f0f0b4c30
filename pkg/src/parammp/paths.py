"""Exact piecewise path representation: linear and circular-arc segments.

Paths are kept symbolic (segment lists with closed-form evaluation), never
pre-sampled, so endpoint identities and separation certificates can be checked
against the defining formulas.  Global segment time bounds are stored as exact
rationals: the composition rule repeatedly maps paths into the middle third of
the previous stage and exact arithmetic keeps those boundaries reproducible at
any nesting depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import InternalConsistencyError
from .geometry import ConfigurationQuery

__all__ = [
    "ArcMove",
    "LinearMove",
    "Move",
    "PathSegment",
    "PiecewisePath",
    "reverse_move",
]

ENDPOINT_TOL = 1e-9
BASIS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LinearMove:
    """Straight-line motion from ``start`` to ``end`` at constant velocity."""

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        start = np.asarray(self.start, dtype=float)
        end = np.asarray(self.end, dtype=float)
        start.setflags(write=False)
        end.setflags(write=False)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    def at(self, u: float) -> np.ndarray:
        if u == 0.0:
            return self.start
        if u == 1.0:
            return self.end
        return self.start + u * (self.end - self.start)

    def at_many(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.start[None, :] + u[:, None] * (self.end - self.start)[None, :]

    @property
    def initial(self) -> np.ndarray:
        return self.start

    @property
    def final(self) -> np.ndarray:
        return self.end

    def path_length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def is_constant(self) -> bool:
        return bool(np.array_equal(self.start, self.end))


@dataclass(frozen=True, eq=False)
class ArcMove:
    """Circular-arc motion in the plane spanned by two orthonormal vectors.

    The point at local parameter u is::

        center + radius * (cos(theta) * basis_u + sin(theta) * basis_v)

    with theta = angle_start + u * (angle_end - angle_start).
    """

    center: np.ndarray
    radius: float
    basis_u: np.ndarray
    basis_v: np.ndarray
    angle_start: float
    angle_end: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        basis_u = np.asarray(self.basis_u, dtype=float)
        basis_v = np.asarray(self.basis_v, dtype=float)
        if self.radius <= 0:
            raise ValueError("arc radius must be positive")
        if (
            abs(np.linalg.norm(basis_u) - 1.0) > BASIS_TOL
            or abs(np.linalg.norm(basis_v) - 1.0) > BASIS_TOL
            or abs(float(np.dot(basis_u, basis_v))) > BASIS_TOL
        ):
            raise ValueError("arc basis must be orthonormal")
        for arr in (center, basis_u, basis_v):
            arr.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "basis_u", basis_u)
        object.__setattr__(self, "basis_v", basis_v)

    def _point(self, theta):
        return (
            self.center
            + self.radius * np.cos(theta) * self.basis_u
            + self.radius * np.sin(theta) * self.basis_v
        )

    def at(self, u: float) -> np.ndarray:
        return self._point(self.angle_start + u * (self.angle_end - self.angle_start))

    def at_many(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        theta = self.angle_start + u * (self.angle_end - self.angle_start)
        return (
            self.center[None, :]
            + self.radius * np.cos(theta)[:, None] * self.basis_u[None, :]
            + self.radius * np.sin(theta)[:, None] * self.basis_v[None, :]
        )

    @property
    def initial(self) -> np.ndarray:
        return self.at(0.0)

    @property
    def final(self) -> np.ndarray:
        return self.at(1.0)

    def path_length(self) -> float:
        return self.radius * abs(self.angle_end - self.angle_start)

    def is_constant(self) -> bool:
        return self.angle_start == self.angle_end


Move = Union[LinearMove, ArcMove]


def reverse_move(move: Move) -> Move:
    """The same geometric trace traversed in the opposite direction."""
    if isinstance(move, LinearMove):
        return LinearMove(start=move.end, end=move.start)
    return ArcMove(
        center=move.center,
        radius=move.radius,
        basis_u=move.basis_u,
        basis_v=move.basis_v,
        angle_start=move.angle_end,
        angle_end=move.angle_start,
    )


@dataclass(frozen=True, eq=False)
class PathSegment:
    """One robot's motion over the global time window [t0, t1]."""

    robot: int
    t0: Fraction
    t1: Fraction
    move: Move

    def __post_init__(self):
        if not (isinstance(self.t0, Fraction) and isinstance(self.t1, Fraction)):
            raise TypeError("segment time bounds must be exact Fractions")
        if not self.t0 < self.t1:
            raise ValueError(f"empty segment window [{self.t0}, {self.t1}]")

    @property
    def duration(self) -> Fraction:
        return self.t1 - self.t0

    def local(self, t) -> float:
        # Exact boundary hits map to exact local parameters so that path
        # endpoints reproduce the stored points bitwise.
        if t == self.t0:
            return 0.0
        if t == self.t1:
            return 1.0
        return (float(t) - float(self.t0)) / float(self.duration)

    def at(self, t) -> np.ndarray:
        return self.move.at(self.local(t))

    def at_many(self, ts: np.ndarray) -> np.ndarray:
        u = (np.asarray(ts, dtype=float) - float(self.t0)) / float(self.duration)
        return self.move.at_many(u)

    def speed_bound(self) -> float:
        """Upper bound on |velocity| over the segment (exact for both kinds)."""
        return self.move.path_length() / float(self.duration)


@dataclass(frozen=True, eq=False)
class PiecewisePath:
    """A collision-managed motion of all robots over global time [0, 1].

    Per robot the segments tile [0, 1] with no gaps or overlaps, consecutive
    segments agree at their junction, the path starts at ``query.starts`` and
    ends at ``query.goals``.  Obstacles are those of the query, untouched.
    """

    query: ConfigurationQuery
    segments: tuple[tuple[PathSegment, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(tuple(per) for per in self.segments))
        self._validate()

    @property
    def obstacles(self) -> np.ndarray:
        return self.query.obstacles

    @property
    def robot_count(self) -> int:
        return self.query.robot_count

    def _validate(self):
        if len(self.segments) != self.query.robot_count:
            raise InternalConsistencyError("one segment list per robot is required")
        for robot, per_robot in enumerate(self.segments):
            if not per_robot:
                raise InternalConsistencyError(f"robot {robot} has no segments")
            if per_robot[0].t0 != 0 or per_robot[-1].t1 != 1:
                raise InternalConsistencyError(
                    f"robot {robot} segments do not span [0, 1]"
                )
            for a, b in zip(per_robot, per_robot[1:]):
                if a.t1 != b.t0:
                    raise InternalConsistencyError(
                        f"robot {robot} has a gap/overlap at t={a.t1}"
                    )
                if np.linalg.norm(a.move.final - b.move.initial) > ENDPOINT_TOL:
                    raise InternalConsistencyError(
                        f"robot {robot} is discontinuous at t={a.t1}"
                    )
            if np.linalg.norm(per_robot[0].move.initial - self.query.starts[robot]) > ENDPOINT_TOL:
                raise InternalConsistencyError(f"robot {robot} does not start at its start")
            if np.linalg.norm(per_robot[-1].move.final - self.query.goals[robot]) > ENDPOINT_TOL:
                raise InternalConsistencyError(f"robot {robot} does not end at its goal")

    def segment_at(self, robot: int, t) -> PathSegment:
        if t < 0 or t > 1:
            raise ValueError(f"time {t} outside [0, 1]")
        per_robot = self.segments[robot]
        # Linear scan: segment counts stay small and Fraction bounds compare
        # exactly against float t.
        for seg in per_robot:
            if t < seg.t1:
                return seg
        return per_robot[-1]

    def position(self, robot: int, t) -> np.ndarray:
        return self.segment_at(robot, t).at(t)

    def configuration(self, t) -> np.ndarray:
        return np.stack([self.position(r, t) for r in range(self.robot_count)])

    def positions_at(self, robot: int, ts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation of one robot at many times (ascending or not)."""
        ts = np.asarray(ts, dtype=float)
        out = np.empty((len(ts), self.query.dim))
        bounds = np.array([float(seg.t1) for seg in self.segments[robot]])
        idx = np.searchsorted(bounds, ts, side="right")
        idx = np.minimum(idx, len(bounds) - 1)
        for seg_index in np.unique(idx):
            mask = idx == seg_index
            out[mask] = self.segments[robot][seg_index].at_many(ts[mask])
        return out

    def arc_segments(self) -> list[PathSegment]:
        return [
            seg
            for per_robot in self.segments
            for seg in per_robot
            if isinstance(seg.move, ArcMove)
        ]
