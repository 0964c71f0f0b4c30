"""Geometry of robot/obstacle queries: frames, projections, region labels,
generalized orderings and clearance functions.

A query bundles the start and goal positions of ``n`` point robots together
with ``m`` stationary point obstacles in ``R^d``.  All classification in this
module happens along a single oriented line: every point is reduced to its
scalar projection onto the line, and the combinatorics of which projections
coincide determines the region label ``(j, t)`` and, in the generic case, the
pair of generalized orderings that drives the planner.

Distinctness of projections is decided with *scale-free* dot products along
``Frame.axis`` (exact for coordinate-axis frames and for axis-aligned obstacle
pairs), while all metric quantities (gaps, clearances) use the normalized
direction ``Frame.e``.  The two agree mathematically; separating them keeps
the discrete decisions stable under floating-point noise in the normalization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidOrderingPairError,
    ModeUnsupportedError,
    NotGenericError,
    PreconditionError,
    QueryValidationError,
)

__all__ = [
    "ConfigurationQuery",
    "Frame",
    "FrameMode",
    "ObstacleBlock",
    "OrderingPair",
    "RegionLabel",
    "RobotGoal",
    "RobotStart",
    "Side",
    "classify",
    "clearance_eta",
    "component_count",
    "make_frame",
    "min_gap",
    "orderings",
    "project",
]


class FrameMode(enum.Enum):
    """How the projection line is chosen.

    FIXED uses the first coordinate axis regardless of the input (valid in
    every dimension).  OBSTACLE_PAIR aims the line from the first obstacle at
    the second and is only available in even dimensions with at least two
    obstacles, where a perpendicular unit vector can be assigned continuously.
    """

    FIXED = "fixed"
    OBSTACLE_PAIR = "obstacle_pair"


class Side(enum.Enum):
    """Which side of an obstacle projection a robot moves toward."""

    LEFT = "left"
    RIGHT = "right"


def _as_points(value, name: str, errors: list[str]) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        errors.append(f"{name}: expected a 2-d array of points, got shape {arr.shape}")
        arr = arr.reshape(arr.shape[0] if arr.ndim >= 1 else 0, -1)
    return arr


def _duplicate_pairs(points: np.ndarray) -> list[tuple[int, int]]:
    out = []
    for i in range(len(points)):
        for k in range(i + 1, len(points)):
            if np.array_equal(points[i], points[k]):
                out.append((i, k))
    return out


def _cross_coincidences(a: np.ndarray, b: np.ndarray) -> list[tuple[int, int]]:
    out = []
    for i in range(len(a)):
        for k in range(len(b)):
            if np.array_equal(a[i], b[k]):
                out.append((i, k))
    return out


@dataclass(frozen=True, eq=False)
class ConfigurationQuery:
    """One planning query: robot starts, robot goals, obstacle positions.

    Attributes:
        starts: (n, d) array, pairwise distinct, disjoint from obstacles.
        goals: (n, d) array, pairwise distinct, disjoint from obstacles.
        obstacles: (m, d) array, pairwise distinct.

    Starts may coincide with goals (a robot that does not need to move).
    Arrays are made read-only; a query never changes after construction.
    """

    starts: np.ndarray
    goals: np.ndarray
    obstacles: np.ndarray

    def __post_init__(self):
        errors: list[str] = []
        starts = _as_points(self.starts, "starts", errors)
        goals = _as_points(self.goals, "goals", errors)
        obstacles = _as_points(self.obstacles, "obstacles", errors)
        if not errors:
            d = starts.shape[1]
            if d < 2:
                errors.append(f"dimension must be at least 2, got {d}")
            if goals.shape[1] != d or obstacles.shape[1] != d:
                errors.append(
                    "inconsistent dimensions: starts %s, goals %s, obstacles %s"
                    % (starts.shape, goals.shape, obstacles.shape)
                )
            if len(starts) < 1:
                errors.append("at least one robot is required")
            if len(goals) != len(starts):
                errors.append(
                    f"starts and goals must pair up: {len(starts)} starts, {len(goals)} goals"
                )
            if len(obstacles) < 1:
                errors.append("at least one obstacle is required")
        if not errors:
            for i, k in _duplicate_pairs(starts):
                errors.append(f"starts[{i}] coincides with starts[{k}]")
            for i, k in _duplicate_pairs(goals):
                errors.append(f"goals[{i}] coincides with goals[{k}]")
            for i, k in _duplicate_pairs(obstacles):
                errors.append(f"obstacles[{i}] coincides with obstacles[{k}]")
            for i, k in _cross_coincidences(starts, obstacles):
                errors.append(f"starts[{i}] coincides with obstacles[{k}]")
            for i, k in _cross_coincidences(goals, obstacles):
                errors.append(f"goals[{i}] coincides with obstacles[{k}]")
        if errors:
            raise QueryValidationError(errors)
        for arr in (starts, goals, obstacles):
            arr.setflags(write=False)
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "goals", goals)
        object.__setattr__(self, "obstacles", obstacles)

    @property
    def dim(self) -> int:
        return self.starts.shape[1]

    @property
    def robot_count(self) -> int:
        return self.starts.shape[0]

    @property
    def obstacle_count(self) -> int:
        return self.obstacles.shape[0]

    def with_starts(self, starts: np.ndarray) -> "ConfigurationQuery":
        return ConfigurationQuery(starts, self.goals, self.obstacles)

    def with_positions(self, starts: np.ndarray, goals: np.ndarray) -> "ConfigurationQuery":
        return ConfigurationQuery(starts, goals, self.obstacles)


@dataclass(frozen=True, eq=False)
class Frame:
    """An oriented projection line through the origin.

    Attributes:
        e: unit vector along the line (defines orientation and the scalar
            projection ``q(x) = e . x``).
        e_perp: unit vector orthogonal to ``e``; the plane span(e, e_perp)
            hosts every circular avoidance manoeuvre.
        mode: how the frame was chosen.
        axis: unnormalized direction used for equality/order decisions on
            projection values.  Parallel to ``e`` with positive scale.
    """

    e: np.ndarray
    e_perp: np.ndarray
    mode: FrameMode
    axis: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float)
        e_perp = np.asarray(self.e_perp, dtype=float)
        axis = np.asarray(self.axis, dtype=float)
        if abs(np.linalg.norm(e) - 1.0) > 1e-12:
            raise ValueError("e must be a unit vector")
        if abs(np.linalg.norm(e_perp) - 1.0) > 1e-12:
            raise ValueError("e_perp must be a unit vector")
        if abs(float(np.dot(e, e_perp))) > 1e-12:
            raise ValueError("e and e_perp must be orthogonal")
        for arr in (e, e_perp, axis):
            arr.setflags(write=False)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "e_perp", e_perp)
        object.__setattr__(self, "axis", axis)

    @property
    def dim(self) -> int:
        return self.e.shape[0]

    def comparison_values(self, points: np.ndarray) -> np.ndarray:
        """Scale-free projection values used for distinctness decisions."""
        return np.asarray(points, dtype=float) @ self.axis

    def comparison_tolerance(self, snap_tol: float) -> float:
        if snap_tol == 0.0:
            return 0.0
        return snap_tol * float(np.linalg.norm(self.axis))


def quarter_turn(v: np.ndarray) -> np.ndarray:
    """(x1, x2, ..., x_{d-1}, x_d) -> (-x2, x1, ..., -x_d, x_{d-1}).

    An isometry of R^d (d even) sending every vector to a perpendicular one;
    this is what lets the perpendicular direction vary continuously with the
    obstacle-pair direction.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[0] % 2 != 0:
        raise ValueError("quarter_turn requires an even dimension")
    out = np.empty_like(v)
    out[0::2] = -v[1::2]
    out[1::2] = v[0::2]
    return out


def make_frame(query: ConfigurationQuery, mode: Union[FrameMode, str]) -> Frame:
    """Build the projection frame for a query.

    FIXED: the line is the first coordinate axis and ``e_perp`` the second.
    OBSTACLE_PAIR: the line points from obstacle 0 toward obstacle 1 and
    ``e_perp = quarter_turn(e)``; requires even dimension and m >= 2.

    Raises:
        ModeUnsupportedError: OBSTACLE_PAIR with odd dimension or m < 2.
    """
    mode = FrameMode(mode)
    d = query.dim
    if mode is FrameMode.FIXED:
        e = np.zeros(d)
        e[0] = 1.0
        e_perp = np.zeros(d)
        e_perp[1] = 1.0
        return Frame(e=e, e_perp=e_perp, mode=mode, axis=e.copy())
    if d % 2 != 0:
        raise ModeUnsupportedError(
            f"obstacle-pair frames need an even dimension, got d={d}"
        )
    if query.obstacle_count < 2:
        raise ModeUnsupportedError("obstacle-pair frames need at least two obstacles")
    w = query.obstacles[1] - query.obstacles[0]
    e = w / np.linalg.norm(w)
    return Frame(e=e, e_perp=quarter_turn(e), mode=mode, axis=w)


def project(point: Sequence[float], frame: Frame) -> float:
    """Scalar projection of a point onto the frame line: ``e . point``."""
    p = np.asarray(point, dtype=float)
    if p.shape != (frame.dim,):
        raise DimensionMismatchError(
            f"point has shape {p.shape}, expected ({frame.dim},)"
        )
    return float(np.dot(frame.e, p))


@dataclass(frozen=True)
class RegionLabel:
    """Continuity-region label of a query.

    j counts projection values carried only by robots, t counts distinct
    obstacle projection values; the domain index is c = j + t.  The planner
    is continuous on each set of queries sharing a value of c.
    """

    j: int
    t: int

    @property
    def c(self) -> int:
        return self.j + self.t


@dataclass(frozen=True)
class RobotStart:
    robot: int


@dataclass(frozen=True)
class RobotGoal:
    robot: int


@dataclass(frozen=True)
class ObstacleBlock:
    """A maximal group of obstacles sharing one projection value."""

    obstacles: frozenset[int]


Token = Union[RobotStart, RobotGoal, ObstacleBlock]


def token_key(token: Token):
    """Collapse start/goal tokens of the same robot to one comparable key."""
    if isinstance(token, (RobotStart, RobotGoal)):
        return ("r", token.robot)
    return ("o", tuple(sorted(token.obstacles)))


@dataclass(frozen=True)
class OrderingPair:
    """Left-to-right orderings of robot tokens and obstacle blocks.

    ``sigma`` orders robot starts together with the obstacle blocks by
    projection value; ``sigma_prime`` does the same with robot goals.  The
    obstacle blocks are identical (same membership, same relative order) in
    both sequences.
    """

    sigma: tuple[Token, ...]
    sigma_prime: tuple[Token, ...]

    def __post_init__(self):
        blocks = self.blocks
        if blocks != tuple(tok for tok in self.sigma_prime if isinstance(tok, ObstacleBlock)):
            raise InvalidOrderingPairError(
                "obstacle blocks differ between the two orderings"
            )
        robots = sorted(t.robot for t in self.sigma if isinstance(t, RobotStart))
        robots_prime = sorted(t.robot for t in self.sigma_prime if isinstance(t, RobotGoal))
        if robots != robots_prime or len(set(robots)) != len(robots):
            raise InvalidOrderingPairError("each robot must appear exactly once per ordering")
        members: list[int] = []
        for block in blocks:
            members.extend(block.obstacles)
        if sorted(members) != sorted(set(members)):
            raise InvalidOrderingPairError("obstacle blocks must be disjoint")

    @property
    def blocks(self) -> tuple[ObstacleBlock, ...]:
        return tuple(tok for tok in self.sigma if isinstance(tok, ObstacleBlock))

    def start_pattern(self) -> tuple:
        return tuple(token_key(tok) for tok in self.sigma)

    def goal_pattern(self) -> tuple:
        return tuple(token_key(tok) for tok in self.sigma_prime)

    def patterns_equal(self) -> bool:
        return self.start_pattern() == self.goal_pattern()


def _cluster_sorted(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group indices of ``values`` into clusters of equal (within tol) values.

    Single linkage on the sorted sequence: a gap larger than ``tol`` starts a
    new cluster.  With tol == 0 clusters are exact-equality classes.
    """
    order = np.argsort(values, kind="stable")
    clusters: list[list[int]] = []
    previous = None
    for idx in order:
        v = values[idx]
        if previous is None or (v - previous > tol):
            clusters.append([int(idx)])
        else:
            clusters[-1].append(int(idx))
        previous = v
    return clusters


def _projection_table(query: ConfigurationQuery, frame: Frame):
    """Comparison values of all 2n+m points in the order starts|goals|obstacles."""
    values = np.concatenate(
        [
            frame.comparison_values(query.starts),
            frame.comparison_values(query.goals),
            frame.comparison_values(query.obstacles),
        ]
    )
    n = query.robot_count
    kinds = ["start"] * n + ["goal"] * n + ["obstacle"] * query.obstacle_count
    return values, kinds


def classify(query: ConfigurationQuery, frame: Frame, snap_tol: float = 0.0) -> RegionLabel:
    """Label a query by its projection-coincidence pattern.

    t is the number of distinct obstacle projection values, j the number of
    projection values attained only by robot starts/goals.  Together
    ``j + t`` equals the number of distinct projection values of the whole
    query.  ``snap_tol`` (absolute, in length units) optionally merges nearly
    equal projections; the default 0 compares exactly.
    """
    values, kinds = _projection_table(query, frame)
    tol = frame.comparison_tolerance(snap_tol)
    clusters = _cluster_sorted(values, tol)
    t = 0
    j = 0
    for cluster in clusters:
        if any(kinds[i] == "obstacle" for i in cluster):
            t += 1
        else:
            j += 1
    return RegionLabel(j=j, t=t)


def obstacle_blocks(
    query: ConfigurationQuery, frame: Frame, snap_tol: float = 0.0
) -> list[tuple[float, ObstacleBlock]]:
    """Obstacle blocks with a representative comparison value, sorted along the line."""
    values = frame.comparison_values(query.obstacles)
    tol = frame.comparison_tolerance(snap_tol)
    out = []
    for cluster in _cluster_sorted(values, tol):
        out.append((float(values[cluster[0]]), ObstacleBlock(frozenset(cluster))))
    return out


def orderings(
    query: ConfigurationQuery, frame: Frame, snap_tol: float = 0.0
) -> OrderingPair:
    """Generalized ordering pair of a generic query.

    Requires the generic condition j = 2n: all robot projections (starts and
    goals alike) pairwise distinct and distinct from every obstacle
    projection.

    Raises:
        NotGenericError: some robot projection coincides with another
            projection value.
    """
    label = classify(query, frame, snap_tol)
    n = query.robot_count
    if label.j != 2 * n:
        raise NotGenericError(
            f"query is not generic: j={label.j} < 2n={2 * n} (c={label.c})"
        )
    blocks = obstacle_blocks(query, frame, snap_tol)
    start_vals = frame.comparison_values(query.starts)
    goal_vals = frame.comparison_values(query.goals)

    def sequence(robot_values: np.ndarray, make_token) -> tuple[Token, ...]:
        entries: list[tuple[float, Token]] = [
            (float(robot_values[i]), make_token(i)) for i in range(n)
        ]
        entries.extend(blocks)
        entries.sort(key=lambda pair: pair[0])
        return tuple(tok for _, tok in entries)

    return OrderingPair(
        sigma=sequence(start_vals, RobotStart),
        sigma_prime=sequence(goal_vals, RobotGoal),
    )


def _positive_gaps(
    left: np.ndarray, right: np.ndarray, metric_left: np.ndarray,
    metric_right: np.ndarray, tol: float, skip_equal_index: bool
) -> Iterable[float]:
    """|metric| gaps between two families, excluding pairs whose comparison
    values coincide (within tol)."""
    for i in range(len(left)):
        for k in range(len(right)):
            if skip_equal_index and i >= k:
                continue
            if abs(left[i] - right[k]) <= tol:
                continue
            yield abs(float(metric_left[i] - metric_right[k]))


def min_gap(query: ConfigurationQuery, frame: Frame, snap_tol: float = 0.0) -> float:
    """Smallest positive projection gap within the start-start, goal-goal,
    start-obstacle and goal-obstacle families.

    Start-goal gaps are deliberately not considered.  When every listed gap
    vanishes the fallback value 1.0 is returned, so the result is always
    strictly positive.
    """
    gaps = _gap_families(query, frame, snap_tol, include_start_goal=False)
    return min(gaps) if gaps else 1.0


def desingularization_gap(
    query: ConfigurationQuery, frame: Frame, snap_tol: float = 0.0
) -> float:
    """Like :func:`min_gap` but also bounded by positive start-goal gaps.

    The splitting shifts give starts and goals different offsets, so an
    originally positive start-goal gap must also exceed the total shift for
    the result to be generic; folding that family into the bound makes the
    genericity guarantee unconditional.
    """
    gaps = _gap_families(query, frame, snap_tol, include_start_goal=True)
    return min(gaps) if gaps else 1.0


def _gap_families(
    query: ConfigurationQuery, frame: Frame, snap_tol: float, include_start_goal: bool
) -> list[float]:
    tol = frame.comparison_tolerance(snap_tol)
    cmp_start = frame.comparison_values(query.starts)
    cmp_goal = frame.comparison_values(query.goals)
    cmp_obst = frame.comparison_values(query.obstacles)
    q_start = query.starts @ frame.e
    q_goal = query.goals @ frame.e
    q_obst = query.obstacles @ frame.e
    gaps = list(_positive_gaps(cmp_start, cmp_start, q_start, q_start, tol, True))
    gaps.extend(_positive_gaps(cmp_goal, cmp_goal, q_goal, q_goal, tol, True))
    gaps.extend(_positive_gaps(cmp_start, cmp_obst, q_start, q_obst, tol, False))
    gaps.extend(_positive_gaps(cmp_goal, cmp_obst, q_goal, q_obst, tol, False))
    if include_start_goal:
        gaps.extend(_positive_gaps(cmp_start, cmp_goal, q_start, q_goal, tol, False))
    return gaps


def clearance_eta(
    query: ConfigurationQuery,
    frame: Frame,
    robot: int,
    obstacle: int,
    side: Side,
    snap_tol: float = 0.0,
) -> float:
    """Clearance available for swinging robot ``robot`` around obstacle
    ``obstacle`` toward ``side``.

    The clearance is the minimum of
      (a) the distance from the obstacle's projection to the nearest other
          projection value strictly on the destination side,
      (b) the full-space distance to the nearest other obstacle sharing the
          same projection value,
      (c) the projection gap between the robot and the obstacle,
    where (a) and (b) are skipped when their candidate sets are empty.  The
    result is strictly positive on generic queries and varies continuously
    while the ordering pair stays fixed.

    Raises:
        PreconditionError: the robot token is not adjacent to the obstacle's
            block in the start ordering, or the robot sits on the destination
            side already.
    """
    pair = orderings(query, frame, snap_tol)
    tol = frame.comparison_tolerance(snap_tol)
    cmp_obst = frame.comparison_values(query.obstacles)
    cmp_robot = float(frame.comparison_values(query.starts)[robot])
    cmp_o = float(cmp_obst[obstacle])

    block = None
    block_pos = None
    robot_pos = None
    for pos, token in enumerate(pair.sigma):
        if isinstance(token, ObstacleBlock) and obstacle in token.obstacles:
            block = token
            block_pos = pos
        elif isinstance(token, RobotStart) and token.robot == robot:
            robot_pos = pos
    if block is None or robot_pos is None:
        raise PreconditionError("robot or obstacle not present in the ordering")
    if abs(robot_pos - block_pos) != 1:
        raise PreconditionError(
            f"robot {robot} is not adjacent to the block of obstacle {obstacle}"
        )
    if side is Side.LEFT and cmp_robot < cmp_o:
        raise PreconditionError("robot is already on the left of the obstacle")
    if side is Side.RIGHT and cmp_robot > cmp_o:
        raise PreconditionError("robot is already on the right of the obstacle")

    values, _ = _projection_table(query, frame)
    if side is Side.LEFT:
        far = values[values < cmp_o - tol]
    else:
        far = values[values > cmp_o + tol]
    axis_norm = float(np.linalg.norm(frame.axis))

    terms = []
    if len(far):
        nearest = float(np.min(np.abs(far - cmp_o)))
        terms.append(nearest / axis_norm)
    coincident = [
        k
        for k in range(query.obstacle_count)
        if k != obstacle and abs(cmp_obst[k] - cmp_o) <= tol
    ]
    if coincident:
        terms.append(
            min(
                float(np.linalg.norm(query.obstacles[k] - query.obstacles[obstacle]))
                for k in coincident
            )
        )
    terms.append(abs(cmp_robot - cmp_o) / axis_norm)
    return min(terms)


def component_count(n: int, m: int) -> int:
    """Number of generic ordering pairs: ((n+m)!)^2 / m!, exactly.

    Equals the number of connected components of the fully generic region for
    n robots and m obstacles.  Computed with arbitrary-precision integers;
    the division is always exact.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    numerator = math.factorial(n + m) ** 2
    quotient, remainder = divmod(numerator, math.factorial(m))
    assert remainder == 0
    return quotient
