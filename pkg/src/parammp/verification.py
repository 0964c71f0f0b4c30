"""Independent checks on planned paths: separation certificates, partition
sweeps, continuity probes and an exact-arithmetic classification oracle.

Nothing here reuses the planner's internals beyond evaluating the emitted
segments; the point is to catch construction bugs rather than restate them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ParammpError, QueryValidationError, RegionCrossingError
from .geometry import (
    ConfigurationQuery,
    Frame,
    FrameMode,
    RegionLabel,
    classify,
    make_frame,
    orderings,
)
from .paths import PiecewisePath
from .planner import plan

__all__ = [
    "PairSeparation",
    "PartitionReport",
    "QueryPerturbation",
    "SeparationCertificate",
    "certify_separation",
    "check_partition",
    "classify_oracle",
    "continuity_probe",
    "degenerate_query",
    "evaluate_path",
    "random_query",
    "random_rational_query",
]


def evaluate_path(path: PiecewisePath, t: float):
    """Robot positions at global time t plus the (unchanged) obstacles."""
    if t < 0 or t > 1:
        raise ValueError(f"time {t} outside [0, 1]")
    return path.configuration(t), path.obstacles


@dataclass(frozen=True)
class PairSeparation:
    """Certified separation between one pair of bodies along the whole path.

    ``certified_lower_bound`` is the sampled minimum minus the Lipschitz
    slack accumulated between samples; it never exceeds ``sampled_min`` and
    the pair passes iff it is strictly positive.
    """

    kind: str  # "robot-robot" or "robot-obstacle"
    first: int
    second: int
    sampled_min: float
    certified_lower_bound: float
    samples_per_segment: int

    @property
    def passes(self) -> bool:
        return self.certified_lower_bound > 0.0


@dataclass(frozen=True)
class SeparationCertificate:
    pairs: tuple[PairSeparation, ...]
    samples_per_segment: int

    @property
    def passed(self) -> bool:
        return all(pair.passes for pair in self.pairs)

    @property
    def min_certified(self) -> float:
        return min(pair.certified_lower_bound for pair in self.pairs)

    def pair(self, kind: str, first: int, second: int) -> PairSeparation:
        for p in self.pairs:
            if (p.kind, p.first, p.second) == (kind, first, second):
                return p
        raise KeyError((kind, first, second))


def _pair_breakpoints(path: PiecewisePath, robots: Sequence[int]) -> list[Fraction]:
    cuts = {Fraction(0), Fraction(1)}
    for robot in robots:
        for seg in path.segments[robot]:
            cuts.add(seg.t0)
            cuts.add(seg.t1)
    return sorted(cuts)


def _interval_distance_bound(
    path: PiecewisePath,
    robot: int,
    other_robot: Optional[int],
    obstacle: Optional[int],
    lo: Fraction,
    hi: Fraction,
    samples: int,
):
    """(sampled_min, certified_min) for one pair over [lo, hi].

    Both bodies follow a single segment on the interval, so the pairwise
    distance is Lipschitz in time; between adjacent samples f_l, f_r spaced h
    apart it is at least (f_l + f_r - L*h) / 2 (two-sided Lipschitz cone),
    which is exact for a straight-line approach and refines monotonically.

    L bounds the *relative* speed: for two straight segments the relative
    velocity is a constant vector and L is its exact norm (which makes the
    cone bound strictly positive whenever the true separation is), otherwise
    the segment speed bounds are summed.
    """
    ts = np.linspace(float(lo), float(hi), samples + 1)
    # Any interior time identifies the active segment for both bodies.
    mid = (float(lo) + float(hi)) / 2.0
    seg_a = path.segment_at(robot, mid)
    pa = seg_a.at_many(ts)
    if other_robot is not None:
        seg_b = path.segment_at(other_robot, mid)
        pb = seg_b.at_many(ts)
        speed = _relative_speed_bound(seg_a, seg_b)
    else:
        pb = np.broadcast_to(path.obstacles[obstacle], pa.shape)
        speed = seg_a.speed_bound()
    f = np.linalg.norm(pa - pb, axis=1)
    h = (float(hi) - float(lo)) / samples
    cone = 0.5 * (f[:-1] + f[1:] - speed * h)
    sampled_min = float(f.min())
    certified = min(sampled_min, float(cone.min()))
    return sampled_min, certified


def _relative_speed_bound(seg_a, seg_b) -> float:
    from .paths import LinearMove

    if isinstance(seg_a.move, LinearMove) and isinstance(seg_b.move, LinearMove):
        velocity_a = (seg_a.move.end - seg_a.move.start) / float(seg_a.duration)
        velocity_b = (seg_b.move.end - seg_b.move.start) / float(seg_b.duration)
        return float(np.linalg.norm(velocity_a - velocity_b))
    return seg_a.speed_bound() + seg_b.speed_bound()


def certify_separation(
    path: PiecewisePath, samples_per_segment: int = 64
) -> SeparationCertificate:
    """Sampled-plus-slack lower bounds on every pairwise distance.

    Each robot-robot and robot-obstacle pair is sampled uniformly on every
    maximal interval where both bodies follow a single segment; the certified
    bound subtracts per-segment Lipschitz slack from the sampled values (see
    ``_interval_distance_bound``).  An unsound path yields a failing
    certificate, never an exception.
    """
    if samples_per_segment < 2:
        raise ValueError("need at least 2 samples per segment")
    n = path.robot_count
    m = path.obstacles.shape[0]
    pairs: list[PairSeparation] = []

    def run(kind, first, second, other_robot, obstacle):
        robots = (first,) if other_robot is None else (first, other_robot)
        cuts = _pair_breakpoints(path, robots)
        sampled = np.inf
        certified = np.inf
        for lo, hi in zip(cuts, cuts[1:]):
            s, c = _interval_distance_bound(
                path, first, other_robot, obstacle, lo, hi, samples_per_segment
            )
            sampled = min(sampled, s)
            certified = min(certified, c)
        pairs.append(
            PairSeparation(
                kind=kind,
                first=first,
                second=second,
                sampled_min=float(sampled),
                certified_lower_bound=float(certified),
                samples_per_segment=samples_per_segment,
            )
        )

    for i in range(n):
        for k in range(i + 1, n):
            run("robot-robot", i, k, k, None)
    for i in range(n):
        for j in range(m):
            run("robot-obstacle", i, j, None, j)
    return SeparationCertificate(
        pairs=tuple(pairs), samples_per_segment=samples_per_segment
    )


@dataclass(frozen=True)
class PartitionReport:
    trials: int
    histogram: dict  # domain index c -> count
    out_of_range: int

    @property
    def realized(self) -> set[int]:
        return set(self.histogram)


def random_query(
    rng: np.random.Generator,
    n: int,
    m: int,
    d: int,
    low: float = -10.0,
    high: float = 10.0,
) -> ConfigurationQuery:
    """Uniform random query in a box, resampled until structurally valid."""
    while True:
        try:
            return ConfigurationQuery(
                starts=rng.uniform(low, high, size=(n, d)),
                goals=rng.uniform(low, high, size=(n, d)),
                obstacles=rng.uniform(low, high, size=(m, d)),
            )
        except QueryValidationError:  # pragma: no cover - measure-zero event
            continue


def random_rational_query(
    rng: np.random.Generator,
    n: int,
    m: int,
    d: int,
    denominator: int = 32,
    span: int = 320,
) -> ConfigurationQuery:
    """Random query with dyadic-rational coordinates k/denominator.

    The coarse grid makes projection coincidences common, which is exactly
    what exercises the degenerate classification branches, while every
    coordinate and every fixed-axis dot product stays exactly representable.
    """
    while True:
        try:
            return ConfigurationQuery(
                starts=rng.integers(-span, span + 1, size=(n, d)) / denominator,
                goals=rng.integers(-span, span + 1, size=(n, d)) / denominator,
                obstacles=rng.integers(-span, span + 1, size=(m, d)) / denominator,
            )
        except QueryValidationError:
            continue


def degenerate_query(
    n: int, m: int, d: int, j: int, t: int, mode: FrameMode = FrameMode.FIXED
) -> ConfigurationQuery:
    """A query whose classification is exactly (j, t) in the given mode.

    Obstacles realize t distinct first-axis values; j robot slots get fresh
    values and the remaining 2n - j slots reuse the first obstacle value.
    Perpendicular coordinates keep all points distinct.  For obstacle-pair
    mode the first two obstacles span the first axis, so projections are
    first-axis values there as well (up to the positive factor |o2 - o1|).
    """
    if not (0 <= j <= 2 * n and 1 <= t <= m):
        raise ValueError(f"no region with j={j}, t={t} for n={n}, m={m}")
    if mode is FrameMode.OBSTACLE_PAIR and t < 2:
        raise ValueError("obstacle-pair mode forces t >= 2")
    obstacles = np.zeros((m, d))
    for k in range(m):
        obstacles[k, 0] = float(min(k, t - 1))
        # In obstacle-pair mode the first two obstacles must span the first
        # axis so that projections stay first-axis values.
        if mode is FrameMode.OBSTACLE_PAIR and k < 2:
            obstacles[k, 1] = 0.0
        else:
            obstacles[k, 1] = float(k + 1)
    starts = np.zeros((n, d))
    goals = np.zeros((n, d))
    fresh = 100.0
    for slot in range(2 * n):
        arr, row = (starts, slot) if slot < n else (goals, slot - n)
        if slot < j:
            arr[row, 0] = fresh
            fresh += 1.0
        else:
            arr[row, 0] = obstacles[0, 0]
        arr[row, 1] = float(-1 - slot)
    return ConfigurationQuery(starts=starts, goals=goals, obstacles=obstacles)


def check_partition(
    n: int,
    m: int,
    d: int,
    mode: Union[FrameMode, str] = FrameMode.FIXED,
    trials: int = 1000,
    seed: int = 0,
    snap_tol: float = 0.0,
) -> PartitionReport:
    """Classify random queries and report the realized domain indices.

    Every query must land in exactly one region with 0 <= j <= 2n and
    1 <= t <= m; counts of c = j + t outside [1, 2n + m] are tallied in
    ``out_of_range`` (and should always be zero).
    """
    mode = FrameMode(mode)
    rng = np.random.default_rng(seed)
    histogram: dict[int, int] = {}
    out_of_range = 0
    for _ in range(trials):
        query = random_query(rng, n, m, d)
        frame = make_frame(query, mode)
        label = classify(query, frame, snap_tol)
        low = 2 if mode is FrameMode.OBSTACLE_PAIR else 1
        if not (0 <= label.j <= 2 * n and 1 <= label.t <= m and low <= label.c <= 2 * n + m):
            out_of_range += 1
        histogram[label.c] = histogram.get(label.c, 0) + 1
    return PartitionReport(trials=trials, histogram=histogram, out_of_range=out_of_range)


@dataclass(frozen=True)
class QueryPerturbation:
    """A direction in query space: per-point displacement arrays."""

    dstarts: np.ndarray
    dgoals: np.ndarray
    dobstacles: np.ndarray

    def apply(self, query: ConfigurationQuery, eps: float) -> ConfigurationQuery:
        return ConfigurationQuery(
            starts=query.starts + eps * np.asarray(self.dstarts, dtype=float),
            goals=query.goals + eps * np.asarray(self.dgoals, dtype=float),
            obstacles=query.obstacles + eps * np.asarray(self.dobstacles, dtype=float),
        )


def continuity_probe(
    query: ConfigurationQuery,
    direction: QueryPerturbation,
    epsilons: Sequence[float],
    mode: Union[FrameMode, str, None] = None,
    time_samples: int = 256,
    snap_tol: float = 0.0,
) -> list[float]:
    """Sup-distance between the base path and paths of perturbed queries.

    All perturbed queries must classify into the same region and ordering
    pair as the base query; otherwise the probe cannot say anything about
    continuity and raises :class:`RegionCrossingError`.

    Returns one sup-distance D(eps) per epsilon, where the supremum runs over
    the sampled times and all robots.
    """
    base = plan(query, mode=mode, snap_tol=snap_tol)
    frame = base.frame
    base_label = classify(query, frame, snap_tol)
    base_patterns = None
    try:
        pair = orderings(query, frame, snap_tol)
        base_patterns = (pair.start_pattern(), pair.goal_pattern())
    except ParammpError:
        pass
    ts = np.linspace(0.0, 1.0, time_samples)
    base_samples = [base.path.positions_at(r, ts) for r in range(query.robot_count)]

    out: list[float] = []
    for eps in epsilons:
        perturbed = direction.apply(query, eps)
        p_frame = make_frame(perturbed, base.mode)
        p_label = classify(perturbed, p_frame, snap_tol)
        if p_label != base_label:
            raise RegionCrossingError(
                f"perturbation eps={eps} moved the query from {base_label} to {p_label}"
            )
        if base_patterns is not None:
            p_pair = orderings(perturbed, p_frame, snap_tol)
            if (p_pair.start_pattern(), p_pair.goal_pattern()) != base_patterns:
                raise RegionCrossingError(
                    f"perturbation eps={eps} changed the ordering pair"
                )
        result = plan(perturbed, mode=base.mode, snap_tol=snap_tol)
        worst = 0.0
        for r in range(query.robot_count):
            delta = result.path.positions_at(r, ts) - base_samples[r]
            worst = max(worst, float(np.max(np.linalg.norm(delta, axis=1))))
        out.append(worst)
    return out


def _exact_values(points: np.ndarray, axis_fractions) -> list:
    from fractions import Fraction as F

    values = []
    for row in points:
        acc = F(0)
        for coord, a in zip(row, axis_fractions):
            acc += F(float(coord)) * a
        values.append(acc)
    return values


def classify_oracle(query: ConfigurationQuery, frame: Frame) -> RegionLabel:
    """Classification recomputed with exact rational arithmetic.

    Uses the frame's mode to rebuild the comparison direction exactly: the
    first coordinate axis for fixed frames, the unnormalized difference
    o2 - o1 for obstacle-pair frames.  Floating-point coordinates convert to
    rationals losslessly, so the returned label is exact; it must agree with
    :func:`classify` at snap tolerance 0.
    """
    from fractions import Fraction as F

    d = query.dim
    if frame.mode is FrameMode.FIXED:
        axis = [F(1)] + [F(0)] * (d - 1)
    else:
        axis = [
            F(float(query.obstacles[1][k])) - F(float(query.obstacles[0][k]))
            for k in range(d)
        ]
    start_vals = _exact_values(query.starts, axis)
    goal_vals = _exact_values(query.goals, axis)
    obst_vals = _exact_values(query.obstacles, axis)
    obstacle_set = set(obst_vals)
    robot_only = {v for v in start_vals + goal_vals if v not in obstacle_set}
    return RegionLabel(j=len(robot_only), t=len(obstacle_set))
