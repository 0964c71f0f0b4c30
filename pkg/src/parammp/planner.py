"""The full planning rule: classify, desingularize if needed, sort the start
ordering into the goal ordering by elementary swaps, finish with straight
lines.

The output is one exact piecewise path per robot plus the region label whose
index ``c`` names the continuity domain the query fell into.  Identical inputs
produce identical outputs; the construction consults nothing but the query.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .deformations import (
    Deformation,
    affine_section,
    compose_with_section,
    desingularize,
    swap_case_a,
    swap_case_b,
)
from .errors import InternalConsistencyError, InvalidOrderingPairError
from .geometry import (
    ConfigurationQuery,
    Frame,
    FrameMode,
    ObstacleBlock,
    OrderingPair,
    RegionLabel,
    RobotStart,
    Side,
    classify,
    make_frame,
    orderings,
    token_key,
)
from .paths import PiecewisePath

__all__ = [
    "CaseASwap",
    "CaseBSwap",
    "PlanResult",
    "default_mode",
    "generic_section",
    "plan",
    "transposition_sequence",
]


@dataclass(frozen=True)
class CaseASwap:
    """Adjacent robot-robot exchange; ``left`` currently projects below ``right``."""

    left: int
    right: int


@dataclass(frozen=True)
class CaseBSwap:
    """One robot crosses an obstacle block, ending on ``side`` of it."""

    robot: int
    block: frozenset[int]
    side: Side


Swap = Union[CaseASwap, CaseBSwap]


def transposition_sequence(
    sigma: tuple, sigma_prime: tuple
) -> list[Swap]:
    """Adjacent transpositions turning the start pattern into the goal pattern.

    Deterministic bubble-sort discipline: repeatedly swap the leftmost
    adjacent pair that is out of order relative to the goal pattern.  Robot
    pairs become Case A swaps, robot/block pairs become Case B swaps with the
    side the robot moves toward; blocks never swap with each other.  The
    sequence length equals the inversion count between the two patterns,
    which is the minimum possible number of adjacent transpositions.

    Raises:
        InvalidOrderingPairError: the patterns do not share the same tokens
            or do not list the obstacle blocks in the same order.
    """
    if isinstance(sigma, OrderingPair) or isinstance(sigma_prime, OrderingPair):
        raise TypeError("pass OrderingPair.sigma and OrderingPair.sigma_prime")
    current = [token_key(tok) for tok in sigma]
    target = [token_key(tok) for tok in sigma_prime]
    if sorted(current) != sorted(target):
        raise InvalidOrderingPairError("orderings are over different token sets")
    if [k for k in current if k[0] == "o"] != [k for k in target if k[0] == "o"]:
        raise InvalidOrderingPairError("obstacle blocks appear in different orders")
    rank = {key: pos for pos, key in enumerate(target)}
    tokens_by_key = {token_key(tok): tok for tok in sigma}

    swaps: list[Swap] = []
    while True:
        for p in range(len(current) - 1):
            if rank[current[p]] > rank[current[p + 1]]:
                break
        else:
            return swaps
        left, right = current[p], current[p + 1]
        if left[0] == "r" and right[0] == "r":
            swaps.append(CaseASwap(left=left[1], right=right[1]))
        elif left[0] == "r":
            block = tokens_by_key[right]
            swaps.append(
                CaseBSwap(robot=left[1], block=block.obstacles, side=Side.RIGHT)
            )
        elif right[0] == "r":
            block = tokens_by_key[left]
            swaps.append(
                CaseBSwap(robot=right[1], block=block.obstacles, side=Side.LEFT)
            )
        else:  # two blocks out of order: impossible after the checks above
            raise InvalidOrderingPairError("obstacle blocks cannot swap")
        current[p], current[p + 1] = current[p + 1], current[p]


def _block_representative(query: ConfigurationQuery, block: frozenset[int]) -> int:
    """The block member to circle around: smallest by coordinate tuple.

    Depends only on geometry, so relabeling coincident obstacles cannot change
    the emitted trajectory.
    """
    return min(block, key=lambda k: tuple(query.obstacles[k]))


def _swap_deformation(
    query: ConfigurationQuery, frame: Frame, swap: Swap, snap_tol: float
) -> Deformation:
    if isinstance(swap, CaseASwap):
        return swap_case_a(query, frame, swap.left, swap.right, snap_tol)
    representative = _block_representative(query, swap.block)
    return swap_case_b(query, frame, swap.robot, representative, swap.side, snap_tol)


def generic_section(
    query: ConfigurationQuery, frame: Frame, snap_tol: float = 0.0
) -> PiecewisePath:
    """Path for a generic query (all robot projections pairwise distinct and
    distinct from obstacle projections).

    If the start and goal orderings agree, the path is the straight-line
    section.  Otherwise the leftmost-inversion swap is performed first and the
    rule recurses on the deformed configuration, nesting one three-phase
    composition per swap; the goal side of every swap is the identity.
    """
    pair = orderings(query, frame, snap_tol)
    if pair.patterns_equal():
        return affine_section(query, frame, snap_tol)
    swaps = transposition_sequence(pair.sigma, pair.sigma_prime)
    return _section_for_swaps(query, frame, swaps, snap_tol)


def _section_for_swaps(
    query: ConfigurationQuery, frame: Frame, swaps: list[Swap], snap_tol: float
) -> PiecewisePath:
    if not swaps:
        return affine_section(query, frame, snap_tol)
    deformation = _swap_deformation(query, frame, swaps[0], snap_tol)
    return compose_with_section(
        deformation,
        lambda deformed: _section_for_swaps(deformed, frame, swaps[1:], snap_tol),
    )


@dataclass(frozen=True, eq=False)
class PlanResult:
    """A planned motion together with the data that selected it.

    ``region`` labels the original query; ``ordering_pair`` belongs to the
    generic configuration actually sorted (the query itself, or its
    desingularized image).  ``domain_index`` is ``region.c``.
    """

    path: PiecewisePath
    region: RegionLabel
    ordering_pair: OrderingPair
    domain_index: int
    swap_count: int
    mode: FrameMode
    frame: Frame


def default_mode(query: ConfigurationQuery) -> FrameMode:
    """Obstacle-pair frames when available (even d, m >= 2), else fixed."""
    if query.dim % 2 == 0 and query.obstacle_count >= 2:
        return FrameMode.OBSTACLE_PAIR
    return FrameMode.FIXED


def plan(
    query: ConfigurationQuery,
    mode: Optional[Union[FrameMode, str]] = None,
    snap_tol: float = 0.0,
) -> PlanResult:
    """Plan a collision-free motion for a query.

    Generic queries go straight to :func:`generic_section`.  Degenerate ones
    are first desingularized, and the generic path on the shifted
    configuration is wrapped in one more three-phase composition, so the
    emitted path still starts and ends at the query's own positions.

    Raises:
        QueryValidationError: via ConfigurationQuery construction upstream.
        ModeUnsupportedError: obstacle-pair mode in odd dimension or m < 2.
    """
    mode = default_mode(query) if mode is None else FrameMode(mode)
    frame = make_frame(query, mode)
    label = classify(query, frame, snap_tol)
    n = query.robot_count

    if label.j == 2 * n:
        generic_query = query
        path = generic_section(query, frame, snap_tol)
    else:
        deformation = desingularize(query, frame, snap_tol)
        generic_query = deformation.end_query()
        post_label = classify(generic_query, frame, snap_tol)
        if post_label.j != 2 * n or post_label.t != label.t:
            raise InternalConsistencyError(
                "desingularization failed to reach a generic configuration "
                f"(expected j={2 * n}, t={label.t}; got j={post_label.j}, t={post_label.t})"
            )
        path = compose_with_section(
            deformation, lambda dq: generic_section(dq, frame, snap_tol)
        )

    pair = orderings(generic_query, frame, snap_tol)
    swap_count = len(transposition_sequence(pair.sigma, pair.sigma_prime))
    return PlanResult(
        path=path,
        region=label,
        ordering_pair=pair,
        domain_index=label.c,
        swap_count=swap_count,
        mode=mode,
        frame=frame,
    )
