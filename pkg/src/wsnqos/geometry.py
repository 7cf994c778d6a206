"""Node placement geometry, the allowed-neighbor region, and hop estimation.

A node may only forward to neighbors that are inside its radio range AND no
farther from the sink than itself (the intersection of the sender's radio
disk with the sink-centered disk through the sender). That region's area,
divided by the number of neighbors inside it, gives an estimate of the
spacing between relays and hence of the number of hops left on a straight
path to the sink.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class NoNeighborsError(ValueError):
    """Hop-spacing estimate requested with zero neighbors in the region."""


@dataclass(frozen=True)
class Position:
    x: float
    y: float


def distance(a: Position, b: Position) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def is_allowed_neighbor(
    sender: Position, candidate: Position, sink: Position, radio_range: float
) -> bool:
    """True iff candidate is in radio reach and not farther from the sink.

    The sender itself never qualifies.
    """
    if candidate == sender:
        return False
    return (
        distance(sender, candidate) <= radio_range
        and distance(candidate, sink) <= distance(sender, sink)
    )


def circle_intersection_area(r1: float, r2: float, d: float) -> float:
    """Area of the lens formed by two circles with center distance d."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        r = min(r1, r2)
        return math.pi * r * r
    d1 = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    d2 = d - d1
    # clamp the acos arguments against round-off at tangency
    a1 = max(-1.0, min(1.0, d1 / r1))
    a2 = max(-1.0, min(1.0, d2 / r2))
    seg1 = r1 * r1 * math.acos(a1) - d1 * math.sqrt(max(r1 * r1 - d1 * d1, 0.0))
    seg2 = r2 * r2 * math.acos(a2) - d2 * math.sqrt(max(r2 * r2 - d2 * d2, 0.0))
    return seg1 + seg2


def allowed_area(sender: Position, sink: Position, radio_range: float) -> float:
    """Area of the sender's allowed-neighbor region.

    Intersection of disk(sender, radio_range) with disk(sink, |sender-sink|);
    requires the sender not to sit exactly on the sink.
    """
    d = distance(sender, sink)
    if d <= 0.0:
        raise ValueError("sender and sink must not coincide")
    return circle_intersection_area(radio_range, d, d)


def delta(area: float, neighbor_count: int) -> float:
    """Estimated spacing between relays: sqrt(area / neighbor_count)."""
    if neighbor_count <= 0:
        raise NoNeighborsError("neighbor_count must be > 0")
    return math.sqrt(area / neighbor_count)


def hops_linear(sender: Position, sink: Position, spacing: float) -> int:
    """Hops of a straight path to the sink at the given relay spacing.

    Ceiling of distance/spacing, never less than one hop.
    """
    if spacing <= 0.0:
        raise ValueError("spacing must be > 0")
    return max(1, math.ceil(distance(sender, sink) / spacing))


@dataclass(frozen=True)
class Topology:
    """Immutable node placement: id -> position, plus sink id and radio range."""

    positions: dict[int, Position]
    sink: int
    radio_range: float
    _sink_dist: dict[int, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.sink not in self.positions:
            raise ValueError(f"sink id {self.sink} has no position")
        if self.radio_range <= 0.0:
            raise ValueError("radio_range must be > 0")
        sink_pos = self.positions[self.sink]
        object.__setattr__(
            self,
            "_sink_dist",
            {nid: distance(p, sink_pos) for nid, p in self.positions.items()},
        )

    def distance_to_sink(self, node_id: int) -> float:
        return self._sink_dist[node_id]

    def allowed_neighbor_ids(self, sender: int) -> list[int]:
        """Ids (sorted) inside the sender's allowed region, sender excluded."""
        sender_pos = self.positions[sender]
        sink_pos = self.positions[self.sink]
        return sorted(
            nid
            for nid, pos in self.positions.items()
            if nid != sender
            and is_allowed_neighbor(sender_pos, pos, sink_pos, self.radio_range)
        )
