"""Receiver-side runtime: packet records, dual priority queues, deadline expiry.

Each relay keeps two FIFO queues. Real-time packets always serve before
non-real-time ones, service is never preempted, and packets whose deadline
passed while queued are discarded before the next dequeue.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .energy import RadioParams


class TrafficClass(Enum):
    RT = "rt"
    NRT = "nrt"


@dataclass
class Packet:
    """One routed data unit; hop_trace holds (node id, arrival time) pairs."""

    packet_id: int
    cls: TrafficClass
    size_bits: int
    source: int
    sink: int
    created_at: float
    deadline: float
    hop_trace: list[tuple[int, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.size_bits <= 0:
            raise ValueError("size_bits must be > 0")
        if self.deadline <= self.created_at:
            raise ValueError("deadline must be after creation time")
        if not self.hop_trace:
            self.hop_trace = [(self.source, self.created_at)]


@dataclass
class NodeQueues:
    """Two bounded FIFO queues plus the packet currently on the radio."""

    capacity: int = 64
    rt: deque = field(default_factory=deque)
    nrt: deque = field(default_factory=deque)
    in_service: Packet | None = None

    def _queue_for(self, cls: TrafficClass) -> deque:
        return self.rt if cls is TrafficClass.RT else self.nrt


def classify_enqueue(queues: NodeQueues, packet: Packet) -> bool:
    """Append the packet to its class queue; False when the queue is full."""
    q = queues._queue_for(packet.cls)
    if len(q) >= queues.capacity:
        return False
    q.append(packet)
    return True


def dequeue_next(queues: NodeQueues) -> Packet | None:
    """Head of the RT queue, else head of the NRT queue, else None."""
    if queues.rt:
        return queues.rt.popleft()
    if queues.nrt:
        return queues.nrt.popleft()
    return None


def expire_drops(queues: NodeQueues, now: float) -> list[Packet]:
    """Remove and return every queued packet whose deadline is already past.

    The packet in service, if any, is untouched.
    """
    dropped: list[Packet] = []
    for q in (queues.rt, queues.nrt):
        if not q:
            continue
        survivors = [p for p in q if p.deadline >= now]
        if len(survivors) != len(q):
            dropped.extend(p for p in q if p.deadline < now)
            q.clear()
            q.extend(survivors)
    return dropped


def service_time(packet: Packet, radio: RadioParams) -> float:
    """Deterministic transmission time of the packet: size / bandwidth."""
    return packet.size_bits / radio.bandwidth


class RateEstimator:
    """Online per-class arrival-rate estimate at one node.

    Exponentially decayed arrival counter: each arrival adds an impulse of
    mass 1/tau and the total decays with time constant tau, so the reading
    is a low-pass-filtered arrival rate. Unlike an interarrival average it
    is unbiased under bursty arrivals (relayed traffic leaves upstream nodes
    back-to-back) and decays toward zero when a stream goes quiet instead of
    freezing at its last value.
    """

    def __init__(self, tau: float = 1.0):
        if tau <= 0.0:
            raise ValueError("tau must be > 0")
        self.tau = tau
        self._level = 0.0
        self._last_arrival = 0.0

    def observe(self, now: float) -> None:
        gap = now - self._last_arrival
        if gap > 0.0:
            self._level *= math.exp(-gap / self.tau)
            self._last_arrival = now
        self._level += 1.0 / self.tau

    def rate_at(self, now: float) -> float:
        """Estimated arrival rate as seen at time `now` (>= last arrival)."""
        gap = now - self._last_arrival
        if gap <= 0.0:
            return self._level
        return self._level * math.exp(-gap / self.tau)
