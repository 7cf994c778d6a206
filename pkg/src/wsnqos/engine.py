"""Deterministic discrete-event core.

One run owns an event calendar keyed by (time, sequence), per-node state
(battery, dual priority queues, per-link reception statistics, arrival-rate
estimates) and a metrics ledger. Every stochastic stream (placement, each
source's per-class traffic, each directed link's loss draws) has its own
generator derived from the master seed by a stable label, so identical
(config, seed) pairs reproduce bit-identical results and changing one
stream never perturbs the others.

Idealizations, chosen to isolate the routing behavior under test: zero
propagation delay, ground-truth per-packet delivery feedback to the sender
(a free link-layer acknowledgment), senders read neighbors' current queue
and energy state at zero message cost, and the sink is mains-powered.
"""

from __future__ import annotations

import hashlib
import heapq
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import SINK_ID, ScenarioConfig
from .energy import Battery, rx_energy, tx_energy
from .geometry import Position, Topology, allowed_area, delta, distance
from .linkest import LinkStats
from .node import (
    NodeQueues,
    Packet,
    RateEstimator,
    TrafficClass,
    classify_enqueue,
    dequeue_next,
    expire_drops,
    service_time,
)
from .queueing import ClassLoad, QueueModelParams
from .routing import (
    NeighborView,
    build_neighbor_table,
    min_finite_delay,
    predictive_drop_check,
    select_next_hop,
)


class EventKind(Enum):
    PACKET_GENERATED = "packet_generated"
    TRANSMISSION_COMPLETE = "transmission_complete"
    NODE_DEATH = "node_death"


class DropCause(Enum):
    EXPIRED = "expired"
    PREDICTIVE = "predictive"
    NO_ROUTE = "no_route"
    BUFFER_OVERFLOW = "buffer_overflow"
    NODE_DEATH = "node_death"
    LINK_LOSS = "link_loss"


@dataclass(order=True)
class Event:
    time: float
    seq: int
    kind: EventKind = field(compare=False)
    node: int = field(compare=False)
    cls: TrafficClass | None = field(compare=False, default=None)
    packet: Packet | None = field(compare=False, default=None)
    target: int | None = field(compare=False, default=None)


@dataclass(frozen=True)
class DeliveredRecord:
    """Per-delivery detail kept only when trace collection is enabled."""

    packet_id: int
    cls: TrafficClass
    created_at: float
    deadline: float
    arrival: float
    hop_trace: tuple[tuple[int, float], ...]


@dataclass
class Metrics:
    """Counters and samples accumulated over one run."""

    generated: Counter = field(default_factory=Counter)  # cls -> n
    delivered: Counter = field(default_factory=Counter)  # cls -> n
    drops: Counter = field(default_factory=Counter)  # (cause, cls) -> n
    delays: dict = field(
        default_factory=lambda: {TrafficClass.RT: [], TrafficClass.NRT: []}
    )
    delivered_times: list[float] = field(default_factory=list)
    wait_sum: defaultdict = field(default_factory=lambda: defaultdict(float))
    wait_count: Counter = field(default_factory=Counter)  # (node, cls) -> n
    tx_by_node: Counter = field(default_factory=Counter)
    rx_by_node: Counter = field(default_factory=Counter)
    tx_by_link: Counter = field(default_factory=Counter)  # (from, to) -> n
    total_energy: float = 0.0
    energy_by_node: dict[int, float] = field(default_factory=dict)
    residual_by_node: dict[int, float] = field(default_factory=dict)
    deaths: list[tuple[float, int]] = field(default_factory=list)
    in_flight: int = 0
    end_time: float = 0.0
    sensor_count: int = 0
    delivered_records: list[DeliveredRecord] | None = None

    def generated_total(self) -> int:
        return sum(self.generated.values())

    def delivered_total(self) -> int:
        return sum(self.delivered.values())

    def drops_total(self) -> int:
        return sum(self.drops.values())

    def drop_count(self, cause: DropCause) -> int:
        return sum(n for (c, _cls), n in self.drops.items() if c is cause)

    @property
    def first_death_time(self) -> float | None:
        return self.deaths[0][0] if self.deaths else None

    def delay_stats(self, cls: TrafficClass) -> tuple[float, float, float]:
        """(mean, p95, max) end-to-end delay for one class; NaNs when empty."""
        values = self.delays[cls]
        if not values:
            return (math.nan, math.nan, math.nan)
        arr = np.asarray(values)
        return (float(arr.mean()), float(np.percentile(arr, 95)), float(arr.max()))

    def mean_wait(self, node: int, cls: TrafficClass) -> float:
        """Mean queueing wait of packets that entered service at a node."""
        count = self.wait_count[(node, cls)]
        if count == 0:
            return math.nan
        return self.wait_sum[(node, cls)] / count

    def alive_at(self, t: float) -> int:
        """Sensor nodes still alive at time t."""
        return self.sensor_count - sum(1 for when, _nid in self.deaths if when <= t)


def stream_rng(master_seed: int, label: str) -> np.random.Generator:
    """Generator for one named stochastic stream of a run."""
    tag = int.from_bytes(hashlib.sha256(label.encode()).digest()[:8], "big")
    return np.random.default_rng(np.random.SeedSequence([master_seed, tag]))


def poisson_arrival_times(rate: float, horizon: float, rng: np.random.Generator):
    """Arrival instants of a Poisson process with the given rate on (0, horizon]."""
    if rate <= 0.0 or horizon <= 0.0:
        return np.empty(0)
    chunks = []
    last = 0.0
    while last <= horizon:
        n = max(64, int(rate * (horizon - last) * 1.2) + 64)
        gaps = rng.exponential(1.0 / rate, size=n)
        chunk = last + np.cumsum(gaps)
        chunks.append(chunk)
        last = float(chunk[-1])
    times = np.concatenate(chunks)
    return times[times <= horizon]


@dataclass
class NodeState:
    node_id: int
    position: Position
    battery: Battery | None  # None: mains-powered (the sink)
    queues: NodeQueues
    alive: bool = True
    in_service_target: int | None = None
    link_stats: dict[int, LinkStats] = field(default_factory=dict)
    rate_est: dict[TrafficClass, RateEstimator] = field(default_factory=dict)


class Simulation:
    """Single deterministic run of one scenario."""

    def __init__(self, cfg: ScenarioConfig, collect_traces: bool = False):
        self.cfg = cfg
        self.radio = cfg.radio_params()
        self.weights = cfg.weights()
        self.now = 0.0
        self._seq = 0
        self.heap: list[Event] = []
        self.metrics = Metrics(sensor_count=cfg.node_count - 1)
        if collect_traces:
            self.metrics.delivered_records = []

        self.topology = self._place_nodes()
        self.sink_position = self.topology.positions[SINK_ID]
        self.nodes: dict[int, NodeState] = {}
        for nid, pos in self.topology.positions.items():
            self.nodes[nid] = NodeState(
                node_id=nid,
                position=pos,
                battery=None if nid == SINK_ID else Battery(cfg.initial_energy),
                queues=NodeQueues(capacity=cfg.queue_capacity),
                rate_est={
                    cls: RateEstimator(cfg.rate_tau) for cls in TrafficClass
                },
            )
        self.allowed_static = {
            nid: self.topology.allowed_neighbor_ids(nid)
            for nid in self.topology.positions
            if nid != SINK_ID
        }
        self._area_cache: dict[int, float] = {}
        self._loss_rngs: dict[tuple[int, int], np.random.Generator] = {}

        self.source_set = set(cfg.source_ids())
        self.alive_sources = len(self.source_set)
        self._pending_deaths = 0
        self._next_packet_id = 0

        self._arrivals: dict[tuple[int, TrafficClass], np.ndarray] = {}
        self._arrival_idx: dict[tuple[int, TrafficClass], int] = {}
        rates = {TrafficClass.RT: cfg.rate_rt, TrafficClass.NRT: cfg.rate_nrt}
        for nid in sorted(self.source_set):
            for cls in TrafficClass:
                rng = stream_rng(cfg.seed, f"traffic/{nid}/{cls.value}")
                self._arrivals[(nid, cls)] = poisson_arrival_times(
                    rates[cls], cfg.duration, rng
                )
                self._arrival_idx[(nid, cls)] = 0
                self._schedule_next_arrival(nid, cls)

    # -- setup ---------------------------------------------------------

    def _place_nodes(self) -> Topology:
        cfg = self.cfg
        rng = stream_rng(cfg.seed, "placement")
        positions = {SINK_ID: Position(cfg.sink_x, cfg.sink_y)}
        for nid in range(1, cfg.node_count):
            if nid in cfg.positions:
                x, y = cfg.positions[nid]
            else:
                x = rng.uniform(0.0, cfg.grid_width)
                y = rng.uniform(0.0, cfg.grid_height)
            positions[nid] = Position(x, y)
        return Topology(positions, SINK_ID, cfg.radio_range)

    def _loss_rng(self, u: int, v: int) -> np.random.Generator:
        key = (u, v)
        rng = self._loss_rngs.get(key)
        if rng is None:
            rng = stream_rng(self.cfg.seed, f"loss/{u}/{v}")
            self._loss_rngs[key] = rng
        return rng

    def _push(self, time: float, kind: EventKind, node: int, **kw) -> None:
        self._seq += 1
        heapq.heappush(self.heap, Event(time, self._seq, kind, node, **kw))

    def _schedule_next_arrival(self, nid: int, cls: TrafficClass) -> None:
        idx = self._arrival_idx[(nid, cls)]
        times = self._arrivals[(nid, cls)]
        if idx < len(times):
            self._arrival_idx[(nid, cls)] = idx + 1
            self._push(float(times[idx]), EventKind.PACKET_GENERATED, nid, cls=cls)

    # -- main loop -----------------------------------------------------

    def run(self) -> Metrics:
        horizon = self.cfg.duration
        while self.heap:
            ev = heapq.heappop(self.heap)
            if ev.time > horizon:
                break
            assert ev.time >= self.now, "event calendar went backwards"
            self.now = ev.time
            if ev.kind is EventKind.PACKET_GENERATED:
                self._on_generated(ev)
            elif ev.kind is EventKind.TRANSMISSION_COMPLETE:
                self._on_tx_complete(ev)
            else:
                self._on_node_death(ev)
            if self.alive_sources == 0 and self._pending_deaths == 0:
                break
        self._finalize()
        return self.metrics

    # -- handlers ------------------------------------------------------

    def _on_generated(self, ev: Event) -> None:
        node = self.nodes[ev.node]
        if not node.alive:
            return
        self._schedule_next_arrival(ev.node, ev.cls)
        budget = (
            self.cfg.deadline_rt
            if ev.cls is TrafficClass.RT
            else self.cfg.deadline_nrt
        )
        packet = Packet(
            packet_id=self._next_packet_id,
            cls=ev.cls,
            size_bits=self.cfg.packet_bits,
            source=ev.node,
            sink=SINK_ID,
            created_at=self.now,
            deadline=self.now + budget,
        )
        self._next_packet_id += 1
        self.metrics.generated[ev.cls] += 1
        node.rate_est[ev.cls].observe(self.now)
        if not classify_enqueue(node.queues, packet):
            self._drop(packet, DropCause.BUFFER_OVERFLOW)
        elif node.queues.in_service is None:
            self._try_start_service(node)

    def _on_tx_complete(self, ev: Event) -> None:
        node = self.nodes[ev.node]
        node.queues.in_service = None
        node.in_service_target = None
        if not node.alive:
            # receive debits killed the node mid-service
            self._drop(ev.packet, DropCause.NODE_DEATH)
            return
        self._deliver(node, ev.packet, ev.target)
        if node.alive and node.queues.in_service is None:
            self._try_start_service(node)

    def _on_node_death(self, ev: Event) -> None:
        self._pending_deaths -= 1
        node = self.nodes[ev.node]
        for q in (node.queues.rt, node.queues.nrt):
            while q:
                self._drop(q.popleft(), DropCause.NODE_DEATH)
        self.metrics.deaths.append((self.now, ev.node))
        if ev.node in self.source_set:
            self.alive_sources -= 1

    # -- packet lifecycle ----------------------------------------------

    def _try_start_service(self, node: NodeState) -> None:
        queues = node.queues
        if queues.in_service is not None or not node.alive:
            return
        while True:
            for p in expire_drops(queues, self.now):
                self._drop(p, DropCause.EXPIRED)
            packet = dequeue_next(queues)
            if packet is None:
                return
            decision = self._route(node, packet)
            if isinstance(decision, DropCause):
                self._drop(packet, decision)
                continue
            key = (node.node_id, packet.cls)
            self.metrics.wait_sum[key] += self.now - packet.hop_trace[-1][1]
            self.metrics.wait_count[key] += 1
            queues.in_service = packet
            node.in_service_target = decision
            self._push(
                self.now + service_time(packet, self.radio),
                EventKind.TRANSMISSION_COMPLETE,
                node.node_id,
                packet=packet,
                target=decision,
            )
            return

    def _route(self, node: NodeState, packet: Packet) -> int | DropCause:
        candidates = []
        for nid in self.allowed_static[node.node_id]:
            st = self.nodes[nid]
            if not st.alive:
                continue
            candidates.append(
                NeighborView(
                    node_id=nid,
                    position=st.position,
                    residual_energy=(
                        math.inf if st.battery is None else st.battery.residual
                    ),
                    queue_params=self._measured_params(st),
                    prr=self._prr(node, nid),
                )
            )
        if not candidates:
            return DropCause.NO_ROUTE
        table = build_neighbor_table(
            node.position,
            packet.cls,
            candidates,
            self.cfg.packet_bits,
            self.radio,
            self.weights,
            self.cfg.include_service_time,
        )
        if self.cfg.predictive_drop:
            area = self._allowed_area(node.node_id)
            hop_delay = min_finite_delay(table)
            if area > 0.0 and hop_delay is not None:
                spacing = delta(area, len(table))
                if spacing > 0.0 and not predictive_drop_check(
                    packet.deadline,
                    self.now,
                    node.position,
                    self.sink_position,
                    spacing,
                    hop_delay,
                ):
                    return DropCause.PREDICTIVE
        choice = select_next_hop(table, self.weights)
        if choice is None:
            return DropCause.NO_ROUTE
        return choice

    def _deliver(self, sender: NodeState, packet: Packet, target_id: int) -> None:
        k = packet.size_bits
        target = self.nodes[target_id]
        amount = tx_energy(k, distance(sender.position, target.position), self.radio)
        self.metrics.total_energy += sender.battery.debit(amount)
        if not sender.battery.alive:
            self._kill(sender)
            self._drop(packet, DropCause.NODE_DEATH)
            return
        self.metrics.tx_by_node[sender.node_id] += 1
        self.metrics.tx_by_link[(sender.node_id, target_id)] += 1
        stats = self._link_stats(sender, target_id)
        loss_p = self.cfg.loss_for(sender.node_id, target_id)
        if loss_p > 0.0 and self._loss_rng(sender.node_id, target_id).random() < loss_p:
            stats.record_outcome(False)
            self._drop(packet, DropCause.LINK_LOSS)
            return
        if target_id == SINK_ID:
            stats.record_outcome(True)
            if packet.deadline < self.now:
                self._drop(packet, DropCause.EXPIRED)
                return
            packet.hop_trace.append((target_id, self.now))
            self._record_delivery(packet)
            return
        if not target.alive:
            stats.record_outcome(False)
            self._drop(packet, DropCause.NODE_DEATH)
            return
        self.metrics.total_energy += target.battery.debit(rx_energy(k, self.radio))
        if not target.battery.alive:
            self._kill(target)
            stats.record_outcome(False)
            self._drop(packet, DropCause.NODE_DEATH)
            return
        self.metrics.rx_by_node[target_id] += 1
        stats.record_outcome(True)
        target.rate_est[packet.cls].observe(self.now)
        if packet.deadline < self.now:
            self._drop(packet, DropCause.EXPIRED)
            return
        packet.hop_trace.append((target_id, self.now))
        if not classify_enqueue(target.queues, packet):
            self._drop(packet, DropCause.BUFFER_OVERFLOW)
            return
        if target.queues.in_service is None:
            self._try_start_service(target)

    def _record_delivery(self, packet: Packet) -> None:
        m = self.metrics
        m.delivered[packet.cls] += 1
        m.delays[packet.cls].append(self.now - packet.created_at)
        m.delivered_times.append(self.now)
        prev = math.inf
        for nid, _when in packet.hop_trace:
            d = self.topology.distance_to_sink(nid)
            assert d <= prev, "hop trace moved away from the sink"
            prev = d
        if m.delivered_records is not None:
            m.delivered_records.append(
                DeliveredRecord(
                    packet_id=packet.packet_id,
                    cls=packet.cls,
                    created_at=packet.created_at,
                    deadline=packet.deadline,
                    arrival=self.now,
                    hop_trace=tuple(packet.hop_trace),
                )
            )

    def _kill(self, node: NodeState) -> None:
        node.alive = False
        self._pending_deaths += 1
        self._push(self.now, EventKind.NODE_DEATH, node.node_id)

    def _drop(self, packet: Packet, cause: DropCause) -> None:
        self.metrics.drops[(cause, packet.cls)] += 1

    # -- sender-visible neighbor state -----------------------------------

    def _measured_params(self, st: NodeState) -> QueueModelParams:
        x = self.cfg.packet_bits / self.radio.bandwidth
        x2 = x * x
        return QueueModelParams(
            rt=ClassLoad(st.rate_est[TrafficClass.RT].rate_at(self.now), x, x2),
            nrt=ClassLoad(st.rate_est[TrafficClass.NRT].rate_at(self.now), x, x2),
        )

    def _prr(self, sender: NodeState, target_id: int) -> float:
        stats = sender.link_stats.get(target_id)
        return 1.0 if stats is None else stats.prr()

    def _link_stats(self, sender: NodeState, target_id: int) -> LinkStats:
        stats = sender.link_stats.get(target_id)
        if stats is None:
            stats = LinkStats(self.cfg.prr_window)
            sender.link_stats[target_id] = stats
        return stats

    def _allowed_area(self, nid: int) -> float:
        area = self._area_cache.get(nid)
        if area is None:
            pos = self.topology.positions[nid]
            if distance(pos, self.sink_position) <= 0.0:
                area = 0.0
            else:
                area = allowed_area(pos, self.sink_position, self.cfg.radio_range)
            self._area_cache[nid] = area
        return area

    def _finalize(self) -> None:
        m = self.metrics
        m.end_time = self.now
        for nid, st in self.nodes.items():
            if st.battery is not None:
                m.energy_by_node[nid] = st.battery.consumed
                m.residual_by_node[nid] = st.battery.residual
        m.in_flight = m.generated_total() - m.delivered_total() - m.drops_total()


def run(cfg: ScenarioConfig, collect_traces: bool = False) -> Metrics:
    """Run one scenario to completion and return its metrics."""
    return Simulation(cfg, collect_traces).run()
