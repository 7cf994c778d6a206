"""Closed-form mean waiting times for a two-class non-preemptive priority queue.

A relay node serves real-time (class 1) and non-real-time (class 2) packets
from separate FIFO queues with strict, non-preemptive priority. With Poisson
arrivals and arbitrary service-time moments the steady-state mean waits are

    W1 = R / (1 - rho1)
    W2 = R / ((1 - rho1) * (1 - rho1 - rho2))

where rho_i = lambda_i * E[X_i] and R = 0.5 * sum_i lambda_i * E[X_i^2] is
the mean residual service seen by an arrival. Routing uses these to predict
per-hop delay; an offered load at or past the stability boundary raises
:class:`UnstableError` so the caller can treat the hop as infinite-cost.
"""

from __future__ import annotations

from dataclasses import dataclass


class UnstableError(ValueError):
    """Offered load at or beyond the stability boundary of the queue."""


@dataclass(frozen=True)
class ClassLoad:
    """Arrival rate and service-time moments for one traffic class."""

    arrival_rate: float  # packets/s
    mean_service: float  # s
    second_moment_service: float  # s^2

    def __post_init__(self) -> None:
        if self.arrival_rate < 0.0:
            raise ValueError(f"arrival_rate must be >= 0, got {self.arrival_rate}")
        if self.mean_service <= 0.0:
            raise ValueError(f"mean_service must be > 0, got {self.mean_service}")
        # small relative slack so E[X^2] == E[X]^2 survives float round-off
        if self.second_moment_service < self.mean_service**2 * (1.0 - 1e-12):
            raise ValueError(
                "second_moment_service implies negative service variance"
            )

    @classmethod
    def deterministic(cls, arrival_rate: float, service_time: float) -> "ClassLoad":
        """Load with a fixed service time, so E[X^2] = X^2."""
        return cls(arrival_rate, service_time, service_time * service_time)


@dataclass(frozen=True)
class QueueModelParams:
    """Per-class loads of one relay: rt is class 1 (high priority)."""

    rt: ClassLoad
    nrt: ClassLoad


def utilization(load: ClassLoad) -> float:
    """Server utilization rho = lambda * E[X] contributed by one class."""
    return load.arrival_rate * load.mean_service


def mean_residual(params: QueueModelParams) -> float:
    """Mean residual service time R = 0.5 * sum_i lambda_i * E[X_i^2]."""
    return 0.5 * (
        params.rt.arrival_rate * params.rt.second_moment_service
        + params.nrt.arrival_rate * params.nrt.second_moment_service
    )


def wait_rt(params: QueueModelParams) -> float:
    """Mean queueing wait of the high-priority class, W1 = R / (1 - rho1).

    Raises UnstableError when rho1 >= 1.
    """
    rho1 = utilization(params.rt)
    if rho1 >= 1.0:
        raise UnstableError(f"high-priority load rho1 = {rho1:.4g} >= 1")
    return mean_residual(params) / (1.0 - rho1)


def wait_nrt(params: QueueModelParams) -> float:
    """Mean queueing wait of the low-priority class.

    W2 = R / ((1 - rho1) * (1 - rho1 - rho2)); raises UnstableError when
    the total load rho1 + rho2 >= 1.
    """
    rho1 = utilization(params.rt)
    rho2 = utilization(params.nrt)
    if rho1 + rho2 >= 1.0:
        raise UnstableError(f"total load rho1 + rho2 = {rho1 + rho2:.4g} >= 1")
    return mean_residual(params) / ((1.0 - rho1) * (1.0 - rho1 - rho2))
