"""Discrete-event simulator for QoS-aware geographic routing in sensor networks."""

from .config import SINK_ID, ConfigError, ScenarioConfig, dumps_config, load_config
from .engine import DropCause, Metrics, Simulation, run
from .node import Packet, TrafficClass
from .routing import CostWeights

__version__ = "0.1.0"

__all__ = [
    "SINK_ID",
    "ConfigError",
    "CostWeights",
    "DropCause",
    "Metrics",
    "Packet",
    "ScenarioConfig",
    "Simulation",
    "TrafficClass",
    "dumps_config",
    "load_config",
    "run",
    "__version__",
]
