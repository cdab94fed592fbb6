"""Information measurements on a running or finished computing network."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

from .community import detect_communities
from .info import (
    DynamicsClass,
    DynamicsParams,
    SymbolStream,
    classify_dynamics,
    complexity,
    novelty_score,
    stream_entropy,
)

# model name -> fn(net, trajectory) -> dict of model-specific report entries
REPORT_EXTRAS: dict[str, Callable] = {}


def _entropy_of(symbols) -> float:
    """Entropy of pooled symbols; 0 bits for no observations."""
    if not symbols:
        return 0.0
    return stream_entropy(SymbolStream.from_symbols(symbols))


def edge_information(net, edge_id, window: int) -> float:
    """Entropy (bits) of the last ``window`` symbols carried by an edge."""
    if window < 1:
        raise ValueError("window must be positive")
    try:
        log = net.edges[edge_id].message_log
    except KeyError:
        raise KeyError(f"unknown edge {edge_id!r}") from None
    if len(log) < window:
        raise ValueError(f"edge {edge_id!r} carried {len(log)} symbols, fewer than window {window}")
    return _entropy_of(log[-window:])


def _pool(logs: dict, window: int) -> list:
    pooled = []
    for log in logs.values():
        pooled.extend(log[-window:])
    return pooled


def node_io_information(net, node_id, window: int) -> tuple[float, float]:
    """(received, produced) bits over the node's inbound and outbound logs.

    Each per-edge log contributes at most its last ``window`` symbols.
    """
    try:
        node = net.nodes[node_id]
    except KeyError:
        raise KeyError(f"unknown node {node_id!r}") from None
    return _entropy_of(_pool(node.inbox, window)), _entropy_of(_pool(node.outbox, window))


def system_information(net, window: int) -> tuple[float, float]:
    """(received, produced) bits pooled over external input / output edges."""
    ins = {e.id: e.message_log for e in net.edges.values() if e.external == "in"}
    outs = {e.id: e.message_log for e in net.edges.values() if e.external == "out"}
    if not ins and not outs:
        raise ValueError("network has no external edges")
    return _entropy_of(_pool(ins, window)), _entropy_of(_pool(outs, window))


def split_history(log: list, window: int):
    """Split a log into (history, recent = last ``window`` symbols).

    Returns None unless the history is at least as long as the recent part.
    """
    if window < 1 or len(log) < 2 * window:
        return None
    stream = SymbolStream.from_symbols(log)
    return stream[: len(log) - window], stream[len(log) - window:]


def edge_novelty(edge, window: int) -> float | None:
    """Novelty of an edge's last ``window`` symbols against its earlier traffic.

    None when the edge has carried fewer than ``2 * window`` symbols.
    """
    parts = split_history(edge.message_log, window)
    if parts is None:
        return None
    return novelty_score(*parts)


def edge_complexity(edge, window: int) -> float:
    """Complexity of the recent traffic, normalised by the edge's declared
    alphabet if it has one, otherwise by the symbols actually seen."""
    log = edge.message_log[-window:]
    alphabet = getattr(edge, "alphabet", None)
    k = len(alphabet) if alphabet else len(set(log))
    if k < 2:
        return 0.0
    return complexity(min(_entropy_of(log) / math.log2(k), 1.0))


@dataclass
class MetricsReport:
    model: str
    seed: int
    fast_steps: int
    slow_steps: int
    window: int
    edge_entropy: dict = field(default_factory=dict)
    edge_complexity: dict = field(default_factory=dict)
    node_information: dict = field(default_factory=dict)
    system_information: tuple | None = None
    novelty: dict = field(default_factory=dict)
    communities: list = field(default_factory=list)
    dynamics: DynamicsClass | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        dyn = None
        if self.dynamics is not None:
            dyn = {"class": self.dynamics.kind, "period": self.dynamics.period,
                   "normalized_entropy": self.dynamics.entropy}
        return {
            "units": "bits",
            "model": self.model,
            "seed": self.seed,
            "fast_steps": self.fast_steps,
            "slow_steps": self.slow_steps,
            "window": self.window,
            "edge_entropy_bits": self.edge_entropy,
            "edge_complexity": self.edge_complexity,
            "node_information_bits": {k: {"received": r, "produced": p}
                                      for k, (r, p) in self.node_information.items()},
            "system_information_bits": None if self.system_information is None else {
                "received": self.system_information[0], "produced": self.system_information[1]},
            "edge_novelty": self.novelty,
            "communities": self.communities,
            "dynamics": dyn,
            "extras": self.extras,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def mean_edge_entropy(self) -> float:
        vals = list(self.edge_entropy.values())
        return sum(vals) / len(vals) if vals else 0.0

    def mean_novelty(self) -> float:
        vals = list(self.novelty.values())
        return sum(vals) / len(vals) if vals else 0.0

    def mean_complexity(self) -> float:
        vals = list(self.edge_complexity.values())
        return sum(vals) / len(vals) if vals else 0.0


@dataclass
class MetricsSettings:
    window: int = 64
    novelty_window: int = 16
    dynamics: DynamicsParams = field(default_factory=DynamicsParams)


def measure(net, trajectory, settings: MetricsSettings | None = None) -> MetricsReport:
    """Build the full report for a network after a run."""
    s = settings or MetricsSettings()
    w = s.window
    report = MetricsReport(
        model=net.model,
        seed=int(net.seed),
        fast_steps=net.step_count,
        slow_steps=net.slow_count,
        window=w,
    )
    for eid, edge in net.edges.items():
        report.edge_entropy[eid] = _entropy_of(edge.message_log[-w:])
        report.edge_complexity[eid] = edge_complexity(edge, w)
        nov = edge_novelty(edge, s.novelty_window)
        if nov is not None:
            report.novelty[eid] = nov
    for nid in net.nodes:
        report.node_information[nid] = node_io_information(net, nid, w)
    if any(e.external for e in net.edges.values()):
        report.system_information = system_information(net, w)
    report.communities = detect_communities(net)
    if trajectory is not None and len(trajectory) >= s.dynamics.transient + s.dynamics.window:
        report.dynamics = classify_dynamics(trajectory.fingerprints, s.dynamics)
    extra = REPORT_EXTRAS.get(net.model)
    if extra is not None:
        report.extras = extra(net, trajectory)
    return report
