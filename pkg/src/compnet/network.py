"""Computing-network data model: nodes, hyperedges, programs and slow algorithms.

A :class:`ComputingNetwork` bundles the node set, the edge set, the slow
structural algorithm and the readout rule, plus the seeded PRNG that every
stochastic choice in a run draws from.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

SYNCHRONOUS = "synchronous"
ASYNCHRONOUS = "asynchronous"
SCHEDULERS = (SYNCHRONOUS, ASYNCHRONOUS)


class ProgramError(RuntimeError):
    """A node program failed; carries the offending node id."""

    def __init__(self, node_id, cause: BaseException):
        super().__init__(f"program of node {node_id!r} failed: {cause}")
        self.node_id = node_id
        self.cause = cause


@dataclass
class Message:
    edge: str
    sender: str | None  # None for external feeds
    receiver: str | None  # None when nobody inside the network receives it
    payload: Any


@dataclass
class Program:
    """Update rule of a node.

    ``emit(node, net)`` returns the payloads sent this step, either a list
    broadcast on every edge the node can send on, or a dict mapping edge id
    to a list. ``update(node, messages, net)`` returns the node's new state.
    ``symbolize`` maps a payload to the symbol written to edge logs and
    ``readout(node, net)`` gives the node's contribution to the network function.
    """

    name: str
    emit: Callable
    update: Callable
    symbolize: Callable[[Any], Any] | None = None
    readout: Callable | None = None


PROGRAMS: dict[str, Program] = {}
SLOW_ALGORITHMS: dict[str, Callable] = {}


def register_program(program: Program) -> Program:
    PROGRAMS[program.name] = program
    return program


def slow_algorithm(name: str):
    """Decorator registering ``fn(net, **params)`` as a slow algorithm."""

    def deco(fn):
        SLOW_ALGORITHMS[name] = fn
        return fn

    return deco


def default_symbol(payload):
    if isinstance(payload, (bool, np.bool_)):
        return bool(payload)
    if isinstance(payload, (int, np.integer)):
        return int(payload)
    if isinstance(payload, (float, np.floating)):
        return round(float(payload), 4)
    if isinstance(payload, list):
        return tuple(payload)
    return payload


def _scalar_readout(node):
    return node.state


register_program(Program("constant", emit=lambda node, net: [node.state], update=lambda node, msgs, net: node.state))
register_program(Program("silent", emit=lambda node, net: [], update=lambda node, msgs, net: node.state))


def _copy_update(node, msgs, net):
    return msgs[-1].payload if msgs else node.state


register_program(Program("copy", emit=lambda node, net: [node.state], update=_copy_update))


@dataclass
class Feed:
    """Source of symbols for an external input edge.

    kinds: ``constant`` (``symbols[0]`` forever), ``cycle`` (repeat
    ``symbols`` in order; ``alternating`` is an alias), ``uniform`` (i.i.d.
    uniform over ``symbols`` from the network PRNG).
    """

    kind: str
    symbols: list = field(default_factory=lambda: [0, 1])

    KINDS = ("constant", "cycle", "alternating", "uniform")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown feed kind {self.kind!r}")
        if not self.symbols:
            raise ValueError("feed needs at least one symbol")

    def next(self, net: "ComputingNetwork"):
        if self.kind == "constant":
            return self.symbols[0]
        if self.kind == "uniform":
            return self.symbols[int(net.rng.integers(len(self.symbols)))]
        return self.symbols[net.step_count % len(self.symbols)]

    def to_dict(self):
        return {"kind": self.kind, "symbols": list(self.symbols)}


@dataclass
class Node:
    id: str
    state: Any = None
    program: str = "constant"
    params: dict = field(default_factory=dict)
    # per incident edge: symbols received / sent, append-only during a run
    inbox: dict = field(default_factory=dict)
    outbox: dict = field(default_factory=dict)


@dataclass
class HyperEdge:
    """Edge joining one or more nodes.

    Directed edges have exactly two members ``[source, target]``.
    Undirected edges let every member send to every other member.
    ``external`` marks single-member edges crossing the network boundary:
    ``"in"`` edges are driven by ``feed``, ``"out"`` edges have no receiver.
    """

    id: str
    members: list
    directed: bool = False
    state: Any = None
    external: str | None = None
    feed: Feed | None = None
    message_log: list = field(default_factory=list)
    senders: list = field(default_factory=list)

    def __post_init__(self):
        self.members = list(self.members)
        if len(self.members) < 1:
            raise ValueError(f"edge {self.id!r} has no members")
        if self.directed and len(self.members) != 2:
            raise ValueError(f"directed edge {self.id!r} must have exactly 2 members")
        if self.external not in (None, "in", "out"):
            raise ValueError(f"edge {self.id!r}: external must be 'in', 'out' or None")
        if self.external and (self.directed or len(self.members) != 1):
            raise ValueError(f"external edge {self.id!r} must be undirected with one member")
        if self.external == "in" and self.feed is None:
            raise ValueError(f"external input edge {self.id!r} needs a feed")

    def can_send(self, node_id) -> bool:
        if self.external == "in":
            return False
        if self.directed:
            return self.members[0] == node_id
        return node_id in self.members

    def receivers(self, sender) -> list:
        if self.external == "out":
            return []
        if self.external == "in":
            return list(self.members)
        if self.directed:
            return [self.members[1]] if sender == self.members[0] else []
        return [m for m in self.members if m != sender]

    def record(self, step: int, sender, symbols: list):
        """Append symbols sent by ``sender`` during ``step``."""
        self.message_log.extend(symbols)
        self.senders.extend([sender] * len(symbols))

    def fingerprint_state(self):
        return self.state


@dataclass
class SlowAlgorithm:
    name: str = "noop"
    params: dict = field(default_factory=dict)


@dataclass
class FunctionSpec:
    """Readout rule: ``outputs=None`` reads every node, otherwise the listed ids."""

    outputs: list | None = None


@dataclass
class ComputingNetwork:
    nodes: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    slow_algorithm: SlowAlgorithm = field(default_factory=SlowAlgorithm)
    function_spec: FunctionSpec = field(default_factory=FunctionSpec)
    scheduler: str = SYNCHRONOUS
    seed: int = 0
    fast_steps_per_slow_step: int = 1
    model: str = "custom"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.nodes, (list, tuple)):
            self.nodes = {n.id: n for n in self.nodes}
        if isinstance(self.edges, (list, tuple)):
            self.edges = {e.id: e for e in self.edges}
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.rng = np.random.default_rng(int(self.seed))
        self.step_count = 0
        self.slow_count = 0
        self._mailbox: dict = {}
        self._edge_counter = len(self.edges)
        self.validate()

    def validate(self):
        errors = []
        if self.scheduler not in SCHEDULERS:
            errors.append(f"unknown scheduler {self.scheduler!r}")
        if self.fast_steps_per_slow_step < 1:
            errors.append("fast_steps_per_slow_step must be >= 1")
        for nid, node in self.nodes.items():
            if node.program not in PROGRAMS:
                errors.append(f"node {nid!r}: unknown program {node.program!r}")
        for eid, edge in self.edges.items():
            for m in edge.members:
                if m not in self.nodes:
                    errors.append(f"edge {eid!r} references unknown node {m!r}")
        outputs = self.function_spec.outputs
        if outputs is not None:
            for o in outputs:
                if o not in self.nodes:
                    errors.append(f"function output {o!r} is not a node")
        if errors:
            raise ValueError("; ".join(errors))

    # -- structure -------------------------------------------------------
    @property
    def node_order(self) -> dict:
        return {nid: i for i, nid in enumerate(self.nodes)}

    def new_edge_id(self, prefix="e") -> str:
        while True:
            eid = f"{prefix}{self._edge_counter}"
            self._edge_counter += 1
            if eid not in self.edges:
                return eid

    def add_edge(self, edge: HyperEdge) -> HyperEdge:
        if edge.id in self.edges:
            raise ValueError(f"duplicate edge id {edge.id!r}")
        for m in edge.members:
            if m not in self.nodes:
                raise ValueError(f"edge {edge.id!r} references unknown node {m!r}")
        self.edges[edge.id] = edge
        return edge

    def remove_edge(self, edge_id):
        del self.edges[edge_id]

    def incident(self, node_id) -> list:
        return [e for e in self.edges.values() if node_id in e.members]

    def internal_edges(self) -> list:
        return [e for e in self.edges.values() if e.external is None]

    def has_link(self, u, v, directed: bool) -> bool:
        for e in self.internal_edges():
            if len(e.members) != 2:
                continue
            if directed:
                if e.directed and e.members == [u, v]:
                    return True
            elif set(e.members) == {u, v}:
                return True
        return False

    # -- state ------------------------------------------------------------
    def fingerprint(self) -> str:
        """Portable 64-bit hash of node states, edge states and topology.

        Floats enter with 12 significant digits so that last-bit rounding
        noise around a fixed point does not register as a state change.
        """
        doc = [
            [[nid, canonical(n.state)] for nid, n in self.nodes.items()],
            [[eid, list(e.members), canonical(e.fingerprint_state())] for eid, e in self.edges.items()],
        ]
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.blake2b(blob.encode(), digest_size=8).hexdigest()


def canonical(obj):
    """JSON-ready, platform-independent form of a state value."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (str, type(None))):
        return obj
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((canonical(v) for v in obj), key=repr)
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if hasattr(obj, "to_dict"):
        return canonical(obj.to_dict())
    raise TypeError(f"cannot fingerprint {type(obj).__name__}")
