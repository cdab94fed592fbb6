"""Two-timescale runtime: fast node programs (f) and a slow structural algorithm (a)."""
from __future__ import annotations

from dataclasses import dataclass, field

from .network import (
    ASYNCHRONOUS,
    PROGRAMS,
    SLOW_ALGORITHMS,
    ComputingNetwork,
    Message,
    ProgramError,
    default_symbol,
    slow_algorithm,
)


@dataclass
class Trajectory:
    fingerprints: list = field(default_factory=list)
    readouts: list = field(default_factory=list)

    def __len__(self):
        return len(self.fingerprints)

    def append(self, net: ComputingNetwork):
        self.fingerprints.append(net.fingerprint())
        self.readouts.append(compute_function(net))


def _symbol(net, sender, payload):
    prog = PROGRAMS[net.nodes[sender].program] if sender is not None else None
    if prog is not None and prog.symbolize is not None:
        return prog.symbolize(payload)
    return default_symbol(payload)


def _emissions(net: ComputingNetwork, node_id) -> dict:
    node = net.nodes[node_id]
    prog = PROGRAMS[node.program]
    try:
        out = prog.emit(node, net)
    except Exception as exc:
        raise ProgramError(node_id, exc) from exc
    if not out:
        return {}
    if isinstance(out, dict):
        return {eid: list(p) for eid, p in out.items() if eid in net.edges and net.edges[eid].can_send(node_id)}
    payloads = list(out)
    return {e.id: payloads for e in net.edges.values() if node_id in e.members and e.can_send(node_id)}


def _deliver(net: ComputingNetwork, edge, sender, payloads, delivered: dict):
    if not payloads:
        return
    symbols = [_symbol(net, sender, p) for p in payloads]
    edge.record(net.step_count, sender, symbols)
    if sender is not None:
        net.nodes[sender].outbox.setdefault(edge.id, []).extend(symbols)
    msgs = delivered.setdefault(edge.id, [])
    for r in edge.receivers(sender):
        net.nodes[r].inbox.setdefault(edge.id, []).extend(symbols)
        box = net._mailbox.setdefault(r, [])
        for p in payloads:
            m = Message(edge.id, sender, r, p)
            box.append(m)
            msgs.append(m)
    if not edge.receivers(sender):
        msgs.extend(Message(edge.id, sender, None, p) for p in payloads)


def _feed_inputs(net: ComputingNetwork, node_id, delivered: dict):
    for edge in list(net.edges.values()):
        if edge.external == "in" and (node_id is None or edge.members[0] == node_id):
            _deliver(net, edge, None, [edge.feed.next(net)], delivered)


def exchange(net: ComputingNetwork) -> dict:
    """Emission phase of a synchronous step.

    Every node emits from its current state, external feeds produce one
    symbol each, and everything is logged and queued for the receivers.
    Returns edge id -> list of :class:`Message` (one per delivery).
    """
    delivered: dict = {}
    _feed_inputs(net, None, delivered)
    emitted = {nid: _emissions(net, nid) for nid in net.nodes}
    for nid, per_edge in emitted.items():
        for eid, payloads in per_edge.items():
            _deliver(net, net.edges[eid], nid, payloads, delivered)
    return delivered


def _update(net: ComputingNetwork, node_id):
    node = net.nodes[node_id]
    msgs = net._mailbox.pop(node_id, [])
    try:
        return PROGRAMS[node.program].update(node, msgs, net)
    except Exception as exc:
        raise ProgramError(node_id, exc) from exc


def step_fast(net: ComputingNetwork) -> ComputingNetwork:
    """Run every node program once.

    Synchronous: all nodes emit from the pre-step snapshot, then all update.
    Asynchronous: nodes take turns in a seeded random order; on its turn a
    node emits, then consumes every message that has reached it so far.
    """
    if net.scheduler == ASYNCHRONOUS:
        ids = list(net.nodes)
        delivered: dict = {}
        for i in net.rng.permutation(len(ids)):
            nid = ids[int(i)]
            _feed_inputs(net, nid, delivered)
            for eid, payloads in _emissions(net, nid).items():
                _deliver(net, net.edges[eid], nid, payloads, delivered)
            net.nodes[nid].state = _update(net, nid)
    else:
        exchange(net)
        new_states = {nid: _update(net, nid) for nid in net.nodes}
        for nid, state in new_states.items():
            net.nodes[nid].state = state
    net.step_count += 1
    return net


def step_slow(net: ComputingNetwork) -> ComputingNetwork:
    """Apply the network's slow algorithm exactly once."""
    algo = net.slow_algorithm
    try:
        fn = SLOW_ALGORITHMS[algo.name]
    except KeyError:
        raise ValueError(f"unknown slow algorithm {algo.name!r}") from None
    fn(net, **algo.params)
    net.slow_count += 1
    return net


def compute_function(net: ComputingNetwork) -> list:
    """Readout of the designated output nodes (all nodes when unspecified)."""
    outputs = net.function_spec.outputs
    ids = list(net.nodes) if outputs is None else list(outputs)
    values = []
    for nid in ids:
        if nid not in net.nodes:
            raise KeyError(f"function output {nid!r} is not a node")
        node = net.nodes[nid]
        prog = PROGRAMS[node.program]
        values.append(prog.readout(node, net) if prog.readout else node.state)
    return values


def run(net: ComputingNetwork, fast_steps: int, metrics=None):
    """Run ``fast_steps`` fast steps, interleaving the slow algorithm.

    The slow algorithm fires after every ``fast_steps_per_slow_step``-th fast
    step. Returns ``(trajectory, report)``; ``metrics`` is forwarded to
    :func:`compnet.metrics.measure`.
    """
    from .metrics import measure

    if fast_steps < 1:
        raise ValueError("fast_steps must be >= 1")
    traj = Trajectory()
    traj.append(net)
    for t in range(1, fast_steps + 1):
        step_fast(net)
        if t % net.fast_steps_per_slow_step == 0:
            step_slow(net)
        traj.append(net)
    return traj, measure(net, traj, metrics)


@slow_algorithm("noop")
def _noop(net):
    pass


@slow_algorithm("remove_all_edges")
def _remove_all_edges(net):
    net.edges.clear()
