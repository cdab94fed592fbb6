"""Distributed computation: computers as nodes, programs over local stores,
lossless exchange over links, and designer-controlled rewiring."""
from __future__ import annotations

from collections import Counter

import numpy as np

from .engine import exchange as _engine_exchange
from .metrics import REPORT_EXTRAS
from .network import (
    ComputingNetwork,
    FunctionSpec,
    PROGRAMS,
    HyperEdge,
    Message,
    Node,
    Program,
    SlowAlgorithm,
    register_program,
    slow_algorithm,
)

POLICIES = ("noop", "add_random_edge", "remove_random_edge", "ring_to_small_world")


def _gossip_update(node, msgs, net):
    if not isinstance(node.state, (int, float, np.floating, np.integer)) or isinstance(node.state, bool):
        raise TypeError("gossip_average needs a real payload")
    vals = [float(node.state)] + [float(m.payload) for m in msgs]
    return sum(vals) / len(vals)


def _mode(tokens):
    if not tokens:
        return None
    counts = Counter(tokens)
    best = max(counts.values())
    # ties resolved by first occurrence
    return next(t for t in tokens if counts[t] == best)


def _token_emit(node, net):
    m = _mode(node.state)
    return [] if m is None else [m]


def _token_update(node, msgs, net):
    if not isinstance(node.state, list):
        raise TypeError("token_count needs a symbol-list payload")
    return node.state + [m.payload for m in msgs]


register_program(Program("gossip_average", emit=lambda node, net: [node.state], update=_gossip_update))
register_program(Program("token_count", emit=_token_emit, update=_token_update,
                         readout=lambda node, net: _mode(node.state)))


def program_apply(node: Node, received=(), net=None):
    """New local store of ``node`` after consuming ``received`` payloads."""
    if node.program not in ("gossip_average", "token_count"):
        raise ValueError(f"{node.program!r} is not a distributed-computation program")
    msgs = [Message("", None, node.id, p) for p in received]
    return PROGRAMS[node.program].update(node, msgs, net)


def exchange(net: ComputingNetwork) -> dict:
    """Deliver every node's outbound payload on each of its links (lossless)."""
    return _engine_exchange(net)


def _links(net):
    return [e for e in net.internal_edges() if not e.directed and len(e.members) == 2]


def designer_rewire(net: ComputingNetwork, policy: str = "noop", p: float = 0.1) -> int:
    """Apply one centrally chosen topology change; returns edges touched.

    Graph stays simple: no self-loops, no parallel links.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown rewiring policy {policy!r}")
    ids = list(net.nodes)
    if policy == "noop":
        return 0
    if policy == "add_random_edge":
        present = {frozenset(e.members) for e in _links(net)}
        free = [(u, v) for i, u in enumerate(ids) for v in ids[i + 1:] if frozenset((u, v)) not in present]
        if not free:
            return 0
        u, v = free[int(net.rng.integers(len(free)))]
        net.add_edge(HyperEdge(net.new_edge_id(), [u, v]))
        return 1
    if policy == "remove_random_edge":
        links = _links(net)
        if not links:
            return 0
        net.remove_edge(links[int(net.rng.integers(len(links)))].id)
        return 1
    # Watts-Strogatz: each link keeps its first endpoint and, with
    # probability p, moves its second endpoint to a uniformly chosen node
    # that is neither the first endpoint nor already adjacent to it.
    rewired = 0
    for e in _links(net):
        if net.rng.random() >= p:
            continue
        u, v = e.members
        adj = {m for f in _links(net) if u in f.members for m in f.members}
        options = [w for w in ids if w not in adj]
        if not options:
            continue
        e.members = [u, options[int(net.rng.integers(len(options)))]]
        rewired += 1
    return rewired


@slow_algorithm("designer_rewire")
def _designer_rewire(net, policy="noop", p=0.1):
    net.meta["rewired"] = net.meta.get("rewired", 0) + designer_rewire(net, policy, p)


def ring_edges(ids, k: int = 1):
    """Undirected ring lattice, each node linked to its ``k`` nearest neighbours per side."""
    n = len(ids)
    out = []
    for i in range(n):
        for d in range(1, k + 1):
            j = (i + d) % n
            if n > 2 * d or (n == 2 * d and i < j):
                out.append((ids[i], ids[j]))
    return out


def build_dc_network(n: int, program: str = "gossip_average", topology: str = "ring", k: int = 1,
                     p: float = 0.0, seed: int = 0, initial=None, policy: str = "noop",
                     policy_p: float = 0.1, alphabet_size: int = 3) -> ComputingNetwork:
    """Computers ``c00..`` on a ring (``k`` neighbours per side), optionally
    small-world rewired with probability ``p`` at build time.

    Gossip payloads default to seeded uniform values in [0, 1); token
    stores default to one seeded random symbol each.
    """
    if n < 1:
        raise ValueError("need at least one computer")
    if program not in ("gossip_average", "token_count"):
        raise ValueError(f"unknown DC program {program!r}")
    if topology not in ("ring", "small_world"):
        raise ValueError(f"unknown DC topology {topology!r}")
    width = len(str(n - 1))
    ids = [f"c{i:0{width}d}" for i in range(n)]
    rng = np.random.default_rng(seed)
    if initial is None:
        if program == "gossip_average":
            initial = [float(v) for v in rng.random(n)]
        else:
            initial = [[int(v)] for v in rng.integers(alphabet_size, size=n)]
    nodes = [Node(nid, initial[i], program) for i, nid in enumerate(ids)]
    edges = [HyperEdge(f"l{j}", [u, v]) for j, (u, v) in enumerate(ring_edges(ids, k))]
    net = ComputingNetwork(
        nodes=nodes, edges=edges,
        slow_algorithm=SlowAlgorithm("designer_rewire", {"policy": policy, "p": policy_p}),
        function_spec=FunctionSpec(None), seed=seed, model="dc",
    )
    if topology == "small_world" and p > 0:
        designer_rewire(net, "ring_to_small_world", p)
    return net


def spread(net) -> float:
    vals = [float(n.state) for n in net.nodes.values()]
    return max(vals) - min(vals)


def _dc_extras(net, trajectory):
    out = {"edge_count": len(net.edges), "rewired": net.meta.get("rewired", 0)}
    if all(n.program == "gossip_average" for n in net.nodes.values()):
        out["spread"] = spread(net)
        out["mean_payload"] = float(np.mean([n.state for n in net.nodes.values()]))
    return out


REPORT_EXTRAS["dc"] = _dc_extras
