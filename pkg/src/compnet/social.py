"""Social-network diffusion as a human-computation network.

People are nodes; a message is a ``(message_id, symbol)`` pair and edge
logs record only the symbol. Each person forwards newly seen messages,
sometimes distorting them, and occasionally posts something new. Link
creation and pruning are decided per person as the slow algorithm.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .engine import run, step_fast
from .metrics import REPORT_EXTRAS, MetricsSettings, edge_novelty
from .network import (
    ComputingNetwork,
    FunctionSpec,
    HyperEdge,
    Node,
    Program,
    SlowAlgorithm,
    register_program,
    slow_algorithm,
)

STYLES = ("facebook", "twitter")


@dataclass(frozen=True)
class SocialParams:
    forward_probability: float = 0.5
    mutation_probability: float = 0.0
    novelty_probability: float = 0.0

    def __post_init__(self):
        for name, v in asdict(self).items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


def content_distribution(k: int, skew: float) -> np.ndarray:
    """Zipf-like weights for fresh posts: symbol ``i`` has mass ~ 1/(i+1)**skew."""
    w = 1.0 / np.arange(1, k + 1, dtype=np.float64) ** skew
    return w / w.sum()


def _social_update(node, msgs, net):
    p = node.params
    k = p["alphabet_size"]
    seen = list(node.state["seen"])
    seen_set = set(seen)
    informed = node.state["informed"]
    made = node.state["made"]
    queue = []
    for m in msgs:
        mid, sym = m.payload
        informed = True
        if mid in seen_set:
            continue
        seen_set.add(mid)
        seen.append(mid)
        # always draw all three so runs differing only in probabilities stay paired
        r_fwd, r_mut, alt = net.rng.random(), net.rng.random(), int(net.rng.integers(k))
        if r_fwd < p["forward_probability"]:
            queue.append([mid, alt if r_mut < p["mutation_probability"] else sym])
    r_new = net.rng.random()
    fresh = int(net.rng.choice(k, p=content_distribution(k, p["content_skew"])))
    if r_new < p["novelty_probability"]:
        mid = f"{node.id}#{made}"
        made += 1
        seen.append(mid)
        queue.append([mid, fresh])
        informed = True
    return {"informed": informed, "seen": seen, "queue": queue, "made": made}


register_program(Program(
    "social",
    emit=lambda node, net: [tuple(q) for q in node.state["queue"]],
    update=_social_update,
    symbolize=lambda payload: int(payload[1]),
    readout=lambda node, net: int(node.state["informed"]),
))


def _attach_targets(rng, degree: np.ndarray, count: int) -> list[int]:
    w = degree + 1.0
    return sorted(int(t) for t in rng.choice(len(w), size=count, replace=False, p=w / w.sum()))


def build_social_net(n: int, style: str = "facebook", m: int = 2, seed: int = 0,
                     params: SocialParams | None = None, sources=None, alphabet_size: int = 64,
                     content_skew: float = 3.0, reciprocity: float = 0.0,
                     drop_probability: float = 0.0, follow_probability: float = 0.0,
                     novelty_window: int = 16) -> ComputingNetwork:
    """Seeded preferential-attachment social network.

    Person ``i`` links to ``min(m, i)`` earlier people chosen with
    probability proportional to degree + 1. ``facebook`` links are
    undirected friendships; in ``twitter`` style person ``i`` follows its
    targets, i.e. directed edges ``[followed, follower]`` in the direction
    information flows, with a follow-back only with probability
    ``reciprocity``. ``sources`` (default: the first person) start with one
    message carrying symbol 0, which they share with ``forward_probability``.
    """
    if n < 1:
        raise ValueError("need at least one person")
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}; expected one of {STYLES}")
    if m < 1:
        raise ValueError("m must be >= 1")
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    if not 0.0 <= reciprocity <= 1.0:
        raise ValueError("reciprocity must lie in [0, 1]")
    params = params or SocialParams()
    rng = np.random.default_rng(seed)
    width = len(str(n - 1))
    ids = [f"p{i:0{width}d}" for i in range(n)]
    sources = [ids[0]] if sources is None else list(sources)
    for s in sources:
        if s not in ids:
            raise ValueError(f"unknown source {s!r}")
    degree = np.zeros(n)
    edges = []
    for i in range(1, n):
        for t in _attach_targets(rng, degree[:i], min(m, i)):
            if style == "facebook":
                edges.append(HyperEdge(f"f{len(edges)}", [ids[i], ids[t]]))
            else:
                edges.append(HyperEdge(f"t{len(edges)}", [ids[t], ids[i]], directed=True))
                if rng.random() < reciprocity:
                    edges.append(HyperEdge(f"t{len(edges)}", [ids[i], ids[t]], directed=True))
            degree[i] += 1
            degree[t] += 1
    node_params = dict(asdict(params), alphabet_size=alphabet_size, content_skew=content_skew)
    nodes = []
    for nid in ids:
        if nid in sources:
            state = {"informed": True, "seen": [f"{nid}#0"], "queue": [], "made": 1}
        else:
            state = {"informed": False, "seen": [], "queue": [], "made": 0}
        nodes.append(Node(nid, state, "social", dict(node_params)))
    net = ComputingNetwork(
        nodes=nodes, edges=edges,
        slow_algorithm=SlowAlgorithm("node_link_update", {
            "drop_probability": drop_probability, "follow_probability": follow_probability,
            "novelty_window": novelty_window}),
        function_spec=FunctionSpec(None), seed=seed, model="social",
        meta={"style": style, "sources": sources},
    )
    # an originator shares its message under the same rule as a forward
    for nid in sources:
        r_fwd, _, _ = net.rng.random(), net.rng.random(), net.rng.integers(alphabet_size)
        if r_fwd < params.forward_probability:
            net.nodes[nid].state["queue"] = [[f"{nid}#0", 0]]
    return net


def spread_step(net: ComputingNetwork) -> ComputingNetwork:
    """One round of forwarding / mutation / fresh posting (a fast step)."""
    return step_fast(net)


def reach(net: ComputingNetwork) -> int:
    return sum(int(n.state["informed"]) for n in net.nodes.values())


def _incoming(net, node_id) -> list:
    out = []
    for e in net.internal_edges():
        if len(e.members) != 2:
            continue
        if (e.directed and e.members[1] == node_id) or (not e.directed and node_id in e.members):
            out.append(e)
    return out


def _neighbours(net, node_id) -> list:
    """People whose posts reach ``node_id`` directly."""
    return [e.members[0] if e.directed else next(m for m in e.members if m != node_id)
            for e in _incoming(net, node_id)]


def node_link_update(net: ComputingNetwork, drop_probability: float = 0.0,
                     follow_probability: float = 0.0, novelty_window: int = 16) -> ComputingNetwork:
    """Each person may drop their least novel incoming link and/or link to a
    neighbour-of-neighbour, independently and in node order."""
    for v in (drop_probability, follow_probability):
        if not 0.0 <= v <= 1.0:
            raise ValueError("link update probabilities must lie in [0, 1]")
    order = net.node_order
    for nid in list(net.nodes):
        r_drop, r_follow = net.rng.random(), net.rng.random()
        if r_drop < drop_probability:
            incoming = _incoming(net, nid)
            if incoming:
                # too little traffic to judge counts as pure imitation
                scores = [edge_novelty(e, novelty_window) or 0.0 for e in incoming]
                net.remove_edge(incoming[int(np.argmin(scores))].id)
        if r_follow < follow_probability:
            directed = any(e.directed for e in net.internal_edges()) or net.meta.get("style") == "twitter"
            near = set(_neighbours(net, nid))
            cands = sorted({w for u in near for w in _neighbours(net, u)} - near - {nid}, key=order.get)
            cands = [w for w in cands if not net.has_link(w, nid, directed)]
            if cands:
                w = cands[int(net.rng.integers(len(cands)))]
                members = [w, nid] if directed else [nid, w]
                net.add_edge(HyperEdge(net.new_edge_id("s"), members, directed=directed))
    return net


@slow_algorithm("node_link_update")
def _node_link_update(net, **params):
    node_link_update(net, **params)


def reach_curve(trajectory) -> list[int]:
    return [int(sum(r)) for r in trajectory.readouts]


def _social_extras(net, trajectory):
    return {"reach_curve": reach_curve(trajectory) if trajectory is not None else [],
            "final_reach": reach(net), "edge_count": len(net.edges)}


REPORT_EXTRAS["social"] = _social_extras


def compare_rumor_vs_verified(params_rumor: SocialParams, params_verified: SocialParams, runs: int = 5,
                              n: int = 40, style: str = "twitter", fast_steps: int = 40, seed: int = 0,
                              settings: MetricsSettings | None = None, **build_kwargs) -> dict:
    """Run both parameter sets on identical topology/seed pairs and report
    reach curves, mean edge entropy and mean novelty side by side."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    out = {}
    for label, params in (("rumor", params_rumor), ("verified", params_verified)):
        if not isinstance(params, SocialParams):
            params = SocialParams(**params)
        curves, ent, nov = [], [], []
        for r in range(runs):
            net = build_social_net(n, style, seed=seed + r, params=params, **build_kwargs)
            traj, rep = run(net, fast_steps, settings)
            curves.append(reach_curve(traj))
            ent.append(rep.mean_edge_entropy())
            nov.append(rep.mean_novelty())
        out[label] = {
            "params": asdict(params),
            "reach_curves": curves,
            "mean_reach_curve": [float(np.mean(c)) for c in zip(*curves)],
            "mean_edge_entropy_bits": float(np.mean(ent)),
            "mean_novelty": float(np.mean(nov)),
            "per_run_edge_entropy_bits": ent,
            "per_run_novelty": nov,
        }
    return out
