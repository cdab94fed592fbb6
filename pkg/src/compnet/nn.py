"""Feedforward neural networks expressed as computing networks.

Neurons are nodes running the ``neuron`` program (sigmoid of the weighted
input sum plus bias), synapses are directed edges whose state is the
weight, and full-batch backpropagation is the slow algorithm.
"""
from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .metrics import REPORT_EXTRAS
from .network import (
    ComputingNetwork,
    Feed,
    FunctionSpec,
    HyperEdge,
    Node,
    Program,
    SlowAlgorithm,
    register_program,
    slow_algorithm,
)

AND_SAMPLES = [((0.0, 0.0), (0.0,)), ((0.0, 1.0), (0.0,)), ((1.0, 0.0), (0.0,)), ((1.0, 1.0), (1.0,))]
# activations are logged as one of this many equal-width bins of (0, 1)
ACTIVATION_LEVELS = 16


def weighted_sum(inputs, weights, bias: float = 0.0) -> float:
    if len(inputs) != len(weights):
        raise ValueError(f"{len(inputs)} inputs but {len(weights)} weights")
    # the bias is the weight of a constant-1 input
    return math.fsum([float(bias)] + [float(x) * float(w) for x, w in zip(inputs, weights)])


def activate(s):
    """Logistic sigmoid; accepts scalars or arrays."""
    arr = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("activation of a non-finite value")
    # split by sign to stay overflow-free
    out = np.where(arr >= 0, 1.0 / (1.0 + np.exp(-np.abs(arr))), np.exp(-np.abs(arr)) / (1.0 + np.exp(-np.abs(arr))))
    return float(out) if out.ndim == 0 else out


def _synapses_into(net, node_id):
    return [e for e in net.edges.values() if e.directed and e.members[1] == node_id
            and net.nodes[e.members[0]].program in ("neuron", "clamp")]


def _neuron_update(node, msgs, net):
    xs, ws = [], []
    for m in msgs:
        edge = net.edges[m.edge]
        if edge.directed:
            xs.append(m.payload)
            ws.append(edge.state)
    return activate(weighted_sum(xs, ws, node.params.get("bias", 0.0)))


def _clamp_update(node, msgs, net):
    ext = [m.payload for m in msgs if net.edges[m.edge].external == "in"]
    return float(ext[-1]) if ext else node.state


def _activation_symbol(y):
    return min(int(float(y) * ACTIVATION_LEVELS), ACTIVATION_LEVELS - 1)


register_program(Program("neuron", emit=lambda node, net: [node.state], update=_neuron_update,
                         symbolize=_activation_symbol))
register_program(Program("clamp", emit=lambda node, net: [node.state], update=_clamp_update))


def build_feedforward(layers, seed: int = 0, weights=None, biases=None, init_range: float = 0.5,
                      samples=None, rate: float = 0.5, external: bool = True) -> ComputingNetwork:
    """Fully connected layered network, e.g. ``layers=[2, 2, 1]``.

    Node ids: ``x{i}`` inputs, ``h{l}_{i}`` hidden, ``y{i}`` outputs. Edge
    ids: ``w:{src}->{dst}``. ``weights``/``biases`` override the seeded
    uniform initialisation in ``[-init_range, init_range]``. With
    ``external=True`` and ``samples`` given, every input neuron is driven by
    a feed cycling through its column of the dataset.
    """
    layers = list(layers)
    if len(layers) < 2 or min(layers) < 1:
        raise ValueError("need at least an input and an output layer of positive width")
    rng = np.random.default_rng(seed)
    names = []
    for li, width in enumerate(layers):
        if li == 0:
            names.append([f"x{i}" for i in range(width)])
        elif li == len(layers) - 1:
            names.append([f"y{i}" for i in range(width)])
        else:
            names.append([f"h{li}_{i}" for i in range(width)])
    nodes = [Node(nid, 0.0, "clamp") for nid in names[0]]
    edges = []
    for li in range(1, len(layers)):
        for dst in names[li]:
            b = biases[dst] if biases and dst in biases else float(rng.uniform(-init_range, init_range))
            nodes.append(Node(dst, 0.5, "neuron", {"bias": b}))
            for src in names[li - 1]:
                eid = f"w:{src}->{dst}"
                w = weights[eid] if weights and eid in weights else float(rng.uniform(-init_range, init_range))
                edges.append(HyperEdge(eid, [src, dst], directed=True, state=w))
    samples = [(tuple(map(float, x)), tuple(map(float, t))) for x, t in (samples or [])]
    if external:
        for i, nid in enumerate(names[0]):
            column = [x[i] for x, _ in samples] or [0.0]
            edges.append(HyperEdge(f"in:{nid}", [nid], external="in", feed=Feed("cycle", column)))
        for nid in names[-1]:
            edges.append(HyperEdge(f"out:{nid}", [nid], external="out"))
    return ComputingNetwork(
        nodes=nodes,
        edges=edges,
        slow_algorithm=SlowAlgorithm("backprop", {"rate": rate}),
        function_spec=FunctionSpec(list(names[-1])),
        seed=seed,
        model="nn",
        meta={"samples": samples, "inputs": list(names[0])},
    )


def _layers(net) -> list[list[str]]:
    """Topological layers of the synapse graph; rejects cycles."""
    clamps = {nid for nid, n in net.nodes.items() if n.program == "clamp"}
    declared = net.meta.get("inputs") or []
    # input vector positions follow the declared order, never node iteration order
    inputs = [nid for nid in declared if nid in clamps] + sorted(clamps.difference(declared))
    neurons = [nid for nid, n in net.nodes.items() if n.program == "neuron"]
    preds = {nid: [e.members[0] for e in _synapses_into(net, nid)] for nid in neurons}
    level = {nid: 0 for nid in inputs}
    layers = [inputs]
    remaining = set(neurons)
    while remaining:
        ready = [nid for nid in neurons if nid in remaining and all(p in level for p in preds[nid])]
        if not ready:
            raise ValueError("synapse graph is cyclic; use engine stepping instead of forward")
        for nid in ready:
            level[nid] = len(layers)
            remaining.discard(nid)
        layers.append(ready)
    return layers


def _forward_all(net, x_batch: np.ndarray) -> dict:
    """Activation vectors over the batch for every node, keyed by node id."""
    layers = _layers(net)
    if x_batch.shape[1] != len(layers[0]):
        raise ValueError(f"expected {len(layers[0])} inputs, got {x_batch.shape[1]}")
    acts = {nid: x_batch[:, i] for i, nid in enumerate(layers[0])}
    for layer in layers[1:]:
        for nid in layer:
            s = np.full(x_batch.shape[0], float(net.nodes[nid].params.get("bias", 0.0)))
            for e in _synapses_into(net, nid):
                s = s + e.state * acts[e.members[0]]
            acts[nid] = np.atleast_1d(activate(s))
    return acts


def _outputs(net) -> list:
    if net.function_spec.outputs is not None:
        return list(net.function_spec.outputs)
    return [nid for nid, n in net.nodes.items() if n.program == "neuron"]


def forward(net, x) -> list:
    """Layer-by-layer propagation of one input vector; returns output activations."""
    acts = _forward_all(net, np.asarray([x], dtype=np.float64))
    return [float(acts[o][0]) for o in _outputs(net)]


def _check_samples(samples, n_in, n_out):
    if not samples:
        raise ValueError("no training samples")
    xs, ts = [], []
    for x, t in samples:
        if len(x) != n_in or len(t) != n_out:
            raise ValueError(f"sample shapes must be ({n_in}, {n_out})")
        if not all(0.0 <= v <= 1.0 for v in t):
            raise ValueError("targets must lie in [0, 1]")
        xs.append(x)
        ts.append(t)
    return np.asarray(xs, dtype=np.float64), np.asarray(ts, dtype=np.float64)


def gradients(net, samples) -> tuple[dict, dict]:
    """Gradients of ``0.5 * sum (y - t)^2`` over the batch.

    Returns ``(dL/dw per edge id, dL/dbias per node id)``.
    """
    outputs = _outputs(net)
    layers = _layers(net)
    x, t = _check_samples(samples, len(layers[0]), len(outputs))
    acts = _forward_all(net, x)
    delta = {}
    out_pos = {o: k for k, o in enumerate(outputs)}
    downstream = defaultdict(list)
    for layer in layers[1:]:
        for nid in layer:
            for e in _synapses_into(net, nid):
                downstream[e.members[0]].append(e)
    for layer in reversed(layers[1:]):
        for nid in layer:
            y = acts[nid]
            err = np.zeros_like(y)
            if nid in out_pos:
                err = err + (y - t[:, out_pos[nid]])
            for e in downstream[nid]:
                err = err + e.state * delta[e.members[1]]
            delta[nid] = err * y * (1.0 - y)
    gw, gb = {}, {}
    for layer in layers[1:]:
        for nid in layer:
            gb[nid] = float(delta[nid].sum())
            for e in _synapses_into(net, nid):
                gw[e.id] = float((delta[nid] * acts[e.members[0]]).sum())
    return gw, gb


def train_step(net, samples, rate: float):
    """One full-batch gradient-descent (generalised delta rule) update."""
    if not rate > 0:
        raise ValueError("rate must be positive")
    gw, gb = gradients(net, samples)
    for eid, g in gw.items():
        net.edges[eid].state = float(net.edges[eid].state - rate * g)
    for nid, g in gb.items():
        net.nodes[nid].params["bias"] = float(net.nodes[nid].params.get("bias", 0.0) - rate * g)
    return net


def mse(net, samples) -> float:
    outputs = _outputs(net)
    layers = _layers(net)
    x, t = _check_samples(samples, len(layers[0]), len(outputs))
    acts = _forward_all(net, x)
    y = np.stack([acts[o] for o in outputs], axis=1)
    return float(np.mean((y - t) ** 2))


def train(net, samples, rate: float, epochs: int) -> list[float]:
    """Repeated :func:`train_step`; returns the MSE after each epoch."""
    history = []
    for _ in range(epochs):
        train_step(net, samples, rate)
        history.append(mse(net, samples))
    return history


@slow_algorithm("backprop")
def _backprop(net, rate: float = 0.5, epochs: int = 1):
    samples = net.meta.get("samples")
    for _ in range(epochs):
        train_step(net, samples, rate)


def _nn_extras(net, trajectory):
    samples = net.meta.get("samples")
    out = {"weights": {e.id: e.state for e in net.edges.values() if e.directed},
           "biases": {nid: n.params.get("bias", 0.0) for nid, n in net.nodes.items() if n.program == "neuron"}}
    if samples:
        out["mse"] = mse(net, samples)
        out["predictions"] = [forward(net, x) for x, _ in samples]
    return out


REPORT_EXTRAS["nn"] = _nn_extras
