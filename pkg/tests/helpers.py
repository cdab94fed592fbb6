"""Small network fixtures shared by tests."""
from compnet import ComputingNetwork, Feed, FunctionSpec, HyperEdge, Node, SlowAlgorithm


def directed_ring(states, program="copy", **kw):
    ids = [chr(ord("a") + i) for i in range(len(states))]
    nodes = [Node(i, s, program) for i, s in zip(ids, states)]
    edges = [HyperEdge(f"{u}{v}", [u, v], directed=True) for u, v in zip(ids, ids[1:] + ids[:1])]
    return ComputingNetwork(nodes=nodes, edges=edges, **kw)


def relay(a_state=7, b_state=0, **kw):
    return ComputingNetwork(
        nodes=[Node("A", a_state, "constant"), Node("B", b_state, "copy")],
        edges=[HyperEdge("AB", ["A", "B"], directed=True)], **kw)


def fed_node(program, feed, with_output=True, **kw):
    edges = [HyperEdge("in", ["n"], external="in", feed=feed)]
    if with_output:
        edges.append(HyperEdge("out", ["n"], external="out"))
    return ComputingNetwork(nodes=[Node("n", 0, program)], edges=edges, **kw)


def cliques(sizes, bridges=()):
    nodes, edges = [], []
    start = 0
    for s in sizes:
        ids = [f"v{start + i:02d}" for i in range(s)]
        nodes += [Node(i, 0, "silent") for i in ids]
        edges += [HyperEdge(f"{u}-{v}", [u, v]) for k, u in enumerate(ids) for v in ids[k + 1:]]
        start += s
    edges += [HyperEdge(f"{u}-{v}", [u, v]) for u, v in bridges]
    return ComputingNetwork(nodes=nodes, edges=edges)


__all__ = ["directed_ring", "relay", "fed_node", "cliques", "Feed", "FunctionSpec", "SlowAlgorithm"]
