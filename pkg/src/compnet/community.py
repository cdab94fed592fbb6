"""Greedy modularity communities on the 2-section of a (hyper)network."""
from __future__ import annotations

import numpy as np

_TIE = 1e-12


def two_section(net) -> np.ndarray:
    """Symmetric weight matrix in node order; each hyperedge becomes a clique.

    Parallel links accumulate weight; external and single-member edges add
    nothing.
    """
    order = net.node_order
    n = len(order)
    w = np.zeros((n, n), dtype=np.float64)
    for e in net.edges.values():
        if e.external is not None:
            continue
        idx = sorted({order[m] for m in e.members})
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                w[idx[a], idx[b]] += 1.0
                w[idx[b], idx[a]] += 1.0
    return w


def greedy_modularity(weights: np.ndarray) -> list[list[int]]:
    """Clauset-Newman-Moore agglomeration on a symmetric weight matrix.

    Starts from singletons and repeatedly performs the merge with the
    largest modularity gain while that gain is positive. Equal gains are
    resolved towards the pair whose smallest member indices are lowest.
    Returns communities as sorted index lists ordered by first member.
    """
    w = np.asarray(weights, dtype=np.float64)
    n = w.shape[0]
    if n == 0:
        raise ValueError("community detection on an empty network")
    two_m = w.sum()
    comms = [[i] for i in range(n)]
    if two_m <= 0:
        return comms
    e = w / two_m  # inter-community edge fractions (both directions)
    a = e.sum(axis=1)
    while len(comms) > 1:
        dq = 2.0 * (e - np.outer(a, a))
        mask = (e > 0) & ~np.eye(len(comms), dtype=bool)
        if not mask.any():
            break
        dq = np.where(mask, dq, -np.inf)
        best = dq.max()
        if best <= _TIE:
            break
        cand = np.argwhere(dq >= best - _TIE)
        i, j = min(((int(i), int(j)) for i, j in cand if i < j),
                   key=lambda ij: (comms[ij[0]][0], comms[ij[1]][0]))
        comms[i] = sorted(comms[i] + comms[j])
        e[i, :] += e[j, :]
        e[:, i] += e[:, j]
        a[i] += a[j]
        keep = [k for k in range(len(comms)) if k != j]
        e = e[np.ix_(keep, keep)]
        a = a[keep]
        del comms[j]
    return sorted(comms, key=lambda c: c[0])


def modularity(weights: np.ndarray, communities) -> float:
    w = np.asarray(weights, dtype=np.float64)
    two_m = w.sum()
    if two_m <= 0:
        return 0.0
    k = w.sum(axis=1)
    q = 0.0
    for c in communities:
        c = list(c)
        q += w[np.ix_(c, c)].sum() / two_m - (k[c].sum() / two_m) ** 2
    return float(q)


def detect_communities(net) -> list[list]:
    """Partition of node ids; every node lands in exactly one community."""
    if not net.nodes:
        raise ValueError("community detection on an empty network")
    ids = list(net.nodes)
    comms = greedy_modularity(two_section(net))
    return [[ids[i] for i in c] for c in comms]
