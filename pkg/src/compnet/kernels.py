"""Hot counting kernels.

Each kernel has a numba implementation (``*_nb``) and a vectorised numpy
implementation (``*_np``). The public name dispatches on ``USE_NUMBA``;
both variants are importable so tests and benchmarks can compare them.
"""
import numpy as np

from ._accel import USE_NUMBA, njit


@njit
def _entropy_from_counts_nb(counts):
    total = 0.0
    for c in counts:
        total += c
    if total <= 0.0:
        return 0.0
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * np.log2(p)
    return h


def _entropy_from_counts_np(counts):
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0.0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


@njit
def _symbol_counts_nb(codes, k):
    out = np.zeros(k, dtype=np.int64)
    for c in codes:
        out[c] += 1
    return out


def _symbol_counts_np(codes, k):
    return np.bincount(codes, minlength=k).astype(np.int64)


@njit
def _sliding_entropy_nb(codes, k, window):
    n = codes.shape[0]
    m = n - window + 1
    out = np.empty(m, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    for i in range(window):
        counts[codes[i]] += 1
    # running sum of c*log2(c); H = log2(w) - S/w
    s = 0.0
    for c in counts:
        if c > 0:
            s += c * np.log2(c)
    lw = np.log2(window)
    out[0] = lw - s / window
    for i in range(1, m):
        old = codes[i - 1]
        new = codes[i + window - 1]
        if old != new:
            c = counts[old]
            s -= c * np.log2(c)
            if c > 1:
                s += (c - 1) * np.log2(c - 1)
            counts[old] = c - 1
            c = counts[new]
            if c > 0:
                s -= c * np.log2(c)
            s += (c + 1) * np.log2(c + 1)
            counts[new] = c + 1
        out[i] = lw - s / window
    for i in range(m):
        if out[i] < 0.0:
            out[i] = 0.0
    return out


def _sliding_entropy_np(codes, k, window):
    n = codes.shape[0]
    onehot = np.zeros((n + 1, k), dtype=np.int64)
    onehot[np.arange(1, n + 1), codes] = 1
    cum = np.cumsum(onehot, axis=0)
    counts = (cum[window:] - cum[:-window]).astype(np.float64)
    p = counts / window
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return np.maximum(-terms.sum(axis=1), 0.0)


@njit
def _joint_counts_nb(x, y, kx, ky):
    out = np.zeros((kx, ky), dtype=np.int64)
    for i in range(x.shape[0]):
        out[x[i], y[i]] += 1
    return out


def _joint_counts_np(x, y, kx, ky):
    flat = np.bincount(x * ky + y, minlength=kx * ky)
    return flat.reshape(kx, ky).astype(np.int64)


def entropy_from_counts(counts):
    """Entropy in bits of a histogram (any non-negative counts)."""
    counts = np.ascontiguousarray(counts, dtype=np.float64)
    if USE_NUMBA:
        return float(_entropy_from_counts_nb(counts))
    return _entropy_from_counts_np(counts)


def symbol_counts(codes, k):
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if USE_NUMBA:
        return _symbol_counts_nb(codes, k)
    return _symbol_counts_np(codes, k)


def sliding_entropy_codes(codes, k, window):
    """Entropy of every length-``window`` slice of ``codes``."""
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if USE_NUMBA:
        return _sliding_entropy_nb(codes, k, window)
    return _sliding_entropy_np(codes, k, window)


def joint_counts(x, y, kx, ky):
    x = np.ascontiguousarray(x, dtype=np.int64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if USE_NUMBA:
        return _joint_counts_nb(x, y, kx, ky)
    return _joint_counts_np(x, y, kx, ky)
