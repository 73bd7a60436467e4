"""
Dense difference counting over Z_n.

Everything that covers group elements (difference lists, families,
graceful labelings, nested sets) reduces to bincounts over residues.
"""

from typing import Iterable, Sequence

import numpy as np


def edge_differences(labels: Sequence[int], edges: np.ndarray, n: int) -> np.ndarray:
    """Both orientations of every edge difference, as a flat residue array"""
    labels = np.asarray(labels, dtype=np.int64)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size == 0:
        return np.empty(0, dtype=np.int64)
    u = labels[edges[:, 0]]
    w = labels[edges[:, 1]]
    return np.concatenate([(u - w) % n, (w - u) % n])


def difference_counts(labels: Sequence[int], edges: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(edge_differences(labels, edges, n), minlength=n)


def set_difference_counts(points: Iterable[int], n: int) -> np.ndarray:
    """Counts of x - y over ordered pairs of distinct members"""
    pts = np.asarray(sorted({int(p) % n for p in points}), dtype=np.int64)
    if pts.size < 2:
        return np.zeros(n, dtype=np.int64)
    diffs = (pts[:, None] - pts[None, :]) % n
    mask = ~np.eye(pts.size, dtype=bool)
    return np.bincount(diffs[mask], minlength=n)


def mismatches(counts: np.ndarray, expected: np.ndarray, limit: int = 0):
    """(residue, expected, got) triples where counts differ from expected"""
    bad = np.flatnonzero(counts != expected)
    if limit:
        bad = bad[:limit]
    return [(int(r), int(expected[r]), int(counts[r])) for r in bad]
