"""
Labeled Graphs over Z_n

A LabeledGraph attaches residues to the vertices of an AbstractGraph. Its
difference list is the multiset of label(u) - label(w) over edges, in both
orientations, stored densely; its difference table is a pandas frame
indexed by labels.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import galois
import numpy as np
import pandas as pd

from src.core.error_handling import (
    BadParamsError,
    CollisionError,
    NotPrimeError,
    NotPrimitiveRootError,
    SeedIncompleteError,
)
from src.graphs.differences import difference_counts, edge_differences
from src.graphs.families import AbstractGraph, permutation_order

logger = logging.getLogger(__name__)


@dataclass
class LabeledGraph:
    """
    Graph whose vertex i carries labels[i] in Z_n.

    Non-injective labelings are representable so that verifiers can report
    them; get_validation_errors() lists them.
    """

    graph: AbstractGraph
    labels: Tuple[int, ...]
    n: int
    subspace_dim: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise BadParamsError(f"group order must be positive, got {self.n}")
        if len(self.labels) != self.graph.order:
            raise BadParamsError(
                f"{len(self.labels)} labels for a graph of order {self.graph.order}",
                family=self.graph.family,
            )
        self.labels = tuple(int(x) % self.n for x in self.labels)

    @property
    def label_set(self) -> frozenset:
        return frozenset(self.labels)

    @property
    def is_injective(self) -> bool:
        return len(self.label_set) == len(self.labels)

    @property
    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    @property
    def edge_array(self) -> np.ndarray:
        return np.asarray(self.graph.edges, dtype=np.int64).reshape(-1, 2)

    def labeled_edges(self) -> frozenset:
        """Edges as unordered label pairs; independent of vertex numbering"""
        return frozenset(
            frozenset((self.labels[i], self.labels[j])) for i, j in self.graph.edges
        )

    def translate(self, t: int) -> "LabeledGraph":
        return LabeledGraph(self.graph, tuple(x + t for x in self.labels), self.n, self.subspace_dim)

    def multiply(self, m: int) -> "LabeledGraph":
        return LabeledGraph(self.graph, tuple(x * m for x in self.labels), self.n, self.subspace_dim)

    def get_validation_errors(self, context=None) -> List[str]:
        errors = []
        if not self.is_injective:
            errors.append("labels are not injective")
        if context is not None and self.subspace_dim is not None:
            check = context.is_subspace(self.labels)
            if not check.is_subspace:
                errors.append(f"labels are not a subspace (pair {check.violating_pair})")
            elif check.dim != self.subspace_dim:
                errors.append(f"labels span dimension {check.dim}, expected {self.subspace_dim}")
        return errors

    def to_dict(self) -> Dict[str, Any]:
        return {"graph": self.graph.to_dict(), "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], n: int) -> "LabeledGraph":
        try:
            graph = AbstractGraph.from_dict(data["graph"])
            return cls(graph, tuple(int(x) for x in data["labels"]), n)
        except (KeyError, TypeError, ValueError) as e:
            raise BadParamsError(f"malformed labeled graph: {e}")


@dataclass
class DifferenceList:
    """Multiset over Z_n stored as a dense count array"""

    n: int
    counts: np.ndarray = field(repr=False)

    @classmethod
    def empty(cls, n: int) -> "DifferenceList":
        return cls(n, np.zeros(n, dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def multiplicity(self, x: int) -> int:
        return int(self.counts[x % self.n])

    def support(self) -> List[int]:
        return np.flatnonzero(self.counts).tolist()

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.counts, self.counts[(-np.arange(self.n)) % self.n]))

    def as_dict(self) -> Dict[int, int]:
        return {int(r): int(self.counts[r]) for r in np.flatnonzero(self.counts)}

    def __add__(self, other: "DifferenceList") -> "DifferenceList":
        if other.n != self.n:
            raise BadParamsError(f"cannot add difference lists over Z_{self.n} and Z_{other.n}")
        return DifferenceList(self.n, self.counts + other.counts)


def difference_list(block: LabeledGraph) -> DifferenceList:
    return DifferenceList(block.n, difference_counts(block.labels, block.edge_array, block.n))


def difference_table(block: LabeledGraph) -> pd.DataFrame:
    """
    Entry (x, y) is x - y for adjacent vertices labeled x and y, missing
    otherwise. Rows and columns are labels in vertex order.
    """
    k = block.graph.order
    table = np.full((k, k), np.nan)
    for i, j in block.graph.edges:
        table[i, j] = (block.labels[i] - block.labels[j]) % block.n
        table[j, i] = (block.labels[j] - block.labels[i]) % block.n
    frame = pd.DataFrame(table, index=list(block.labels), columns=list(block.labels))
    return frame.astype("Int64")


def log_image(
    p: int,
    r: int,
    data: Union[DifferenceList, pd.DataFrame, Iterable[int]],
    classes: Optional[int] = None,
):
    """
    Apply Log: r^i -> i mod classes to residues of Z_p.

    A DifferenceList maps to counts over Z_classes, a difference table to
    a table of logs, and a plain iterable to a list of logs.

    Raises:
        NotPrimeError: p is not prime
        NotPrimitiveRootError: r does not generate Z_p^*
    """
    if not galois.is_prime(p):
        raise NotPrimeError(f"{p} is not prime", {"p": p})
    if not galois.is_primitive_root(r % p, p):
        raise NotPrimitiveRootError(f"{r} is not a primitive root modulo {p}", {"p": p, "r": r})
    classes = classes or (p - 1)
    GF = galois.GF(p)
    base = GF(r % p)

    def logs(values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64) % p
        if np.any(values == 0):
            raise BadParamsError("Log is undefined at 0")
        return np.asarray(GF(values).log(base), dtype=np.int64) % classes

    if isinstance(data, DifferenceList):
        residues = np.repeat(np.arange(data.n), data.counts)
        return np.bincount(logs(residues), minlength=classes)
    if isinstance(data, pd.DataFrame):
        mask = data.notna().to_numpy()
        values = data.to_numpy(dtype="float64", na_value=np.nan)
        out = np.full(values.shape, np.nan)
        if mask.any():
            out[mask] = logs(values[mask].astype(np.int64))
        return pd.DataFrame(out, index=data.index, columns=data.columns).astype("Int64")
    return logs(np.fromiter((int(x) for x in data), dtype=np.int64)).tolist()


def expand_frobenius_seed(
    graph: AbstractGraph,
    seed: Mapping[int, int],
    rotation: Sequence[int],
    n: int,
    multiplier: int,
    v: Optional[int] = None,
) -> LabeledGraph:
    """
    Complete a labeling with label(rotation(x)) = multiplier * label(x) mod n.

    Seeds may name more than one vertex per rotation orbit as long as the
    values agree with the rule.

    Raises:
        SeedIncompleteError: an orbit carries no seeded vertex
        CollisionError: inconsistent seed or a repeated label
        BadParamsError: rotation order does not divide v
    """
    k = graph.order
    if sorted(rotation) != list(range(k)):
        raise BadParamsError("rotation is not a permutation of the vertices", family=graph.family)
    if v is not None and v % permutation_order(rotation):
        raise BadParamsError(
            f"rotation order {permutation_order(rotation)} does not divide {v}", family=graph.family
        )

    labels: List[Optional[int]] = [None] * k
    for vertex in sorted(seed):
        if not 0 <= vertex < k:
            raise BadParamsError(f"seed vertex {vertex} outside the graph", family=graph.family)
        x, value = vertex, int(seed[vertex]) % n
        while True:
            if labels[x] is None:
                labels[x] = value
            elif labels[x] != value:
                raise CollisionError(
                    f"vertex {x} receives {labels[x]} and {value}", family=graph.family, vertex=x
                )
            else:
                break
            x = rotation[x]
            value = (value * multiplier) % n

    missing = [i for i, label in enumerate(labels) if label is None]
    if missing:
        raise SeedIncompleteError(
            f"no seed on the rotation orbits of vertices {missing[:5]}", family=graph.family
        )
    if len(set(labels)) != k:
        raise CollisionError("expanded labels are not injective", family=graph.family)
    return LabeledGraph(graph, tuple(labels), n)


def differences_of(block: LabeledGraph) -> np.ndarray:
    """Flat array of all oriented edge differences"""
    return edge_differences(block.labels, block.edge_array, block.n)
