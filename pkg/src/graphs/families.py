"""
Abstract Graph Families

Simple graphs on vertex indices 0..order-1 with a family tag. Generators
come from networkx; the canonical indexing per family is:

  complete/cycle/path   0..k-1, cycle and path edges (i, i+1)
  prism (n)             outer cycle 0..n-1, inner cycle n..2n-1, spokes (i, n+i)
  petersen (n, t)       outer cycle 0..n-1, spokes (i, n+i), inner (n+i, n+(i+t) mod n)
  moebius (n)           circulant C(Z_2n; {1, n})
  q3star                cube Q_3 minus the vertex (1,1,1), remaining cube
                        vertices indexed in sorted coordinate order
  clique_union          consecutive blocks of complete graphs
  cycle_union           consecutive blocks of cycles
  null_union            a base family followed by d isolated vertices
"""

import logging
from dataclasses import dataclass, field
from math import lcm
from typing import Any, Dict, List, Sequence, Tuple

import networkx as nx

from src.core.error_handling import BadParamsError

logger = logging.getLogger(__name__)

FAMILIES = (
    "complete",
    "cycle",
    "path",
    "prism",
    "petersen",
    "moebius",
    "q3star",
    "circulant",
    "clique_union",
    "cycle_union",
    "null",
    "null_union",
    "custom",
)


@dataclass
class AbstractGraph:
    """Simple graph with a family tag; edges normalized to sorted (i, j), i < j"""

    order: int
    edges: Tuple[Tuple[int, int], ...]
    family: str = "custom"
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        errors = self.get_validation_errors()
        if errors:
            raise BadParamsError("; ".join(errors), family=self.family)
        self.edges = tuple(sorted((min(i, j), max(i, j)) for i, j in self.edges))

    def get_validation_errors(self) -> List[str]:
        errors = []
        if not isinstance(self.order, int) or self.order < 0:
            errors.append(f"order must be a non-negative integer, got {self.order!r}")
            return errors
        seen = set()
        for edge in self.edges:
            if len(edge) != 2:
                errors.append(f"edge {edge!r} does not have two endpoints")
                continue
            i, j = int(edge[0]), int(edge[1])
            if i == j:
                errors.append(f"loop at vertex {i}")
            if not (0 <= i < self.order and 0 <= j < self.order):
                errors.append(f"edge ({i}, {j}) leaves 0..{self.order - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                errors.append(f"duplicate edge {key}")
            seen.add(key)
        return errors

    @property
    def size(self) -> int:
        return len(self.edges)

    def degrees(self) -> List[int]:
        degree = [0] * self.order
        for i, j in self.edges:
            degree[i] += 1
            degree[j] += 1
        return degree

    @property
    def isolated_count(self) -> int:
        return sum(1 for d in self.degrees() if d == 0)

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.order)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.order))
        graph.add_edges_from(self.edges)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph, family: str, params: Dict[str, Any]) -> "AbstractGraph":
        relabeled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls(
            order=relabeled.number_of_nodes(),
            edges=tuple((int(i), int(j)) for i, j in relabeled.edges()),
            family=family,
            params=dict(params),
        )

    def to_dict(self) -> Dict[str, Any]:
        if self.family != "custom":
            return {"family": self.family, "params": dict(self.params)}
        return {
            "family": "custom",
            "order": self.order,
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AbstractGraph":
        """Family graphs are rebuilt from parameters; custom graphs need order and edges"""
        if not isinstance(data, dict):
            raise BadParamsError(f"graph description must be an object, got {data!r}")
        family = data.get("family", "custom")
        if family == "custom" or "edges" in data:
            try:
                return cls(
                    order=int(data["order"]),
                    edges=tuple(tuple(int(x) for x in e) for e in data["edges"]),
                    family="custom",
                    params=dict(data.get("params") or {}),
                )
            except (KeyError, TypeError, ValueError) as e:
                raise BadParamsError(f"custom graph needs order and edges: {e}")
        return make_family_graph(family, **(data.get("params") or {}))


def _positive(name: str, value: Any, minimum: int, family: str) -> int:
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise BadParamsError(f"{name} must be an integer, got {value!r}", family=family)
    if value < minimum:
        raise BadParamsError(f"{name} must be at least {minimum}, got {value}", family=family)
    return value


def _generalized_petersen(n: int, t: int) -> nx.Graph:
    graph = nx.cycle_graph(n)
    graph.add_nodes_from(range(n, 2 * n))
    for i in range(n):
        graph.add_edge(i, n + i)
        graph.add_edge(n + i, n + (i + t) % n)
    return graph


def _q3star() -> nx.Graph:
    cube = nx.hypercube_graph(3)
    cube.remove_node((1, 1, 1))
    return cube


def make_family_graph(tag: str, **params) -> AbstractGraph:
    """
    Build a graph of the named family.

    Raises:
        BadParamsError: unknown tag or parameters out of range
    """
    if tag == "complete":
        k = _positive("k", params.get("k"), 1, tag)
        graph = nx.complete_graph(k)
        params = {"k": k}
    elif tag == "cycle":
        k = _positive("k", params.get("k"), 3, tag)
        graph = nx.cycle_graph(k)
        params = {"k": k}
    elif tag == "path":
        k = _positive("k", params.get("k"), 1, tag)
        graph = nx.path_graph(k)
        params = {"k": k}
    elif tag == "prism":
        n = _positive("n", params.get("n"), 3, tag)
        graph = nx.circular_ladder_graph(n)
        params = {"n": n}
    elif tag == "petersen":
        n = _positive("n", params.get("n"), 4, tag)
        t = _positive("t", params.get("t"), 2, tag)
        if t > n - 2 or 2 * t == n:
            raise BadParamsError(f"P({n},{t}) needs 2 <= t <= n-2 and 2t != n", family=tag)
        graph = _generalized_petersen(n, t)
        params = {"n": n, "t": t}
    elif tag == "moebius":
        n = _positive("n", params.get("n"), 2, tag)
        graph = nx.circulant_graph(2 * n, [1, n])
        params = {"n": n}
    elif tag == "q3star":
        graph = _q3star()
        params = {}
    elif tag == "circulant":
        n = _positive("n", params.get("n"), 1, tag)
        jumps = sorted({int(s) % n for s in params.get("jumps", [])})
        if not jumps or 0 in jumps or any(2 * s > n for s in jumps):
            raise BadParamsError(f"jumps must lie in 1..{n // 2}, got {params.get('jumps')}", family=tag)
        graph = nx.circulant_graph(n, jumps)
        params = {"n": n, "jumps": jumps}
    elif tag in ("clique_union", "cycle_union"):
        sizes = [int(s) for s in params.get("sizes", [])]
        minimum = 1 if tag == "clique_union" else 3
        if not sizes or any(s < minimum for s in sizes):
            raise BadParamsError(f"component sizes must be >= {minimum}, got {sizes}", family=tag)
        make = nx.complete_graph if tag == "clique_union" else nx.cycle_graph
        graph = nx.disjoint_union_all([make(s) for s in sizes])
        params = {"sizes": sizes}
    elif tag == "null":
        d = _positive("d", params.get("d"), 0, tag)
        graph = nx.empty_graph(d)
        params = {"d": d}
    elif tag == "null_union":
        base_spec = params.get("base")
        d = _positive("d", params.get("d"), 0, tag)
        if not isinstance(base_spec, dict):
            raise BadParamsError("null_union needs a base graph description", family=tag)
        base = AbstractGraph.from_dict(base_spec)
        graph = nx.disjoint_union(base.to_networkx(), nx.empty_graph(d))
        params = {"base": base.to_dict(), "d": d}
    elif tag == "custom":
        return AbstractGraph(
            order=int(params.get("order", 0)),
            edges=tuple(tuple(e) for e in params.get("edges", [])),
        )
    else:
        raise BadParamsError(f"unknown graph family {tag!r}", family=str(tag))

    return AbstractGraph.from_networkx(graph, tag, params)


def permutation_order(perm: Sequence[int]) -> int:
    """Order of a permutation given as an image list"""
    seen = [False] * len(perm)
    result = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        result = lcm(result, length)
    return result


def make_rotation(graph: AbstractGraph, step: int) -> Tuple[int, ...]:
    """
    Rotation automorphism by `step` positions for cyclically indexed
    families (cycle, prism, petersen, moebius, circulant and their
    null_union extensions, which fix the isolated vertices).
    """
    family, params = graph.family, graph.params
    extra = 0
    if family == "null_union":
        base = AbstractGraph.from_dict(params["base"])
        extra = params["d"]
        family, params = base.family, base.params

    if family == "cycle":
        k = params["k"]
        perm = [(i + step) % k for i in range(k)]
    elif family in ("prism", "petersen"):
        n = params["n"]
        perm = [(i + step) % n for i in range(n)] + [n + (i + step) % n for i in range(n)]
    elif family in ("moebius", "circulant"):
        size = 2 * params["n"] if family == "moebius" else params["n"]
        perm = [(i + step) % size for i in range(size)]
    else:
        raise BadParamsError(f"no rotation defined for family {graph.family!r}", family=graph.family)

    base_order = len(perm)
    perm += list(range(base_order, base_order + extra))
    mapped = {tuple(sorted((perm[i], perm[j]))) for i, j in graph.edges}
    if mapped != set(graph.edges):
        raise BadParamsError(f"rotation by {step} is not an automorphism", family=graph.family)
    return tuple(perm)
