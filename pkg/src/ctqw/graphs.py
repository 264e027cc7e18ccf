"""Graph construction, Laplacians, centralities, and initial-node selection.

All graphs are simple, undirected, unweighted and connected. Node labels are
0..n-1 in generation order; the hub of a star is node 0 by convention. Random
generators are deterministic functions of their integer seed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import GraphGenerationError

Edge = tuple[int, int]

# Retry budget when resampling a random graph until it comes out connected.
MAX_CONNECTIVITY_ATTEMPTS = 1000


def _canonical_edges(edges: Iterable[Edge], n: int) -> tuple[Edge, ...]:
    canon = set()
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop ({i}, {j}) not allowed")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
        canon.add((min(i, j), max(i, j)))
    return tuple(sorted(canon))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with a canonical, sorted edge list."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"node count must be positive, got {self.n}")
        object.__setattr__(self, "edges", _canonical_edges(self.edges, self.n))

    def adjacency(self) -> np.ndarray:
        """Symmetric 0/1 adjacency matrix with zero diagonal."""
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def adjacency_lists(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return nbrs

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def to_json(self) -> str:
        """Canonical JSON form: {"n": ..., "edges": [[i, j], ...]} with i < j, sorted."""
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]},
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        data = json.loads(text)
        return cls(n=int(data["n"]), edges=tuple((int(i), int(j)) for i, j in data["edges"]))

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; stable under edge-list permutation."""
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def is_connected(n: int, adjacency_lists: list[list[int]]) -> bool:
    if n == 0:
        return False
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adjacency_lists[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def build_cycle(n: int) -> Graph:
    """Ring where every node links its two nearest neighbours."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def build_complete(n: int) -> Graph:
    """Every node connected to all others."""
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def build_star(n: int) -> Graph:
    """Hub node 0 connected to all peripheral nodes 1..n-1."""
    if n < 3:
        raise ValueError(f"star needs n >= 3, got {n}")
    return Graph(n, tuple((0, j) for j in range(1, n)))


def build_erdos_renyi(n: int, avg_degree: float, seed: int) -> Graph:
    """G(n, p) with p = avg_degree/(n-1), resampled until connected.

    Each resample derives a fresh stream from (seed, attempt) so results are
    reproducible and independent of the retry count needed by other seeds.
    """
    if n < 2:
        raise ValueError(f"Erdos-Renyi needs n >= 2, got {n}")
    if not 0 < avg_degree <= n - 1:
        raise ValueError(f"avg_degree must be in (0, n-1], got {avg_degree}")
    p = avg_degree / (n - 1)
    iu, ju = np.triu_indices(n, k=1)
    for attempt in range(MAX_CONNECTIVITY_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        mask = rng.random(len(iu)) < p
        edges = tuple(zip(iu[mask].tolist(), ju[mask].tolist()))
        g = Graph(n, edges)
        if is_connected(n, g.adjacency_lists()):
            return g
    raise GraphGenerationError(
        f"no connected G({n}, p={p:.4g}) sample after {MAX_CONNECTIVITY_ATTEMPTS} attempts"
    )


def build_watts_strogatz(n: int, k: int, p_rewire: float, seed: int) -> Graph:
    """Ring lattice with k nearest neighbours, each edge rewired with p_rewire.

    Rewiring keeps the edge count: the far endpoint of a lattice edge is moved
    to a uniformly chosen node that is neither the source nor an existing
    neighbour. If the source node is already saturated the rewire is skipped.
    Resamples (seed, attempt) until connected.
    """
    if k % 2 != 0:
        raise ValueError(f"k must be even, got {k}")
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n, got k={k}, n={n}")
    if not 0 <= p_rewire <= 1:
        raise ValueError(f"p_rewire must be in [0, 1], got {p_rewire}")
    for attempt in range(MAX_CONNECTIVITY_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for d in range(1, k // 2 + 1):
            for i in range(n):
                j = (i + d) % n
                nbrs[i].add(j)
                nbrs[j].add(i)
        # Rewire lattice rings in construction order, nearest ring first.
        for d in range(1, k // 2 + 1):
            for i in range(n):
                j = (i + d) % n
                if rng.random() >= p_rewire:
                    continue
                if j not in nbrs[i]:
                    continue  # already moved by an earlier rewire
                candidates = [v for v in range(n) if v != i and v not in nbrs[i]]
                if not candidates:
                    continue  # saturated node: keep the lattice edge
                new = candidates[rng.integers(len(candidates))]
                nbrs[i].discard(j)
                nbrs[j].discard(i)
                nbrs[i].add(new)
                nbrs[new].add(i)
        edges = tuple((i, j) for i in range(n) for j in nbrs[i] if i < j)
        g = Graph(n, edges)
        if is_connected(n, g.adjacency_lists()):
            return g
    raise GraphGenerationError(
        f"no connected Watts-Strogatz(n={n}, k={k}, p={p_rewire}) sample "
        f"after {MAX_CONNECTIVITY_ATTEMPTS} attempts"
    )


def build_barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """Preferential attachment from an m-node seed clique.

    Every new node draws m distinct targets with probability proportional to
    current degree (rejection sampling on duplicates), so the graph is
    connected by construction.
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng([seed, 0])
    edges: list[Edge] = [(i, j) for i in range(m) for j in range(i + 1, m)]
    deg = np.zeros(n)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    for new in range(m, n):
        attachable = min(m, new)
        chosen: set[int] = set()
        while len(chosen) < attachable:
            total = deg[:new].sum()
            if total == 0:
                # isolated seed clique of size 1: attach uniformly
                chosen.add(int(rng.integers(new)))
            else:
                chosen.add(int(rng.choice(new, p=deg[:new] / total)))
        for c in sorted(chosen):
            edges.append((c, new))
            deg[c] += 1
            deg[new] += 1
    return Graph(n, tuple(edges))


def laplacian(g: Graph) -> np.ndarray:
    """L = D - A; symmetric PSD with exact zero row sums."""
    a = g.adjacency()
    return np.diag(a.sum(axis=1)) - a


def shortest_path_lengths(g: Graph, source: int) -> np.ndarray:
    """BFS distances from source; unreached nodes get -1."""
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    nbrs = g.adjacency_lists()
    while frontier:
        nxt = []
        for u in frontier:
            for v in nbrs[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def closeness_centrality(g: Graph) -> np.ndarray:
    """Normalized closeness (n-1)/sum_j d(i, j) per node."""
    if g.n < 2:
        raise ValueError("closeness needs at least two nodes")
    out = np.zeros(g.n)
    for i in range(g.n):
        dist = shortest_path_lengths(g, i)
        if np.any(dist < 0):
            raise ValueError("closeness centrality requires a connected graph")
        out[i] = (g.n - 1) / dist.sum()
    return out


POLICY_KINDS = ("random", "highest_degree", "lowest_degree", "highest_closeness", "explicit")


@dataclass(frozen=True)
class NodePolicy:
    """Initial-node selection rule; ties resolve to the lowest index."""

    kind: str
    index: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.kind == "explicit" and self.index is None:
            raise ValueError("explicit policy requires an index")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random policy requires a seed")

    @classmethod
    def random(cls, seed: int) -> "NodePolicy":
        return cls("random", seed=seed)

    @classmethod
    def highest_degree(cls) -> "NodePolicy":
        return cls("highest_degree")

    @classmethod
    def lowest_degree(cls) -> "NodePolicy":
        return cls("lowest_degree")

    @classmethod
    def highest_closeness(cls) -> "NodePolicy":
        return cls("highest_closeness")

    @classmethod
    def explicit(cls, index: int) -> "NodePolicy":
        return cls("explicit", index=index)


def select_node(g: Graph, policy: NodePolicy) -> int:
    """Resolve a policy to a node index, deterministically."""
    if policy.kind == "explicit":
        if not 0 <= policy.index < g.n:
            raise ValueError(f"explicit index {policy.index} out of range for n={g.n}")
        return policy.index
    if policy.kind == "random":
        rng = np.random.default_rng([policy.seed])
        return int(rng.integers(g.n))
    if policy.kind == "highest_degree":
        return int(np.argmax(g.degrees()))
    if policy.kind == "lowest_degree":
        return int(np.argmin(g.degrees()))
    # highest_closeness: argmax returns the first (lowest-index) maximum
    return int(np.argmax(closeness_centrality(g)))


GENERATOR_FAMILIES = ("cycle", "complete", "star", "er", "ws", "ba")


def build_graph(family: str, n: int, *, avg_degree: float | None = None,
                k: int | None = None, p_rewire: float | None = None,
                m: int | None = None, seed: int | None = None) -> Graph:
    """Dispatch to a generator family by name (the CLI surface)."""
    if family == "cycle":
        return build_cycle(n)
    if family == "complete":
        return build_complete(n)
    if family == "star":
        return build_star(n)
    if family == "er":
        if avg_degree is None or seed is None:
            raise ValueError("er needs avg_degree and seed")
        return build_erdos_renyi(n, avg_degree, seed)
    if family == "ws":
        if k is None or p_rewire is None or seed is None:
            raise ValueError("ws needs k, p_rewire and seed")
        return build_watts_strogatz(n, k, p_rewire, seed)
    if family == "ba":
        if m is None or seed is None:
            raise ValueError("ba needs m and seed")
        return build_barabasi_albert(n, m, seed)
    raise ValueError(f"unknown graph family {family!r}")
