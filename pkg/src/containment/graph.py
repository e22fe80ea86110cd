"""Weighted undirected agent graphs and their leader links.

Agents are numbered 1..n and leaders 1..k throughout the public API; matrix
representations are materialized on demand as dense numpy arrays. A topology
is "leader-connected" when every component of the agent graph contains at
least one agent with a direct link to some leader, i.e. the graph augmented
with a single virtual node standing for all leaders is connected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _canonical_edges(n: int, edges) -> tuple[tuple[int, int, float], ...]:
    seen = set()
    out = []
    for e in edges:
        if len(e) == 2:
            i, j, w = int(e[0]), int(e[1]), 1.0
        elif len(e) == 3:
            i, j, w = int(e[0]), int(e[1]), float(e[2])
        else:
            raise ValueError(f"edge {e!r} must be (i, j) or (i, j, weight)")
        if i == j:
            raise ValueError(f"self-loop on agent {i}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"edge ({i}, {j}) out of range 1..{n}")
        if w <= 0 or not np.isfinite(w):
            raise ValueError(f"edge ({i}, {j}) weight {w} must be positive")
        i, j = (i, j) if i < j else (j, i)
        if (i, j) in seen:
            raise ValueError(f"duplicate edge ({i}, {j})")
        seen.add((i, j))
        out.append((i, j, w))
    return tuple(sorted(out))


@dataclass(frozen=True)
class AgentGraph:
    """Undirected graph on agents 1..n with strictly positive edge weights.

    Edges are stored canonically as (i, j, weight) with i < j. A bare (i, j)
    pair gets weight 1.0.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("agent count must be a positive integer")
        object.__setattr__(self, "edges", _canonical_edges(self.n, self.edges))


@dataclass(frozen=True)
class LeaderLinks:
    """Per-agent links to leaders: (agent, leader, weight) with weight > 0.

    At most one link per (agent, leader) pair; a bare (agent, leader) pair
    gets weight 1.0. k is the leader count even if some leaders are unlinked.
    """

    n: int
    k: int
    links: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("agent count must be a positive integer")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("leader count must be a positive integer")
        seen = set()
        out = []
        for e in self.links:
            if len(e) == 2:
                i, q, w = int(e[0]), int(e[1]), 1.0
            elif len(e) == 3:
                i, q, w = int(e[0]), int(e[1]), float(e[2])
            else:
                raise ValueError(f"link {e!r} must be (agent, leader) or (agent, leader, weight)")
            if not 1 <= i <= self.n:
                raise ValueError(f"link agent {i} out of range 1..{self.n}")
            if not 1 <= q <= self.k:
                raise ValueError(f"link leader {q} out of range 1..{self.k}")
            if w <= 0 or not np.isfinite(w):
                raise ValueError(f"link ({i}, {q}) weight {w} must be positive")
            if (i, q) in seen:
                raise ValueError(f"duplicate link ({i}, {q})")
            seen.add((i, q))
            out.append((i, q, w))
        object.__setattr__(self, "links", tuple(sorted(out)))

    @property
    def linked_agents(self) -> frozenset[int]:
        return frozenset(i for i, _, _ in self.links)


@dataclass(frozen=True)
class Topology:
    """One interconnection pattern: an agent graph plus its leader links."""

    graph: AgentGraph
    leaders: LeaderLinks

    def __post_init__(self):
        if self.graph.n != self.leaders.n:
            raise ValueError(
                f"graph has {self.graph.n} agents but links are for {self.leaders.n}"
            )


def adjacency(g: AgentGraph) -> np.ndarray:
    """Symmetric weighted adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    for i, j, w in g.edges:
        a[i - 1, j - 1] = w
        a[j - 1, i - 1] = w
    return a


def laplacian(g: AgentGraph) -> np.ndarray:
    """Graph Laplacian: degree matrix minus weighted adjacency.

    Rows sum to zero; the all-ones vector is always in the kernel.
    """
    a = adjacency(g)
    return np.diag(a.sum(axis=1)) - a


def components(g: AgentGraph) -> tuple[tuple[int, ...], ...]:
    """Connected components as sorted agent tuples, ordered by smallest member."""
    neighbors: dict[int, list[int]] = {i: [] for i in range(1, g.n + 1)}
    for i, j, _ in g.edges:
        neighbors[i].append(j)
        neighbors[j].append(i)
    unseen = set(range(1, g.n + 1))
    out = []
    while unseen:
        start = min(unseen)
        stack = [start]
        comp = {start}
        unseen.discard(start)
        while stack:
            v = stack.pop()
            for u in neighbors[v]:
                if u in unseen:
                    unseen.discard(u)
                    comp.add(u)
                    stack.append(u)
        out.append(tuple(sorted(comp)))
    return tuple(out)


def is_bar_connected(t: Topology) -> bool:
    """True iff every component of the agent graph has a leader-linked agent."""
    linked = t.leaders.linked_agents
    return all(any(i in linked for i in comp) for comp in components(t.graph))


def leaderless_components(t: Topology) -> tuple[tuple[int, ...], ...]:
    """Components with no link to any leader (empty iff is_bar_connected)."""
    linked = t.leaders.linked_agents
    return tuple(c for c in components(t.graph) if not any(i in linked for i in c))


def link_weights(t: Topology) -> np.ndarray:
    """(n, k) matrix of link weights; column q is the diagonal of leader q's matrix."""
    b = np.zeros((t.graph.n, t.leaders.k))
    for agent, leader, w in t.leaders.links:
        b[agent - 1, leader - 1] = w
    return b


def leader_matrix(t: Topology, q: int) -> np.ndarray:
    """Diagonal matrix of link weights toward leader q (zero where unlinked)."""
    if not 1 <= q <= t.leaders.k:
        raise ValueError(f"leader index {q} out of range 1..{t.leaders.k}")
    return np.diag(link_weights(t)[:, q - 1])


def merge_links(a: LeaderLinks, b: LeaderLinks) -> LeaderLinks:
    """Union of two link sets; weights on shared (agent, leader) pairs add."""
    if (a.n, a.k) != (b.n, b.k):
        raise ValueError("link sets describe different systems")
    acc: dict[tuple[int, int], float] = {}
    for agent, leader, w in a.links + b.links:
        acc[(agent, leader)] = acc.get((agent, leader), 0.0) + w
    links = tuple((i, q, w) for (i, q), w in sorted(acc.items()))
    return LeaderLinks(a.n, a.k, links)
