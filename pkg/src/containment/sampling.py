"""Deterministic random instance generators for verification campaigns.

Every generator takes an explicit numpy Generator; campaigns derive one per
trial from (seed, trial index) so runs are reproducible and trials are
independent.
"""

from __future__ import annotations

import math

import numpy as np

from .dynamics import Scenario, SwitchingSchedule, build_h
from .geometry import LeaderSet
from .graph import AgentGraph, LeaderLinks, Topology, components, laplacian
from .linalg import sym_eigenvalues

WEIGHT_RANGE = (0.5, 2.0)


def rng_for(seed: int, trial: int | None = None) -> np.random.Generator:
    return np.random.default_rng(seed if trial is None else [seed, trial])


def _weight(rng) -> float:
    lo, hi = WEIGHT_RANGE
    return float(rng.uniform(lo, hi))


def _connected_edges(rng, agents: list[int], extra_edge_prob: float = 0.35):
    """Random spanning tree over the given agent ids plus extra random edges."""
    order = [agents[i] for i in rng.permutation(len(agents))]
    edges = {}
    for idx in range(1, len(order)):
        j = int(rng.integers(0, idx))
        a, b = sorted((order[idx], order[j]))
        edges[(a, b)] = _weight(rng)
    for ai in range(len(agents)):
        for bi in range(ai + 1, len(agents)):
            pair = tuple(sorted((agents[ai], agents[bi])))
            if pair not in edges and rng.random() < extra_edge_prob:
                edges[pair] = _weight(rng)
    return [(i, j, w) for (i, j), w in edges.items()]


def random_connected_graph(rng, n: int) -> AgentGraph:
    return AgentGraph(n, tuple(_connected_edges(rng, list(range(1, n + 1)))))


def random_graph(rng, n_min: int = 2, n_max: int = 12, max_parts: int = 3) -> AgentGraph:
    """Random graph with 1..max_parts connected components."""
    n = int(rng.integers(n_min, n_max + 1))
    parts = int(rng.integers(1, min(max_parts, n) + 1))
    ids = list(range(1, n + 1))
    rng.shuffle(ids)
    cuts = sorted(rng.choice(np.arange(1, n), size=parts - 1, replace=False)) if parts > 1 else []
    chunks = np.split(np.array(ids), cuts)
    edges: list[tuple[int, int, float]] = []
    for chunk in chunks:
        edges.extend(_connected_edges(rng, [int(i) for i in chunk]))
    return AgentGraph(n, tuple(edges))


def _random_links(rng, g: AgentGraph, k: int, link_prob: float = 0.3):
    links = {}
    for i in range(1, g.n + 1):
        for q in range(1, k + 1):
            if rng.random() < link_prob:
                links[(i, q)] = _weight(rng)
    return links


def random_connected_topology(rng, n_max: int = 12, k_max: int = 4,
                              k: int | None = None) -> Topology:
    """Connected agent graph with at least one leader link."""
    n = int(rng.integers(2, n_max + 1))
    if k is None:
        k = int(rng.integers(1, k_max + 1))
    g = random_connected_graph(rng, n)
    links = _random_links(rng, g, k)
    if not links:
        links[(int(rng.integers(1, n + 1)), int(rng.integers(1, k + 1)))] = _weight(rng)
    link_tuple = tuple((i, q, w) for (i, q), w in sorted(links.items()))
    return Topology(g, LeaderLinks(n, k, link_tuple))


def random_topology(rng, linked: bool, n_max: int = 12, k_max: int = 4,
                    k: int | None = None) -> Topology:
    """Random topology; ``linked`` decides whether every component gets a link."""
    g = random_graph(rng, n_max=n_max)
    if k is None:
        k = int(rng.integers(1, k_max + 1))
    comps = components(g)
    links = _random_links(rng, g, k)
    by_comp = {comp: [i for i in comp if any((i, q) in links for q in range(1, k + 1))]
               for comp in comps}
    if linked:
        for comp, present in by_comp.items():
            if not present:
                agent = int(comp[int(rng.integers(0, len(comp)))])
                links[(agent, int(rng.integers(1, k + 1)))] = _weight(rng)
    else:
        # strip links from at least one component
        strip = [comp for comp in comps if rng.random() < 0.5]
        if not strip:
            strip = [comps[int(rng.integers(0, len(comps)))]]
        for comp in strip:
            for i in comp:
                for q in range(1, k + 1):
                    links.pop((i, q), None)
    link_tuple = tuple((i, q, w) for (i, q), w in sorted(links.items()))
    return Topology(g, LeaderLinks(g.n, k, link_tuple))


def random_leader_set(rng, k: int, m: int, box=(0.0, 2.0)) -> LeaderSet:
    return LeaderSet(rng.uniform(box[0], box[1], size=(k, m)))


def _integration_grid(rates: list[float], lam_max: float, span_factor: float = 20.0):
    """Step size stable for RK4 and a horizon long enough to settle."""
    dt = min(0.05, 0.5 / max(lam_max, 1e-9))
    slowest = min(rates) if rates else 1.0
    steps = max(1, math.ceil(span_factor / (slowest * dt)))
    return dt, steps


def settle_scenario(rng, connected: bool = True, n_max: int = 12, k_max: int = 4,
                    m_max: int = 3) -> Scenario:
    """Fixed-topology scenario integrated long enough for the limit to settle.

    Connected instances place agents anywhere in a desk-scale box. Instances
    with leaderless components place those agents in a box offset from the
    leaders' hull so their consensus mean stays well outside it.
    """
    m = int(rng.integers(1, m_max + 1))
    k = int(rng.integers(1, k_max + 1))
    leaders = random_leader_set(rng, k, m)
    if connected:
        topo = random_connected_topology(rng, n_max=n_max, k=k)
        x_init = rng.uniform(-2.0, 8.0, size=(topo.graph.n, m))
    else:
        topo = random_topology(rng, linked=False, n_max=n_max, k=k)
        n = topo.graph.n
        linked_agents = topo.leaders.linked_agents
        x_init = rng.uniform(0.0, 4.0, size=(n, m))
        for comp in components(topo.graph):
            if not any(i in linked_agents for i in comp):
                for i in comp:
                    x_init[i - 1] = rng.uniform(3.5, 9.0, size=m)
    h = build_h(topo)
    eig = sym_eigenvalues(h)
    rates = []
    linked_agents = topo.leaders.linked_agents
    for comp in components(topo.graph):
        sub = [i - 1 for i in comp]
        if any(i in linked_agents for i in comp):
            rates.append(float(sym_eigenvalues(h[np.ix_(sub, sub)])[0]))
        elif len(comp) > 1:
            lap = laplacian(topo.graph)[np.ix_(sub, sub)]
            rates.append(float(sym_eigenvalues(lap)[1]))
    dt, steps = _integration_grid(rates, float(eig[-1]))
    return Scenario(
        m=m,
        x_init=x_init,
        leaders=leaders,
        topologies=((1, topo),),
        schedule=SwitchingSchedule(((0.0, 1),)),
        dt=dt,
        t_final=steps * dt,
    )


def random_switched_scenario(rng, n_topologies: int = 3, m_max: int = 3,
                             dwell_steps: int = 50, n_dwells: int = 12) -> Scenario:
    """Switched scenario whose topologies are all leader-connected."""
    m = int(rng.integers(1, m_max + 1))
    k = int(rng.integers(1, 4))
    n = int(rng.integers(2, 9))
    leaders = random_leader_set(rng, k, m)
    topos = []
    lam_max = 0.0
    for pid in range(1, n_topologies + 1):
        g = random_connected_graph(rng, n)
        links = _random_links(rng, g, k)
        if not links:
            links[(int(rng.integers(1, n + 1)), int(rng.integers(1, k + 1)))] = _weight(rng)
        topo = Topology(g, LeaderLinks(n, k, tuple((i, q, w) for (i, q), w in sorted(links.items()))))
        lam_max = max(lam_max, float(sym_eigenvalues(build_h(topo))[-1]))
        topos.append((pid, topo))
    dt = min(0.02, 0.5 / max(lam_max, 1e-9))
    dwell = dwell_steps * dt
    entries = tuple(
        (l * dwell, 1 + int(rng.integers(0, n_topologies))) if l else (0.0, 1)
        for l in range(n_dwells)
    )
    x_init = rng.uniform(-2.0, 8.0, size=(n, m))
    return Scenario(
        m=m,
        x_init=x_init,
        leaders=leaders,
        topologies=tuple(topos),
        schedule=SwitchingSchedule(entries),
        dt=dt,
        t_final=n_dwells * dwell,
    )


def random_projection_case(rng, k_max: int = 5, m_max: int = 3):
    """A query point and leader set, occasionally degenerate on purpose."""
    m = int(rng.integers(1, m_max + 1))
    k = int(rng.integers(1, k_max + 1))
    pos = rng.uniform(-3.0, 3.0, size=(k, m))
    roll = rng.random()
    if roll < 0.15 and k >= 2:
        pos[int(rng.integers(0, k))] = pos[int(rng.integers(0, k))]  # may coincide
    elif roll < 0.3 and k >= 3:
        # force three collinear vertices
        a, b = pos[0], pos[1]
        pos[2] = a + rng.uniform(0.0, 1.0) * (b - a)
    x = rng.uniform(-5.0, 5.0, size=m)
    return x, LeaderSet(pos)
