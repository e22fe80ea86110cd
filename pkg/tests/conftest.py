"""Independent oracles shared across the test suite.

These deliberately avoid the production code paths: the projection oracle
parametrizes the sum-to-one constraint explicitly and solves with lstsq
(production builds KKT systems and pseudo-inverts them), and the control
oracle accumulates the neighbor sums agent by agent (production uses the
assembled matrix form).
"""

import itertools

import numpy as np


def projection_oracle(x, vertices):
    """Brute-force hull projection over all vertex subsets.

    For each subset, solve the affine least-squares problem with weights
    constrained to sum to one, keep candidates with nonnegative weights, and
    return (closest, half_squared_distance) of the best.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(vertices, dtype=float)
    k = v.shape[0]
    best_sq = np.inf
    best_closest = None
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            vs = v[list(subset)]
            if size == 1:
                gamma = np.array([1.0])
            else:
                nbasis = np.zeros((size, size - 1))
                nbasis[0, :] = -1.0
                nbasis[1:, :] = np.eye(size - 1)
                a = vs.T @ nbasis
                b = x - vs[0]
                z = np.linalg.lstsq(a, b, rcond=None)[0]
                gamma = nbasis @ z
                gamma[0] += 1.0
            if (gamma >= -1e-12).all():
                closest = gamma @ vs
                sq = 0.5 * float(((x - closest) ** 2).sum())
                if sq < best_sq:
                    best_sq = sq
                    best_closest = closest
    return best_closest, best_sq


def control_oracle(x, topo, leader_positions):
    """Velocity law in neighbor-sum form, accumulated agent by agent."""
    pos = np.asarray(leader_positions, dtype=float)
    n, m = topo.graph.n, pos.shape[1]
    pts = np.asarray(x, dtype=float).reshape(n, m)
    u = np.zeros_like(pts)
    for i, j, w in topo.graph.edges:
        u[i - 1] += w * (pts[j - 1] - pts[i - 1])
        u[j - 1] += w * (pts[i - 1] - pts[j - 1])
    for agent, q, w in topo.leaders.links:
        u[agent - 1] += w * (pos[q - 1] - pts[agent - 1])
    return u.ravel()
