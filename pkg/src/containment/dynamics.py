"""Closed-loop neighbor dynamics under fixed or switched interconnection.

Each agent integrates velocity feedback toward its graph neighbors plus any
leaders it senses. Stacked over agents the flow is linear,

    x' = -(H (x) I_m) x + forcing,    H = L + sum_q diag(b^q),

so the closed-form equilibrium is available from one SPD solve per topology
and long-horizon integration doubles as an independent check of it. The
integrator is classical fixed-step RK4; switching times must sit on the step
grid so trajectories are bit-reproducible.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .geometry import LeaderSet, project_points
from .graph import Topology, laplacian, link_weights
from .linalg import solve_spd

GRID_REL_TOL = 1e-6


class ScenarioError(ValueError):
    """A scenario field violates a structural invariant."""


@dataclass(frozen=True)
class SwitchingSchedule:
    """Piecewise-constant topology assignment: (time, topology id) entries.

    Times are strictly increasing; entry l governs the interval
    [t_l, t_{l+1}) and the final entry governs through the horizon.
    """

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ScenarioError("schedule needs at least one entry")
        canon = tuple((float(t), int(p)) for t, p in self.entries)
        for (t0, _), (t1, _) in zip(canon, canon[1:]):
            if t1 <= t0:
                raise ScenarioError("schedule times must be strictly increasing")
        object.__setattr__(self, "entries", canon)

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.entries)


def active_topology(schedule: SwitchingSchedule, t: float) -> int:
    """Topology id governing time t: the last entry with start time <= t."""
    times = schedule.times
    if t < times[0]:
        raise ValueError(f"time {t} precedes the schedule start {times[0]}")
    return schedule.entries[bisect.bisect_right(times, t) - 1][1]


def _grid_steps(span: float, dt: float, what: str) -> int:
    r = span / dt
    steps = round(r)
    if abs(r - steps) > GRID_REL_TOL:
        raise ScenarioError(f"{what} {span} is not a multiple of dt={dt}")
    return int(steps)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A full experiment: initial states, leaders, topology library, schedule.

    ``topologies`` maps integer ids to Topology values; the schedule refers
    to those ids. Construction validates dimensional consistency, grid
    alignment of every switching time, and a dwell of at least one step.
    """

    m: int
    x_init: np.ndarray
    leaders: LeaderSet
    topologies: tuple[tuple[int, Topology], ...]
    schedule: SwitchingSchedule
    dt: float
    t_final: float
    t0: float = 0.0
    notes: str = ""

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ScenarioError("dimension m must be a positive integer")
        x = np.array(self.x_init, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] != self.m:
            raise ScenarioError(
                f"x_init must be a nonempty (n, {self.m}) array, got shape {x.shape}"
            )
        if not np.isfinite(x).all():
            raise ScenarioError("x_init must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "x_init", x)
        n = x.shape[0]
        if self.leaders.m != self.m:
            raise ScenarioError(
                f"leaders live in R^{self.leaders.m} but the scenario is R^{self.m}"
            )
        topo = tuple((int(pid), t) for pid, t in self.topologies)
        if not topo:
            raise ScenarioError("need at least one topology")
        ids = [pid for pid, _ in topo]
        if len(set(ids)) != len(ids):
            raise ScenarioError("topology ids must be unique")
        for pid, t in topo:
            if t.graph.n != n:
                raise ScenarioError(f"topology {pid} has {t.graph.n} agents, expected {n}")
            if t.leaders.k != self.leaders.k:
                raise ScenarioError(
                    f"topology {pid} links {t.leaders.k} leaders, expected {self.leaders.k}"
                )
        object.__setattr__(self, "topologies", topo)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "t_final", float(self.t_final))
        object.__setattr__(self, "t0", float(self.t0))
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ScenarioError("dt must be positive")
        if not (np.isfinite(self.t_final) and self.t_final > self.t0):
            raise ScenarioError("t_final must exceed t0")
        _grid_steps(self.t_final - self.t0, self.dt, "horizon")
        times = self.schedule.times
        if abs(times[0] - self.t0) > 1e-9:
            raise ScenarioError(f"schedule must start at t0={self.t0}, got {times[0]}")
        known = set(ids)
        for t, pid in self.schedule.entries:
            if pid not in known:
                raise ScenarioError(f"schedule uses unknown topology id {pid}")
            if t >= self.t_final:
                raise ScenarioError(f"switch at {t} is at or after the horizon")
            _grid_steps(t - self.t0, self.dt, "switch time offset")
        for ta, tb in zip(times, times[1:]):
            if tb - ta < self.dt - 1e-9:
                raise ScenarioError(f"dwell {tb - ta} is shorter than one step")

    @property
    def n(self) -> int:
        return self.x_init.shape[0]

    @property
    def topology_ids(self) -> tuple[int, ...]:
        return tuple(pid for pid, _ in self.topologies)

    def topology(self, pid: int) -> Topology:
        for known, t in self.topologies:
            if known == pid:
                return t
        raise KeyError(pid)

    @property
    def step_count(self) -> int:
        return _grid_steps(self.t_final - self.t0, self.dt, "horizon")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled solution: states are stacked row-major per sample."""

    times: np.ndarray
    states: np.ndarray
    topologies: np.ndarray
    d_xi: np.ndarray
    n: int
    m: int

    def __post_init__(self):
        for name in ("times", "states", "topologies", "d_xi"):
            a = getattr(self, name)
            a = np.asarray(a)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        s = self.times.shape[0]
        if self.states.shape != (s, self.n * self.m):
            raise ValueError("states shape does not match sample count and n*m")
        if self.topologies.shape != (s,) or self.d_xi.shape != (s,):
            raise ValueError("per-sample columns must match the time axis")

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1].reshape(self.n, self.m)

    def points(self, index: int) -> np.ndarray:
        return self.states[index].reshape(self.n, self.m)


def build_h(t: Topology) -> np.ndarray:
    """Composite feedback matrix: Laplacian plus total link weight per agent."""
    return laplacian(t.graph) + np.diag(link_weights(t).sum(axis=1))


def _forcing(t: Topology, leaders: LeaderSet) -> np.ndarray:
    # (n, m): row i is sum_q b_i^q x0^q
    return link_weights(t) @ leaders.positions


def _check_pair(t: Topology, leaders: LeaderSet):
    if t.leaders.k != leaders.k:
        raise ValueError(
            f"topology links {t.leaders.k} leaders but {leaders.k} positions given"
        )


def _as_points(x, n: int, m: int) -> np.ndarray:
    xv = np.asarray(x, dtype=float).reshape(-1)
    if xv.size != n * m:
        raise ValueError(f"state length {xv.size}, expected n*m = {n * m}")
    return xv.reshape(n, m)


def control(x, t: Topology, leaders: LeaderSet) -> np.ndarray:
    """Stacked velocity: neighbor attraction plus leader attraction per agent."""
    _check_pair(t, leaders)
    pts = _as_points(x, t.graph.n, leaders.m)
    return (_forcing(t, leaders) - build_h(t) @ pts).ravel()


def _rk4(pts: np.ndarray, h: np.ndarray, f: np.ndarray, dt: float) -> np.ndarray:
    k1 = f - h @ pts
    k2 = f - h @ (pts + 0.5 * dt * k1)
    k3 = f - h @ (pts + 0.5 * dt * k2)
    k4 = f - h @ (pts + dt * k3)
    return pts + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def step(x, topo: Topology, leaders: LeaderSet, dt: float) -> np.ndarray:
    """One classical RK4 step of the closed-loop flow from stacked state x."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    _check_pair(topo, leaders)
    pts = _as_points(x, topo.graph.n, leaders.m)
    return _rk4(pts, build_h(topo), _forcing(topo, leaders), dt).ravel()


def simulate(s: Scenario) -> Trajectory:
    """Integrate the scenario and record state, active topology, and the
    containment certificate at every grid time."""
    steps = s.step_count
    mats = {pid: (build_h(t), _forcing(t, s.leaders)) for pid, t in s.topologies}
    switch_steps = [round((t - s.t0) / s.dt) for t in s.schedule.times]
    entry_ids = np.array([pid for _, pid in s.schedule.entries])
    seg = np.searchsorted(switch_steps, np.arange(steps + 1), side="right") - 1
    active = entry_ids[seg]
    states = np.empty((steps + 1, s.n * s.m))
    pts = s.x_init.copy()
    states[0] = pts.ravel()
    for j in range(steps):
        h, f = mats[int(active[j])]
        pts = _rk4(pts, h, f, s.dt)
        states[j + 1] = pts.ravel()
    times = s.t0 + s.dt * np.arange(steps + 1)
    sq = project_points(states.reshape(-1, s.m), s.leaders)[2]
    dvals = sq.reshape(steps + 1, s.n).sum(axis=1)
    return Trajectory(
        times=times, states=states, topologies=active, d_xi=dvals, n=s.n, m=s.m
    )


def equilibrium(t: Topology, leaders: LeaderSet):
    """Closed-form limit of the fixed-topology flow.

    Returns (w, x_star): w is the (n, k) weight matrix solving H w = B with
    B the per-leader link-weight columns, and x_star = w @ positions. When
    every component is leader-connected, w is row stochastic, so each agent's
    limit is a convex combination of leader positions. A topology with a
    leaderless component surfaces as NotPositiveDefiniteError from the solve.
    """
    _check_pair(t, leaders)
    w = solve_spd(build_h(t), link_weights(t))
    return w, w @ leaders.positions
