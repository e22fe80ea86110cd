"""File formats: JSON scenario documents, CSV trajectories, gnuplot plot data.

Scenario documents are strict: unknown keys are rejected and every error
message carries the key path (or line/column for malformed JSON) so the CLI
can point at the offending spot. Trajectory tables use 9 significant digits,
enough to verify 1e-6-level properties downstream, and are written
deterministically so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import Scenario, SwitchingSchedule, Trajectory
from .geometry import LeaderSet
from .graph import AgentGraph, LeaderLinks, Topology

_TOP_KEYS = ("m", "t0", "t_final", "dt", "agents", "leaders", "topologies", "schedule")


class FileFormatError(ValueError):
    """A scenario or trajectory document failed to parse."""


def _err(where: str, msg: str):
    raise FileFormatError(f"{where}: {msg}")


def _as_int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _err(where, f"expected an integer, got {v!r}")
    return v


def _as_float(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _err(where, f"expected a number, got {v!r}")
    return float(v)


def _as_list(v, where: str) -> list:
    if not isinstance(v, list):
        _err(where, f"expected a list, got {type(v).__name__}")
    return v

def _as_dict(v, where: str) -> dict:
    if not isinstance(v, dict):
        _err(where, f"expected an object, got {type(v).__name__}")
    return v


def _check_keys(obj: dict, where: str, required, optional=()):
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        _err(where, f"unknown keys {unknown}")
    missing = [key for key in required if key not in obj]
    if missing:
        _err(where, f"missing keys {missing}")


def _parse_points(items, m: int, where: str, kind: str) -> np.ndarray:
    items = _as_list(items, where)
    if not items:
        _err(where, f"needs at least one {kind}")
    rows: dict[int, list[float]] = {}
    for idx, entry in enumerate(items):
        spot = f"{where}[{idx}]"
        entry = _as_dict(entry, spot)
        _check_keys(entry, spot, ("id", "position"))
        ident = _as_int(entry["id"], f"{spot}.id")
        pos = _as_list(entry["position"], f"{spot}.position")
        if len(pos) != m:
            _err(f"{spot}.position", f"expected {m} coordinates, got {len(pos)}")
        if ident in rows:
            _err(f"{spot}.id", f"duplicate {kind} id {ident}")
        rows[ident] = [_as_float(c, f"{spot}.position[{j}]") for j, c in enumerate(pos)]
    count = len(rows)
    if sorted(rows) != list(range(1, count + 1)):
        _err(where, f"{kind} ids must be exactly 1..{count}")
    return np.array([rows[i] for i in range(1, count + 1)])


def _parse_weighted(items, where: str, arity_names: tuple[str, str]):
    out = []
    for idx, entry in enumerate(_as_list(items, where)):
        spot = f"{where}[{idx}]"
        entry = _as_list(entry, spot)
        if len(entry) == 2:
            a = _as_int(entry[0], f"{spot}[0]")
            b = _as_int(entry[1], f"{spot}[1]")
            out.append((a, b))
        elif len(entry) == 3:
            a = _as_int(entry[0], f"{spot}[0]")
            b = _as_int(entry[1], f"{spot}[1]")
            w = _as_float(entry[2], f"{spot}[2]")
            out.append((a, b, w))
        else:
            _err(spot, f"expected [{arity_names[0]}, {arity_names[1]}] or "
                       f"[{arity_names[0]}, {arity_names[1]}, weight]")
    return tuple(out)


def scenario_from_dict(doc: dict, source: str = "<scenario>") -> Scenario:
    doc = _as_dict(doc, source)
    _check_keys(doc, source, _TOP_KEYS, optional=("notes",))
    m = _as_int(doc["m"], f"{source}.m")
    if m < 1:
        _err(f"{source}.m", "dimension must be positive")
    x_init = _parse_points(doc["agents"], m, f"{source}.agents", "agent")
    leader_pos = _parse_points(doc["leaders"], m, f"{source}.leaders", "leader")
    n, k = x_init.shape[0], leader_pos.shape[0]
    topologies = []
    seen_ids = set()
    for idx, entry in enumerate(_as_list(doc["topologies"], f"{source}.topologies")):
        spot = f"{source}.topologies[{idx}]"
        entry = _as_dict(entry, spot)
        _check_keys(entry, spot, ("id",), optional=("edges", "leader_links"))
        pid = _as_int(entry["id"], f"{spot}.id")
        if pid in seen_ids:
            _err(f"{spot}.id", f"duplicate topology id {pid}")
        seen_ids.add(pid)
        edges = _parse_weighted(entry.get("edges", []), f"{spot}.edges", ("i", "j"))
        links = _parse_weighted(entry.get("leader_links", []), f"{spot}.leader_links",
                                ("agent", "leader"))
        try:
            topo = Topology(AgentGraph(n, edges), LeaderLinks(n, k, links))
        except ValueError as e:
            _err(spot, str(e))
        topologies.append((pid, topo))
    entries = []
    for idx, entry in enumerate(_as_list(doc["schedule"], f"{source}.schedule")):
        spot = f"{source}.schedule[{idx}]"
        entry = _as_dict(entry, spot)
        _check_keys(entry, spot, ("t", "topology"))
        entries.append((_as_float(entry["t"], f"{spot}.t"),
                        _as_int(entry["topology"], f"{spot}.topology")))
    if not entries:
        _err(f"{source}.schedule", "needs at least one entry")
    notes = doc.get("notes", "")
    if not isinstance(notes, str):
        _err(f"{source}.notes", "expected a string")
    # structural validation happens in the Scenario constructor and raises
    # ScenarioError, which callers treat as "invalid scenario", not "bad file"
    return Scenario(
        m=m,
        x_init=x_init,
        leaders=LeaderSet(leader_pos),
        topologies=tuple(topologies),
        schedule=SwitchingSchedule(tuple(entries)),
        dt=_as_float(doc["dt"], f"{source}.dt"),
        t_final=_as_float(doc["t_final"], f"{source}.t_final"),
        t0=_as_float(doc["t0"], f"{source}.t0"),
        notes=notes,
    )


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    def reject_constant(name):
        _err(source, f"non-finite number {name} is not allowed")

    try:
        doc = json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}") from None
    return scenario_from_dict(doc, source)


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise FileFormatError(f"{p}: {e.strerror or e}") from None
    return parse_scenario(text, str(p))


def scenario_to_dict(s: Scenario) -> dict:
    doc = {
        "m": s.m,
        "t0": s.t0,
        "t_final": s.t_final,
        "dt": s.dt,
        "agents": [
            {"id": i + 1, "position": [float(c) for c in s.x_init[i]]}
            for i in range(s.n)
        ],
        "leaders": [
            {"id": q + 1, "position": [float(c) for c in s.leaders.positions[q]]}
            for q in range(s.leaders.k)
        ],
        "topologies": [
            {
                "id": pid,
                "edges": [[i, j, w] for i, j, w in topo.graph.edges],
                "leader_links": [[a, q, w] for a, q, w in topo.leaders.links],
            }
            for pid, topo in s.topologies
        ],
        "schedule": [{"t": t, "topology": pid} for t, pid in s.schedule.entries],
    }
    if s.notes:
        doc["notes"] = s.notes
    return doc


def write_scenario(s: Scenario, path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")
    return p


def _fmt(v: float) -> str:
    return format(float(v), ".9g")


def trajectory_header(n: int, m: int) -> list[str]:
    cols = ["t"]
    for i in range(1, n + 1):
        for d in range(1, m + 1):
            cols.append(f"a{i}_{d}")
    cols.extend(["d_xi", "topology"])
    return cols


def write_trajectory(traj: Trajectory, path) -> Path:
    """CSV table: t, per-agent coordinates, d_xi, active topology id."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(trajectory_header(traj.n, traj.m))]
    for j in range(traj.times.shape[0]):
        cells = [_fmt(traj.times[j])]
        cells.extend(_fmt(v) for v in traj.states[j])
        cells.append(_fmt(traj.d_xi[j]))
        cells.append(str(int(traj.topologies[j])))
        lines.append(",".join(cells))
    p.write_text("\n".join(lines) + "\n")
    return p


def read_trajectory(path) -> Trajectory:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise FileFormatError(f"{p}: {e.strerror or e}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise FileFormatError(f"{p}: needs a header and at least one sample row")
    header = [c.strip() for c in lines[0].split(",")]
    if header[0] != "t" or header[-2:] != ["d_xi", "topology"] or len(header) < 4:
        raise FileFormatError(f"{p}: unexpected header {lines[0]!r}")
    state_cols = header[1:-2]
    n = m = 0
    for name in state_cols:
        parts = name.split("_")
        if len(parts) != 2 or not parts[0].startswith("a"):
            raise FileFormatError(f"{p}: unexpected state column {name!r}")
        try:
            i, d = int(parts[0][1:]), int(parts[1])
        except ValueError:
            raise FileFormatError(f"{p}: unexpected state column {name!r}") from None
        n, m = max(n, i), max(m, d)
    if state_cols != trajectory_header(n, m)[1:-2]:
        raise FileFormatError(f"{p}: state columns are not in agent-major order")
    times, states, topo, dvals = [], [], [], []
    for row_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise FileFormatError(f"{p}: line {row_no}: expected {len(header)} cells")
        try:
            times.append(float(cells[0]))
            states.append([float(c) for c in cells[1:-2]])
            dvals.append(float(cells[-2]))
            topo.append(int(cells[-1]))
        except ValueError as e:
            raise FileFormatError(f"{p}: line {row_no}: {e}") from None
    t = np.array(times)
    if (np.diff(t) <= 0).any():
        raise FileFormatError(f"{p}: sample times must be strictly increasing")
    return Trajectory(
        times=t,
        states=np.array(states),
        topologies=np.array(topo, dtype=int),
        d_xi=np.array(dvals),
        n=n,
        m=m,
    )


def write_plot_data(traj: Trajectory, path, leaders: LeaderSet | None = None) -> Path:
    """Gnuplot-ready blocks: per-agent time series, leader markers, and (for
    planar data) one overhead path block per agent. Blocks are separated by
    two blank lines so they are addressable with gnuplot's ``index``."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    blocks = []
    for i in range(traj.n):
        lines = [f"# agent {i + 1} time series: t coordinates"]
        cols = traj.states[:, i * traj.m : (i + 1) * traj.m]
        for j in range(traj.times.shape[0]):
            lines.append(" ".join([_fmt(traj.times[j])] + [_fmt(v) for v in cols[j]]))
        blocks.append("\n".join(lines))
    if leaders is not None:
        if leaders.m != traj.m:
            raise ValueError("leader dimension does not match the trajectory")
        lines = ["# leaders: id coordinates"]
        for q in range(leaders.k):
            lines.append(" ".join([str(q + 1)] + [_fmt(v) for v in leaders.positions[q]]))
        blocks.append("\n".join(lines))
    if traj.m == 2:
        for i in range(traj.n):
            lines = [f"# agent {i + 1} path: x y"]
            cols = traj.states[:, i * 2 : (i + 1) * 2]
            for j in range(traj.times.shape[0]):
                lines.append(f"{_fmt(cols[j, 0])} {_fmt(cols[j, 1])}")
            blocks.append("\n".join(lines))
    p.write_text("\n\n\n".join(blocks) + "\n")
    return p
