"""Measured quantities over trajectories: overlap maps, fidelities, revivals.

The two-dimensional overlap map F_d(t) comes in two probe families: squared
overlaps with the one-magnon site states (how the figures with a distance
axis are built), or with the cyclically translated initial state, which is
defined for any magnon content.  The return fidelity is the squared overlap
with a fixed reference state.  CSV exports use 17 significant digits so a
written value always round-trips to the same float.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import MultiSectorState, SectorState
from .errors import DomainError
from .propagate import Trajectory

__all__ = [
    "OverlapMap",
    "FidelitySeries",
    "RevivalReport",
    "translate_state",
    "overlap_map",
    "return_fidelity",
    "revival_report",
    "write_overlap_map_csv",
    "write_fidelity_csv",
    "write_revivals_csv",
    "read_fidelity_csv",
]

REVIVAL_SNAP_FRACTION = 1e-4


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class OverlapMap:
    """F_d(t) on a site-offset grid d in [-floor(N/2), ceil(N/2))."""

    times: np.ndarray
    sites: np.ndarray
    values: np.ndarray  # shape (len(times), len(sites))
    probe: str = "site_basis"

    def max_value(self) -> float:
        return float(self.values.max())


@dataclass
class FidelitySeries:
    """Squared overlap with a fixed probe state along a trajectory."""

    times: np.ndarray
    values: np.ndarray
    probe: str = "initial"


@dataclass
class RevivalReport:
    """Fidelities sampled at integer multiples of the control period."""

    entries: list  # (m, t, fidelity)
    minimum: float
    maximum: float
    slope: float  # least-squares trend of fidelity vs m

    def fidelities(self) -> np.ndarray:
        return np.array([f for _, _, f in self.entries])


def _site_offsets(n_sites: int) -> np.ndarray:
    return np.arange(-(n_sites // 2), n_sites - n_sites // 2)


def translate_state(state: MultiSectorState, offset: int) -> MultiSectorState:
    """Cyclic ring translation by ``offset`` sites."""
    n_sites = state.n_sites
    comps = {}
    for n, (w, st) in state.components.items():
        moved = np.empty_like(st.amplitudes)
        for rank, config in enumerate(st.basis.configs):
            shifted = tuple(sorted((int(s) + offset) % n_sites for s in config))
            moved[st.basis.rank(shifted)] = st.amplitudes[rank]
        comps[n] = (w, SectorState(st.basis, moved))
    return MultiSectorState(comps, input_norm=state.input_norm)


def overlap_map(
    traj: Trajectory,
    probe: str = "site_basis",
    reference: MultiSectorState | None = None,
) -> OverlapMap:
    """Two-dimensional overlap F_d(t) over the trajectory snapshots.

    probe="site_basis": F_d(t) = |<Psi_d|psi(t)>|^2, requiring a one-magnon
    component.  probe="translated_initial": F_d(t) = |<T_d chi|psi(t)>|^2 with
    chi the supplied reference (default: the first snapshot).
    """
    if not traj.states:
        raise DomainError("trajectory holds no snapshots")
    n_sites = traj.states[0].n_sites
    offsets = _site_offsets(n_sites)
    values = np.empty((len(traj.states), offsets.size))

    if probe == "site_basis":
        if 1 not in traj.states[0].components:
            raise DomainError(
                "site-basis probe needs a one-magnon component; "
                f"trajectory sectors are {traj.states[0].sectors}"
            )
        col = np.mod(offsets, n_sites)  # one-magnon rank of site d is d
        for row, state in enumerate(traj.states):
            w, st = state.components[1]
            values[row] = np.abs(w * st.amplitudes[col]) ** 2
    elif probe == "translated_initial":
        if reference is None:
            reference = traj.states[0]
        probes = [translate_state(reference, int(d)) for d in offsets]
        for row, state in enumerate(traj.states):
            values[row] = [abs(p.overlap(state)) ** 2 for p in probes]
    else:
        raise DomainError(f"unknown probe family {probe!r}")
    return OverlapMap(times=traj.times.copy(), sites=offsets, values=values, probe=probe)


def return_fidelity(traj: Trajectory, reference: MultiSectorState) -> FidelitySeries:
    """|<reference|psi(t)>|^2 at every snapshot."""
    if not traj.states:
        raise DomainError("trajectory holds no snapshots")
    if reference.n_sites != traj.states[0].n_sites:
        raise DomainError(
            f"reference is on {reference.n_sites} sites, trajectory on "
            f"{traj.states[0].n_sites}"
        )
    values = np.array([abs(reference.overlap(state)) ** 2 for state in traj.states])
    return FidelitySeries(times=traj.times.copy(), values=values, probe="reference")


def revival_report(series: FidelitySeries, period: float) -> RevivalReport:
    """Fidelity at each t = m*period found in the series, plus summary stats.

    Each revival time must be hit by a sample within period/10^4, otherwise
    the sampling grid is too coarse to speak about revivals at all.
    """
    if not period > 0:
        raise DomainError(f"period must be positive, got {period}")
    t_max = float(series.times.max())
    snap = period * REVIVAL_SNAP_FRACTION
    m_max = int(np.floor(t_max / period + 1e-9))
    if m_max < 1:
        raise DomainError("series is shorter than one period")
    entries = []
    for m in range(1, m_max + 1):
        target = m * period
        idx = int(np.argmin(np.abs(series.times - target)))
        if abs(series.times[idx] - target) > snap:
            raise DomainError(
                f"no sample within {snap:g} of revival time {target:g} (m={m}); "
                "use a denser sampling grid"
            )
        entries.append((m, float(series.times[idx]), float(series.values[idx])))
    fids = np.array([f for _, _, f in entries])
    ms = np.array([m for m, _, _ in entries], dtype=float)
    if len(entries) > 1:
        slope = float(np.polyfit(ms, fids, 1)[0])
    else:
        slope = 0.0
    return RevivalReport(
        entries=entries,
        minimum=float(fids.min()),
        maximum=float(fids.max()),
        slope=slope,
    )


def write_overlap_map_csv(omap: OverlapMap, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,d,value\n")
        for row, t in enumerate(omap.times):
            for col, d in enumerate(omap.sites):
                fh.write(f"{_fmt(t)},{int(d)},{_fmt(omap.values[row, col])}\n")


def write_fidelity_csv(series: FidelitySeries, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,value\n")
        for t, v in zip(series.times, series.values):
            fh.write(f"{_fmt(t)},{_fmt(v)}\n")


def write_revivals_csv(report: RevivalReport, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("m,t,fidelity\n")
        for m, t, f in report.entries:
            fh.write(f"{m},{_fmt(t)},{_fmt(f)}\n")


def read_fidelity_csv(path) -> FidelitySeries:
    times, values = [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "t,value":
            raise DomainError(f"unexpected fidelity CSV header: {header!r}")
        for line in fh:
            if not line.strip():
                continue
            t, v = line.split(",")
            times.append(float(t))
            values.append(float(v))
    return FidelitySeries(times=np.array(times), values=np.array(values))
