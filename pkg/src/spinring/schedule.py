"""Control laws theta(t) for the global hopping phase.

Three variants: a constant phase, the half-period step profile that jumps
between theta0 and theta0 + pi, and finite-harmonic Fourier approximations of
that step.  The Fourier form follows from the square-wave series

    s(t) = 1/2 - (2/pi) * sum_{n odd} sin(2 pi n t / T) / n

for the 0/1 profile, giving theta(t) = theta0 + pi * s(t).  Phase values are
never reduced mod 2*pi (consumers only use exp(i*theta), and raw values plot
better).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["PhaseSchedule", "phase_at", "jump_times"]

KINDS = ("constant", "step", "fourier")


@dataclass(frozen=True)
class PhaseSchedule:
    """Phase control law.

    kind="constant" uses only ``theta0``.  kind="step" holds theta0 on
    [0, T/2) and theta0 + pi on [T/2, T), repeated with period T.
    kind="fourier" replaces the step with its first ``harmonics`` nonzero
    Fourier terms; with ``count_zero_harmonics`` the count instead means
    "harmonic index <= harmonics", half of which vanish.
    """

    kind: str
    theta0: float = 0.0
    period: float = 0.0
    harmonics: int = 0
    count_zero_harmonics: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown schedule kind {self.kind!r}, expected {KINDS}")
        if self.kind in ("step", "fourier") and not self.period > 0:
            raise DomainError(f"{self.kind} schedule needs period > 0, got {self.period}")
        if self.kind == "fourier" and self.harmonics < 1:
            raise DomainError(f"fourier schedule needs harmonics >= 1, got {self.harmonics}")

    def odd_harmonics(self) -> np.ndarray:
        """The odd integers n_j actually summed by the fourier variant."""
        if self.count_zero_harmonics:
            return np.arange(1, self.harmonics + 1, 2, dtype=float)
        return 2.0 * np.arange(1, self.harmonics + 1) - 1.0

    def is_smooth(self) -> bool:
        return self.kind != "step"

    def to_json_obj(self) -> dict:
        obj = {"type": self.kind, "theta0": self.theta0}
        if self.kind in ("step", "fourier"):
            obj["period"] = self.period
        if self.kind == "fourier":
            obj["harmonics"] = self.harmonics
            if self.count_zero_harmonics:
                obj["count_zero_harmonics"] = True
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PhaseSchedule":
        return cls(
            kind=obj["type"],
            theta0=float(obj.get("theta0", 0.0)),
            period=float(obj.get("period", 0.0)),
            harmonics=int(obj.get("harmonics", 0)),
            count_zero_harmonics=bool(obj.get("count_zero_harmonics", False)),
        )


def phase_at(schedule: PhaseSchedule, t):
    """Evaluate theta(t) for scalar or array t >= 0."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError("schedule is defined for t >= 0 only")
    if schedule.kind == "constant":
        out = np.full_like(arr, schedule.theta0)
    elif schedule.kind == "step":
        frac = np.mod(arr, schedule.period)
        out = schedule.theta0 + np.pi * (frac >= schedule.period / 2.0)
    else:
        n = schedule.odd_harmonics()
        # sum_j sin(2 pi n_j t / T) / n_j, chunked so huge harmonic counts
        # do not allocate len(t) x m at once
        out = np.full(arr.shape or (1,), schedule.theta0 + np.pi / 2.0)
        flat = np.atleast_1d(arr)
        acc = np.zeros(flat.shape)
        w = 2.0 * np.pi / schedule.period
        chunk = max(1, int(4e6) // max(flat.size, 1))
        for start in range(0, n.size, chunk):
            block = n[start : start + chunk]
            acc += np.sin(np.multiply.outer(flat, block) * w) @ (1.0 / block)
        out = schedule.theta0 + np.pi / 2.0 - 2.0 * acc.reshape(arr.shape)
    if np.ndim(t) == 0:
        return float(out)
    return out


def jump_times(schedule: PhaseSchedule, horizon: float) -> np.ndarray:
    """Discontinuity times of theta(t) in (0, horizon]; empty for smooth laws."""
    if not horizon > 0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    if schedule.kind != "step":
        return np.empty(0)
    half = schedule.period / 2.0
    k_max = int(np.floor(horizon / half + 1e-12))
    return half * np.arange(1, k_max + 1)
