"""Reproducible static imperfection samples for couplings and local fields.

Randomness comes from the counter-based Philox 4x64 generator: the raw 64-bit
stream for a given key is platform-independent, uniforms are built from the
top 53 bits, and Gaussians go through an explicit Box-Muller transform.  The
result is bit-identical for a fixed (spec, N, seed) everywhere, with no
dependence on any library's sampling internals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Distribution",
    "DisorderSpec",
    "DisorderRealization",
    "sample_disorder",
    "write_realization_csv",
    "read_realization_csv",
]

_HWHM_TO_SIGMA = 1.0 / math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class Distribution:
    """Zero-mean site disorder law: none, gaussian(sigma) or uniform(halfwidth).

    For gaussians, ``width_is_hwhm`` reads ``width`` as the half-width at half
    maximum instead of the standard deviation.
    """

    kind: str = "none"
    width: float = 0.0
    width_is_hwhm: bool = False

    def __post_init__(self):
        if self.kind not in ("none", "gaussian", "uniform"):
            raise DomainError(f"unknown distribution kind {self.kind!r}")
        if self.width < 0:
            raise DomainError(f"distribution width must be >= 0, got {self.width}")

    @property
    def sigma(self) -> float:
        if self.kind == "gaussian" and self.width_is_hwhm:
            return self.width * _HWHM_TO_SIGMA
        return self.width

    def to_json_obj(self) -> dict:
        obj = {"type": self.kind}
        if self.kind == "gaussian":
            obj["sigma"] = self.width
            if self.width_is_hwhm:
                obj["width_is_hwhm"] = True
        elif self.kind == "uniform":
            obj["halfwidth"] = self.width
        return obj

    @classmethod
    def from_json_obj(cls, obj) -> "Distribution":
        if obj is None:
            return cls()
        kind = obj.get("type", "none")
        width = float(obj.get("sigma", obj.get("halfwidth", 0.0)))
        return cls(kind=kind, width=width, width_is_hwhm=bool(obj.get("width_is_hwhm", False)))


@dataclass(frozen=True)
class DisorderSpec:
    """Distributions for coupling offsets (eta) and field offsets (delta)."""

    eta: Distribution = Distribution()
    delta: Distribution = Distribution()
    seed: int = 0

    def to_json_obj(self) -> dict:
        return {
            "eta": self.eta.to_json_obj(),
            "delta": self.delta.to_json_obj(),
            "seed": self.seed,
        }

    @classmethod
    def from_json_obj(cls, obj) -> "DisorderSpec":
        if obj is None:
            return cls()
        return cls(
            eta=Distribution.from_json_obj(obj.get("eta")),
            delta=Distribution.from_json_obj(obj.get("delta")),
            seed=int(obj.get("seed", 0)),
        )


@dataclass(frozen=True)
class DisorderRealization:
    """Sampled per-site offsets, length N each, all finite."""

    eta: np.ndarray
    delta: np.ndarray
    spec: DisorderSpec
    seed_used: int

    def __post_init__(self):
        for name, vec in (("eta", self.eta), ("delta", self.delta)):
            if not np.all(np.isfinite(vec)):
                raise DomainError(f"{name} contains non-finite entries")
        if self.eta.shape != self.delta.shape:
            raise DomainError("eta and delta lengths differ")

    @property
    def n_sites(self) -> int:
        return self.eta.shape[0]

    @classmethod
    def clean(cls, n_sites: int) -> "DisorderRealization":
        return cls(
            eta=np.zeros(n_sites),
            delta=np.zeros(n_sites),
            spec=DisorderSpec(),
            seed_used=0,
        )


def _uniforms(key: int, stream: int, count: int) -> np.ndarray:
    """count uniforms in [0, 1) from the Philox raw stream (top 53 bits)."""
    bitgen = np.random.Philox(key=np.array([key & (2**64 - 1), stream], dtype=np.uint64))
    raw = bitgen.random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def _draw(dist: Distribution, n: int, key: int, stream: int) -> np.ndarray:
    if dist.kind == "none" or dist.sigma == 0.0:
        return np.zeros(n)
    if dist.kind == "uniform":
        u = _uniforms(key, stream, n)
        return dist.width * (2.0 * u - 1.0)
    # gaussian via Box-Muller on consecutive uniform pairs
    pairs = (n + 1) // 2
    u = _uniforms(key, stream, 2 * pairs)
    u1, u2 = u[:pairs], u[pairs:]
    radius = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 in (0, 1], no log(0)
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return dist.sigma * z[:n]


def sample_disorder(spec: DisorderSpec, n_sites: int, seed: int | None = None) -> DisorderRealization:
    """Deterministic realization of (eta_i, delta_i) for an N-site ring.

    The eta and delta vectors come from independent Philox streams keyed by
    (seed, 0) and (seed, 1), so changing one distribution never perturbs the
    other.  Ensembles use seed + index.
    """
    if n_sites < 3:
        raise DomainError(f"n_sites must be >= 3, got {n_sites}")
    key = spec.seed if seed is None else seed
    eta = _draw(spec.eta, n_sites, key, 0)
    delta = _draw(spec.delta, n_sites, key, 1)
    return DisorderRealization(eta=eta, delta=delta, spec=spec, seed_used=key)


def write_realization_csv(realization: DisorderRealization, path) -> None:
    """Write (site, eta, delta) rows with full float round-trip precision."""
    with open(path, "w", newline="") as fh:
        fh.write("site,eta,delta\n")
        for i in range(realization.n_sites):
            fh.write(f"{i},{realization.eta[i]:.17g},{realization.delta[i]:.17g}\n")


def read_realization_csv(path, spec: DisorderSpec | None = None) -> DisorderRealization:
    """Read a realization written by :func:`write_realization_csv`."""
    sites, etas, deltas = [], [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "site,eta,delta":
            raise DomainError(f"unexpected disorder CSV header: {header!r}")
        for line in fh:
            if not line.strip():
                continue
            s, e, d = line.split(",")
            sites.append(int(s))
            etas.append(float(e))
            deltas.append(float(d))
    if sites != list(range(len(sites))):
        raise DomainError("disorder CSV sites must be 0..N-1 in order")
    return DisorderRealization(
        eta=np.array(etas),
        delta=np.array(deltas),
        spec=spec if spec is not None else DisorderSpec(),
        seed_used=spec.seed if spec is not None else 0,
    )
