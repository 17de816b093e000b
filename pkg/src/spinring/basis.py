"""Fixed-magnetization (n-magnon) bases of an N-qubit ring and states over them.

A configuration with n flipped spins (magnons) on sites ``d_1 < ... < d_n`` is
indexed by the colexicographic combinadic rank

    rank(d_1, ..., d_n) = C(d_1, 1) + C(d_2, 2) + ... + C(d_n, n),

which is a bijection onto ``0 .. C(N, n) - 1`` and needs no lookup tables.
States are complex amplitude vectors over one such basis (``SectorState``) or
a weighted union of several magnon numbers (``MultiSectorState``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "RingSpec",
    "SectorBasis",
    "SectorState",
    "MultiSectorState",
    "StateSpec",
    "build_sector_basis",
    "realize_state",
    "magnetization",
    "subset_rank",
    "subset_unrank",
]

NORM_TOL = 1e-12
# snapshots from long integrator runs carry documented norm drift up to 1e-8;
# construction uses the looser guard, the tight bound is asserted where owed
GUARD_TOL = 1e-8


@dataclass(frozen=True)
class RingSpec:
    """Static ring parameters: size N, local half-gap B and mean coupling.

    ``coupling`` sets the unit of energy, so times are quoted as the
    dimensionless combination ``coupling * t`` (hbar = 1).  ``hop_scale``
    rescales every hopping matrix element; the default 1 corresponds to
    spin raising/lowering operators carrying the conventional factor 1/2.
    """

    n_sites: int
    b_field: float
    coupling: float = 1.0
    hop_scale: float = 1.0

    def __post_init__(self):
        if self.n_sites < 3:
            raise DomainError(
                f"ring needs n_sites >= 3 (distinct bonds), got {self.n_sites}"
            )
        if self.coupling < 0:
            raise DomainError(f"coupling must be >= 0, got {self.coupling}")


def subset_rank(sites) -> int:
    """Colex combinadic rank of a strictly increasing site tuple."""
    return sum(math.comb(d, j + 1) for j, d in enumerate(sites))


def subset_unrank(rank: int, n: int) -> tuple:
    """Inverse of :func:`subset_rank` for a fixed subset size n."""
    sites = [0] * n
    r = rank
    for j in range(n, 0, -1):
        # largest d with C(d, j) <= r
        d = j - 1
        c = 0  # C(j-1, j) = 0
        while True:
            c_next = math.comb(d + 1, j)
            if c_next > r:
                break
            d += 1
            c = c_next
        sites[j - 1] = d
        r -= c
    return tuple(sites)


@dataclass(frozen=True)
class SectorBasis:
    """Enumerated n-magnon basis of an N-site ring in colex combinadic order."""

    n_sites: int
    n_magnons: int
    configs: np.ndarray = field(repr=False)  # (dim, n) int64, rows sorted ascending
    index: dict = field(repr=False)  # site tuple -> rank

    @property
    def dimension(self) -> int:
        return self.configs.shape[0]

    def rank(self, sites) -> int:
        return self.index[tuple(sites)]

    def unrank(self, rank: int) -> tuple:
        return tuple(int(d) for d in self.configs[rank])

    def occupancy(self) -> np.ndarray:
        """Boolean (dim, N) matrix; entry [r, i] is True when site i holds a magnon."""
        occ = np.zeros((self.dimension, self.n_sites), dtype=bool)
        rows = np.repeat(np.arange(self.dimension), max(self.n_magnons, 1))
        if self.n_magnons:
            occ[rows, self.configs.ravel()] = True
        return occ


def build_sector_basis(n_sites: int, n_magnons: int) -> SectorBasis:
    """Enumerate the n-magnon sector of an N-site ring in colex rank order.

    The successor rule increments the lowest site that can move up and resets
    all sites below it, which walks ranks 0, 1, 2, ... without computing any
    binomials.
    """
    if n_sites < 3:
        raise DomainError(f"n_sites must be >= 3, got {n_sites}")
    if not 0 <= n_magnons <= n_sites:
        raise DomainError(
            f"magnon number {n_magnons} outside 0..{n_sites} for N={n_sites}"
        )
    dim = math.comb(n_sites, n_magnons)
    configs = np.empty((dim, n_magnons), dtype=np.int64)
    current = list(range(n_magnons))
    for r in range(dim):
        configs[r] = current
        # colex successor
        for j in range(n_magnons):
            nxt = current[j] + 1
            if j + 1 == n_magnons or nxt < current[j + 1]:
                current[j] = nxt
                for k in range(j):
                    current[k] = k
                break
    index = {tuple(int(d) for d in row): r for r, row in enumerate(configs)}
    return SectorBasis(n_sites=n_sites, n_magnons=n_magnons, configs=configs, index=index)


@dataclass
class SectorState:
    """Normalized complex amplitudes over one sector basis."""

    basis: SectorBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dimension,):
            raise DomainError(
                f"amplitude vector has length {self.amplitudes.shape}, "
                f"sector dimension is {self.basis.dimension}"
            )
        nrm = np.linalg.norm(self.amplitudes)
        if abs(nrm - 1.0) > GUARD_TOL:
            raise DomainError(f"sector amplitudes not normalized: |v| = {nrm!r}")

    def copy(self) -> "SectorState":
        return SectorState(self.basis, self.amplitudes.copy())


@dataclass
class MultiSectorState:
    """Weighted union of sector states: sum_n weight_n |state_n>.

    Weights satisfy sum |w_n|^2 = 1; every component shares the ring size.
    ``input_norm`` records the norm of the raw coefficients this state was
    built from (1.0 unless the constructor had to normalize).
    """

    components: dict  # n -> (weight complex, SectorState)
    input_norm: float = 1.0

    def __post_init__(self):
        if not self.components:
            raise DomainError("state needs at least one sector component")
        sizes = {st.basis.n_sites for _, st in self.components.values()}
        if len(sizes) > 1:
            raise DomainError(f"components disagree on ring size: {sorted(sizes)}")
        total = sum(abs(w) ** 2 for w, _ in self.components.values())
        if abs(total - 1.0) > GUARD_TOL:
            raise DomainError(f"sector weights not normalized: sum |w|^2 = {total!r}")

    @property
    def n_sites(self) -> int:
        return next(iter(self.components.values()))[1].basis.n_sites

    @property
    def sectors(self) -> list:
        return sorted(self.components)

    def copy(self) -> "MultiSectorState":
        return MultiSectorState(
            {n: (w, st.copy()) for n, (w, st) in self.components.items()},
            input_norm=self.input_norm,
        )

    def overlap(self, other: "MultiSectorState") -> complex:
        """Inner product <self|other>; sectors absent from either side give 0."""
        if self.n_sites != other.n_sites:
            raise DomainError(
                f"ring sizes differ: {self.n_sites} vs {other.n_sites}"
            )
        acc = 0.0 + 0.0j
        for n, (w, st) in self.components.items():
            if n in other.components:
                wo, sto = other.components[n]
                acc += np.conj(w) * wo * np.vdot(st.amplitudes, sto.amplitudes)
        return complex(acc)

    def norm(self) -> float:
        return math.sqrt(
            sum(
                abs(w) ** 2 * float(np.vdot(st.amplitudes, st.amplitudes).real)
                for w, st in self.components.values()
            )
        )


@dataclass(frozen=True)
class StateSpec:
    """Symbolic state: list of (coefficient, site list) product terms.

    Site lists must be duplicate-free; negative labels are taken mod N at
    realization time, so -1 addresses the last site of the ring.
    """

    terms: tuple

    @classmethod
    def from_terms(cls, terms) -> "StateSpec":
        if not terms:
            raise DomainError("state spec needs at least one term")
        normalized = []
        for coeff, sites in terms:
            normalized.append((complex(coeff), tuple(int(s) for s in sites)))
        return cls(terms=tuple(normalized))

    @classmethod
    def from_json_obj(cls, obj) -> "StateSpec":
        """Parse the wire format [{"coeff": [re, im], "sites": [..]}, ...]."""
        terms = []
        for entry in obj:
            re, im = entry["coeff"]
            terms.append((complex(re, im), entry["sites"]))
        return cls.from_terms(terms)

    def to_json_obj(self) -> list:
        return [
            {"coeff": [c.real, c.imag], "sites": list(sites)}
            for c, sites in self.terms
        ]


def realize_state(spec: StateSpec, n_sites: int, bases: dict | None = None) -> MultiSectorState:
    """Build the normalized multi-sector state described by ``spec``.

    Terms are grouped by magnon count; within each sector the coefficients are
    placed at their combinadic ranks and summed.  The overall vector is
    normalized; the original coefficient norm is kept on ``input_norm``.
    ``bases`` optionally supplies prebuilt :class:`SectorBasis` objects keyed
    by magnon number.
    """
    if not spec.terms:
        raise DomainError("state spec needs at least one term")
    grouped: dict = {}
    for coeff, sites in spec.terms:
        resolved = []
        for s in sites:
            if s >= n_sites:
                raise DomainError(f"site {s} outside ring of {n_sites} sites")
            resolved.append(s % n_sites)
        if len(set(resolved)) != len(resolved):
            raise DomainError(f"duplicate sites in term {sites} (mod {n_sites})")
        grouped.setdefault(len(resolved), []).append((coeff, tuple(sorted(resolved))))

    bases = dict(bases) if bases else {}
    vectors = {}
    for n, entries in grouped.items():
        if n not in bases:
            bases[n] = build_sector_basis(n_sites, n)
        vec = np.zeros(bases[n].dimension, dtype=complex)
        for coeff, sites in entries:
            vec[bases[n].rank(sites)] += coeff
        vectors[n] = vec

    total = math.sqrt(sum(float(np.vdot(v, v).real) for v in vectors.values()))
    if total == 0.0:
        raise DomainError("state spec sums to the zero vector")
    components = {}
    for n, vec in vectors.items():
        snorm = np.linalg.norm(vec)
        if snorm == 0.0:
            continue
        components[n] = (snorm / total, SectorState(bases[n], vec / snorm))
    return MultiSectorState(components, input_norm=total)


def magnetization(state: MultiSectorState) -> dict:
    """Total-S^z eigenvalue 2n - N for each populated sector."""
    n_sites = state.n_sites
    return {n: 2 * n - n_sites for n in state.sectors}
