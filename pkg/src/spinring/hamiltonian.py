"""Sector-restricted matrices of the phase-controlled XY ring Hamiltonian.

For a phase value theta, couplings lambda + eta_i and fields B + delta_i, the
matrix on the n-magnon basis has

  * off-diagonal elements -hop_scale * (lambda + eta_i) * exp(i theta) for
    moving a magnon from site i+1 (mod N) onto an empty site i, plus the
    Hermitian conjugates for the reverse moves (hard-core: occupied targets
    block the move);
  * diagonal elements sum_{i in S}(B + delta_i) - sum_{i not in S}(B + delta_i)
    for the configuration S of occupied sites.

The phase enters only through exp(i theta) on the one-directional hopping
matrix K, so H(theta) = e^{i theta} K + e^{-i theta} K^dagger + diag and
H_int(theta + pi) = -H_int(theta) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import RingSpec, SectorBasis
from .disorder import DisorderRealization
from .errors import DomainError

__all__ = [
    "SectorHamiltonian",
    "sector_parts",
    "build_hamiltonian",
    "commutator_norm",
    "one_magnon_dispersion",
    "DENSE_DIMENSION_LIMIT",
]

DENSE_DIMENSION_LIMIT = 5000


@dataclass(frozen=True)
class SectorHamiltonian:
    """Hermitian sector matrix for one phase value, plus its ingredients."""

    theta: float
    matrix: object  # ndarray when dim <= DENSE_DIMENSION_LIMIT, else csr_matrix
    ring: RingSpec
    disorder: DisorderRealization
    basis: SectorBasis

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def is_dense(self) -> bool:
        return isinstance(self.matrix, np.ndarray)

    def interaction_part(self):
        """H - diag(H): the phase-bearing hopping block."""
        if self.is_dense:
            out = self.matrix.copy()
            np.fill_diagonal(out, 0.0)
            return out
        out = self.matrix.tolil(copy=True)
        out.setdiag(0.0)
        return out.tocsr()


def _check_inputs(ring: RingSpec, disorder: DisorderRealization, basis: SectorBasis):
    if disorder.n_sites != ring.n_sites:
        raise DomainError(
            f"disorder has {disorder.n_sites} sites, ring has {ring.n_sites}"
        )
    if basis.n_sites != ring.n_sites:
        raise DomainError(
            f"basis is for {basis.n_sites} sites, ring has {ring.n_sites}"
        )


def sector_parts(ring: RingSpec, disorder: DisorderRealization, basis: SectorBasis):
    """One-directional hopping matrix K and diagonal vector for a sector.

    K holds the amplitude -hop_scale*(lambda + eta_i) at [target, source] for
    every allowed move of one magnon from site i+1 to site i; it carries no
    phase.  Returned K is dense ndarray or CSR depending on the sector size.
    """
    _check_inputs(ring, disorder, basis)
    n_sites = ring.n_sites
    amp = -ring.hop_scale * (ring.coupling + disorder.eta)  # per bond i
    field = ring.b_field + disorder.delta

    dim = basis.dimension
    occ = basis.occupancy()
    diag = 2.0 * occ.astype(float) @ field - field.sum()

    rows, cols, vals = [], [], []
    rank_of = basis.index
    for r in range(dim):
        sites = basis.configs[r]
        occupied = occ[r]
        for i in range(n_sites):
            j = (i + 1) % n_sites
            if occupied[j] and not occupied[i]:
                moved = sorted(int(s) if s != j else i for s in sites)
                rows.append(rank_of[tuple(moved)])
                cols.append(r)
                vals.append(amp[i])
    k = sp.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
    )
    if dim <= DENSE_DIMENSION_LIMIT:
        return k.toarray(), diag
    return k, diag


def build_hamiltonian(
    ring: RingSpec,
    disorder: DisorderRealization,
    theta: float,
    basis: SectorBasis,
    parts=None,
) -> SectorHamiltonian:
    """Assemble H(theta) on the given sector basis.

    ``parts`` optionally reuses a (K, diag) pair from :func:`sector_parts`
    built for the same (ring, disorder, basis).
    """
    if parts is None:
        parts = sector_parts(ring, disorder, basis)
    hop, diag = parts
    phase = np.exp(1j * theta)
    if isinstance(hop, np.ndarray):
        matrix = phase * hop + np.conj(phase) * hop.conj().T
        matrix[np.diag_indices_from(matrix)] += diag
    else:
        matrix = (phase * hop + np.conj(phase) * hop.conj().T + sp.diags(diag)).tocsr()
    return SectorHamiltonian(
        theta=theta, matrix=matrix, ring=ring, disorder=disorder, basis=basis
    )


def commutator_norm(h1: SectorHamiltonian, h2: SectorHamiltonian) -> float:
    """Max-entry norm of [H1, H2]; the operands must share a basis."""
    if h1.basis is not h2.basis and (
        h1.basis.n_sites != h2.basis.n_sites
        or h1.basis.n_magnons != h2.basis.n_magnons
    ):
        raise DomainError("commutator needs both Hamiltonians on the same basis")
    a, b = h1.matrix, h2.matrix
    comm = a @ b - b @ a
    if sp.issparse(comm):
        return float(np.max(np.abs(comm.toarray()))) if comm.nnz else 0.0
    return float(np.max(np.abs(comm)))


def one_magnon_dispersion(ring: RingSpec, theta: float) -> np.ndarray:
    """Closed-form one-magnon spectrum of the clean ring.

    Plane waves with momentum 2*pi*k/N diagonalize the clean hopping for any
    phase, with energies -2*hop_scale*lambda*cos(2*pi*k/N + theta) shifted by
    the uniform field term B*(2 - N).
    """
    k = np.arange(ring.n_sites)
    kinetic = -2.0 * ring.hop_scale * ring.coupling * np.cos(
        2.0 * np.pi * k / ring.n_sites + theta
    )
    return kinetic + ring.b_field * (2.0 - ring.n_sites)
