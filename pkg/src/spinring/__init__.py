"""Numerically exact simulator of XY spin-1/2 rings under global phase control.

The package evolves states of a closed ring of qubits with residual XY
couplings while a site-independent hopping phase is held constant, flipped by
pi every half period, or approximated by a truncated Fourier series.  Fixed
magnetization sectors are treated exactly via spectral propagation; smooth
phase laws go through a midpoint exponential integrator.
"""

__version__ = "0.1.0"

from .basis import (
    MultiSectorState,
    RingSpec,
    SectorBasis,
    SectorState,
    StateSpec,
    build_sector_basis,
    magnetization,
    realize_state,
)
from .disorder import (
    DisorderRealization,
    DisorderSpec,
    Distribution,
    read_realization_csv,
    sample_disorder,
    write_realization_csv,
)
from .errors import DomainError, NumericError, SpinringError
from .hamiltonian import (
    SectorHamiltonian,
    build_hamiltonian,
    commutator_norm,
    one_magnon_dispersion,
    sector_parts,
)
from .observables import (
    FidelitySeries,
    OverlapMap,
    RevivalReport,
    overlap_map,
    return_fidelity,
    revival_report,
    translate_state,
)
from .propagate import (
    EvolutionPlan,
    SpectralDecomposition,
    Trajectory,
    decompose,
    embed_in_full_space,
    evolve_continuous,
    evolve_full_space,
    evolve_piecewise,
    full_space_hamiltonian,
    infinite_chain_amplitude,
)
from .schedule import PhaseSchedule, jump_times, phase_at

__all__ = [
    "__version__",
    "DomainError",
    "NumericError",
    "SpinringError",
    "RingSpec",
    "SectorBasis",
    "SectorState",
    "MultiSectorState",
    "StateSpec",
    "build_sector_basis",
    "realize_state",
    "magnetization",
    "Distribution",
    "DisorderSpec",
    "DisorderRealization",
    "sample_disorder",
    "write_realization_csv",
    "read_realization_csv",
    "SectorHamiltonian",
    "sector_parts",
    "build_hamiltonian",
    "commutator_norm",
    "one_magnon_dispersion",
    "PhaseSchedule",
    "phase_at",
    "jump_times",
    "SpectralDecomposition",
    "EvolutionPlan",
    "Trajectory",
    "decompose",
    "evolve_piecewise",
    "evolve_continuous",
    "full_space_hamiltonian",
    "embed_in_full_space",
    "evolve_full_space",
    "infinite_chain_amplitude",
    "OverlapMap",
    "FidelitySeries",
    "RevivalReport",
    "translate_state",
    "overlap_map",
    "return_fidelity",
    "revival_report",
]
