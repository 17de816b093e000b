"""Time evolution under the phase-controlled ring Hamiltonian.

Two routes:

* :func:`evolve_piecewise` — exact spectral propagation for constant and
  step-periodic phase laws.  Within a constant-phase segment each sector
  advances as ``V exp(-i E dt) V^dagger psi`` using a cached eigendecomposition;
  a step-periodic law needs exactly two decompositions per sector.
* :func:`evolve_continuous` — midpoint exponential integrator (second order)
  for smooth schedules, applying each short-step exponential through a scaled
  Taylor series around the uniform diagonal shift, which keeps the series
  length independent of the field strength B.

Snapshot convention: a sample time landing on a phase jump records the state
at the end of the closing segment (left-continuous propagation); the new
phase only drives the evolution beyond the jump.

Also here: the brute-force full-(2^N) evolution used as a test oracle, and
the infinite-chain Bessel amplitude it is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv

from .basis import MultiSectorState, RingSpec, SectorState
from .disorder import DisorderRealization
from .errors import DomainError, NumericError
from .hamiltonian import build_hamiltonian, sector_parts
from .schedule import PhaseSchedule, jump_times, phase_at

__all__ = [
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
    "FULL_SPACE_MAX_SITES",
]

FULL_SPACE_MAX_SITES = 12
_TIME_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of one sector Hamiltonian at a fixed phase."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    theta: float


def decompose(hamiltonian) -> SpectralDecomposition:
    """Eigendecomposition of a dense sector Hamiltonian."""
    if not hamiltonian.is_dense:
        raise DomainError(
            "spectral propagation needs dense storage "
            f"(dimension {hamiltonian.dimension} exceeds the dense limit)"
        )
    try:
        energies, vectors = np.linalg.eigh(hamiltonian.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"eigendecomposition failed for sector n={hamiltonian.basis.n_magnons} "
            f"at theta={hamiltonian.theta}: {exc}"
        ) from exc
    return SpectralDecomposition(
        eigenvalues=energies, eigenvectors=vectors, theta=hamiltonian.theta
    )


@dataclass(frozen=True)
class EvolutionPlan:
    """What to evolve: horizon, snapshot times, step override, schedule."""

    t_final: float
    sample_times: np.ndarray
    schedule: PhaseSchedule
    integrator_step: float | None = None

    def __post_init__(self):
        if not self.t_final > 0:
            raise DomainError(f"t_final must be positive, got {self.t_final}")
        samples = np.asarray(self.sample_times, dtype=float)
        object.__setattr__(self, "sample_times", samples)
        tol = _TIME_TOL * max(1.0, self.t_final)
        if samples.size and (samples.min() < -tol or samples.max() > self.t_final + tol):
            raise DomainError("sample_times must lie within [0, t_final]")
        if np.any(np.diff(samples) < 0):
            raise DomainError("sample_times must be sorted")
        if self.integrator_step is not None and not self.integrator_step > 0:
            raise DomainError(f"integrator_step must be positive, got {self.integrator_step}")


@dataclass
class Trajectory:
    """Recorded snapshots plus the full parameter record that produced them."""

    times: np.ndarray
    states: list
    plan: EvolutionPlan
    metadata: dict = field(default_factory=dict)

    def state_at(self, t: float) -> MultiSectorState:
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > _TIME_TOL * max(1.0, self.plan.t_final):
            raise DomainError(f"no snapshot recorded at t={t}")
        return self.states[idx]


def _segments(plan: EvolutionPlan) -> list:
    """Constant-phase intervals [(t0, t1, theta), ...] covering [0, t_final]."""
    tol = _TIME_TOL * max(1.0, plan.t_final)
    jumps = [t for t in jump_times(plan.schedule, plan.t_final) if t < plan.t_final - tol]
    bounds = [0.0] + jumps + [plan.t_final]
    # evaluate the phase at segment midpoints: at the boundaries themselves,
    # k*T/2 mod T can land on either side of the jump by one ulp
    return [
        (a, b, phase_at(plan.schedule, 0.5 * (a + b)))
        for a, b in zip(bounds[:-1], bounds[1:])
    ]


def _parameter_record(ring, disorder, plan) -> dict:
    """Everything needed to reproduce a trajectory, in plain JSON types."""
    return {
        "ring": {
            "n_sites": ring.n_sites,
            "b_field": ring.b_field,
            "coupling": ring.coupling,
            "hop_scale": ring.hop_scale,
        },
        "schedule": plan.schedule.to_json_obj(),
        "disorder": disorder.spec.to_json_obj(),
        "disorder_seed": disorder.seed_used,
        "t_final": plan.t_final,
        "n_samples": int(plan.sample_times.size),
    }


def _snapshot(weights, sector_states, input_norm) -> MultiSectorState:
    comps = {
        n: (weights[n], SectorState(basis, amps.copy()))
        for n, (basis, amps) in sector_states.items()
    }
    return MultiSectorState(comps, input_norm=input_norm)


def evolve_piecewise(
    initial: MultiSectorState,
    ring: RingSpec,
    disorder: DisorderRealization,
    plan: EvolutionPlan,
) -> Trajectory:
    """Exact spectral evolution for constant or step-periodic phase laws.

    Eigendecompositions are cached per (sector, theta); the step law touches
    only theta0 and theta0 + pi, so each sector is diagonalized at most twice.
    """
    if plan.schedule.kind not in ("constant", "step"):
        raise DomainError(
            f"evolve_piecewise handles constant/step schedules, got {plan.schedule.kind!r}"
        )
    weights = {n: w for n, (w, _) in initial.components.items()}
    current = {
        n: (st.basis, st.amplitudes.astype(complex).copy())
        for n, (_, st) in initial.components.items()
    }
    cache: dict = {}
    parts = {}

    def decomposition(n: int, theta: float) -> SpectralDecomposition:
        key = (n, theta)
        if key not in cache:
            basis = current[n][0]
            if n not in parts:
                parts[n] = sector_parts(ring, disorder, basis)
            h = build_hamiltonian(ring, disorder, theta, basis, parts=parts[n])
            cache[key] = decompose(h)
        return cache[key]

    samples = plan.sample_times
    tol = _TIME_TOL * max(1.0, plan.t_final)
    times, states = [], []
    pointer = 0
    while pointer < samples.size and samples[pointer] <= tol:
        times.append(float(samples[pointer]))
        states.append(_snapshot(weights, current, initial.input_norm))
        pointer += 1

    for t0, t1, theta in _segments(plan):
        rotated = {}
        for n, (basis, amps) in current.items():
            dec = decomposition(n, theta)
            rotated[n] = dec.eigenvectors.conj().T @ amps
        while pointer < samples.size and samples[pointer] <= t1 + tol:
            tau = max(float(samples[pointer]) - t0, 0.0)
            for n, (basis, amps) in current.items():
                dec = decomposition(n, theta)
                evolved = dec.eigenvectors @ (
                    np.exp(-1j * dec.eigenvalues * tau) * rotated[n]
                )
                current[n] = (basis, evolved)
            times.append(float(samples[pointer]))
            snap = _snapshot(weights, current, initial.input_norm)
            _check_norm(snap, 1e-8, "spectral")
            states.append(snap)
            pointer += 1
        span = t1 - t0
        for n, (basis, amps) in current.items():
            dec = decomposition(n, theta)
            current[n] = (
                basis,
                dec.eigenvectors @ (np.exp(-1j * dec.eigenvalues * span) * rotated[n]),
            )

    parts.clear()
    metadata = _parameter_record(ring, disorder, plan)
    metadata.update(
        method="spectral",
        decompositions=len(cache),
        theta_values=sorted({th for _, th in cache}),
    )
    return Trajectory(np.array(times), states, plan, metadata)


def _check_norm(state: MultiSectorState, tol: float, method: str):
    drift = abs(state.norm() - 1.0)
    if drift > tol:
        hint = "; reduce integrator_step" if method == "integrator" else ""
        raise NumericError(f"{method} norm drift {drift:.3e} exceeds {tol:.0e}{hint}")


def _sector_operators(ring, disorder, basis):
    hop, diag = sector_parts(ring, disorder, basis)
    shift = float(np.mean(diag))
    if isinstance(hop, np.ndarray):
        hop_dag = hop.conj().T.copy()
        offdiag_row = np.abs(hop).sum(axis=1) + np.abs(hop_dag).sum(axis=1)
    else:
        hop_dag = hop.conj().T.tocsr()
        offdiag_row = np.asarray(
            np.abs(hop).sum(axis=1) + np.abs(hop_dag).sum(axis=1)
        ).ravel()
    bound = float(np.max(offdiag_row + np.abs(diag - shift))) if diag.size else 0.0
    return hop, hop_dag, diag - shift, shift, bound


def _default_step(schedule: PhaseSchedule, bound: float) -> float:
    h = 0.1 / bound if bound > 0 else np.inf
    if schedule.kind == "fourier":
        n_max = float(schedule.odd_harmonics()[-1])
        per_period = 2 ** int(np.ceil(np.log2(max(256.0, 6.0 * n_max))))
        h = min(h, schedule.period / per_period)
    elif schedule.kind == "step":
        h = min(h, schedule.period / 1024.0)
    if not np.isfinite(h):
        h = 0.05
    return h


def _taylor_apply(vec, h, theta, hop, hop_dag, dshift, max_terms=48):
    """exp(-i (e^{i theta} K + e^{-i theta} K^dag + diag(dshift)) h) @ vec."""
    phase = np.exp(1j * theta)

    def matvec(v):
        return phase * (hop @ v) + np.conj(phase) * (hop_dag @ v) + dshift * v

    out = vec.copy()
    term = vec
    scale = np.linalg.norm(vec)
    for k in range(1, max_terms + 1):
        term = matvec(term) * (-1j * h / k)
        out = out + term
        if np.linalg.norm(term) <= 1e-16 * scale:
            return out
    raise NumericError(
        "matrix-exponential series did not converge; reduce integrator_step"
    )


def evolve_continuous(
    initial: MultiSectorState,
    ring: RingSpec,
    disorder: DisorderRealization,
    plan: EvolutionPlan,
) -> Trajectory:
    """Midpoint-exponential integration for arbitrary (smooth) schedules.

    Each step applies exp(-i H(theta(t + h/2)) h) exactly up to series
    truncation; the only time-ordering error is the second-order midpoint
    commutator term.  The default step obeys ||H - mu*I||*h <= 0.1 (mu the
    mean diagonal, handled exactly as a phase) and additionally resolves the
    highest Fourier harmonic of the schedule.
    """
    weights = {n: w for n, (w, _) in initial.components.items()}
    current = {
        n: (st.basis, st.amplitudes.astype(complex).copy())
        for n, (_, st) in initial.components.items()
    }
    ops = {}
    bound = 0.0
    for n, (basis, _) in current.items():
        ops[n] = _sector_operators(ring, disorder, basis)
        bound = max(bound, ops[n][4])
    h_default = plan.integrator_step or _default_step(plan.schedule, bound)

    samples = plan.sample_times
    tol = _TIME_TOL * max(1.0, plan.t_final)
    times, states = [], []
    pointer = 0
    while pointer < samples.size and samples[pointer] <= tol:
        times.append(float(samples[pointer]))
        states.append(_snapshot(weights, current, initial.input_norm))
        pointer += 1

    t_now = 0.0
    targets = [float(t) for t in samples[pointer:]]
    if not targets or targets[-1] < plan.t_final - tol:
        targets.append(plan.t_final)
    for t_next in targets:
        span = t_next - t_now
        if span > tol:
            n_steps = max(1, int(np.ceil(span / h_default - 1e-12)))
            h = span / n_steps
            midpoints = t_now + (np.arange(n_steps) + 0.5) * h
            thetas = np.atleast_1d(phase_at(plan.schedule, midpoints))
            for n, (basis, amps) in current.items():
                hop, hop_dag, dshift, shift, _ = ops[n]
                phase_step = np.exp(-1j * shift * h)
                vec = amps
                for theta in thetas:
                    vec = _taylor_apply(vec, h, theta, hop, hop_dag, dshift)
                    vec *= phase_step
                current[n] = (basis, vec)
            t_now = t_next
        record = pointer < samples.size and abs(t_next - samples[pointer]) <= tol
        if record:
            snap = _snapshot(weights, current, initial.input_norm)
            _check_norm(snap, 1e-6, "integrator")
            times.append(float(samples[pointer]))
            states.append(snap)
            pointer += 1

    metadata = _parameter_record(ring, disorder, plan)
    metadata.update(method="integrator", step=h_default)
    return Trajectory(np.array(times), states, plan, metadata)


# ---------------------------------------------------------------------------
# brute-force oracle on the full 2^N space
# ---------------------------------------------------------------------------

_SPLUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |up><down| with bit 1 = up
_SMINUS = _SPLUS.T.copy()
_SZ = np.diag([-1.0 + 0j, 1.0 + 0j])
_ID2 = np.eye(2, dtype=complex)


def _site_op(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-site operator; site 0 is the least significant bit."""
    out = np.array([[1.0 + 0j]])
    for s in range(n_sites - 1, -1, -1):
        out = np.kron(out, op if s == site else _ID2)
    return out


def full_space_hamiltonian(
    ring: RingSpec, disorder: DisorderRealization, theta: float
) -> np.ndarray:
    """Explicit 2^N-dimensional Hamiltonian from two-site operator products."""
    n = ring.n_sites
    if n > FULL_SPACE_MAX_SITES:
        raise DomainError(
            f"full-space construction refused for N={n} > {FULL_SPACE_MAX_SITES}"
        )
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(n):
        j = (i + 1) % n
        amp = -ring.hop_scale * (ring.coupling + disorder.eta[i])
        hop = _site_op(_SPLUS, i, n) @ _site_op(_SMINUS, j, n)
        h += amp * (np.exp(1j * theta) * hop + np.exp(-1j * theta) * hop.conj().T)
        h += (ring.b_field + disorder.delta[i]) * _site_op(_SZ, i, n)
    return h


def embed_in_full_space(state: MultiSectorState) -> np.ndarray:
    """Map a multi-sector state onto the full 2^N amplitude vector."""
    n_sites = state.n_sites
    if n_sites > FULL_SPACE_MAX_SITES:
        raise DomainError(f"embedding refused for N={n_sites} > {FULL_SPACE_MAX_SITES}")
    full = np.zeros(2**n_sites, dtype=complex)
    for _, (w, st) in state.components.items():
        for rank, config in enumerate(st.basis.configs):
            index = int(np.sum(1 << config)) if config.size else 0
            full[index] += w * st.amplitudes[rank]
    return full


def evolve_full_space(
    initial_full: np.ndarray,
    ring: RingSpec,
    disorder: DisorderRealization,
    plan: EvolutionPlan,
) -> tuple:
    """Segment-wise spectral evolution of the raw 2^N vector (test oracle)."""
    if ring.n_sites > FULL_SPACE_MAX_SITES:
        raise DomainError(
            f"full-space evolution refused for N={ring.n_sites} > {FULL_SPACE_MAX_SITES}"
        )
    if plan.schedule.kind not in ("constant", "step"):
        raise DomainError("full-space oracle handles constant/step schedules only")
    cache = {}

    def decomposition(theta):
        if theta not in cache:
            cache[theta] = np.linalg.eigh(full_space_hamiltonian(ring, disorder, theta))
        return cache[theta]

    psi = np.asarray(initial_full, dtype=complex).copy()
    samples = plan.sample_times
    tol = _TIME_TOL * max(1.0, plan.t_final)
    times, vectors = [], []
    pointer = 0
    while pointer < samples.size and samples[pointer] <= tol:
        times.append(float(samples[pointer]))
        vectors.append(psi.copy())
        pointer += 1
    for t0, t1, theta in _segments(plan):
        energies, modes = decomposition(theta)
        rotated = modes.conj().T @ psi
        while pointer < samples.size and samples[pointer] <= t1 + tol:
            tau = max(float(samples[pointer]) - t0, 0.0)
            times.append(float(samples[pointer]))
            vectors.append(modes @ (np.exp(-1j * energies * tau) * rotated))
            pointer += 1
        psi = modes @ (np.exp(-1j * energies * (t1 - t0)) * rotated)
    return np.array(times), vectors


def infinite_chain_amplitude(d, tau):
    """Site-d amplitude i^d J_d(2 tau) of a walker started at the origin.

    Continuous-time amplitude on the infinite clean chain with unit coupling
    and hop_scale 1; the finite ring matches it until the wavefront wraps.
    """
    d_arr = np.asarray(d)
    value = (1j**d_arr) * jv(d_arr, 2.0 * np.asarray(tau))
    if np.ndim(d) == 0 and np.ndim(tau) == 0:
        return complex(value)
    return value
