import math

import numpy as np
import pytest
from scipy.special import jv

from spinring import (
    DisorderRealization,
    DomainError,
    EvolutionPlan,
    FidelitySeries,
    PhaseSchedule,
    RingSpec,
    StateSpec,
    evolve_piecewise,
    overlap_map,
    realize_state,
    return_fidelity,
    revival_report,
    translate_state,
)
from spinring.observables import (
    read_fidelity_csv,
    write_fidelity_csv,
    write_overlap_map_csv,
    write_revivals_csv,
)

T = 2 * math.pi


def evolve(state, ring, schedule, t_final, samples):
    plan = EvolutionPlan(t_final=t_final, sample_times=samples, schedule=schedule)
    return evolve_piecewise(state, ring, DisorderRealization.clean(ring.n_sites), plan)


def test_initial_site_map_is_a_delta():
    ring = RingSpec(n_sites=11, b_field=0.0, coupling=1.0)
    init = realize_state(StateSpec.from_terms([(1.0, [0])]), 11)
    traj = evolve(init, ring, PhaseSchedule(kind="constant", theta0=0.0), 1.0, np.array([0.0]))
    omap = overlap_map(traj, probe="site_basis")
    at_zero = omap.values[0]
    assert at_zero[omap.sites == 0] == pytest.approx(1.0)
    assert np.all(at_zero[omap.sites != 0] < 1e-14)


def test_translated_initial_at_zero_equals_return_fidelity():
    ring = RingSpec(n_sites=9, b_field=1.0, coupling=1.0)
    init = realize_state(StateSpec.from_terms([(0.6, [1]), (0.8, [3, 5])]), 9)
    traj = evolve(
        init, ring, PhaseSchedule(kind="step", theta0=0.5, period=T), 10.0,
        np.linspace(0, 10, 21),
    )
    omap = overlap_map(traj, probe="translated_initial", reference=init)
    series = return_fidelity(traj, init)
    col = np.where(omap.sites == 0)[0][0]
    assert np.allclose(omap.values[:, col], series.values, atol=1e-12)


def test_one_magnon_completeness_sum_rule():
    ring = RingSpec(n_sites=31, b_field=2.0, coupling=1.0)
    s = 1 / math.sqrt(2)
    init = realize_state(StateSpec.from_terms([(s, [1]), (s, [-1])]), 31)
    traj = evolve(
        init, ring, PhaseSchedule(kind="step", theta0=0.3, period=T), 3 * T,
        np.linspace(0, 3 * T, 40),
    )
    omap = overlap_map(traj, probe="site_basis")
    sums = omap.values.sum(axis=1)
    assert np.max(np.abs(sums - 1.0)) < 1e-10
    assert np.all(omap.values >= 0.0)
    assert np.all(omap.values <= 1.0 + 1e-12)


def test_translation_covariance_without_disorder():
    ring = RingSpec(n_sites=13, b_field=0.7, coupling=1.0)
    init = realize_state(StateSpec.from_terms([(0.8, [0]), (0.6, [4])]), 13)
    shifted = translate_state(init, 3)
    sched = PhaseSchedule(kind="step", theta0=1.2, period=T)
    samples = np.linspace(0, 5.0, 11)
    map_base = overlap_map(evolve(init, ring, sched, 5.0, samples), "site_basis")
    map_shift = overlap_map(evolve(shifted, ring, sched, 5.0, samples), "site_basis")
    # site content of the shifted run is the base content moved by +3 sites
    base_by_site = {int(d) % 13: map_base.values[:, i] for i, d in enumerate(map_base.sites)}
    for i, d in enumerate(map_shift.sites):
        src = (int(d) - 3) % 13
        assert np.max(np.abs(map_shift.values[:, i] - base_by_site[src])) < 1e-10


def test_return_fidelity_is_global_phase_invariant():
    ring = RingSpec(n_sites=9, b_field=1.0, coupling=1.0)
    init = realize_state(StateSpec.from_terms([(1.0, [2])]), 9)
    traj = evolve(
        init, ring, PhaseSchedule(kind="constant", theta0=0.2), 4.0, np.linspace(0, 4, 9)
    )
    rotated = realize_state(
        StateSpec.from_terms([(np.exp(0.7j), [2])]), 9
    )
    a = return_fidelity(traj, init).values
    b = return_fidelity(traj, rotated).values
    assert np.allclose(a, b, atol=1e-14)


def test_superposition_map_against_bessel_oracle():
    # unmodulated theta=0: the two wavefronts collide constructively and the
    # map peaks at 2*J1(x)^2 = 0.677 at site 0, above the naive 0.5 reading;
    # the oracle is |J_{d-1}(2t) - J_{d+1}(2t)|^2 / 2
    ring = RingSpec(n_sites=201, b_field=100.0, coupling=1.0)
    s = 1 / math.sqrt(2)
    init = realize_state(StateSpec.from_terms([(s, [1]), (s, [-1])]), 201)
    ts = np.linspace(0.0, 3.0, 61)
    traj = evolve(init, ring, PhaseSchedule(kind="constant", theta0=0.0), 3.0, ts)
    omap = overlap_map(traj, probe="site_basis")
    for row, t in enumerate(ts):
        for col in np.where(np.abs(omap.sites) <= 10)[0]:
            d = int(omap.sites[col])
            want = abs(jv(d - 1, 2 * t) - jv(d + 1, 2 * t)) ** 2 / 2
            assert abs(omap.values[row, col] - want) < 1e-8
    peak = omap.max_value()
    assert abs(peak - 2 * jv(1, 1.8412) ** 2) < 2e-3
    assert peak > 0.5  # genuinely exceeds one half


def test_half_flip_superposition_map_stays_below_half():
    # with theta0 = +-pi/2 the interference term cancels at the collision
    # point and the map never exceeds its t=0 value of 1/2
    ring = RingSpec(n_sites=101, b_field=10.0, coupling=1.0)
    s = 1 / math.sqrt(2)
    init = realize_state(StateSpec.from_terms([(s, [1]), (s, [-1])]), 101)
    sched = PhaseSchedule(kind="step", theta0=-math.pi / 2, period=T)
    traj = evolve(init, ring, sched, 2 * T, np.linspace(0, 2 * T, 120))
    omap = overlap_map(traj, probe="site_basis")
    assert omap.max_value() <= 0.5 + 1e-10


def test_revival_report_perfect_and_constant_series():
    times = np.linspace(0.0, 10.0, 1001)
    ones = FidelitySeries(times=times, values=np.ones_like(times))
    report = revival_report(ones, period=1.0)
    assert [m for m, _, _ in report.entries] == list(range(1, 11))
    assert np.max(np.abs(report.fidelities() - 1.0)) < 1e-10
    const = FidelitySeries(times=times, values=np.full_like(times, 0.3))
    report = revival_report(const, period=1.0)
    assert np.allclose(report.fidelities(), 0.3)
    assert abs(report.slope) < 1e-12
    assert report.minimum == pytest.approx(0.3)
    assert report.maximum == pytest.approx(0.3)


def test_revival_report_requires_samples_near_revivals():
    times = np.linspace(0.0, 10.0, 11) + 0.04  # misses m*T by 0.04 > T/1e4
    series = FidelitySeries(times=times, values=np.ones_like(times))
    with pytest.raises(DomainError, match="denser"):
        revival_report(series, period=1.0)


def test_cross_sector_revival_report_unit_scale():
    state = realize_state(StateSpec.from_terms([(0.6, [1]), (0.8, [3, 7])]), 10)
    ring = RingSpec(n_sites=10, b_field=2.0, coupling=1.0)  # BT = 4*pi
    sched = PhaseSchedule(kind="step", theta0=math.pi / 2, period=T)
    samples = np.union1d(np.linspace(0, 10 * T, 101), T * np.arange(1, 11))
    traj = evolve(state, ring, sched, 10 * T, samples)
    report = revival_report(return_fidelity(traj, state), T)
    assert np.max(np.abs(report.fidelities() - 1.0)) < 1e-10


def test_probe_errors():
    state = realize_state(StateSpec.from_terms([(1.0, [0, 3])]), 8)
    ring = RingSpec(n_sites=8, b_field=0.0, coupling=1.0)
    traj = evolve(
        state, ring, PhaseSchedule(kind="constant", theta0=0.0), 1.0, np.array([0.0, 1.0])
    )
    with pytest.raises(DomainError, match="one-magnon"):
        overlap_map(traj, probe="site_basis")
    with pytest.raises(DomainError):
        overlap_map(traj, probe="bogus")
    other = realize_state(StateSpec.from_terms([(1.0, [0])]), 9)
    with pytest.raises(DomainError):
        return_fidelity(traj, other)


def test_csv_outputs_round_trip(tmp_path):
    ring = RingSpec(n_sites=9, b_field=1.0, coupling=1.0)
    init = realize_state(StateSpec.from_terms([(1.0, [0])]), 9)
    samples = np.union1d(np.linspace(0, 2 * T, 25), T * np.arange(1, 3))
    traj = evolve(init, ring, PhaseSchedule(kind="step", theta0=0.1, period=T), 2 * T, samples)
    series = return_fidelity(traj, init)

    fpath = tmp_path / "fidelity.csv"
    write_fidelity_csv(series, fpath)
    back = read_fidelity_csv(fpath)
    assert np.array_equal(back.times, series.times)
    assert np.array_equal(back.values, series.values)

    omap = overlap_map(traj, probe="site_basis")
    opath = tmp_path / "overlap.csv"
    write_overlap_map_csv(omap, opath)
    lines = opath.read_text().splitlines()
    assert lines[0] == "t,d,value"
    assert len(lines) == 1 + omap.times.size * omap.sites.size

    rpath = tmp_path / "revivals.csv"
    write_revivals_csv(revival_report(series, T), rpath)
    lines = rpath.read_text().splitlines()
    assert lines[0] == "m,t,fidelity"
    assert len(lines) == 3


def test_step_modulation_confines_the_overlap_support():
    # under step modulation the effective free-evolution time is the triangle
    # wave g(t) <= T/2, so the wavefront (speed 2) never passes
    # ceil(2*lambda*T) sites; the Bessel oracle puts the 1e-3 support edge at
    # |d| = 8 for T = 2*pi, comfortably inside the bound of 13
    ring = RingSpec(n_sites=201, b_field=100.0, coupling=1.0)
    init = realize_state(StateSpec.from_terms([(1.0, [0])]), 201)
    sched = PhaseSchedule(kind="step", theta0=math.pi / 2, period=T)
    samples = np.linspace(0.0, 20.0, 600)
    traj = evolve_piecewise(init, ring, DisorderRealization.clean(201),
                            EvolutionPlan(t_final=20.0, sample_times=samples, schedule=sched))
    omap = overlap_map(traj, probe="site_basis")
    bound = math.ceil(2 * T)  # 13
    support = np.abs(omap.sites)[np.any(omap.values > 1e-3, axis=0)]
    assert support.max() <= bound
    assert support.max() == 8  # frozen from the Bessel closed form
