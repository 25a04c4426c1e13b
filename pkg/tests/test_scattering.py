import cmath
import logging
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import special

from qubit_hologram import (
    DEFAULT_CONSTANTS,
    ChannelSolveError,
    DataError,
    DomainError,
    IllConditionedRadiiError,
    PhaseShiftTable,
    PotentialRangeError,
    SolverSettings,
    SquareWell,
    Tabulated,
    compare_to_data,
    extract_phase_shift,
    hologram_hamiltonian,
    make_channel,
    partial_wave_cross_sections,
    phase_shift_table,
    scattering_amplitudes,
    solve_radial,
    total_cross_sections,
    total_potential,
)
from qubit_hologram.scattering import channels_up_to

from .conftest import numerov_radial, square_well_delta0, wrapped

HBAR_C = DEFAULT_CONSTANTS.hbar_c
MASS = DEFAULT_CONSTANTS.neutron_mass
PRECISE = SolverSettings(tolerance=1e-11)


def energy_for(k: float) -> float:
    return (k * HBAR_C) ** 2 / (2 * MASS)


def toy_table(deltas: dict[tuple[int, float], complex], l_max: int, k: float = 1.0) -> PhaseShiftTable:
    entries = {(l, Fraction(j)): 0j for l, j in channels_up_to(l_max)}
    entries.update({(l, Fraction(j)): complex(d) for (l, j), d in deltas.items()})
    return PhaseShiftTable(entries=entries, energy=energy_for(k), k=k, l_max=l_max)


def test_channel_kinematics():
    channel = make_channel(3, 2.5, 10.0)
    assert channel.j == Fraction(5, 2)
    assert channel.label == "l=3,j=5/2"
    assert channel.k == pytest.approx(math.sqrt(2 * MASS * 10.0) / HBAR_C, rel=1e-14)

    reduced = make_channel(0, 0.5, 10.0, reduced_mass=True, target_mass_number=208)
    target = 208 * DEFAULT_CONSTANTS.atomic_mass_unit
    assert reduced.mass == pytest.approx(MASS * target / (MASS + target))
    assert reduced.cm_energy == pytest.approx(10.0 * target / (MASS + target))
    assert reduced.k < channel.k


def test_channel_validation():
    with pytest.raises(DomainError):
        make_channel(1, 2.5, 10.0)
    with pytest.raises(DomainError):
        make_channel(0, 0.5, -1.0)
    with pytest.raises(DomainError):
        make_channel(0, 0.5, 10.0, reduced_mass=True)


def test_channels_up_to():
    assert channels_up_to(2) == [
        (0, Fraction(1, 2)),
        (1, Fraction(1, 2)),
        (1, Fraction(3, 2)),
        (2, Fraction(3, 2)),
        (2, Fraction(5, 2)),
    ]
    assert len(channels_up_to(12)) == 25


def test_hologram_matrix(free, real_well):
    channel = make_channel(0, 0.5, 10.0)
    mass_t, energy_t = MASS / HBAR_C, 10.0 / HBAR_C
    np.testing.assert_allclose(
        hologram_hamiltonian(channel, free)(3.7), [[0, 2 * mass_t], [energy_t, 0]], rtol=1e-14
    )
    # t = 1 with v = 2 maps to r = 2 fm, inside the well
    scaled = hologram_hamiltonian(channel, real_well, v=2.0)
    np.testing.assert_allclose(
        scaled(1.0), [[0, 4 * mass_t], [2 * (energy_t + 10.0 / HBAR_C), 0]], rtol=1e-14
    )
    with pytest.raises(DomainError):
        hologram_hamiltonian(channel, free, v=0.0)


@pytest.mark.parametrize("l, j", [(0, 0.5), (2, 1.5), (2, 2.5)])
def test_hologram_uses_the_channel_potential(woods_saxon, l, j):
    channel = make_channel(l, j, 12.0)
    hamiltonian = hologram_hamiltonian(channel, woods_saxon)
    for r in (0.5, 3.9, 8.0):
        assert hamiltonian.potential(r) == total_potential(
            woods_saxon, l, j, r, MASS, HBAR_C, 12.0
        )


def test_radial_qubit_states(real_well):
    channel = make_channel(0, 0.5, 5.0)
    solution = solve_radial(channel, real_well, sample_rs=[1.0, 4.0])
    states = solution.qubit_states()
    assert states.shape == (4, 2)
    np.testing.assert_allclose(states[:, 0], math.sqrt(2.0) * solution.u, rtol=1e-14)
    # β is recovered by the inverse map du = −i√2·m̃·β
    np.testing.assert_allclose(
        -1j * math.sqrt(2.0) * (MASS / HBAR_C) * states[:, 1], solution.du, rtol=1e-12
    )


def test_free_s_wave_is_a_sine(free):
    channel = make_channel(0, 0.5, 10.0)
    rs = np.arange(0.5, 20.0, 0.5)
    solution = solve_radial(channel, free, tolerance=1e-11, sample_rs=rs)
    expected = np.sin(channel.k * solution.r)
    scale = np.vdot(expected, solution.u) / np.vdot(expected, expected)
    assert np.max(np.abs(solution.u - scale * expected)) < 1e-8 * np.max(np.abs(solution.u))


def test_free_d_wave_is_a_riccati_bessel(free):
    channel = make_channel(2, 2.5, 10.0)
    rs = np.arange(5.0, 20.0, 0.5)
    solution = solve_radial(channel, free, tolerance=1e-11, sample_rs=rs)
    r, u = solution.r[1:], solution.u[1:]
    expected = channel.k * r * special.spherical_jn(2, channel.k * r)
    scale = np.vdot(expected, u) / np.vdot(expected, expected)
    assert np.max(np.abs(u - scale * expected)) < 1e-6 * np.max(np.abs(u))


@pytest.mark.parametrize("potential", ["free", "real_well", "absorptive_well", "woods_saxon"])
@pytest.mark.parametrize("l", [0, 1, 2, 5])
def test_hologram_matches_numerov(potential, l, request):
    """The qubit evolution and a direct Numerov solve give the same u up to normalization."""
    spec = request.getfixturevalue(potential)
    channel = make_channel(l, l + 0.5, 10.0)
    h = 5e-4
    rs = np.arange(1.0, 20.0)
    solution = solve_radial(channel, spec, tolerance=1e-11, sample_rs=rs)
    grid, reference = numerov_radial(spec, channel, r_max=20.0, h=h)
    index = np.rint((solution.r[1:] - grid[0]) / h).astype(int)
    u, oracle = solution.u[1:], reference[index]
    anchor = int(np.argmax(np.abs(oracle)))
    gauged = oracle * (u[anchor] / oracle[anchor])
    assert np.max(np.abs(u - gauged)) < 1e-6 * np.max(np.abs(u))


def test_radial_solution_lookup(real_well):
    solution = solve_radial(make_channel(0, 0.5, 5.0), real_well, sample_rs=[4.0])
    assert solution.r[0] == 1e-3 and solution.r[-1] == 20.0
    assert len(solution.samples) == 3
    u, du = solution.at(4.0)
    assert u != 0
    with pytest.raises(DomainError):
        solution.at(5.0)
    with pytest.raises(DomainError):
        solve_radial(make_channel(0, 0.5, 5.0), real_well, r_start=0.0)


@pytest.mark.parametrize("l", range(13))
def test_free_wave_has_no_phase_shift(l):
    channel = make_channel(l, l + 0.5, 10.0)
    k = channel.k
    u1 = 19.98 * special.spherical_jn(l, k * 19.98)
    u2 = 20.0 * special.spherical_jn(l, k * 20.0)
    assert abs(extract_phase_shift(u1, u2, channel)) < 1e-10


def test_extract_phase_shift_branch():
    channel = make_channel(0, 0.5, 10.0)
    k = channel.k
    for delta in (-1.2, 0.3, 1.4):
        u1, u2 = math.sin(k * 19.98 + delta), math.sin(k * 20.0 + delta)
        assert extract_phase_shift(u1, u2, channel).real == pytest.approx(delta, abs=1e-10)
    # δ = −π/2 is reported on the other end of the branch
    u1, u2 = math.sin(k * 19.98 - math.pi / 2), math.sin(k * 20.0 - math.pi / 2)
    assert extract_phase_shift(u1, u2, channel).real == pytest.approx(math.pi / 2, abs=1e-8)


def test_extract_phase_shift_errors():
    channel = make_channel(0, 0.5, 10.0)
    with pytest.raises(DomainError):
        extract_phase_shift(1.0, 1.0, channel, R1=20.0, R2=19.98)
    with pytest.raises(IllConditionedRadiiError):
        extract_phase_shift(1.0, 0.0, channel)


@pytest.mark.parametrize("k", [0.25, 1.0])
def test_free_phase_shift_table(free, k):
    table = phase_shift_table(free, energy_for(k), l_max=12, settings=PRECISE)
    assert table.k == pytest.approx(k, rel=1e-12)
    assert len(table.entries) == 25
    for delta in table.entries.values():
        assert abs(delta) < 1e-8


@pytest.mark.parametrize("energy", [2.0, 5.0, energy_for(2.0 / 3.0), 15.0, 25.0])
def test_square_well_closed_form(real_well, energy):
    table = phase_shift_table(real_well, energy, l_max=0, settings=PRECISE)
    expected = square_well_delta0(-10.0, 3.0, energy)
    assert abs(wrapped(table.delta(0, 0.5).real - expected)) < 1e-6


def test_hermitian_limit(real_well):
    table = phase_shift_table(real_well, 10.0, l_max=12, settings=PRECISE)
    assert max(abs(d.imag) for d in table.entries.values()) < 1e-8
    sigma_el, sigma_tot = total_cross_sections(table)
    assert sigma_el > 0
    assert abs(sigma_tot - sigma_el) / sigma_el < 1e-4


def test_absorption(absorptive_well):
    table = phase_shift_table(absorptive_well, 10.0, l_max=8)
    assert table.delta(0, 0.5).imag > 0
    assert all(d.imag > -1e-10 for d in table.entries.values())
    assert table.gain_channels == ()
    sigma_el, sigma_tot = total_cross_sections(table)
    assert sigma_tot > sigma_el


def test_speed_invariance(absorptive_well):
    tables = [
        phase_shift_table(
            absorptive_well, 10.0, l_max=2, settings=SolverSettings(v=v, tolerance=1e-11)
        )
        for v in (0.5, 1.0, 2.0)
    ]
    for table in tables[1:]:
        for key, delta in table.entries.items():
            assert abs(delta - tables[0].entries[key]) < 1e-8


def test_gauge_invariance(absorptive_well):
    """The overall complex factor of the initial spinor drops out of δ."""
    channel = make_channel(1, 1.5, 10.0)
    deltas = []
    for scale in (1.0, 3 - 4j, 1e-5j):
        solution = solve_radial(channel, absorptive_well, sample_rs=[19.98], initial_scale=scale)
        deltas.append(extract_phase_shift(solution.at(19.98)[0], solution.at(20.0)[0], channel))
    assert abs(deltas[1] - deltas[0]) < 1e-12
    assert abs(deltas[2] - deltas[0]) < 1e-12


def test_matching_radius_stability(real_well):
    near = phase_shift_table(real_well, 10.0, l_max=4, settings=PRECISE)
    far = phase_shift_table(
        real_well, 10.0, l_max=4, settings=SolverSettings(r1=24.98, r2=25.0, tolerance=1e-11)
    )
    for key, delta in near.entries.items():
        assert abs(wrapped(delta.real - far.entries[key].real)) < 1e-6


def test_threads_do_not_change_the_table(woods_saxon):
    serial = phase_shift_table(woods_saxon, 20.0, l_max=4)
    threaded = phase_shift_table(woods_saxon, 20.0, l_max=4, max_workers=4)
    assert list(serial.entries) == list(threaded.entries)
    assert dict(serial.entries) == dict(threaded.entries)


def test_spin_orbit_splits_channels(woods_saxon):
    table = phase_shift_table(woods_saxon, 20.0, l_max=3)
    assert table.delta(2, 2.5) != table.delta(2, 1.5)


def test_channel_failures_are_collected():
    short = Tabulated(samples=[(0.0, -5.0), (10.0, 0.0)])
    with pytest.raises(ChannelSolveError) as info:
        phase_shift_table(short, 10.0, l_max=1)
    assert set(info.value.failures) == {"l=0,j=1/2", "l=1,j=1/2", "l=1,j=3/2"}
    assert all(isinstance(e, PotentialRangeError) for e in info.value.failures.values())


def test_gain_is_reported(caplog):
    gain = SquareWell(depth=[-10.0, 5.0], radius=3.0)
    with caplog.at_level(logging.WARNING, logger="qubit_hologram"):
        table = phase_shift_table(gain, 10.0, l_max=1)
    assert "l=0,j=1/2" in table.gain_channels
    assert "gain" in caplog.text


def test_table_accessors():
    table = toy_table({(0, 0.5): 0.5, (1, 0.5): 0.1j}, l_max=1)
    assert table.s_matrix(0, 0.5) == pytest.approx(cmath.exp(1j))
    assert table.s_matrix(0, -0.5) == 1.0
    s_plus, s_minus = table.split()
    assert s_plus.shape == s_minus.shape == (2,)
    assert s_minus[0] == 1.0
    assert s_minus[1] == pytest.approx(math.exp(-0.2))
    with pytest.raises(TypeError):
        table.entries[(0, Fraction(1, 2))] = 0j


def test_amplitudes_vanish_without_scattering():
    dist = scattering_amplitudes(toy_table({}, l_max=4), np.linspace(0.1, 3.0, 30))
    assert np.all(dist.f == 0) and np.all(dist.g == 0)
    assert np.all(dist.dsigma_domega == 0)
    assert total_cross_sections(toy_table({}, l_max=4)) == (0.0, 0.0)


def test_unitary_s_wave():
    k = 0.7
    dist = scattering_amplitudes(toy_table({(0, 0.5): math.pi / 2}, l_max=0, k=k), [0.2, 1.5, 2.9])
    np.testing.assert_allclose(dist.f, 1j / k, atol=1e-14)
    np.testing.assert_allclose(dist.g, 0.0, atol=1e-14)
    np.testing.assert_allclose(dist.dsigma_domega, 1 / k**2, rtol=1e-14)


def test_equal_phases_give_no_spin_flip():
    deltas = {(l, j): 0.1 * (l + 1) + 0.02j for l, j in channels_up_to(3)}
    dist = scattering_amplitudes(toy_table(deltas, l_max=3), np.linspace(0.1, 3.0, 15))
    np.testing.assert_allclose(dist.g, 0.0, atol=1e-14)
    assert np.any(np.abs(dist.f) > 0)


def test_spin_flip_vanishes_at_the_poles():
    deltas = {(1, 1.5): 0.4, (1, 0.5): -0.2, (2, 2.5): 0.3, (3, 2.5): 0.1}
    dist = scattering_amplitudes(toy_table(deltas, l_max=3), [1e-4, 1.0, math.pi - 1e-4])
    assert abs(dist.g[0]) < 2e-3 and abs(dist.g[2]) < 2e-3
    assert abs(dist.g[1]) > 10 * abs(dist.g[0])


def test_angle_grid_is_checked():
    table = toy_table({}, l_max=1)
    for grid in ([0.0, 1.0], [1.0, math.pi], []):
        with pytest.raises(DomainError):
            scattering_amplitudes(table, grid)


def test_cross_sections_agree_with_partial_wave_sums():
    deltas = {(0, 0.5): 0.8 + 0.1j, (1, 0.5): -0.3 + 0.05j, (1, 1.5): 0.6, (2, 2.5): 0.2 + 0.2j}
    table = toy_table(deltas, l_max=3, k=0.9)
    sigma_el, sigma_tot = total_cross_sections(table)
    sums = partial_wave_cross_sections(table)
    assert sigma_el == pytest.approx(sums.elastic, rel=1e-8)
    assert sigma_tot == pytest.approx(sums.total, rel=1e-12)
    assert sigma_tot > sigma_el
    assert sums.reaction > 0


def test_real_phase_shifts_conserve_flux():
    deltas = {(0, 0.5): 0.8, (1, 0.5): -0.3, (1, 1.5): 0.6, (2, 2.5): 0.2, (3, 3.5): -0.05}
    sigma_el, sigma_tot = total_cross_sections(toy_table(deltas, l_max=3))
    assert sigma_tot == pytest.approx(sigma_el, rel=1e-4)


def test_compare_to_data():
    deltas = {(0, 0.5): 0.8, (1, 1.5): 0.6}
    dist = scattering_amplitudes(toy_table(deltas, l_max=1), np.linspace(0.2, 2.8, 14))
    exact = [(t, s, 1.0) for t, s in zip(dist.theta, dist.dsigma_domega)]
    assert compare_to_data(dist, exact).chi2 == pytest.approx(0.0, abs=1e-20)

    theta, value = dist.theta[3], dist.dsigma_domega[3]
    assert compare_to_data(dist, [(theta, value + 0.2, 0.1)]).chi2 == pytest.approx(4.0)
    two = [(dist.theta[1], dist.dsigma_domega[1] - 1.0, 1.0), (dist.theta[5], dist.dsigma_domega[5] + 3.0, 1.0)]
    result = compare_to_data(dist, two)
    assert result.chi2 == pytest.approx(10.0)
    assert result.points == 2
    np.testing.assert_allclose(result.residuals, [1.0, -3.0])


def test_compare_to_data_errors():
    dist = scattering_amplitudes(toy_table({(0, 0.5): 0.5}, l_max=0), np.linspace(0.2, 2.8, 14))
    with pytest.raises(DataError):
        compare_to_data(dist, [])
    with pytest.raises(DataError):
        compare_to_data(dist, [(1.0, 0.1, 0.0)])
    with pytest.raises(DataError):
        compare_to_data(dist, [(3.0, 0.1, 1.0)])
    with pytest.raises(DataError):
        compare_to_data(dist, [(1.0, 0.1)])
