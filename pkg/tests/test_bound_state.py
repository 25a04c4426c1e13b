import math

import numpy as np
import pytest
from pydantic import ValidationError

from qubit_hologram import (
    ConstantProfile,
    DomainError,
    EnergyScanError,
    NoInteriorMinimumError,
    PTPhase,
    TanhProfile,
    evolve_trial,
    find_bound_state,
    majorana_hamiltonian,
    region_phases,
    scan_energies,
    turning_points,
)
from qubit_hologram.bound_state import INITIAL_STATE, MassProfile, bloch_components

from .conftest import exact_evolution


class BrokenProfile(MassProfile):
    def mass(self, x: float) -> float:
        return math.nan

    @property
    def asymptotes(self) -> tuple[float, float]:
        return 1.0, -1.0


def test_majorana_hamiltonian(domain_wall):
    np.testing.assert_array_equal(majorana_hamiltonian(0.0, domain_wall)(0.0), np.zeros((2, 2)))
    np.testing.assert_allclose(
        majorana_hamiltonian(0.3, domain_wall)(-10.0), [[0.3, -1], [1, -0.3]], atol=1e-8
    )
    with pytest.raises(DomainError):
        majorana_hamiltonian(math.inf, domain_wall)


def test_profiles():
    wall = TanhProfile(center=0.7, width=2.0)
    assert wall.mass(0.7) == 0.0
    assert wall.asymptotes == (1.0, -1.0)
    assert ConstantProfile(value=-2.0).max_abs_mass == 2.0
    with pytest.raises(ValidationError):
        TanhProfile(amplitude=0.0)
    with pytest.raises(ValidationError):
        TanhProfile(width=0.0)
    with pytest.raises(ValidationError):
        ConstantProfile(value=0.0)


def test_initial_state_is_y_minus():
    np.testing.assert_allclose(bloch_components(INITIAL_STATE)[0], [0.0, -1.0, 0.0], atol=1e-15)


def test_zero_energy_solution(domain_wall):
    xs = np.linspace(-4.5, 4.5, 19)
    trial = evolve_trial(0.0, domain_wall, sample_xs=xs)
    # the E = 0 amplitude is cosh(x0)/cosh(x)
    expected = math.cosh(-5.0) / np.cosh(trial.trajectory.times)
    np.testing.assert_allclose(trial.trajectory.norms(), expected, rtol=1e-8)
    assert trial.final_amplitude == pytest.approx(1.0, rel=1e-8)


def test_zero_energy_tail_decays_like_the_asymptotic_mass(domain_wall):
    trial = evolve_trial(0.0, domain_wall, sample_xs=[2.0])
    norms = trial.trajectory.norms()
    slope = (math.log(norms[-1]) - math.log(norms[1])) / 3.0
    assert slope == pytest.approx(-1.0, rel=0.05)


def test_off_resonance_amplitude_is_larger(domain_wall):
    assert evolve_trial(0.5, domain_wall).final_amplitude > evolve_trial(0.0, domain_wall).final_amplitude


def test_constant_mass_grows_exponentially():
    profile = ConstantProfile(value=1.0)
    xs = np.linspace(-4.0, 4.0, 9)
    trial = evolve_trial(0.0, profile, sample_xs=xs)
    expected = np.exp(trial.trajectory.times + 5.0)
    np.testing.assert_allclose(trial.trajectory.norms(), expected, rtol=1e-8)

    off = evolve_trial(0.3, profile, x0=-1.0, x1=1.0)
    reference = exact_evolution([[0.3, -1.0], [1.0, -0.3]], INITIAL_STATE, 2.0)
    np.testing.assert_allclose(off.final_state, reference, rtol=1e-8)


def test_sigma_z_stays_zero(domain_wall):
    for energy in (0.0, 0.37):
        trial = evolve_trial(energy, domain_wall, sample_xs=np.linspace(-4.9, 4.9, 99))
        assert np.max(np.abs(bloch_components(trial.trajectory.states)[:, 2])) < 1e-8


def test_scan_minimum_at_zero(domain_wall):
    scan = scan_energies(domain_wall, [0.5, 0.0, -0.5, 0.0])
    assert scan.energies.tolist() == [-0.5, 0.0, 0.5]
    assert int(np.argmin(scan.amplitudes)) == 1
    assert scan.energy_window == (-0.5, 0.5)
    assert scan.window == (-5.0, 5.0)


def test_scan_is_symmetric_with_a_unique_minimum(domain_wall):
    grid = np.linspace(-0.5, 0.5, 21)
    scan = scan_energies(domain_wall, grid, max_workers=4)
    np.testing.assert_allclose(scan.amplitudes, scan.amplitudes[::-1], rtol=1e-6)
    assert scan.interior_minima() == [10]
    assert len(scan.entries) == 21


def test_constant_profile_has_no_zero_mode():
    """Without a sign change of m(x) there is no zero mode to pick out."""
    scan = scan_energies(ConstantProfile(value=1.0), np.linspace(-0.5, 0.5, 11))
    assert scan.interior_minima() == []
    assert scan.amplitudes[1:-1].min() >= min(scan.amplitudes[0], scan.amplitudes[-1])


def test_scan_errors():
    with pytest.raises(DomainError):
        scan_energies(TanhProfile(), [])
    with pytest.raises(EnergyScanError) as info:
        scan_energies(BrokenProfile(), [-0.1, 0.1])
    assert set(info.value.failures) == {-0.1, 0.1}


def test_find_bound_state(domain_wall):
    assert abs(find_bound_state(domain_wall)) < 1e-3


def test_bound_state_is_translation_invariant():
    centred = find_bound_state(TanhProfile(), tol_E=1e-6)
    shifted = find_bound_state(TanhProfile(center=0.7), tol_E=1e-6, x0=-4.3, x1=5.7)
    assert shifted == pytest.approx(centred, abs=1e-6)


@pytest.mark.parametrize("bracket", [(-0.5, 0.1), (-0.45, 0.4), (-0.2, 0.3)])
def test_asymmetric_bracket_finds_zero_mode(domain_wall, bracket):
    # f(−0.5) and f(0.1) lie below the first golden-section points of (−0.5, 0.1)
    assert abs(find_bound_state(domain_wall, bracket=bracket)) < 1e-3


def test_bracket_without_minimum(domain_wall):
    with pytest.raises(NoInteriorMinimumError) as info:
        find_bound_state(domain_wall, bracket=(0.2, 0.5))
    assert info.value.bracket == (0.2, 0.5)
    energies = [e for e, _ in info.value.values]
    assert energies[0] == pytest.approx(0.2) and energies[-1] == pytest.approx(0.5)
    with pytest.raises(DomainError):
        find_bound_state(domain_wall, bracket=(0.5, 0.2))
    with pytest.raises(DomainError):
        find_bound_state(domain_wall, scan_points=2)


def test_turning_points(domain_wall):
    (merged,) = turning_points(0.0, domain_wall)
    assert abs(merged) < 1e-12
    left, right = turning_points(0.5, domain_wall)
    assert left == pytest.approx(-math.atanh(0.5), abs=1e-6)
    assert right == pytest.approx(math.atanh(0.5), abs=1e-6)
    assert turning_points(-0.5, domain_wall) == [left, right]
    assert turning_points(2.0, domain_wall) == []


def test_regions_between_turning_points_are_unbroken(domain_wall):
    energy = 0.5
    left, right = turning_points(energy, domain_wall)
    inside = np.linspace(left + 0.01, right - 0.01, 25)
    outside = np.concatenate([np.linspace(-5, left - 0.01, 10), np.linspace(right + 0.01, 5, 10)])
    assert set(region_phases(energy, domain_wall, inside)) == {PTPhase.UNBROKEN}
    assert set(region_phases(energy, domain_wall, outside)) == {PTPhase.BROKEN}
    assert region_phases(energy, domain_wall, [right]) == [PTPhase.EXCEPTIONAL_POINT]
