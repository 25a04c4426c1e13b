import math

import numpy as np
import pytest
from scipy import special
from scipy.linalg import expm

from qubit_hologram import (
    DEFAULT_CONSTANTS,
    Free,
    OpticalModel,
    SquareWell,
    TanhProfile,
    WoodsSaxonTerm,
    evaluate_potential,
)
from qubit_hologram.scattering import ScatteringChannel


def numerov_radial(
    spec, channel: ScatteringChannel, r_max: float = 20.0, h: float = 5e-4
) -> tuple[np.ndarray, np.ndarray]:
    """Independent Numerov solution of u'' = [U(r) − k²] u on r = n·h.

    The grid starts a few steps away from the origin for l > 0 and is seeded
    with the small-r series of the regular solution.
    """
    l = channel.l
    n0 = max(1, 4 * l)
    r = h * np.arange(n0, int(round(r_max / h)) + 1)
    to_fm2 = 2.0 * channel.mass / channel.hbar_c**2
    potential = np.array(
        [evaluate_potential(spec, l, channel.j, x, channel.energy) for x in r]
    )
    g = to_fm2 * potential + l * (l + 1) / r**2 - channel.k**2

    q2 = channel.k**2 - to_fm2 * potential[0]
    c1 = q2 / (2 * (2 * l + 3))
    c2 = q2 * q2 / (8 * (2 * l + 3) * (2 * l + 5))
    u = np.empty(r.size, dtype=complex)
    u[:2] = r[:2] ** (l + 1) * (1 - c1 * r[:2] ** 2 + c2 * r[:2] ** 4)

    w = 1 - h * h * g / 12
    for n in range(1, r.size - 1):
        u[n + 1] = ((12 - 10 * w[n]) * u[n] - w[n - 1] * u[n - 1]) / w[n + 1]
    return r, u


def square_well_delta0(depth: float, radius: float, energy: float) -> float:
    """s-wave phase shift of a real square well from interior/exterior matching."""
    hbar_c, mass = DEFAULT_CONSTANTS.hbar_c, DEFAULT_CONSTANTS.neutron_mass
    k = math.sqrt(2 * mass * energy) / hbar_c
    kappa = math.sqrt(2 * mass * (energy - depth)) / hbar_c
    return math.atan(k / kappa * math.tan(kappa * radius)) - k * radius


def square_well_delta(l: int, depth: float, radius: float, energy: float) -> float:
    """Phase shift of a real square well for any l, from matching R'/R at the edge."""
    hbar_c, mass = DEFAULT_CONSTANTS.hbar_c, DEFAULT_CONSTANTS.neutron_mass
    k = math.sqrt(2 * mass * energy) / hbar_c
    kappa = math.sqrt(2 * mass * (energy - depth)) / hbar_c
    x, y = k * radius, kappa * radius
    inner, inner_d = special.spherical_jn(l, y), special.spherical_jn(l, y, derivative=True)
    j, j_d = special.spherical_jn(l, x), special.spherical_jn(l, x, derivative=True)
    n, n_d = special.spherical_yn(l, x), special.spherical_yn(l, x, derivative=True)
    numerator = k * j_d * inner - kappa * j * inner_d
    denominator = k * n_d * inner - kappa * n * inner_d
    return math.atan(numerator / denominator)


def wrapped(delta: float) -> float:
    """Map an angle difference into [−π/2, π/2); phase shifts are defined modulo π."""
    return (delta + math.pi / 2) % math.pi - math.pi / 2


def exact_evolution(matrix, psi0, t: float) -> np.ndarray:
    return expm(-1j * np.asarray(matrix, dtype=complex) * t) @ np.asarray(psi0, dtype=complex)


@pytest.fixture(scope="session")
def free():
    return Free()


@pytest.fixture(scope="session")
def real_well():
    return SquareWell(depth=-10.0, radius=3.0)


@pytest.fixture(scope="session")
def absorptive_well():
    return SquareWell(depth=[-40.0, -10.0], radius=3.0)


@pytest.fixture(scope="session")
def woods_saxon():
    return OpticalModel(
        target_mass_number=40,
        real_volume=WoodsSaxonTerm(depth=-45.0, r0=1.2, diffuseness=0.65),
        imag_surface=WoodsSaxonTerm(
            depth=-5.0, r0=1.25, diffuseness=0.5, form="surface"
        ),
        spin_orbit=WoodsSaxonTerm(depth=-6.0, r0=1.1, diffuseness=0.6),
    )


@pytest.fixture(scope="session")
def domain_wall():
    return TanhProfile()
