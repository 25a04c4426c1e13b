from .special import (
    MAX_ORDER,
    legendre_p,
    legendre_p_prime,
    legendre_table,
    spherical_bessel_j,
    spherical_bessel_table,
    spherical_neumann_n,
)
from .integrator import (
    CallableHamiltonian,
    ConstantHamiltonian,
    HamiltonianEvaluator,
    Trajectory,
    integrate_schrodinger,
)

__all__ = [
    "MAX_ORDER",
    "spherical_bessel_j",
    "spherical_neumann_n",
    "spherical_bessel_table",
    "legendre_p",
    "legendre_p_prime",
    "legendre_table",
    "HamiltonianEvaluator",
    "ConstantHamiltonian",
    "CallableHamiltonian",
    "Trajectory",
    "integrate_schrodinger",
]
