"""Spherical Bessel/Neumann functions and Legendre polynomials by recurrence."""

import math
from numbers import Integral

import numpy as np

from ..errors import DomainError

__all__ = [
    "MAX_ORDER",
    "spherical_bessel_j",
    "spherical_neumann_n",
    "spherical_bessel_table",
    "legendre_p",
    "legendre_p_prime",
    "legendre_table",
]

MAX_ORDER = 64

# rescaling threshold for Miller's downward recurrence
_BIG = 1.0e250
_SERIES_LIMIT = 1.0


def _check_order(l: int, l_max: int = MAX_ORDER) -> None:
    if isinstance(l, bool) or not isinstance(l, Integral):
        raise DomainError(f"order l must be an integer, got {l!r}")
    if l < 0 or l > l_max:
        raise DomainError(f"order l={l} outside the supported range 0..{l_max}")


def _check_argument(x: float) -> None:
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"argument x must be finite and > 0, got {x!r}")


def _bessel_series(l: int, x: float) -> float:
    """Power series of j_l(x), summed to convergence; used for x < 1."""
    log_prefactor = l * math.log(x) - sum(math.log(2 * i + 1) for i in range(l + 1))
    if log_prefactor < -745.0:
        # below the smallest subnormal
        return 0.0
    half_x2 = 0.5 * x * x
    term = 1.0
    total = 1.0
    for n in range(1, 60):
        term *= -half_x2 / (n * (2 * l + 2 * n + 1))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return math.exp(log_prefactor) * total


def _bessel_miller(l_max: int, x: float) -> np.ndarray:
    """j_0..j_{l_max} by downward recurrence normalized against j_0 or j_1."""
    start = l_max + 20 + int(math.sqrt(40.0 * (l_max + 1))) + int(x)
    values = np.zeros(l_max + 1)
    upper, current = 0.0, 1.0e-300
    for n in range(start, 0, -1):
        lower = (2 * n + 1) / x * current - upper
        upper, current = current, lower
        if abs(current) > _BIG:
            upper /= _BIG
            current /= _BIG
            values /= _BIG
        if n - 1 <= l_max:
            values[n - 1] = current
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if abs(j0) >= abs(j1) or l_max == 0:
        return values * (j0 / values[0])
    return values * (j1 / values[1])


def _bessel_upward(l_max: int, x: float) -> np.ndarray:
    values = np.empty(l_max + 1)
    values[0] = math.sin(x) / x
    if l_max >= 1:
        values[1] = math.sin(x) / (x * x) - math.cos(x) / x
    for n in range(1, l_max):
        values[n + 1] = (2 * n + 1) / x * values[n] - values[n - 1]
    return values


def _neumann_upward(l_max: int, x: float) -> np.ndarray:
    values = np.empty(l_max + 1)
    values[0] = -math.cos(x) / x
    if l_max >= 1:
        values[1] = -math.cos(x) / (x * x) - math.sin(x) / x
    with np.errstate(over="ignore"):
        for n in range(1, l_max):
            values[n + 1] = (2 * n + 1) / x * values[n] - values[n - 1]
    return values


def spherical_bessel_table(l_max: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Spherical Bessel and Neumann functions for all orders up to ``l_max``.

    The regular function is obtained by the power series for x < 1, by
    Miller's downward recurrence when x < l_max and by upward recurrence
    otherwise. The Neumann function always recurs upward; for tiny x and
    large orders it overflows to ``-inf``.

    Args:
        l_max: Highest order, 0..64.
        x: Positive argument.

    Returns:
        Tuple ``(j, n)`` of arrays with ``l_max + 1`` entries.
    """
    _check_order(l_max)
    _check_argument(x)
    if x < _SERIES_LIMIT:
        j = np.array([_bessel_series(l, x) for l in range(l_max + 1)])
    elif x < l_max:
        j = _bessel_miller(l_max, x)
    else:
        j = _bessel_upward(l_max, x)
    return j, _neumann_upward(l_max, x)


def spherical_bessel_j(l: int, x: float) -> float:
    """Spherical Bessel function j_l(x) for 0 <= l <= 64 and x > 0."""
    _check_order(l)
    _check_argument(x)
    if x < _SERIES_LIMIT:
        return _bessel_series(l, x)
    if x < l:
        return float(_bessel_miller(l, x)[l])
    return float(_bessel_upward(l, x)[l])


def spherical_neumann_n(l: int, x: float) -> float:
    """Spherical Neumann function n_l(x) for 0 <= l <= 64 and x > 0."""
    _check_order(l)
    _check_argument(x)
    return float(_neumann_upward(l, x)[l])


def legendre_p(l: int, x: float) -> float:
    """Legendre polynomial P_l(x) on [-1, 1] by Bonnet's recurrence."""
    _check_order(l, l_max=10_000)
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"legendre_p requires |x| <= 1, got {x!r}")
    previous, current = 1.0, x
    if l == 0:
        return previous
    for n in range(1, l):
        previous, current = current, ((2 * n + 1) * x * current - n * previous) / (n + 1)
    return current


def legendre_p_prime(l: int, x: float) -> float:
    """Derivative dP_l/dx on the open interval (-1, 1).

    Uses (x² − 1) P_l'(x) = l (x P_l(x) − P_{l−1}(x)).
    """
    _check_order(l, l_max=10_000)
    if not -1.0 < x < 1.0:
        raise DomainError(f"legendre_p_prime requires |x| < 1, got {x!r}")
    if l == 0:
        return 0.0
    return l * (x * legendre_p(l, x) - legendre_p(l - 1, x)) / (x * x - 1.0)


def legendre_table(l_max: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_l and P_l' for l = 0..l_max evaluated on an array of points in (-1, 1).

    Returns:
        Arrays ``(p, dp)`` of shape ``(l_max + 1, len(x))``.
    """
    _check_order(l_max, l_max=10_000)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("legendre_table requires every |x| < 1")
    p = np.empty((l_max + 1, x.size))
    dp = np.zeros((l_max + 1, x.size))
    p[0] = 1.0
    if l_max >= 1:
        p[1] = x
    for n in range(1, l_max):
        p[n + 1] = ((2 * n + 1) * x * p[n] - n * p[n - 1]) / (n + 1)
    for n in range(1, l_max + 1):
        dp[n] = n * (x * p[n] - p[n - 1]) / (x * x - 1.0)
    return p, dp
