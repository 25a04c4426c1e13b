"""Adaptive Runge-Kutta integration of i dψ/dt = H(t) ψ with complex state.

The generator H(t) is neither assumed Hermitian nor constant. The state is
never renormalized: the growth and decay of the norm under non-Hermitian
evolution is part of the result.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, NonFiniteStateError, StepSizeUnderflowError
from ..logging import get_logger

__all__ = [
    "HamiltonianEvaluator",
    "ConstantHamiltonian",
    "CallableHamiltonian",
    "Trajectory",
    "integrate_schrodinger",
]

logger = get_logger("integrator")

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
        [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    ]
)
_B = _A[6]
# difference between the 5th and the embedded 4th order weights
_E = np.array(
    [
        71 / 57600,
        0,
        -71 / 16695,
        71 / 1920,
        -17253 / 339200,
        22 / 525,
        -1 / 40,
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_UNDERFLOW = 1e-14
_TINY_NORM = 1e-300


class HamiltonianEvaluator(ABC):
    """An n×n complex generator t ↦ H(t), n ∈ {2, 4}.

    Subclasses implement :meth:`matrix`; calling the evaluator checks the
    dimension of the returned matrix.
    """

    @property
    @abstractmethod
    def dimension(self) -> int:
        """Declared dimension n of the matrices returned by the evaluator."""
        pass

    @abstractmethod
    def matrix(self, t: float) -> np.ndarray:
        """Return H(t). Must be pure: the same t gives the same matrix."""
        pass

    def __call__(self, t: float) -> np.ndarray:
        h = self.matrix(t)
        n = self.dimension
        if h.shape != (n, n):
            raise DomainError(
                f"{self.__class__.__name__} returned shape {h.shape}, declared {n}x{n}"
            )
        return h


class ConstantHamiltonian(HamiltonianEvaluator):
    """A time independent generator."""

    def __init__(self, matrix: np.ndarray | Sequence[Sequence[complex]]):
        h = np.array(matrix, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] not in (2, 4):
            raise DomainError(f"expected a 2x2 or 4x4 matrix, got shape {h.shape}")
        h.setflags(write=False)
        self._matrix = h

    @property
    def dimension(self) -> int:
        return self._matrix.shape[0]

    def matrix(self, t: float) -> np.ndarray:
        return self._matrix


class CallableHamiltonian(HamiltonianEvaluator):
    """Wraps any callable ``t -> matrix`` with a declared dimension."""

    def __init__(self, function: Callable[[float], np.ndarray], dimension: int):
        if dimension not in (2, 4):
            raise DomainError(f"dimension must be 2 or 4, got {dimension}")
        self._function = function
        self._dimension = dimension

    @property
    def dimension(self) -> int:
        return self._dimension

    def matrix(self, t: float) -> np.ndarray:
        return np.asarray(self._function(t), dtype=complex)


@dataclass(frozen=True)
class Trajectory:
    """Samples of an evolution, first at t0 and last at t1.

    Attributes:
        times: Strictly increasing sample times.
        states: Complex states, one row per sample time.
        t0: Start of the evolution.
        t1: End of the evolution.
        tolerance: Relative local error tolerance used.
        steps: Number of accepted steps.
        rejected: Number of rejected step attempts.
    """

    times: np.ndarray
    states: np.ndarray
    t0: float
    t1: float
    tolerance: float
    steps: int
    rejected: int = field(default=0)

    def __post_init__(self) -> None:
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def norms(self) -> np.ndarray:
        """Euclidean norm of the state at every sample."""
        return np.linalg.norm(self.states, axis=1)

    def state_at(self, t: float) -> np.ndarray:
        """State at a sampled time; raises DomainError for unsampled times."""
        index = int(np.searchsorted(self.times, t))
        for candidate in (index - 1, index):
            if 0 <= candidate < self.times.size and math.isclose(
                self.times[candidate], t, rel_tol=1e-12, abs_tol=1e-15
            ):
                return self.states[candidate]
        raise DomainError(f"t={t!r} is not a sample time of this trajectory")


def _initial_step(h0: np.ndarray, span: float, tolerance: float) -> float:
    scale = float(np.max(np.sum(np.abs(h0), axis=1)))
    if scale == 0.0:
        return span
    return min(span, 0.5 * tolerance**0.2 / scale)


def integrate_schrodinger(
    hamiltonian: HamiltonianEvaluator,
    psi0: np.ndarray | Sequence[complex],
    t0: float,
    t1: float,
    tolerance: float = 1e-10,
    sample_times: Sequence[float] = (),
    max_steps: int = 2_000_000,
) -> Trajectory:
    """Solve i dψ/dt = H(t) ψ from t0 to t1.

    The embedded Dormand-Prince pair is stepped with local extrapolation.
    A step is accepted when the embedded error estimate, measured in the
    Euclidean norm, does not exceed ``tolerance`` times the state norm.
    Steps are clamped so that every requested sample time is hit exactly.

    Args:
        hamiltonian: Generator of the evolution.
        psi0: Initial state, of length ``hamiltonian.dimension``.
        t0: Initial time.
        t1: Final time, > t0.
        tolerance: Relative local error tolerance in (0, 1e-3].
        sample_times: Additional times in [t0, t1] at which to record the state.
        max_steps: Upper bound on step attempts.

    Returns:
        Trajectory sampled at t0, every requested time and t1.

    Raises:
        DomainError: Invalid arguments.
        StepSizeUnderflowError: The step size underflowed.
        NonFiniteStateError: The state overflowed or became NaN.
    """
    y = np.array(psi0, dtype=complex).reshape(-1)
    n = hamiltonian.dimension
    if y.size != n:
        raise DomainError(f"initial state has length {y.size}, Hamiltonian is {n}x{n}")
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise DomainError(f"require finite t1 > t0, got t0={t0!r}, t1={t1!r}")
    if not 0.0 < tolerance <= 1e-3:
        raise DomainError(f"tolerance must lie in (0, 1e-3], got {tolerance!r}")
    if not np.all(np.isfinite(y)):
        raise NonFiniteStateError("initial state is not finite", t0)
    for s in sample_times:
        if not t0 <= s <= t1:
            raise DomainError(f"sample time {s!r} outside [{t0!r}, {t1!r}]")

    targets = sorted({float(s) for s in sample_times if s > t0} | {float(t1)})
    times = [float(t0)]
    states = [y.copy()]

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        return -1j * (hamiltonian(t) @ state)

    stages = np.empty((7, n), dtype=complex)
    t = float(t0)
    stages[0] = rhs(t, y)
    h = _initial_step(hamiltonian(t), t1 - t0, tolerance)
    accepted = rejected = 0

    for target in targets:
        while t < target:
            if accepted + rejected >= max_steps:
                raise StepSizeUnderflowError(
                    f"exceeded {max_steps} step attempts", t
                )
            remaining = target - t
            clamped = h >= remaining
            step = remaining if clamped else h
            if step < _UNDERFLOW * max(1.0, abs(t)):
                if remaining < _UNDERFLOW * max(1.0, abs(t)):
                    t = target
                    break
                raise StepSizeUnderflowError(f"step size {step!r} underflowed", t)

            for i in range(1, 7):
                stage_state = y + step * (_A[i, :i] @ stages[:i])
                stages[i] = rhs(t + _C[i] * step, stage_state)
            y_new = y + step * (_B[:6] @ stages[:6])
            error = step * float(np.linalg.norm(_E @ stages))
            if not np.all(np.isfinite(y_new)) or not math.isfinite(error):
                raise NonFiniteStateError("state is no longer finite", t)

            scale = tolerance * max(float(np.linalg.norm(y)), float(np.linalg.norm(y_new)), _TINY_NORM)
            ratio = error / scale
            if ratio <= 1.0:
                accepted += 1
                t = target if clamped else t + step
                y = y_new
                stages[0] = stages[6]
                factor = _MAX_FACTOR if ratio == 0.0 else min(_MAX_FACTOR, _SAFETY * ratio**-0.2)
                h = max(h, step * factor) if clamped else step * factor
            else:
                rejected += 1
                h = step * max(_MIN_FACTOR, _SAFETY * ratio**-0.2)
        times.append(target)
        states.append(y.copy())

    logger.debug(
        "integrated [%g, %g]: %d accepted, %d rejected steps",
        t0,
        t1,
        accepted,
        rejected,
    )
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        t0=float(t0),
        t1=float(t1),
        tolerance=tolerance,
        steps=accepted,
        rejected=rejected,
    )
