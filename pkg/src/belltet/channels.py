"""Kraus channels acting on Bell-diagonal states.

Two channel families keep Bell-diagonal states Bell-diagonal and are
incoherent in the computational basis:

* depolarizing on A, which shrinks the correlation vector uniformly,
  c -> (1 - q) c;
* phase flip on A, B or both, which shrinks (c1, c2) by (1 - q) per
  application and leaves c3 alone.

With a Markovian noise strength q(t) = 1 - exp(-γ t) these give straight-line
trajectories in c-space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .measures import MeasureSet, measure_all
from .qstate import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BellDiagonalState,
    density_matrix,
    from_density_matrix,
)

TP_ATOL = 1e-10


class NotTracePreserving(ValueError):
    pass


class InvalidStrength(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple = field(repr=False)
    label: str = ""
    q: float = 0.0

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.operators)
        object.__setattr__(self, "operators", ops)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Apply self first, then other."""
        ops = tuple(b @ a for a in self.operators for b in other.operators)
        return KrausChannel(ops, f"{self.label}+{other.label}", self.q)


def kraus_sum(ch: KrausChannel) -> np.ndarray:
    dim = ch.operators[0].shape[1]
    total = np.zeros((dim, dim), dtype=np.complex128)
    for k in ch.operators:
        total += k.conj().T @ k
    return total


def trace_preservation_error(ch: KrausChannel) -> float:
    """max |Σ K†K - I| entrywise (inf for an empty channel)."""
    if not ch.operators:
        return float("inf")
    total = kraus_sum(ch)
    return float(np.abs(total - np.eye(total.shape[0])).max())


def is_trace_preserving(ch: KrausChannel) -> bool:
    return trace_preservation_error(ch) < TP_ATOL


def is_incoherent_channel(ch: KrausChannel, atol: float = 1e-12) -> bool:
    """Every K_j maps each basis projector |k><k| to a diagonal matrix."""
    for k_op in ch.operators:
        dim = k_op.shape[1]
        for col in range(dim):
            out = np.outer(k_op[:, col], k_op[:, col].conj())
            if np.abs(out - np.diag(np.diag(out))).max() > atol:
                return False
    return True


def apply_channel(rho, ch: KrausChannel) -> np.ndarray:
    if not is_trace_preserving(ch):
        raise NotTracePreserving(
            f"{ch.label or 'channel'}: Σ K†K deviates from I by {trace_preservation_error(ch):.3g}"
        )
    rho = np.asarray(rho, dtype=np.complex128)
    return sum(k @ rho @ k.conj().T for k in ch.operators)


def _check_strength(q: float) -> float:
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise InvalidStrength(f"noise strength must lie in [0, 1], got {q}")
    return q


def lift(op, target: str) -> np.ndarray:
    """Embed a single-qubit operator on subsystem A or B."""
    if target == "A":
        return np.kron(op, IDENTITY2)
    if target == "B":
        return np.kron(IDENTITY2, op)
    raise ValueError(f"target must be 'A' or 'B', got {target!r}")


def depolarizing_A(q: float, literal: bool = False) -> KrausChannel:
    """Depolarizing channel on A.

    The standard normalization is K0 = sqrt(1 - 3q/4) I, Kj = sqrt(q/4) σj.
    ``literal=True`` builds the set with K0 = sqrt(1 - 3q) I instead, which is
    not trace preserving for q > 0 (Σ K†K = (1 - 9q/4) I); it exists only so
    the trace-preservation check has something to reject.
    """
    q = _check_strength(q)
    if literal:
        if q > 1 / 3:
            raise InvalidStrength("literal weights need q <= 1/3 for a real square root")
        k0 = np.sqrt(1 - 3 * q)
        label = "depolarizing_A[literal]"
    else:
        k0 = np.sqrt(1 - 3 * q / 4)
        label = "depolarizing_A"
    kj = np.sqrt(q / 4)
    ops = [k0 * IDENTITY2, kj * PAULI_X, kj * PAULI_Y, kj * PAULI_Z]
    return KrausChannel(tuple(lift(k, "A") for k in ops), label, q)


def phase_flip(q: float, target: str = "A") -> KrausChannel:
    q = _check_strength(q)
    ops = [np.sqrt(1 - q / 2) * IDENTITY2, np.sqrt(q / 2) * PAULI_Z]
    if target == "both":
        return phase_flip(q, "A").then(phase_flip(q, "B"))
    return KrausChannel(tuple(lift(k, target) for k in ops), f"phase_flip_{target}", q)


def hadamard_A() -> KrausChannel:
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    return KrausChannel((lift(h, "A"),), "hadamard_A", 0.0)


# closed-form action on correlation vectors


def depolarizing_shrink(q: float) -> float:
    return 1.0 - q


def depolarizing_map(c, q: float) -> np.ndarray:
    return depolarizing_shrink(_check_strength(q)) * np.asarray(c, dtype=np.float64)


def phase_flip_map(c, q: float, target: str = "A") -> np.ndarray:
    q = _check_strength(q)
    factor = (1 - q) ** 2 if target == "both" else 1 - q
    out = np.array(c, dtype=np.float64)
    out[..., :2] *= factor
    return out


FAMILIES = ("depolarizing_A", "phase_flip_both")


def channel_for(family: str, q: float) -> KrausChannel:
    if family == "depolarizing_A":
        return depolarizing_A(q)
    if family == "phase_flip_both":
        return phase_flip(q, "both")
    raise ValueError(f"unknown channel family {family!r}; choose from {FAMILIES}")


def closed_form_map(family: str, c, q: float) -> np.ndarray:
    if family == "depolarizing_A":
        return depolarizing_map(c, q)
    if family == "phase_flip_both":
        return phase_flip_map(c, q, "both")
    raise ValueError(f"unknown channel family {family!r}; choose from {FAMILIES}")


@dataclass(frozen=True)
class NoiseSchedule:
    gamma: float
    times: tuple

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if not times:
            raise ValueError("schedule needs at least one time point")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("times must be strictly increasing")
        if times[0] < 0:
            raise ValueError("times must be non-negative")
        object.__setattr__(self, "times", times)

    def q_of_t(self, t: float) -> float:
        return float(-np.expm1(-self.gamma * t))

    @classmethod
    def linspace(cls, gamma: float, t_max: float, steps: int) -> "NoiseSchedule":
        return cls(gamma, tuple(np.linspace(0.0, t_max, steps)))


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: BellDiagonalState
    measures: MeasureSet


@dataclass(frozen=True)
class Trajectory:
    family: str
    samples: tuple

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def correlations(self) -> np.ndarray:
        return np.array([s.state.c for s in self.samples])


def trajectory(
    s0: BellDiagonalState,
    family: str,
    schedule: NoiseSchedule,
    verify: bool = True,
    atol: float = 1e-10,
) -> Trajectory:
    """Closed-form evolution of s0, optionally cross-checked against the Kraus path."""
    rho0 = density_matrix(s0)
    samples = []
    for t in schedule.times:
        q = schedule.q_of_t(t)
        state = BellDiagonalState(*closed_form_map(family, s0.c, q))
        if verify:
            via_kraus = from_density_matrix(apply_channel(rho0, channel_for(family, q))).c
            err = np.abs(via_kraus - state.c).max()
            if err > atol:
                raise AssertionError(f"closed form and Kraus evolution differ by {err:.3g} at t={t}")
        samples.append(TrajectorySample(t, state, measure_all(state)))
    return Trajectory(family, tuple(samples))


def map_states(family: str, states: Sequence[BellDiagonalState], q: float) -> list:
    return [BellDiagonalState(*closed_form_map(family, s.c, q)) for s in states]
