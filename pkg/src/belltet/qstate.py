"""Bell-diagonal two-qubit states.

A Bell-diagonal state is fixed by its correlation vector ``(c1, c2, c3)``:

    rho = (I⊗I + sum_j c_j σ_j⊗σ_j) / 4

Its eigenvectors are the four Bell states ``|β_ab>`` with eigenvalues

    λ_ab = (1 + (-1)^a c1 - (-1)^(a+b) c2 + (-1)^b c3) / 4

so the physical states form the tetrahedron where all ``λ_ab >= 0``.
Basis order is ``|00>, |01>, |10>, |11>`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL = 1e-12
PATTERN_ATOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY2 = np.eye(2, dtype=np.complex128)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# Rows are (a, b) = 00, 01, 10, 11; λ_ab = (1 + SIGNS[ab] · c) / 4.
SIGNS = np.array(
    [[(-1) ** a, -((-1) ** (a + b)), (-1) ** b] for a in (0, 1) for b in (0, 1)],
    dtype=np.float64,
)

# The four Bell vertices of the tetrahedron.
VERTICES = ((1.0, 1.0, -1.0), (1.0, -1.0, 1.0), (-1.0, 1.0, 1.0), (-1.0, -1.0, -1.0))

# Entries of a 4x4 matrix that a Bell-diagonal density matrix may populate.
_PATTERN = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ],
    dtype=bool,
)


class OutsideTetrahedron(ValueError):
    """Raised when (c1, c2, c3) is not a physical Bell-diagonal state."""


class NotBellDiagonal(ValueError):
    """Raised when a density matrix has entries outside the Bell-diagonal pattern."""


class InvalidDensityMatrix(ValueError):
    pass


def eigenvalues(c) -> np.ndarray:
    """Vectorized λ_ab for correlation vectors of shape (..., 3); returns (..., 4)."""
    c = np.asarray(c, dtype=np.float64)
    return 0.25 * (1.0 + c @ SIGNS.T)


def inside(c, atol: float = ATOL) -> np.ndarray:
    """Boolean mask of correlation vectors lying in the tetrahedron."""
    return eigenvalues(c).min(axis=-1) >= -atol


@dataclass(frozen=True)
class Spectrum:
    lambda00: float
    lambda01: float
    lambda10: float
    lambda11: float

    def as_array(self) -> np.ndarray:
        return np.array([self.lambda00, self.lambda01, self.lambda10, self.lambda11])


@dataclass(frozen=True)
class BellDiagonalState:
    """A point of the tetrahedron. Construction validates membership."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise OutsideTetrahedron(f"{name}={value} is not finite")
            object.__setattr__(self, name, value)
        lam = eigenvalues(self.c)
        if lam.min() < -ATOL:
            raise OutsideTetrahedron(
                f"({self.c1}, {self.c2}, {self.c3}) has eigenvalue {lam.min():.3g} < 0"
            )

    @property
    def c(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}

    @classmethod
    def from_dict(cls, d: dict) -> "BellDiagonalState":
        return cls(d["c1"], d["c2"], d["c3"])


def new_state(c1: float, c2: float, c3: float) -> BellDiagonalState:
    return BellDiagonalState(c1, c2, c3)


def spectrum(s: BellDiagonalState) -> Spectrum:
    lam = np.clip(eigenvalues(s.c), 0.0, 1.0)
    return Spectrum(*(float(x) for x in lam))


def density_matrix(s: BellDiagonalState) -> np.ndarray:
    """4x4 complex density matrix in the computational basis."""
    c1, c2, c3 = s.c1, s.c2, s.c3
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = rho[3, 3] = (1 + c3) / 4
    rho[1, 1] = rho[2, 2] = (1 - c3) / 4
    rho[0, 3] = rho[3, 0] = (c1 - c2) / 4
    rho[1, 2] = rho[2, 1] = (c1 + c2) / 4
    return rho


def density_matrix_from_paulis(c) -> np.ndarray:
    """Same matrix built from the Pauli expansion; used as a cross-check."""
    rho = np.kron(IDENTITY2, IDENTITY2).astype(np.complex128)
    for cj, p in zip(c, PAULIS):
        rho = rho + cj * np.kron(p, p)
    return rho / 4


def check_density_matrix(rho, atol: float = ATOL) -> np.ndarray:
    """Validate a 4x4 density matrix (Hermitian, unit trace, PSD) and return it."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected shape (4, 4), got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise InvalidDensityMatrix("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > atol:
        raise InvalidDensityMatrix(f"trace is {np.trace(rho).real!r}, not 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise InvalidDensityMatrix("matrix is not positive semidefinite")
    return rho


def from_density_matrix(rho) -> BellDiagonalState:
    """Recover (c1, c2, c3) via c_j = Tr[rho σ_j⊗σ_j]."""
    rho = check_density_matrix(rho)
    off = np.abs(rho[~_PATTERN]).max()
    if off > PATTERN_ATOL:
        raise NotBellDiagonal(f"entry outside the Bell-diagonal pattern of size {off:.3g}")
    # the pattern alone also admits unequal diagonal pairs and complex corners
    if (
        abs(rho[0, 0] - rho[3, 3]) > PATTERN_ATOL
        or abs(rho[1, 1] - rho[2, 2]) > PATTERN_ATOL
        or abs(rho[0, 3].imag) > PATTERN_ATOL
        or abs(rho[1, 2].imag) > PATTERN_ATOL
    ):
        raise NotBellDiagonal("matrix has local Bloch components or complex correlations")
    c1 = 2 * (rho[0, 3].real + rho[1, 2].real)
    c2 = 2 * (rho[1, 2].real - rho[0, 3].real)
    c3 = (rho[0, 0] + rho[3, 3] - rho[1, 1] - rho[2, 2]).real
    return BellDiagonalState(c1, c2, c3)


def is_separable(s: BellDiagonalState) -> bool:
    return abs(s.c1) + abs(s.c2) + abs(s.c3) <= 1 + ATOL


def is_incoherent_state(s: BellDiagonalState) -> bool:
    return abs(s.c1) < ATOL and abs(s.c2) < ATOL


def correlations_from_eigenvalues(lam) -> np.ndarray:
    """Inverse of `eigenvalues`: c = SIGNS^T λ (the sign rows are orthogonal)."""
    return np.asarray(lam, dtype=np.float64) @ SIGNS


def random_correlations(n: int, seed: int) -> np.ndarray:
    """(n, 3) correlation vectors drawn uniformly from the tetrahedron."""
    rng = np.random.default_rng(seed)
    lam = rng.dirichlet(np.ones(4), size=n)
    return correlations_from_eigenvalues(lam)


def random_state(seed: int) -> BellDiagonalState:
    return BellDiagonalState(*random_correlations(1, seed)[0])


def random_states(n: int, seed: int) -> list[BellDiagonalState]:
    return [BellDiagonalState(*c) for c in random_correlations(n, seed)]
