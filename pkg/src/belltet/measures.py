"""Coherence and discord measures for Bell-diagonal states.

Every measure comes twice: a closed form in the correlation vector, vectorized
over arrays of shape (..., 3), and an oracle that works from the 4x4 density
matrix using only the defining expression (entropies of numerically computed
eigenvalues, explicit minimization over measurements or classical-quantum
states). Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from .qstate import ATOL, IDENTITY2, PAULIS, BellDiagonalState, density_matrix, eigenvalues

LN2 = np.log(2.0)


class InvalidDistribution(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


def _clamp(x):
    """Zero out tiny negative noise; leaves genuinely negative values alone."""
    x = np.asarray(x, dtype=np.float64)
    return np.where((x < 0) & (x >= -ATOL), 0.0, x)


def _entropy_bits(p, axis=-1):
    """-Σ p log2 p with 0 log 0 = 0, no validation."""
    return -np.sum(xlogy(p, p), axis=axis) / LN2


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistribution("expected a non-empty 1-d probability vector")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise InvalidDistribution(f"not a probability distribution: {p}")
    return float(abs(_entropy_bits(p)))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits from the numerically computed spectrum of `rho`."""
    lam = np.clip(np.linalg.eigvalsh(np.asarray(rho)), 0.0, None)
    return float(abs(_entropy_bits(lam)))


def partial_trace_a(rho) -> np.ndarray:
    """Reduced state of B for a two-qubit matrix (A is the first factor)."""
    return np.einsum("abac->bc", np.asarray(rho).reshape(2, 2, 2, 2))


def partial_trace_b(rho) -> np.ndarray:
    return np.einsum("abcb->ac", np.asarray(rho).reshape(2, 2, 2, 2))


# ---------------------------------------------------------------------------
# closed forms, vectorized over (..., 3)


def coherence_l1_c(c) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    c1, c2 = c[..., 0], c[..., 1]
    return 0.5 * np.abs(c1 - c2) + 0.5 * np.abs(c1 + c2)


def _two_point_term(x) -> np.ndarray:
    """-Σ_± (1 ± x)/2 · log2((1 ± x)/4)."""
    hi, lo = (1 + x) / 2, (1 - x) / 2
    return -(xlogy(hi, hi / 2) + xlogy(lo, lo / 2)) / LN2


def _spectrum_entropy(c) -> np.ndarray:
    lam = np.clip(eigenvalues(c), 0.0, 1.0)
    return _entropy_bits(lam)


def coherence_rel_entropy_c(c) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    value = -_spectrum_entropy(c) + _two_point_term(c[..., 2])
    return _clamp(value)


def max_abs_correlation(c) -> np.ndarray:
    return np.max(np.abs(np.asarray(c, dtype=np.float64)), axis=-1)


def discord_c(c) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    value = -_spectrum_entropy(c) + _two_point_term(max_abs_correlation(c))
    return _clamp(value)


def geometric_discord_c(c) -> np.ndarray:
    sq = np.asarray(c, dtype=np.float64) ** 2
    return _clamp((sq.sum(axis=-1) - sq.max(axis=-1)) / 4)


MEASURES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "c_l1": coherence_l1_c,
    "c_re": coherence_rel_entropy_c,
    "discord": discord_c,
    "geo_discord": geometric_discord_c,
}


def measure_function(measure) -> Callable[[np.ndarray], np.ndarray]:
    """Resolve a measure name (or a vectorized callable) to its function."""
    if callable(measure):
        return measure
    try:
        return MEASURES[measure]
    except KeyError:
        raise KeyError(f"unknown measure {measure!r}; choose from {sorted(MEASURES)}") from None


def evaluate(measure, c) -> np.ndarray:
    return measure_function(measure)(np.asarray(c, dtype=np.float64))


# ---------------------------------------------------------------------------
# per-state API


@dataclass(frozen=True)
class MeasureSet:
    c_l1: float
    c_re: float
    discord: float
    geo_discord: float

    def to_dict(self) -> dict:
        return {
            "c_l1": self.c_l1,
            "c_re": self.c_re,
            "discord": self.discord,
            "geo_discord": self.geo_discord,
        }


@dataclass(frozen=True)
class DiscordBreakdown:
    value: float
    mutual_information: float
    classical_correlation: float
    max_abs_c: float
    argmax_index: int  # 0, 1, 2 for c1, c2, c3


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement on A along the Bloch direction (theta, phi)."""

    theta: float
    phi: float

    @property
    def direction(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        n_sigma = sum(n * p for n, p in zip(self.direction, PAULIS))
        return (IDENTITY2 + n_sigma) / 2, (IDENTITY2 - n_sigma) / 2


def coherence_l1(s: BellDiagonalState) -> float:
    return float(coherence_l1_c(s.c))


def coherence_rel_entropy(s: BellDiagonalState) -> float:
    return float(coherence_rel_entropy_c(s.c))


def geometric_discord(s: BellDiagonalState) -> float:
    return float(geometric_discord_c(s.c))


def discord(s: BellDiagonalState) -> DiscordBreakdown:
    c = s.c
    value = float(discord_c(c))
    # reduced states are maximally mixed, so I(A:B) = 2 - S(AB)
    mutual = float(2.0 - _spectrum_entropy(c))
    idx = int(np.argmax(np.abs(c)))
    return DiscordBreakdown(
        value=value,
        mutual_information=mutual,
        classical_correlation=mutual - value,
        max_abs_c=float(abs(c[idx])),
        argmax_index=idx,
    )


def measure_all(s: BellDiagonalState) -> MeasureSet:
    return MeasureSet(
        c_l1=coherence_l1(s),
        c_re=coherence_rel_entropy(s),
        discord=discord(s).value,
        geo_discord=geometric_discord(s),
    )


# ---------------------------------------------------------------------------
# oracles


def coherence_l1_oracle(rho) -> float:
    rho = np.asarray(rho)
    return float(np.abs(rho).sum() - np.abs(np.diag(rho)).sum())


def coherence_rel_entropy_oracle(rho) -> float:
    rho = np.asarray(rho)
    dephased = np.diag(np.diag(rho))
    return float(_clamp(von_neumann_entropy(dephased) - von_neumann_entropy(rho)))


def _bloch_directions(theta, phi) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _projector_pairs(theta, phi) -> np.ndarray:
    """Projectors (..., 2, 2, 2) for outcomes ± along each direction."""
    n = _bloch_directions(theta, phi)
    n_sigma = np.einsum("...k,kij->...ij", n, np.array(PAULIS))
    return np.stack([(IDENTITY2 + n_sigma) / 2, (IDENTITY2 - n_sigma) / 2], axis=-3)


def _hermitian2_eigvals(m) -> np.ndarray:
    """Eigenvalues of a stack of 2x2 Hermitian matrices, shape (..., 2)."""
    a, d = m[..., 0, 0].real, m[..., 1, 1].real
    b = m[..., 0, 1]
    mean = (a + d) / 2
    rad = np.sqrt(((a - d) / 2) ** 2 + np.abs(b) ** 2)
    return np.stack([mean + rad, mean - rad], axis=-1)


def _conditional_blocks(rho, proj) -> np.ndarray:
    """Unnormalized B states Tr_A[(Π⊗I) rho] for projectors of shape (..., 2, 2)."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("...aj,jbac->...bc", proj, r)


def _conditional_entropy(rho, theta, phi) -> np.ndarray:
    """S(B|{Π_±}) = Σ_± p_± S(rho_B|±) for each (theta, phi)."""
    blocks = _conditional_blocks(rho, _projector_pairs(theta, phi))
    ev = np.clip(_hermitian2_eigvals(blocks), 0.0, None)
    p = ev.sum(axis=-1)
    # p·S(ev/p) = -Σ ev log ev + p log p
    per_outcome = (-np.sum(xlogy(ev, ev), axis=-1) + xlogy(p, p)) / LN2
    return per_outcome.sum(axis=-1)


def _refine_angles(objective, theta0, phi0, step_theta, step_phi, sweeps=30, tol=1e-13):
    """Coordinate-wise bounded Brent refinement around a grid point."""
    theta, phi = float(theta0), float(phi0)
    best = float(objective(theta, phi))
    for _ in range(sweeps):
        previous = best
        lo, hi = max(0.0, theta - step_theta), min(np.pi, theta + step_theta)
        res = minimize_scalar(lambda t: objective(t, phi), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun < best:
            theta, best = float(res.x), float(res.fun)
        res = minimize_scalar(lambda f: objective(theta, f), bounds=(phi - step_phi, phi + step_phi),
                              method="bounded", options={"xatol": 1e-12})
        if res.fun < best:
            phi, best = float(res.x), float(res.fun)
        if previous - best < tol:
            break
    return theta, phi, best


def _angle_grid(grid_n: int):
    theta = np.linspace(0.0, np.pi, grid_n)
    phi = np.linspace(0.0, 2 * np.pi, grid_n, endpoint=False)
    return np.meshgrid(theta, phi, indexing="ij")


def _best_grid_points(values, tt, pp, k):
    flat = values.ravel()
    # lexicographic tie-break on (theta, phi): lexsort's last key is primary
    order = np.lexsort((pp.ravel(), tt.ravel(), flat))
    return [(tt.ravel()[i], pp.ravel()[i]) for i in order[:k]]


def discord_oracle(rho, grid_n: int = 64, return_basis: bool = False):
    """Discord by direct minimization of I(A:B) - J(B|{Π}) over projective
    measurements on A: a grid_n x grid_n (theta, phi) grid followed by local
    refinement of the best few grid points.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    rho = np.asarray(rho, dtype=np.complex128)
    s_a = von_neumann_entropy(partial_trace_b(rho))
    s_b = von_neumann_entropy(partial_trace_a(rho))
    s_ab = von_neumann_entropy(rho)
    mutual = s_a + s_b - s_ab

    def gap(theta, phi):
        classical = s_b - _conditional_entropy(rho, theta, phi)
        return mutual - classical

    tt, pp = _angle_grid(grid_n)
    values = gap(tt, pp)
    step_t, step_p = np.pi / (grid_n - 1), 2 * np.pi / grid_n
    best = (np.inf, 0.0, 0.0)
    for theta0, phi0 in _best_grid_points(values, tt, pp, 4):
        theta, phi, val = _refine_angles(lambda t, f: float(gap(t, f)), theta0, phi0,
                                         2 * step_t, 2 * step_p)
        if val < best[0]:
            best = (val, theta, phi)
    value = float(_clamp(best[0]))
    if return_basis:
        return value, MeasurementBasis(best[1], best[2] % (2 * np.pi))
    return value


def _cq_blocks_lstsq(rho, theta, phi):
    """Best blocks X_± (so that χ = Σ Π_± ⊗ X_±) by linear least squares.

    For a fixed measurement basis the distance ||rho - χ||² is quadratic in the
    eight real parameters of the two Hermitian blocks; the weights p_± and the
    conditional states ρ_± are read off as X_± = p_± ρ_±.
    """
    proj = _projector_pairs(theta, phi)
    herm_basis = [IDENTITY2, *PAULIS]
    cols = []
    for s in range(2):
        for h in herm_basis:
            cols.append(np.kron(proj[s], h).ravel())
    design = np.array(cols).T  # (16, 8), complex
    target = np.asarray(rho).ravel()
    a = np.concatenate([design.real, design.imag])
    b = np.concatenate([target.real, target.imag])
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    blocks = np.einsum("sk,kij->sij", coef.reshape(2, 4), np.array(herm_basis)) / 1.0
    return proj, blocks


def cq_state(theta, phi, weights, bloch_vectors) -> np.ndarray:
    """χ = Σ_a p_a Π_a ⊗ ρ_a for a measurement direction on A and two qubit states on B."""
    proj = _projector_pairs(theta, phi)
    chi = np.zeros((4, 4), dtype=np.complex128)
    for s in range(2):
        r = bloch_vectors[s]
        rho_b = (IDENTITY2 + sum(x * p for x, p in zip(r, PAULIS))) / 2
        chi += weights[s] * np.kron(proj[s], rho_b)
    return chi


def _hs_distance_sq(rho, chi) -> float:
    d = np.asarray(rho) - chi
    return float(np.real(np.trace(d @ d)))


def _cq_distance(rho, theta, phi) -> tuple[float, np.ndarray]:
    proj, blocks = _cq_blocks_lstsq(rho, theta, phi)
    # keep χ a genuine state: project each block onto the PSD cone
    psd = []
    for x in blocks:
        w, v = np.linalg.eigh(x)
        psd.append((v * np.clip(w, 0.0, None)) @ v.conj().T)
    chi = sum(np.kron(proj[s], psd[s]) for s in range(2))
    tr = np.trace(chi).real
    if tr > 0:
        chi = chi / tr
    return _hs_distance_sq(rho, chi), chi


def geometric_discord_oracle(rho, iterations: int = 200, grid_n: int = 24) -> float:
    """Squared Hilbert-Schmidt distance from `rho` to the nearest classical-quantum state.

    Classical-quantum states are Σ_a p_a |a><a| ⊗ ρ_a for an orthonormal basis
    {|a>} of A. The basis direction is searched on a (theta, phi) grid and then
    refined; for each direction the weights and conditional states are fitted.
    """
    rho = np.asarray(rho, dtype=np.complex128)

    def objective(theta, phi):
        return _cq_distance(rho, theta, phi)[0]

    tt, pp = _angle_grid(grid_n)
    values = np.vectorize(objective)(tt, pp)
    step_t, step_p = np.pi / (grid_n - 1), 2 * np.pi / grid_n
    best = np.inf
    for theta0, phi0 in _best_grid_points(values, tt, pp, 3):
        theta, phi, previous = float(theta0), float(phi0), float(objective(theta0, phi0))
        change = np.inf
        for _ in range(iterations):
            theta, phi, val = _refine_angles(objective, theta, phi, 2 * step_t, 2 * step_p, sweeps=1)
            change = previous - val
            previous = val
            if change < 1e-13:
                break
        if change > 1e-9:
            raise NoConvergence(f"objective still moving by {change:.3g} after {iterations} sweeps")
        best = min(best, previous)
    return float(_clamp(best))


def state_oracles(s: BellDiagonalState, grid_n: int = 64) -> MeasureSet:
    """All four oracle values for one state."""
    rho = density_matrix(s)
    return MeasureSet(
        c_l1=coherence_l1_oracle(rho),
        c_re=coherence_rel_entropy_oracle(rho),
        discord=discord_oracle(rho, grid_n),
        geo_discord=geometric_discord_oracle(rho),
    )
