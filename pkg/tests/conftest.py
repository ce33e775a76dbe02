"""Independent reference computations shared by the tests.

Nothing here imports the package's numerical code: density matrices come from
the Pauli expansion and entropies from dense eigendecompositions.
"""

import numpy as np
import pytest

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def rho_from_paulis(c):
    r = np.kron(I2, I2)
    for cj, p in zip(c, (X, Y, Z)):
        r = r + cj * np.kron(p, p)
    return r / 4


def entropy_bits(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 1e-300]
    return float(-(p * np.log2(p)).sum())


def vn_entropy(r):
    return entropy_bits(np.clip(np.linalg.eigvalsh(r), 0, None))


def reduced_b(r):
    out = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        out += r[2 * a:2 * a + 2, 2 * a:2 * a + 2]
    return out


def dense_dirichlet_tetrahedron(n, seed):
    """Rejection sampling of the cube: a different route to uniform samples."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        c = rng.uniform(-1, 1, 3)
        lam = [(1 + (-1) ** a * c[0] - (-1) ** (a + b) * c[1] + (-1) ** b * c[2]) / 4
               for a in (0, 1) for b in (0, 1)]
        if min(lam) >= 0:
            out.append(c)
    return np.array(out)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _partial_trace_a(r):
    return np.einsum("abac->bc", r.reshape(2, 2, 2, 2))


def discord_nelder_mead(c):
    """Discord of the Bell-diagonal state c by direct minimization over
    projective measurements on A, restarted from the three axes."""
    from scipy.optimize import minimize

    r = rho_from_paulis(c)
    base = vn_entropy(reduced_b(r)) - vn_entropy(r)

    def cond(x):
        th, ph = x
        v = (np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th))
        ns = v[0] * X + v[1] * Y + v[2] * Z
        total = 0.0
        for sign in (1, -1):
            p = np.kron((I2 + sign * ns) / 2, I2)
            blk = _partial_trace_a(p @ r @ p)
            w = np.trace(blk).real
            if w > 1e-15:
                total += w * vn_entropy(blk / w)
        return total

    starts = [(0.1, 0.0), (np.pi / 2, 0.0), (np.pi / 2, np.pi / 2), (1.0, 1.0)]
    best = min(
        minimize(cond, x0, method="Nelder-Mead", options=dict(xatol=1e-12, fatol=1e-15)).fun
        for x0 in starts
    )
    return base + best
