"""Do two measures order Bell-diagonal states the same way?

Two tests are provided. The pair test looks for states that one measure
calls equal while the other separates them; finding one settles that the
orderings differ. The sequence test sorts a batch of states by the first
measure and reports every place where the second measure goes down.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .geometry import Ray, ray_points
from .measures import MEASURES, evaluate, measure_function
from .qstate import SIGNS, BellDiagonalState, inside, random_correlations

EQUAL_TOL = 1e-9
DIFFER_TOL = 1e-6


def _name(measure) -> str:
    if isinstance(measure, str):
        measure_function(measure)
        return measure
    for key, fn in MEASURES.items():
        if fn is measure:
            return key
    return getattr(measure, "__name__", "custom")


def _value(measure, s: BellDiagonalState) -> float:
    return float(evaluate(measure, s.c))


@dataclass(frozen=True)
class OrderingVerdict:
    same_ordering: bool
    method: str  # "pair_search" or "sequence_scan"
    measure_a: str
    measure_b: str
    counterexample: tuple | None = None  # (s1, s2)
    values: dict | None = None  # {"a": (A(s1), A(s2)), "b": (B(s1), B(s2))}
    checked: int = 0

    def to_dict(self) -> dict:
        out = {
            "same_ordering": self.same_ordering,
            "method": self.method,
            "measure_a": self.measure_a,
            "measure_b": self.measure_b,
            "checked": self.checked,
            "counterexample": None,
            "values": None,
        }
        if self.counterexample is not None:
            out["counterexample"] = [s.to_dict() for s in self.counterexample]
            out["values"] = {k: list(v) for k, v in self.values.items()}
        return out


def _sign(x: float) -> int:
    return 0 if abs(x) < EQUAL_TOL else (1 if x > 0 else -1)


def pair_check(measure_a, measure_b, s1: BellDiagonalState, s2: BellDiagonalState) -> OrderingVerdict:
    a = (_value(measure_a, s1), _value(measure_a, s2))
    b = (_value(measure_b, s1), _value(measure_b, s2))
    same = _sign(a[0] - a[1]) == _sign(b[0] - b[1])
    return OrderingVerdict(
        same_ordering=same,
        method="pair_search",
        measure_a=_name(measure_a),
        measure_b=_name(measure_b),
        counterexample=None if same else (s1, s2),
        values=None if same else {"a": a, "b": b},
        checked=1,
    )


def _equal_partners(fa, start, direction, t_lo, t_hi, n_grid=64):
    """Points start + τ·direction (τ != 0) where fa equals fa(start).

    Exact ties on the τ grid are returned directly; sign changes are polished
    with Brent's method.
    """
    target = fa(start[None, :])[0]
    taus = np.linspace(t_lo, t_hi, n_grid)
    taus = taus[np.abs(taus) > 1e-6]
    pts = start[None, :] + taus[:, None] * direction[None, :]
    g = fa(pts) - target
    out = [taus[i] for i in np.nonzero(np.abs(g) < EQUAL_TOL)[0]]
    for i in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]:
        if taus[i] < 0 < taus[i + 1]:
            continue
        root = brentq(lambda t: fa((start + t * direction)[None, :])[0] - target,
                      taus[i], taus[i + 1], xtol=1e-14)
        out.append(root)
    return [start + t * direction for t in out]


def _segment_in_tetrahedron(start, direction):
    """τ-interval keeping start + τ·direction inside the tetrahedron."""
    base = 1.0 + SIGNS @ start  # 4·λ at start, must stay >= 0
    slope = SIGNS @ direction
    lo, hi = -np.inf, np.inf
    for b0, s in zip(base, slope):
        if s > 0:
            lo = max(lo, -b0 / s)
        elif s < 0:
            hi = min(hi, -b0 / s)
    return lo, hi


def find_counterexample(
    measure_a,
    measure_b,
    n_samples: int = 10_000,
    seed: int = 0,
    ray: Ray | None = None,
) -> OrderingVerdict:
    """Search for a pair equal under measure_a but different under measure_b.

    Each sample is a random state; partners are sought along lines through
    it, axis-parallel lines first and then one random direction. When `ray`
    is given, both states are confined to that ray. The lowest sample index
    that yields a violation wins, so results are deterministic in `seed`.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    fa, fb = measure_function(measure_a), measure_function(measure_b)
    names = (_name(measure_a), _name(measure_b))
    rng = np.random.default_rng(seed)

    if ray is not None:
        d = np.asarray(ray.direction)
        ts = rng.uniform(0.0, ray.t_max, n_samples)
        starts = ts[:, None] * d[None, :]
        line_sets = [[d] for _ in range(n_samples)]
    else:
        starts = random_correlations(n_samples, seed)
        axes = list(np.eye(3))
        extra = rng.normal(size=(n_samples, 3))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        line_sets = [axes + [extra[i]] for i in range(n_samples)]

    for i in range(n_samples):
        start = starts[i]
        for direction in line_sets[i]:
            if ray is not None:
                lo, hi = -ts[i], ray.t_max - ts[i]
            else:
                lo, hi = _segment_in_tetrahedron(start, direction)
            if not hi - lo > 1e-9:
                continue
            for partner in _equal_partners(fa, start, direction, lo, hi):
                if not inside(partner):
                    continue
                a1, a2 = fa(start[None, :])[0], fa(partner[None, :])[0]
                if abs(a1 - a2) >= EQUAL_TOL:
                    continue
                b1, b2 = fb(start[None, :])[0], fb(partner[None, :])[0]
                if abs(b1 - b2) > DIFFER_TOL:
                    s1, s2 = BellDiagonalState(*start), BellDiagonalState(*partner)
                    values = {
                        "a": (float(a1), float(a2)),
                        "b": (float(b1), float(b2)),
                    }
                    return OrderingVerdict(False, "pair_search", *names, (s1, s2), values, i + 1)
    return OrderingVerdict(True, "pair_search", *names, checked=n_samples)


@dataclass(frozen=True)
class SortedSequenceReport:
    states: np.ndarray = field(repr=False)  # (n, 3), sorted by measure_a
    values_a: np.ndarray = field(repr=False)
    values_b: np.ndarray = field(repr=False)
    violations: tuple = ()  # i where values_b[i + 1] < values_b[i] - tol
    measure_a: str = ""
    measure_b: str = ""

    def to_dict(self) -> dict:
        return {
            "measure_a": self.measure_a,
            "measure_b": self.measure_b,
            "n_states": int(len(self.values_a)),
            "violations": list(self.violations),
        }


def _as_array(states) -> np.ndarray:
    if isinstance(states, np.ndarray):
        return np.asarray(states, dtype=np.float64).reshape(-1, 3)
    return np.array([s.c if isinstance(s, BellDiagonalState) else s for s in states], dtype=np.float64)


def sequence_scan(measure_a, measure_b, states, tol: float = EQUAL_TOL) -> SortedSequenceReport:
    c = _as_array(states)
    if len(c) < 2:
        raise ValueError("need at least two states")
    va = evaluate(measure_a, c)
    # ascending in A, ties broken by (c1, c2, c3); lexsort's last key is primary
    order = np.lexsort((c[:, 2], c[:, 1], c[:, 0], va))
    c, va = c[order], va[order]
    vb = evaluate(measure_b, c)
    descents = np.nonzero(np.diff(vb) < -tol)[0]
    return SortedSequenceReport(c, va, vb, tuple(int(i) for i in descents),
                                _name(measure_a), _name(measure_b))


def ray_ordering_check(ray: Ray, measure_a, measure_b, n: int = 64) -> OrderingVerdict:
    if n < 3:
        raise ValueError("need at least three ray samples")
    pts = ray_points(ray, n)
    forward = sequence_scan(measure_a, measure_b, pts)
    backward = sequence_scan(measure_b, measure_a, pts)
    same = not forward.violations and not backward.violations
    return OrderingVerdict(same, "sequence_scan", _name(measure_a), _name(measure_b), checked=n)
