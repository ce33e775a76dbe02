"""Rays, sampled measure fields and level sets inside the tetrahedron."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from skimage import measure as skmeasure

from .measures import evaluate
from .qstate import ATOL, SIGNS, BellDiagonalState, inside

LN2 = np.log(2.0)


class DegenerateRay(ValueError):
    pass


class OutsideDomain(ValueError):
    pass


class WrongFamily(ValueError):
    pass


class EmptyLevelSet(ValueError):
    pass


def ray_t_max(direction) -> float:
    """Largest t with t·direction inside the tetrahedron (λ_ab >= 0 constraints)."""
    d = np.asarray(direction, dtype=np.float64)
    slopes = SIGNS @ d
    neg = slopes[slopes < 0]
    return float(np.min(-1.0 / neg))  # a nonzero d always has a negative slope


@dataclass(frozen=True)
class Ray:
    """Origin ray in c-space.

    ``family`` is None for a generic direction, ``"case2"`` for c1 = m·c2 in the
    c3 = 0 plane (params = (m,)), or ``"case3"`` for c1 = a·c3, c2 = b·c3
    (params = (a, b)). Family rays are parameterized by their anchor
    coordinate (c2 or c3 respectively).
    """

    direction: tuple
    t_max: float
    family: str | None = None
    params: tuple = ()

    @classmethod
    def through(cls, direction) -> "Ray":
        d = np.asarray(direction, dtype=np.float64)
        norm = np.linalg.norm(d)
        if d.shape != (3,) or not np.isfinite(norm) or norm == 0:
            raise DegenerateRay(f"cannot build a ray along {direction!r}")
        d = d / norm
        return cls(tuple(float(x) for x in d), ray_t_max(d))

    @classmethod
    def case2(cls, m: float, sign: float = 1.0) -> "Ray":
        base = cls.through(np.sign(sign) * np.array([m, 1.0, 0.0]))
        return cls(base.direction, base.t_max, "case2", (float(m),))

    @classmethod
    def case3(cls, a: float, b: float, sign: float = 1.0) -> "Ray":
        base = cls.through(np.sign(sign) * np.array([a, b, 1.0]))
        return cls(base.direction, base.t_max, "case3", (float(a), float(b)))

    def point(self, t: float) -> np.ndarray:
        return float(t) * np.asarray(self.direction)

    def anchor_point(self, x: float) -> np.ndarray:
        """Point whose anchor coordinate equals x (family rays only)."""
        if self.family == "case2":
            (m,) = self.params
            return np.array([m * x, x, 0.0])
        if self.family == "case3":
            a, b = self.params
            return np.array([a * x, b * x, x])
        raise WrongFamily("generic rays have no anchor coordinate")


def ray_points(ray: Ray, n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("need at least two samples on a ray")
    if np.linalg.norm(ray.direction) == 0:
        raise DegenerateRay("zero direction")
    t = np.linspace(0.0, ray.t_max, n)
    return t[:, None] * np.asarray(ray.direction)[None, :]


def ray_states(ray: Ray, n: int) -> list[BellDiagonalState]:
    return [BellDiagonalState(*c) for c in ray_points(ray, n)]


# relative entropy of coherence along c2 = m·c1, c3 = 0

def _cre_ray_terms(m: float, c1: float):
    slopes = np.array([-1 - m, -1 + m, 1 - m, 1 + m])
    args = 1 + slopes * c1
    if np.any(args <= 0) or not np.all(np.isfinite(args)):
        raise OutsideDomain(f"({c1}, {m * c1}, 0) is not strictly inside the tetrahedron")
    return slopes, args


def cre_first_derivative(m: float, c1: float) -> float:
    slopes, args = _cre_ray_terms(m, c1)
    return float(np.sum(slopes * np.log2(args)) / 4)


def cre_second_derivative(m: float, c1: float) -> float:
    slopes, args = _cre_ray_terms(m, c1)
    return float(np.sum(slopes**2 / args) / (4 * LN2))


def geo_discord_ray_piecewise(ray: Ray, t: float) -> float:
    """Geometric discord on a family ray, by branch of the largest |c_j|.

    ``t`` is the anchor coordinate: c2 on a case2 ray, c3 on a case3 ray.
    """
    if ray.family not in ("case2", "case3"):
        raise WrongFamily(f"ray family {ray.family!r} has no piecewise form")
    c = ray.anchor_point(t)
    BellDiagonalState(*c)
    branch = int(np.argmax(np.abs(c)))
    if ray.family == "case2":
        (m,) = ray.params
        coeffs = (1.0, m * m, m * m + 1.0)  # c = c1, c = c2, c = c3
    else:
        a, b = ray.params
        coeffs = (b * b + 1.0, a * a + 1.0, a * a + b * b)
    return coeffs[branch] * t * t / 4


@dataclass(frozen=True)
class RayReport:
    t: np.ndarray  # from t_max down to 0
    values: np.ndarray
    violations: tuple  # indices i where values[i + 1] > values[i] + tol

    @property
    def monotone(self) -> bool:
        return not self.violations


def ray_monotonicity_report(measure, ray: Ray, n: int, tol: float = 1e-10) -> RayReport:
    """Walk from the boundary to the origin; the measure must not increase."""
    if n < 3:
        raise ValueError("need at least three samples")
    pts = ray_points(ray, n)[::-1]
    values = evaluate(measure, pts)
    rises = np.nonzero(np.diff(values) > tol)[0]
    t = np.linspace(0.0, ray.t_max, n)[::-1]
    return RayReport(t, values, tuple(int(i) for i in rises))


# sampled fields

@dataclass(frozen=True)
class ScalarField3:
    axes: tuple  # three 1-d coordinate arrays
    values: np.ndarray  # NaN outside the tetrahedron
    mask: np.ndarray  # True at valid nodes
    measure: str = ""

    @property
    def dims(self) -> tuple:
        return self.values.shape

    @property
    def bounds(self) -> tuple:
        return tuple((float(a[0]), float(a[-1])) for a in self.axes)

    @property
    def spacing(self) -> tuple:
        return tuple(float(a[1] - a[0]) for a in self.axes)


@dataclass(frozen=True)
class SliceField:
    """Measure sampled on the plane c3 = const."""

    axes: tuple  # c1 and c2 coordinates
    c3: float
    values: np.ndarray
    mask: np.ndarray
    measure: str = ""

    @property
    def spacing(self) -> tuple:
        return tuple(float(a[1] - a[0]) for a in self.axes)


DEFAULT_BOUNDS = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))


def _grid_axes(dims, bounds):
    return tuple(np.linspace(lo, hi, n) for n, (lo, hi) in zip(dims, bounds))


def sample_field(measure, dims=(81, 81, 81), bounds=DEFAULT_BOUNDS) -> ScalarField3:
    dims = tuple(int(n) for n in dims)
    if len(dims) != 3 or min(dims) < 2:
        raise ValueError("need at least two nodes per axis")
    axes = _grid_axes(dims, bounds)
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    mask = inside(grid)
    values = np.full(dims, np.nan)
    values[mask] = evaluate(measure, grid[mask])
    return ScalarField3(axes, values, mask, measure if isinstance(measure, str) else "")


def sample_slice(measure, c3: float, dims=(201, 201), bounds=DEFAULT_BOUNDS[:2]) -> SliceField:
    dims = tuple(int(n) for n in dims)
    axes = _grid_axes(dims, bounds)
    g1, g2 = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([g1, g2, np.full_like(g1, c3)], axis=-1)
    mask = inside(grid)
    values = np.full(dims, np.nan)
    values[mask] = evaluate(measure, grid[mask])
    return SliceField(axes, float(c3), values, mask, measure if isinstance(measure, str) else "")


def _check_level(values, mask, level):
    valid = values[mask]
    if valid.size == 0 or not valid.min() < level < valid.max():
        raise EmptyLevelSet(f"level {level} is outside the sampled range")


def _cell_mask(mask: np.ndarray) -> np.ndarray:
    """Node mask marking cell origins whose every corner is valid."""
    out = mask.copy()
    for axis in range(mask.ndim):
        shifted = np.zeros_like(out)
        idx = [slice(None)] * mask.ndim
        src = [slice(None)] * mask.ndim
        idx[axis] = slice(0, -1)
        src[axis] = slice(1, None)
        shifted[tuple(idx)] = out[tuple(src)]
        out &= shifted
    return out


def _index_to_coords(index_pts, axes):
    out = np.empty_like(index_pts, dtype=np.float64)
    for k, ax in enumerate(axes):
        out[:, k] = np.interp(index_pts[:, k], np.arange(ax.size), ax)
    return out


def contour_slice(field: SliceField, level: float) -> list[np.ndarray]:
    """Marching-squares polylines at `level`, as (k, 3) arrays of c-space points."""
    _check_level(field.values, field.mask, level)
    filled = np.where(field.mask, field.values, level)
    raw = skmeasure.find_contours(filled, level, mask=field.mask)
    lines = []
    for poly in raw:
        xy = _index_to_coords(poly, field.axes)
        lines.append(np.column_stack([xy, np.full(len(xy), field.c3)]))
    if not lines:
        raise EmptyLevelSet(f"no contour at level {level}")
    return lines


@dataclass(frozen=True)
class IsosurfaceMesh:
    vertices: np.ndarray  # (V, 3) c-space points
    triangles: np.ndarray  # (T, 3) zero-based vertex indices
    level: float


def isosurface(field: ScalarField3, level: float) -> IsosurfaceMesh:
    """Marching-cubes mesh of the level set restricted to cells fully inside the tetrahedron.

    Uses the Lewiner variant, which resolves face and interior ambiguities
    with topology tests so the mesh stays consistent near thin regions.
    """
    _check_level(field.values, field.mask, level)
    cells = _cell_mask(field.mask)
    if not cells.any():
        raise EmptyLevelSet("no grid cell lies inside the tetrahedron")
    filled = np.where(field.mask, field.values, level)
    try:
        verts, faces, _, _ = skmeasure.marching_cubes(
            filled, level, method="lewiner", allow_degenerate=False
        )
    except (RuntimeError, ValueError) as exc:
        raise EmptyLevelSet(str(exc)) from exc
    # keep triangles whose cell (floor of the centroid index) has all corners valid
    owner = np.floor(verts[faces].mean(axis=1)).astype(np.int64)
    owner = np.clip(owner, 0, np.array(cells.shape) - 2)
    faces = faces[cells[owner[:, 0], owner[:, 1], owner[:, 2]]]
    if len(faces) == 0:
        raise EmptyLevelSet(f"no surface at level {level}")
    used, faces = np.unique(faces, return_inverse=True)
    faces = faces.reshape(-1, 3)
    verts = verts[used]
    coords = _index_to_coords(verts, field.axes)
    return IsosurfaceMesh(coords, faces.astype(np.int64), float(level))


def polyline_ray_crossings(polylines, angle: float) -> np.ndarray:
    """Distances from the slice origin at which polylines cross the in-plane ray at `angle`."""
    u = np.array([np.cos(angle), np.sin(angle)])
    radii = []
    for line in polylines:
        p = line[:, :2]
        a, b = p[:-1], p[1:]
        d = b - a
        # solve a + s d = r u
        det = d[:, 0] * (-u[1]) - d[:, 1] * (-u[0])
        ok = np.abs(det) > 1e-15
        s = np.where(ok, (-a[:, 0] * (-u[1]) + a[:, 1] * (-u[0])) / np.where(ok, det, 1), -1)
        r = np.where(ok, (d[:, 0] * (-a[:, 1]) - d[:, 1] * (-a[:, 0])) / np.where(ok, det, 1), -1)
        hit = ok & (s >= 0) & (s <= 1) & (r > 0)
        radii.extend(r[hit].tolist())
    return np.array(sorted(radii))


def distance_to_axes(points) -> np.ndarray:
    """Distance of each point to the nearest coordinate axis, shape (n,)."""
    p = np.asarray(points, dtype=np.float64)
    sq = p**2
    total = sq.sum(axis=1)
    return np.sqrt(np.min(total[:, None] - sq, axis=1).clip(0.0))


def on_boundary_or_inside(points, atol: float = ATOL) -> np.ndarray:
    return inside(points, atol)
