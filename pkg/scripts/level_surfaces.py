"""Level sets of all four measures: contour slices and 3D meshes.

For each measure writes contour polylines on a few c3 slices (CSV) and, for
the two discord measures, an isosurface mesh (OBJ with a JSON sidecar).

    python3 scripts/level_surfaces.py --level 0.03 --dims 81
"""

import argparse
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from belltet import geometry, io
from belltet.measures import evaluate


@dataclass
class LevelConfig:
    level: float = 0.03
    dims: int = 81
    slice_dims: int = 201
    slices: list = field(default_factory=lambda: [-0.4, -0.2, 0.0, 0.2, 0.4])
    contour_measures: list = field(default_factory=lambda: ["c_l1", "c_re", "discord", "geo_discord"])
    mesh_measures: list = field(default_factory=lambda: ["discord", "geo_discord"])
    out: str = "results/levels"


def run(cfg: LevelConfig) -> dict:
    out = Path(cfg.out)
    summary = {"config": asdict(cfg), "contours": [], "meshes": []}
    for name in cfg.contour_measures:
        for c3 in cfg.slices:
            field_ = geometry.sample_slice(name, c3, (cfg.slice_dims,) * 2)
            try:
                lines = geometry.contour_slice(field_, cfg.level)
            except geometry.EmptyLevelSet:
                continue
            path = out / f"contour_{name}_c3_{c3:+.2f}.csv"
            io.atomic_write(path, io.contours_to_csv(lines))
            summary["contours"].append({"measure": name, "c3": c3, "polylines": len(lines)})
    for name in cfg.mesh_measures:
        field_ = geometry.sample_field(name, (cfg.dims,) * 3)
        mesh = geometry.isosurface(field_, cfg.level)
        io.atomic_write(out / f"mesh_{name}.obj", io.mesh_to_obj(mesh))
        side = io.mesh_sidecar(mesh, field_)
        side["max_level_error"] = float(np.abs(evaluate(name, mesh.vertices) - cfg.level).max())
        side["axis_clearance"] = float(geometry.distance_to_axes(mesh.vertices).min())
        io.atomic_write(out / f"mesh_{name}.json", io.dumps(side))
        summary["meshes"].append({"measure": name, **side})
    io.atomic_write(out / "summary.json", io.dumps(summary))
    return summary


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--level", type=float, default=0.03)
    p.add_argument("--dims", type=int, default=81)
    p.add_argument("--out", default="results/levels")
    args = p.parse_args()
    result = run(LevelConfig(level=args.level, dims=args.dims, out=args.out))
    for m in result["meshes"]:
        print(f"{m['measure']}: {m['n_triangles']} triangles, level error {m['max_level_error']:.2e}")
