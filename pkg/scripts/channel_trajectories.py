"""Evolve a few states under both noise families and tabulate all four measures.

    python3 scripts/channel_trajectories.py --gamma 1.0 --t-max 3.0 --steps 31
"""

import argparse
from dataclasses import asdict, dataclass, field
from pathlib import Path

from belltet import channels, io
from belltet.qstate import BellDiagonalState


@dataclass
class TrajectoryConfig:
    gamma: float = 1.0
    t_max: float = 3.0
    steps: int = 31
    starts: list = field(default_factory=lambda: [(0.8, 0.4, -0.6), (0.5, 0.3, 0.1), (1.0, 1.0, -1.0)])
    out: str = "results/trajectories"


def run(cfg: TrajectoryConfig) -> list:
    sched = channels.NoiseSchedule.linspace(cfg.gamma, cfg.t_max, cfg.steps)
    written = []
    for k, c in enumerate(cfg.starts):
        s0 = BellDiagonalState(*c)
        for family in channels.FAMILIES:
            traj = channels.trajectory(s0, family, sched)
            path = Path(cfg.out) / f"state{k}_{family}.csv"
            io.atomic_write(path, io.trajectory_to_csv(traj))
            written.append(str(path))
    return written


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=31)
    p.add_argument("--out", default="results/trajectories")
    args = p.parse_args()
    for path in run(TrajectoryConfig(args.gamma, args.t_max, args.steps, out=args.out)):
        print(path)
