"""Step-size study for the finite-difference residuals.

For each Taub-NUT parameter set, max |s| on a polar grid at h, h/2, h/4,
together with the Richardson combination and the disk Christoffel residual.
Where the truncation term dominates the halving ratio sits near 4; where
roundoff dominates it drops below 1.
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from sftoric import geometry as geo
from sftoric import potentials as pot
from sftoric.momentum import taub_nut


@dataclass
class Convergence:
    h: float = 1e-3
    n: int = 50
    r_min: float = 0.5
    r_max: float = 20.0
    params: tuple = ((0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (2.0, 1.0), (1.0, 2.0))


def polar(cfg):
    r = np.geomspace(cfg.r_min, cfg.r_max, cfg.n)
    t = np.linspace(0.05 * math.pi, 0.95 * math.pi, cfg.n)
    R, T = np.meshgrid(r, t)
    return np.stack([R * np.cos(T), R * np.sin(T)], axis=-1)


def run(cfg: Convergence):
    u = polar(cfg)
    hs = (cfg.h, cfg.h / 2, cfg.h / 4)
    print(f"{'(alpha,beta)':>12} " + " ".join(f"{'h=' + format(h, '.2g'):>10}" for h in hs)
          + f" {'ratio':>7} {'richardson':>11}")
    for ab in cfg.params:
        s = [geo.scalar_curvature_4d(taub_nut(*ab), u, h).s for h in hs]
        m = [np.max(np.abs(v)) for v in s]
        ext = np.max(np.abs(geo.richardson(s[0], s[1])))
        print(f"{str(ab):>12} " + " ".join(f"{v:10.2e}" for v in m) + f" {m[0] / m[1]:7.2f} {ext:11.2e}")
    disk = pot.square_grid(0.8, 41, disk=True)
    res = [np.max(geo.christoffels(pot.disk_potential(), disk, h).residual) for h in hs]
    print("disk Christoffel residual: " + ", ".join(f"{v:.2e}" for v in res))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--h", type=float, default=Convergence.h)
    p.add_argument("--n", type=int, default=Convergence.n)
    a = p.parse_args()
    run(Convergence(h=a.h, n=a.n))
