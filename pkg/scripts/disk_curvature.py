"""Scalar curvature of the disk metric along a radius, three ways.

Columns: closed formula, half of -d_i(G^ij d_j log V) from the Hessian
field, the Abreu form -1/2 d_i d_j G^ij, and the curvature-form contraction.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from sftoric import geometry as geo
from sftoric import potentials as pot


@dataclass
class DiskSweep:
    rho_max: float = 0.9
    n: int = 10
    h: float = 1e-3


def run(cfg: DiskSweep):
    d = pot.disk_potential()
    print(f"{'rho':>6} {'closed':>12} {'hessian':>12} {'abreu':>12} {'form':>12} {'norm':>10}")
    for rho in np.linspace(0.0, cfg.rho_max, cfg.n):
        u = np.array([rho, 0.0])
        sc = geo.scalar_curvature_4d(d, u, cfg.h)
        form = pot.curvature_form_scalar(d, u, cfg.h)
        print(f"{rho:6.3f} {pot.disk_R(rho):12.7f} {sc.kahler:12.7f} {sc.abreu:12.7f} "
              f"{form:12.7f} {pot.disk_curvature_norm(rho):10.4f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--rho-max", type=float, default=DiskSweep.rho_max)
    p.add_argument("--n", type=int, default=DiskSweep.n)
    p.add_argument("--h", type=float, default=DiskSweep.h)
    a = p.parse_args()
    run(DiskSweep(a.rho_max, a.n, a.h))
