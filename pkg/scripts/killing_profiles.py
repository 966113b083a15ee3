"""Killing-field norms on the polar submanifolds over the two rays.

Prints |X|^2 at increasing distance from the polygon for a Taub-NUT model,
the product example and a parallel-ray polygon with its two-point model.
"""

import numpy as np

from sftoric import asymptotics as asy
from sftoric.momentum import family_for, r2s2_model, taub_nut
from sftoric.polygon import LabeledPolygon

PARALLEL = LabeledPolygon((-1.0, 0.0, 2.0), ((1.0, -1.0), (0.0, 0.5), (1.0, 1.0)),
                          1.0, 1.0, 1.0, 0.0, "parallel_ray")


def profile(name, fam, dist=(1e0, 1e1, 1e2, 1e3, 1e6)):
    lo, hi = fam.centers.min(), fam.centers.max()
    d = np.asarray(dist)
    left = asy.killing_norm_polar(fam, "left", lo - d)
    right = asy.killing_norm_polar(fam, "right", hi + d)
    print(name)
    for di, l, r in zip(d, left, right):
        print(f"  distance {di:9.0e}   left {l:14.8g}   right {r:14.8g}")


if __name__ == "__main__":
    profile("taub_nut alpha=1 beta=1 s0=1", taub_nut(1, 1))
    profile("taub_nut alpha=1 beta=0 s0=2", taub_nut(1, 0, 2.0))
    profile("product example", family_for(LabeledPolygon.h2s2()))
    profile("parallel-ray polygon", family_for(PARALLEL))
    profile("its two-point model", r2s2_model(PARALLEL))
