"""
04_loewner_paths.py
Trajectories of the reverse radial flow and a hull picture.

- follows a few trajectories from near the circle and prints the compensated
  log-derivative at the end of each one
- with a constant driver the answer is known in closed form, which checks
  the integrator
- writes hull.csv and hull.svg for kappa = 4 at time 1 (same output as
  `sle-spectrum hull`)

Run:  python demos/04_loewner_paths.py [output directory]
"""

import math
import sys
from pathlib import Path

import numpy as np

from sle_spectrum import io as sio
from sle_spectrum import loewner as lw
from sle_spectrum.loewner import DriverSpec, McConfig

if __name__ == "__main__":
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else ".")

    cfg = McConfig(DriverSpec.brownian(6), master_seed=11)
    z0 = 1.01 * np.exp(1j * np.array([0.1, 1.0, 2.0, math.pi]))
    batch = lw.simulate_paths(z0, cfg, np.arange(z0.size))
    for z, c, s in zip(z0, batch.compensated, batch.s):
        print(f"start angle {np.angle(z):6.3f}: stopped at s = {s:6.3f}, compensated log|f'| = {c:+.5f}")

    # constant driver: the limit map has |h'(z)| = |(z - 1)(z + 1)| / |z|^2
    det = McConfig(DriverSpec.deterministic())
    val = lw.simulate_compensated_path((1.5, math.pi), det)
    print(f"\nconstant driver from -1.5: {val:.6f} vs log(5/9) = {math.log(5 / 9):.6f}")

    hull_cfg = McConfig(DriverSpec.brownian(4), dt=2.0**-10, master_seed=3)
    pts, absorbed = lw.hull_point_cloud(hull_cfg, 1.0, 1024, 1e-3)
    sio.write_text(out_dir / "hull.csv", sio.csv_text(sio.HULL_HEADER, sio.hull_rows(pts)))
    sio.write_text(out_dir / "hull.svg", sio.hull_svg(pts))
    print(f"hull: {absorbed.sum()} of {pts.size} boundary points absorbed; wrote {out_dir / 'hull.svg'}")
