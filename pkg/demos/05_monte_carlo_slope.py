"""
05_monte_carlo_slope.py
Empirical spectrum from simulated moments, next to the closed form.

Estimates E of the integrated |f'|^t at dyadic distances from the circle and
fits the slope of its logarithm against -log(r - 1).  The default budget
runs in well under a minute; pass a path count for a closer look, e.g.

    python demos/05_monte_carlo_slope.py 100000

The acceptance runs use 1e5 paths over r - 1 = 2^-4..2^-9.  Local slopes
between neighbouring scales are printed too: at t = 1 they still drift
upward at the finest scales, which is why the fitted slope sits below the
limit value.

Run:  python demos/05_monte_carlo_slope.py [n_paths]
"""

import sys

import numpy as np

from sle_spectrum import exponents as ex
from sle_spectrum.exponents import SleParams, Variant
from sle_spectrum.loewner import DriverSpec, McConfig
from sle_spectrum.moments import BulkIntegral, WholeIntegral, dyadic_scales, fit_spectrum_slope

if __name__ == "__main__":
    n_paths = int(sys.argv[1]) if len(sys.argv) > 1 else 8000
    cfg = McConfig(DriverSpec.brownian(6), n_paths=n_paths, master_seed=1, refine=0.01)
    for t, variant, kind in ((1.0, BulkIntegral(), Variant.BULK), (-4.0, WholeIntegral(), Variant.WHOLE)):
        p = SleParams(6, t)
        fit = fit_spectrum_slope(p, variant, dyadic_scales(4, 7), cfg)
        target, branch = ex.average_spectrum(p, kind)
        print(f"t = {t:g}, {variant.name}: slope {fit.slope:.4f} +- {fit.slope_stderr:.4f}, "
              f"closed form {target:.5f} ({branch.value})")
        logs = np.log([e.mean for e in fit.estimates])
        local = np.diff(logs) / np.log(2)
        for h, e in zip(fit.scales, fit.estimates):
            print(f"  r-1 = {h:.6f}: mean {e.mean:.5g} +- {e.stderr:.2g}  capped {e.n_capped}")
        print("  local slopes", " ".join(f"{s:.3f}" for s in local))
