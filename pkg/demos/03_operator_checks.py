"""
03_operator_checks.py
Closed-form candidates pushed through the stationary operators.

- the chordal operator annihilates y^beta (x^2 + y^2)^gamma to roundoff,
  while a perturbed exponent leaves an order-one remainder
- on the radial ansatz the normalized operator vanishes linearly in r - 1
- multiplying the ansatz by (-log(r - 1))^delta gives a definite sign near the circle

Run:  python demos/03_operator_checks.py
"""

import math

from sle_spectrum import pde
from sle_spectrum.exponents import SleParams, beta_exponent

PAIRS = [SleParams(6, 1), SleParams(2, -1), SleParams(8 / 3, 0.5)]
HS = [1e-2, 1e-3, 1e-4, 1e-5]

if __name__ == "__main__":
    for p in PAIRS:
        print(f"kappa={p.kappa:.4g} t={p.t:g}")
        exact = pde.chordal_operator_residual(p, 0.7, 0.4)
        off = pde.chordal_operator_residual(p, 0.7, 0.4, beta=beta_exponent(p) + 0.01)
        print(f"  chordal residual {exact:.2e}, with perturbed exponent {off:.2e}")

        ratios = [s.ratio for s in pde.ansatz_scaling(p, math.pi / 2, HS)]
        print("  ansatz ratios", " ".join(f"{r:.3e}" for r in ratios),
              f"slope {pde.loglog_slope(HS, ratios):.4f}")

        for delta in (1.0, -1.0):
            c = pde.subsupersolution_sign(p, delta, math.pi / 2)
            print(f"  delta={delta:+g}: expected sign {-delta:+g} holds for r - 1 <= {c.h0:.3g}")
