"""
02_boundary_solution.py
The bounded positive solution of the boundary ODE on [0, 4].

For each (kappa, t):
- builds the hypergeometric solutions and the mixing constant
- samples g3 on a coarse grid and reports the worst normalized ODE residual
- compares the closed-form value at x = 4 with an extrapolated series limit

The last block shows why positivity needs a lower bound on t: below
`positivity_limit(kappa)` the value at 4 turns negative.

Run:  python demos/02_boundary_solution.py
"""

import numpy as np

from sle_spectrum import special as sf
from sle_spectrum.errors import ConditionError
from sle_spectrum.exponents import SleParams, t_star
from sle_spectrum.verify import series_limit_at_4

PAIRS = [(6.0, 1.0), (2.0, -1.0), (8 / 3, 0.5), (0.5, 3.4)]

if __name__ == "__main__":
    for kappa, t in PAIRS:
        sol = sf.boundary_solutions(SleParams(kappa, t))
        xs = np.linspace(0.02, 3.98, 100)
        worst = max(abs(sf.boundary_ode_residual(sol, float(x))) for x in xs)
        print(f"kappa={kappa:.4g} t={t:g}: a={sol.params.a:.6g}  C={sol.C:.8g}")
        print("  g3 at 0, 1, 2, 3, 4:", " ".join(f"{sol(x):.8g}" for x in (0.0, 1.0, 2.0, 3.0, 4.0)))
        print(f"  worst residual {worst:.2e}, g3(4) closed form {sol.g3_at_4:.12g}, "
              f"series limit {series_limit_at_4(sol):.12g}")

    kappa = 6.0
    try:
        sf.boundary_solutions(SleParams(kappa, t_star(kappa) + 1e-6))
    except ConditionError as e:
        print("\nabove the threshold:", e)

    lim = sf.positivity_limit(kappa)
    for t in (lim + 0.5, lim - 0.5):
        val = sf.g3_at_4_closed_form(SleParams(kappa, t))
        print(f"t = {t:8.4f} (limit {lim:.4f}): g3(4) = {val:.6g}")
