"""
01_closed_form_spectra.py
Closed-form average spectra and the quantities derived from them.

Prints, for a few values of kappa:
- the two phase transitions of the whole-plane spectrum and its value on each branch
- the Hoelder exponent, and the boundary dimension bound where kappa >= 4
- the transitions of the conjectured almost-sure spectrum, and a numerical
  Legendre transform of the multifractal spectrum compared against it

Run:  python demos/01_closed_form_spectra.py
"""

import numpy as np

from sle_spectrum import exponents as ex
from sle_spectrum.exponents import SleParams, Variant


def branch_table(kappa):
    tt, ts = ex.t_tip(kappa), ex.t_star(kappa)
    print(f"kappa = {kappa:g}: tip threshold {tt:.6g}, linear threshold {ts:.6g}")
    for t in (tt - 2, 0.5 * (tt + ts), ts + 1):
        v, b = ex.average_spectrum(SleParams(kappa, t), Variant.WHOLE)
        vb, _ = ex.average_spectrum(SleParams(kappa, t), Variant.BULK)
        print(f"  t = {t:9.4f}  whole {v:10.6f}  bulk {vb:10.6f}  ({b.value})")


def legendre_table(kappa):
    t_min, t_max = ex.t_extremes(kappa)
    print(f"  a.s. transitions: t_min {t_min:.6g}, t_max {t_max:.6g}")
    for t in np.linspace(t_min, t_max, 5)[1:-1]:
        num = ex.legendre_check(kappa, float(t))
        closed = ex.conjectured_as_spectrum(SleParams(kappa, float(t))) - t + 1
        print(f"  t = {t:8.4f}  sup over alpha {num:.12f}  closed form {closed:.12f}")


if __name__ == "__main__":
    for kappa in (2.0, 4.0, 6.0):
        branch_table(kappa)
        legendre_table(kappa)
        print(f"  Hoelder exponent {ex.holder_exponent(kappa):.10f}")
        if kappa >= 4:
            print(f"  boundary dimension bound {ex.boundary_dimension_bound(kappa):.10f}")
        print()

    # the rows `sle-spectrum spectrum --kappa 6 --t-min -6 --t-max 4 --t-step 1` writes
    curve = ex.spectrum_table(6.0, np.linspace(-6, 4, 11), Variant.WHOLE)
    for t, v, b in curve.samples:
        print(f"{t:6.2f} {v:12.8f} {b.value}")
