"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances are the stated ones.  The Monte Carlo criteria take several
minutes in total.
"""

import math

import numpy as np
import pytest

from sle_spectrum import cli
from sle_spectrum import exponents as ex
from sle_spectrum import io as sio
from sle_spectrum import loewner as lw
from sle_spectrum.errors import ConditionError
from sle_spectrum.exponents import SleParams, Variant
from sle_spectrum.loewner import DriverSpec, McConfig
from sle_spectrum.moments import BulkIntegral, WholeIntegral, dyadic_scales, fit_spectrum_slope
from sle_spectrum.special import boundary_solutions
from sle_spectrum.verify import ansatz_suite, chordal_suite, hypergeometric_suite, subsuper_suite

import oracle

KAPPAS = (0.5, 2, 8 / 3, 4, 6, 8, 16)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def branch_points(k):
    tt, ts = ex.t_tip(k), ex.t_star(k)
    return (tt - 1.5, 0.5 * (tt + ts), ts + 1.0)


def test_criterion_1_closed_forms(report):
    worst, n = 0.0, 0
    branches = set()
    for k in KAPPAS:
        for t in branch_points(k):
            v, b = ex.average_spectrum(SleParams(k, t), Variant.WHOLE)
            ref = float(oracle.whole_spectrum(k, t))
            worst = max(worst, abs(v - ref) / max(1.0, abs(ref)))
            vb, _ = ex.average_spectrum(SleParams(k, t), Variant.BULK)
            worst = max(worst, abs(vb - float(oracle.bulk_spectrum(k, t))) / max(1.0, abs(ref)))
            branches.add(b)
            n += 1
    anchors = (
        ex.t_extremes(4)[1] == pytest.approx(1.5, abs=1e-12)
        and ex.alpha_extremes(4)[0] == pytest.approx(2 / 3, abs=1e-12)
        and ex.boundary_dimension_bound(6) == pytest.approx(4 / 3, abs=1e-12)
    )
    ok = worst < 1e-12 and len(branches) == 3 and anchors
    report(1, ok, f"{n} pairs, worst relative error {worst:.2e}, branches {len(branches)}, anchors {anchors}")


def test_criterion_2_continuity_and_slope(report):
    rng = np.random.default_rng(2)
    jumps, slopes = [], []
    h = 1e-5
    for k in rng.uniform(0.2, 20, 50):
        tt, ts = ex.t_tip(k), ex.t_star(k)
        p = SleParams(k, tt)
        tip = -ex.beta_exponent(p) - 2 * ex.gamma_exponent(p) - 1
        jumps.append(abs(tip - ex.analytic_spectrum(p)))
        jumps.append(abs(ts - (4 + k) ** 2 / (16 * k) - ex.analytic_spectrum(SleParams(k, ts))))
        d = (ex.analytic_spectrum(SleParams(k, ts + h)) - ex.analytic_spectrum(SleParams(k, ts - h))) / (2 * h)
        slopes.append(abs(d - 1))
    ok = max(jumps) < 1e-9 and max(slopes) < 1e-6
    report(2, ok, f"max jump {max(jumps):.2e}, max |slope - 1| {max(slopes):.2e}")


def test_criterion_3_legendre_duality(report):
    worst, n = 0.0, 0
    for k in (0.5, 1, 2, 8 / 3, 3, 5, 6, 8, 12, 16):
        t_min, t_max = ex.t_extremes(k)
        for t in np.linspace(t_min, t_max, 12)[1:-1]:
            num = ex.legendre_check(k, float(t))
            worst = max(worst, abs(num - float(oracle.legendre_value(k, t))))
            n += 1
    report(3, worst < 1e-6 and n == 100, f"{n} grid points, worst error {worst:.2e}")


def valid_pairs():
    out = []
    for i in range(20):
        k = KAPPAS[i % len(KAPPAS)]
        tt, ts = ex.t_tip(k), ex.t_star(k)
        frac = ((7 * i) % 20 + 0.5) / 20
        out.append((k, tt + frac * (ts - tt)))
    return out


def test_criterion_4_hypergeometric(report):
    failed = []
    for k, t in valid_pairs():
        failed += [(c.check, k, t, c.value) for c in hypergeometric_suite(k, t) if not c.passed]
    raised = 0
    for k in KAPPAS:
        try:
            boundary_solutions(SleParams(k, ex.t_star(k) * (1 + 1e-9) + 1e-9))
        except ConditionError:
            raised += 1
    ok = not failed and raised == len(KAPPAS)
    report(4, ok, f"20 pairs, failed checks {failed[:3]}, condition errors {raised}/{len(KAPPAS)}")


def test_criterion_5_chordal(report):
    checks = []
    for i in range(10):
        k = KAPPAS[i % len(KAPPAS)] * (1 + 0.1 * (i // len(KAPPAS)))
        tt, ts = ex.t_tip(k), ex.t_star(k)
        checks += chordal_suite(k, tt + (i + 0.5) / 10 * (ts - tt))
    res = max(c.value for c in checks if c.check == "chordal_residual")
    ctrl = min(c.value for c in checks if c.check == "chordal_negative_control")
    report(5, all(c.passed for c in checks), f"worst residual {res:.2e}, smallest control {ctrl:.2e}")


ANSATZ_PAIRS = ((6, 1), (2, -1), (8 / 3, 0.5))


def test_criterion_6_ansatz_scaling(report):
    checks = [c for k, t in ANSATZ_PAIRS for c in ansatz_suite(k, t)]
    slopes = ", ".join(f"{c.value:.4f}" for c in checks)
    report(6, all(c.passed for c in checks), f"slopes {slopes} (need >= 0.9)")


def test_criterion_7_signs(report):
    checks = [c for k, t in ANSATZ_PAIRS for c in subsuper_suite(k, t)]
    bad = [(c.kappa, c.t, c.check) for c in checks if not c.passed]
    h0 = max(c.value for c in checks)
    report(7, not bad, f"{len(checks)} sign checks, largest h0 {h0:.3g}, failures {bad}")


MC_CFG = McConfig(DriverSpec.brownian(6), n_paths=100_000, master_seed=1, refine=0.01)


@pytest.mark.slow
@pytest.mark.parametrize(
    "t, variant, tol",
    [(1.0, BulkIntegral(), 0.05), (-4.0, WholeIntegral(), 0.15)],
    ids=["t=1-bulk", "t=-4-whole"],
)
def test_criterion_8_monte_carlo_slope(report, t, variant, tol):
    p = SleParams(6, t)
    target, _ = ex.average_spectrum(p, Variant.BULK if isinstance(variant, BulkIntegral) else Variant.WHOLE)
    fit = fit_spectrum_slope(p, variant, dyadic_scales(4, 9), MC_CFG)
    capped = sum(e.n_capped for e in fit.estimates)
    evals = sum(e.n_evaluations for e in fit.estimates)
    ok = abs(fit.slope - target) <= tol and capped <= 0.01 * evals
    report(
        8,
        ok,
        f"kappa=6 t={t:g} {variant.name}: slope {fit.slope:.5f} +- {fit.slope_stderr:.5f}, "
        f"target {target:.5f} +- {tol}, capped {capped}/{evals}",
    )


def _moment(x, t):
    y = np.exp(t * x)
    return y.mean(), y.std(ddof=1) / math.sqrt(y.size)


@pytest.mark.slow
def test_criterion_9_markov_and_stationarity(report):
    n, t, T = 20_000, 1.0, 1.0
    cfg = McConfig(DriverSpec.brownian(6), n_paths=n, master_seed=2, r_stop=1e9)
    z0 = np.full(n, 1.0625 * np.exp(0.5j * math.pi))
    ids = [np.arange(j * n, (j + 1) * n) for j in range(5)]

    # two independent horizon-T legs, the second started where the first ended
    a = lw.simulate_paths(z0, cfg, ids[0], s_max=T)
    b = lw.simulate_paths(a.z, cfg, ids[1], s_max=T)
    c = lw.simulate_paths(z0, cfg, ids[2], s_max=2 * T)
    (m1, s1), (m2, s2) = _moment(a.compensated + b.compensated, t), _moment(c.compensated, t)
    z_markov = abs(m1 - m2) / math.hypot(s1, s2)

    # compensated value at horizons S and 2S
    S = 5.0
    d = lw.simulate_paths(z0, cfg, ids[3], s_max=S)
    e = lw.simulate_paths(z0, cfg, ids[4], s_max=2 * S)
    (m3, s3), (m4, s4) = _moment(d.compensated, t), _moment(e.compensated, t)
    z_stat = abs(m3 - m4) / math.hypot(s3, s4)
    ok = z_markov < 3 and z_stat < 3
    report(9, ok, f"Markov {m1:.4f} vs {m2:.4f} ({z_markov:.2f} sigma), stationarity {m3:.4f} vs {m4:.4f} ({z_stat:.2f} sigma)")


def _bytes_of(tmp_path, argv, tag):
    out = tmp_path / f"{tag}.csv"
    code = cli.main([str(a) for a in argv] + ["--out", str(out)])
    assert code in (0, 1)
    return out.read_bytes()


def test_criterion_10_determinism(tmp_path, report):
    commands = {
        "spectrum": ["spectrum", "--kappa", 6, "--t-min", -5, "--t-max", 4, "--t-step", 0.25],
        "verify": ["verify", "--suite", "hypergeometric", "--kappa", 6, "--t", 1],
        # enough paths per scale to span several simulation chunks
        "estimate": ["estimate", "--kappa", 6, "--t", 1, "--scales", "3..5", "--paths", 33_000, "--seed", 9, "--dt", 0.0625],
        "hull": ["hull", "--kappa", 6, "--time", 1, "--n-points", 512, "--seed", 9, "--dt", 2**-8],
    }
    same = {}
    for name, argv in commands.items():
        first = _bytes_of(tmp_path, argv, f"{name}_a")
        second = _bytes_of(tmp_path, argv, f"{name}_b")
        same[name] = first == second
        if name == "estimate":
            threaded = _bytes_of(tmp_path, argv + ["--threads", 4], f"{name}_c")
            same["estimate-threads"] = first == threaded
    manifests = sio.read_manifests(tmp_path / sio.RUNS_LOG)
    replayed = cli.replay(manifests[0])
    ok = all(same.values()) and replayed
    report(10, ok, f"byte-identical {same}, manifest replay {replayed}")
