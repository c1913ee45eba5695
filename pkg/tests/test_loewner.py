import math
import numpy as np
import pytest
from hypothesis import given, strategies as st

from sle_spectrum import loewner as lw
from sle_spectrum import rng
from sle_spectrum.errors import BlowUpError, DomainError, HorizonWarning, StepSizeError
from sle_spectrum.loewner import DriverSpec, McConfig, PathState


def det_cfg(**kw):
    return McConfig(DriverSpec.deterministic(), **kw)


def bm_cfg(**kw):
    return McConfig(DriverSpec.brownian(6), **kw)


def test_drift_examples():
    assert lw.drift_terms(2, 0) == (pytest.approx(-1), pytest.approx(6), pytest.approx(0))
    a, r, th = lw.drift_terms(2, math.pi)
    assert a == pytest.approx(63 / 81) and r == pytest.approx(2 / 3) and th == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("eps", [1e-3, 1e-5, 1e-7])
def test_radial_drift_near_circle(eps):
    _, dr, _ = lw.drift_terms(1 + eps, math.pi)
    exact = eps * (2 + eps) * (1 + eps) / (2 + eps) ** 2
    assert dr == pytest.approx(exact, rel=1e-9)
    assert dr == pytest.approx(eps / 2, rel=2 * eps)


@given(st.floats(1.0001, 100), st.floats(-math.pi, math.pi))
def test_radial_drift_positive(r, th):
    assert lw.drift_terms(r, th)[1] > 0


def test_driver_validation():
    with pytest.raises(DomainError):
        DriverSpec.brownian(0)
    with pytest.raises(DomainError):
        DriverSpec.stable(2.0)
    with pytest.raises(DomainError):
        DriverSpec("levy")


def test_config_validation():
    with pytest.raises(DomainError):
        det_cfg(dt=0)
    with pytest.raises(DomainError):
        det_cfg(r_stop=2)
    with pytest.raises(DomainError):
        det_cfg(n_paths=0)
    with pytest.raises(DomainError):
        det_cfg(scheme="rk4")


def test_step_examples():
    cfg = det_cfg(dt=1e-3)
    s = lw.step(PathState(0, 2, 0), cfg, 0.0)
    assert s.logd == pytest.approx(-1e-3)
    assert s.theta == 0
    assert s.r == pytest.approx(2 + 6e-3)
    same = lw.step(PathState(0.5, 2, 0.3, 0.1), cfg, 0.0, dt=0)
    assert (same.s, same.r, same.theta, same.logd) == (0.5, 2, 0.3, 0.1)


def test_step_rejects_leaving_the_exterior():
    with pytest.raises(StepSizeError):
        lw.step(PathState(0, 1.0001, 0.0), det_cfg(), 0.0, dt=-1.0)


def test_wrap_angle():
    assert lw.wrap_angle(math.pi) == pytest.approx(math.pi)
    assert lw.wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert lw.wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


def test_frozen_flow_first_integral():
    z = np.array([1.5 + 0.2j, -2 + 1j, 1.01 - 0.01j])
    z1, _ = lw.frozen_flow(z, 0.3)
    np.testing.assert_allclose((z1 + 1) ** 2 / z1, np.exp(0.3) * (z + 1) ** 2 / z, rtol=1e-12)
    assert np.all(np.abs(z1) > np.abs(z))


def test_frozen_flow_derivative_matches_finite_difference():
    z, h, dt = 1.3 + 0.4j, 1e-6, 0.2
    (z1,), (dl,) = lw.frozen_flow(np.array([z]), dt)
    (zp,), _ = lw.frozen_flow(np.array([z + h]), dt)
    assert dl == pytest.approx(math.log(abs(zp - z1) / h), abs=1e-5)


def test_frozen_flow_matches_euler_for_small_steps():
    z = np.array([2.0 * np.exp(1j)])
    ze, le = z, 0.0
    for _ in range(10000):
        ze, d = lw._euler_flow(ze, 1e-5)
        le += d
    zx, lx = lw.frozen_flow(z, 0.1)
    assert abs(ze[0] - zx[0]) < 1e-4
    assert abs(le - lx[0]) < 1e-4


def h_prime(z):
    return abs((z - 1) * (z + 1) / z**2)


def test_deterministic_compensated_value_closed_form():
    cfg = det_cfg(r_stop=50, s_max=20)
    z0 = 1.5 * np.exp(1j * math.pi)
    out = lw.simulate_paths(np.array([z0]), cfg, [0])
    assert out.status[0] == lw.STOPPED
    want = math.log(h_prime(z0)) - math.log(h_prime(out.z[0]))
    assert out.compensated[0] == pytest.approx(want, abs=1e-12)
    # the limit r -> infinity is log|h'(z0)| = log(5/9)
    assert out.compensated[0] == pytest.approx(math.log(5 / 9), abs=1e-3)


def test_compensated_path_determinism():
    cfg = det_cfg()
    a = lw.simulate_compensated_path((1.5, math.pi), cfg)
    b = lw.simulate_compensated_path((1.5, math.pi), cfg)
    assert a == b


def test_zero_horizon_returns_zero():
    assert lw.simulate_compensated_path((1.5, 0.3), bm_cfg(s_max=0)) == 0


def test_substreams():
    cfg = bm_cfg()
    a = lw.simulate_compensated_path((1.1, 1.0), cfg, substream=3)
    assert a == lw.simulate_compensated_path((1.1, 1.0), cfg, substream=3)
    assert a != lw.simulate_compensated_path((1.1, 1.0), cfg, substream=4)


def test_horizon_warning():
    with pytest.warns(HorizonWarning):
        lw.simulate_compensated_path((1.1, 1.0), bm_cfg(s_max=0.5))


def test_starting_point_must_be_outside():
    with pytest.raises(DomainError):
        lw.simulate_compensated_path((1.0, 0.2), bm_cfg())


def test_radial_monotonicity_along_paths():
    cfg = bm_cfg(n_paths=200)
    z0 = 1.01 * np.exp(1j * np.linspace(-3, 3, 200))
    out = lw.simulate_paths(z0, cfg, np.arange(200), record=True)
    last = np.abs(z0)
    for rows, _, r, _, _ in out.trace:
        assert np.all(r >= last[rows])
        last[rows] = r


@pytest.mark.parametrize("scheme", ["exact", "euler"])
def test_reflection_symmetry_deterministic(scheme):
    cfg = det_cfg(scheme=scheme, dt=2**-8)
    z0 = 1.2 * np.exp(1j * np.array([0.7, -0.7]))
    out = lw.simulate_paths(z0, cfg, [0, 0], record=True)
    assert out.logd[0] == out.logd[1]
    assert abs(out.z[0]) == abs(out.z[1])
    for rows, _, r, th, _ in out.trace:
        if len(rows) == 2:
            assert r[0] == r[1] and th[0] == -th[1]


def test_reflection_symmetry_with_mirrored_noise():
    cfg = bm_cfg()
    z0 = 1.05 * np.exp(1j * np.array([1.2, -1.2]))
    out = lw.simulate_paths(z0, cfg, [7, 7], mirror=[False, True])
    assert out.logd[0] == out.logd[1]
    assert out.z[0] == np.conj(out.z[1])


def test_symmetry_axis_is_invariant():
    out = lw.simulate_paths(np.array([1.5 + 0j]), det_cfg(s_max=1), [0], record=True)
    assert all(th[0] == 0 for _, _, _, th, _ in out.trace)


def test_chunking_and_threads_do_not_change_results():
    z0 = 1.02 * np.exp(1j * np.linspace(-3, 3, 300))
    idx = np.arange(300)
    a = lw.simulate_paths(z0, bm_cfg(chunk_size=1000), idx)
    b = lw.simulate_paths(z0, bm_cfg(chunk_size=37, workers=4), idx)
    assert np.array_equal(a.logd, b.logd)
    assert np.array_equal(a.z, b.z)


def test_paths_do_not_depend_on_batch_companions():
    z0 = np.array([1.1 + 0.5j, 1.3 - 0.2j, -1.5 + 0j])
    full = lw.simulate_paths(z0, bm_cfg(), [4, 5, 6])
    alone = lw.simulate_paths(z0[1:2], bm_cfg(), [5])
    assert full.logd[1] == alone.logd[0]


def test_stable_noise_characteristic_function():
    keys = rng.path_keys(0, np.arange(200000))
    for a in (0.7, 1.5):
        drv = DriverSpec.stable(a)
        x = lw._stable_noise(keys, np.zeros(keys.size, dtype=np.int64), np.zeros(keys.size, dtype=np.int64), drv)
        for u in (0.5, 1.0):
            assert np.mean(np.cos(u * x)) == pytest.approx(math.exp(-(u**a)), abs=0.01)
        assert abs(np.mean(np.sin(x))) < 0.01


def test_stable_driver_runs():
    cfg = McConfig(DriverSpec.stable(1.5, 0.5), n_paths=10)
    out = lw.simulate_paths(1.1 * np.exp(1j * np.linspace(0.1, 3, 10)), cfg, np.arange(10))
    assert np.all(np.isfinite(out.logd))


def test_hull_near_zero_time():
    f, absorbed = lw.hull_point_cloud(bm_cfg(dt=2**-12), 2**-12, 64, 0.01)
    theta = 2 * np.pi * np.arange(64) / 64
    assert not absorbed.any()
    np.testing.assert_allclose(f, 1.01 * np.exp(1j * theta), atol=0.05)


def test_hull_deterministic_driver_symmetric():
    f, _ = lw.hull_point_cloud(det_cfg(dt=2**-8), 1.0, 64, 0.01)
    # the launch angle -theta_k is index (64 - k) mod 64
    mirrored = np.conj(f[(-np.arange(64)) % 64])
    np.testing.assert_allclose(f, mirrored, atol=1e-9)


def test_hull_points_outside_disc_and_reproducible():
    cfg = bm_cfg(dt=2**-8, master_seed=3)
    f, absorbed = lw.hull_point_cloud(cfg, 1.0, 512, 1e-3)
    g, _ = lw.hull_point_cloud(cfg, 1.0, 512, 1e-3)
    assert np.all(np.abs(f[~absorbed]) > 1)
    assert np.array_equal(f, g, equal_nan=True)


def test_hull_blow_up():
    # every launch point sits on the driving point
    cfg = det_cfg(dt=2**-4)
    with pytest.raises(BlowUpError):
        lw.hull_point_cloud(cfg, 0.5, 1, 1e-12)


def test_hull_argument_checks():
    with pytest.raises(DomainError):
        lw.hull_point_cloud(bm_cfg(), 1.0, 8, 0)


@pytest.mark.slow
def test_step_size_convergence():
    # from the default step controls, halving both changes a t = 1 moment by less than its standard error
    cfg = bm_cfg(n_paths=10000, dt=2**-5)
    z0 = np.full(10000, 1.0 + 2**-5) * np.exp(1j * math.pi / 2)
    idx = np.arange(10000)
    vals = []
    for c in (cfg, cfg.with_(dt=2**-6, refine=cfg.refine / 2)):
        x = np.exp(lw.simulate_paths(z0, c, idx).compensated)
        vals.append((x.mean(), x.std() / math.sqrt(x.size)))
    (m1, s1), (m2, s2) = vals
    assert abs(m1 - m2) < max(s1, s2)
