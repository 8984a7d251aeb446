import numpy as np
import pytest

from creasefold._kernels import IMPLEMENTATION, pyfallback

try:
    from creasefold._kernels import _native as native
except ImportError:
    native = None

needs_native = pytest.mark.skipif(native is None,
                                  reason="compiled kernels not built")


def coefficient_set(rng, n):
    sp = 1.0 + 0.3 * rng.random(n)
    cv = rng.normal(scale=0.8, size=n)
    tau = rng.normal(scale=0.4, size=n)
    return sp, cv, tau


@needs_native
def test_frame2d_native_matches_fallback():
    rng = np.random.default_rng(0)
    n = 257
    sp, cv, _ = coefficient_set(rng, n)
    sp_m = 0.5 * (sp[:-1] + sp[1:])
    cv_m = 0.5 * (cv[:-1] + cv[1:])
    args = (sp, sp_m, cv, cv_m, 0.01, np.array([0.1, -0.2]),
            np.array([0.6, 0.8]))
    pts_n, tan_n, nrm_n, drift_n = native.rk4_frame_2d(*args)
    pts_p, tan_p, nrm_p, drift_p = pyfallback.rk4_frame_2d(*args)
    assert np.array_equal(pts_n, pts_p)
    assert np.array_equal(tan_n, tan_p)
    assert np.array_equal(nrm_n, nrm_p)
    assert drift_n == drift_p


@needs_native
def test_frame3d_native_matches_fallback():
    rng = np.random.default_rng(1)
    n = 257
    sp, cv, tau = coefficient_set(rng, n)
    sp_m = 0.5 * (sp[:-1] + sp[1:])
    cv_m = 0.5 * (cv[:-1] + cv[1:])
    tau_m = 0.5 * (tau[:-1] + tau[1:])
    args = (sp, sp_m, cv, cv_m, tau, tau_m, 0.008,
            np.zeros(3), np.array([1.0, 0.0, 0.0]),
            np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]))
    out_n = native.rk4_frame_3d(*args)
    out_p = pyfallback.rk4_frame_3d(*args)
    for a, b in zip(out_n[:4], out_p[:4]):
        assert np.allclose(a, b, rtol=0.0, atol=1e-14)
    assert abs(out_n[4] - out_p[4]) < 1e-15


@needs_native
def test_linear_native_matches_fallback():
    rng = np.random.default_rng(2)
    n = 257
    a = rng.normal(scale=0.5, size=n)
    b = rng.normal(scale=0.5, size=n)
    a_m = 0.5 * (a[:-1] + a[1:])
    b_m = 0.5 * (b[:-1] + b[1:])
    y_n = native.rk4_linear(a, a_m, b, b_m, 0.01, 0.7)
    y_p = pyfallback.rk4_linear(a, a_m, b, b_m, 0.01, 0.7)
    assert np.array_equal(y_n, y_p)


def test_selected_implementation_reported():
    assert IMPLEMENTATION in ("native", "python")


def test_fallback_accepts_readonly_arrays():
    n = 64
    sp = np.ones(n)
    sp.flags.writeable = False
    cv = np.zeros(n)
    cv.flags.writeable = False
    pts, tan, nrm, drift = pyfallback.rk4_frame_2d(
        sp, sp[:-1], cv, cv[:-1], 0.01, np.zeros(2), np.array([1.0, 0.0]))
    assert np.allclose(pts[-1], [0.63, 0.0])
