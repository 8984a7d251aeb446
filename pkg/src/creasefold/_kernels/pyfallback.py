"""Pure-Python (numpy) fallback for the compiled transport kernels.

All kernels take coefficient functions sampled at the grid nodes and at the
cell midpoints (classical RK4 evaluates the right-hand side at t_j, t_j + h/2
and t_{j+1}), so no Python callbacks are needed inside the step loop.  The
compiled extension implements the identical signatures.
"""

import numpy as np

IMPLEMENTATION = "python"


def rk4_frame_2d(sp_n, sp_m, cv_n, cv_m, h, x0, t0):
    """Transport a 2D point+tangent frame: x' = s't, t' = s'k n, n = rot90(t).

    Returns (points, tangents, normals, drift) where drift is the largest
    pre-renormalization deviation of |t| from 1 over all steps.
    """
    n = sp_n.shape[0]
    pts = np.empty((n, 2))
    tan = np.empty((n, 2))
    pts[0] = x0
    tan[0] = t0
    drift = 0.0

    def rhs(state, s, k):
        x, y, tx, ty = state
        return np.array([s * tx, s * ty, -s * k * ty, s * k * tx])

    state = np.array([x0[0], x0[1], t0[0], t0[1]], dtype=float)
    for j in range(n - 1):
        k1 = rhs(state, sp_n[j], cv_n[j])
        k2 = rhs(state + 0.5 * h * k1, sp_m[j], cv_m[j])
        k3 = rhs(state + 0.5 * h * k2, sp_m[j], cv_m[j])
        k4 = rhs(state + h * k3, sp_n[j + 1], cv_n[j + 1])
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        norm = np.sqrt(state[2] * state[2] + state[3] * state[3])
        drift = max(drift, abs(norm - 1.0))
        state[2] /= norm
        state[3] /= norm
        pts[j + 1] = state[:2]
        tan[j + 1] = state[2:]

    nrm = np.column_stack([-tan[:, 1], tan[:, 0]])
    return pts, tan, nrm, drift


def rk4_frame_3d(sp_n, sp_m, K_n, K_m, tau_n, tau_m, h, X0, T0, N0, B0):
    """Transport a 3D frame: X' = s'T, T' = s'K N, N' = s'(-K T + tau B), B' = -s' tau N.

    Gram-Schmidt re-orthonormalization is applied after every step; the
    returned drift is the largest pre-correction orthonormality defect.
    """
    n = sp_n.shape[0]
    X = np.empty((n, 3))
    T = np.empty((n, 3))
    N = np.empty((n, 3))
    B = np.empty((n, 3))
    X[0], T[0], N[0], B[0] = X0, T0, N0, B0
    drift = 0.0

    def rhs(state, s, K, tau):
        x = state[0:3]
        t = state[3:6]
        nn = state[6:9]
        b = state[9:12]
        return np.concatenate([s * t, s * K * nn, s * (-K * t + tau * b), -s * tau * nn])

    state = np.concatenate([X0, T0, N0, B0]).astype(float)
    for j in range(n - 1):
        k1 = rhs(state, sp_n[j], K_n[j], tau_n[j])
        k2 = rhs(state + 0.5 * h * k1, sp_m[j], K_m[j], tau_m[j])
        k3 = rhs(state + 0.5 * h * k2, sp_m[j], K_m[j], tau_m[j])
        k4 = rhs(state + h * k3, sp_n[j + 1], K_n[j + 1], tau_n[j + 1])
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        t = state[3:6]
        nn = state[6:9]
        tn = np.linalg.norm(t)
        dot = float(t @ nn) / tn
        defect = max(abs(tn - 1.0), abs(dot), abs(np.linalg.norm(nn) - 1.0))
        t = t / tn
        nn = nn - (nn @ t) * t
        nn_norm = np.linalg.norm(nn)
        nn = nn / nn_norm
        b = np.cross(t, nn)
        defect = max(defect, float(np.linalg.norm(state[9:12] - b)))
        drift = max(drift, defect)
        state[3:6] = t
        state[6:9] = nn
        state[9:12] = b

        X[j + 1] = state[0:3]
        T[j + 1] = t
        N[j + 1] = nn
        B[j + 1] = b

    return X, T, N, B, drift


def rk4_linear(a_n, a_m, b_n, b_m, h, y0):
    """Integrate the scalar linear ODE y' = a(t) y + b(t) on the grid."""
    n = a_n.shape[0]
    out = np.empty(n)
    out[0] = y0
    y = float(y0)
    for j in range(n - 1):
        k1 = a_n[j] * y + b_n[j]
        k2 = a_m[j] * (y + 0.5 * h * k1) + b_m[j]
        k3 = a_m[j] * (y + 0.5 * h * k2) + b_m[j]
        k4 = a_n[j + 1] * (y + h * k3) + b_n[j + 1]
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[j + 1] = y
    return out
