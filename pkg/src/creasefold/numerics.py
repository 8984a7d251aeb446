"""Shared grid-sampled function type, differentiation, quadrature and RK4.

Every curve, angle and length function in a pattern lives on one shared
uniform grid over [0, t_max], so that rulings join equal parameter values by
index.  Evaluation between nodes is cubic-Hermite; node derivatives come from
4th-order finite differences, which keeps differentiation, quadrature and
interpolation consistent at O(h^4).
"""

from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, OdeBlowUp

DEFAULT_SAMPLES = 401

# One-sided 4th-order first-derivative stencils in difference form
# (coefficients of f_k - f_pivot, so constants differentiate to exactly 0).
_EDGE0 = np.array([48.0, -36.0, 16.0, -3.0])   # pivot f_0, applied to f_1..f_4
_EDGE1 = np.array([-3.0, 18.0, -6.0, 1.0])     # pivot f_1, applied to f_0, f_2..f_4


@dataclass(frozen=True)
class Grid:
    """Uniform parameter grid t_j = j * t_max / (n - 1) over [0, t_max]."""

    t_max: float
    n: int

    def __post_init__(self):
        if not (self.t_max > 0.0 and np.isfinite(self.t_max)):
            raise GridTooCoarse(f"t_max must be positive and finite, got {self.t_max}")
        if self.n < 16:
            raise GridTooCoarse(f"need at least 16 samples, got {self.n}")

    @property
    def h(self):
        return self.t_max / (self.n - 1)

    @property
    def nodes(self):
        return np.linspace(0.0, self.t_max, self.n)

    def refined(self, factor=2):
        """Grid over the same domain with (n-1)*factor + 1 nodes."""
        return Grid(self.t_max, (self.n - 1) * factor + 1)


class FuncGrid:
    """A real function of the pattern parameter sampled on a shared Grid."""

    __slots__ = ("grid", "values", "_derivs")

    def __init__(self, grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise GridTooCoarse(f"expected {grid.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise GridTooCoarse("non-finite sample values")
        self.grid = grid
        self.values = values
        self.values.flags.writeable = False
        self._derivs = None

    @classmethod
    def from_callable(cls, grid, fn):
        return cls(grid, fn(grid.nodes))

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.n, float(c)))

    @property
    def node_derivatives(self):
        if self._derivs is None:
            self._derivs = _fd_derivative(self.values, self.grid.h)
        return self._derivs

    def __call__(self, t):
        """Cubic-Hermite evaluation; exact at the nodes."""
        t = np.asarray(t, dtype=float)
        g = self.grid
        u = np.clip(t / g.h, 0.0, g.n - 1)
        j = np.minimum(u.astype(int), g.n - 2)
        s = u - j
        f0 = self.values[j]
        f1 = self.values[j + 1]
        d0 = self.node_derivatives[j] * g.h
        d1 = self.node_derivatives[j + 1] * g.h
        s2 = s * s
        s3 = s2 * s
        out = ((2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0
               + (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * d1)
        return out if out.ndim else float(out)

    def midpoint_values(self):
        """Values at the n-1 cell midpoints t_j + h/2 (Hermite)."""
        f = self.values
        d = self.node_derivatives
        h = self.grid.h
        return 0.5 * (f[:-1] + f[1:]) + (h / 8.0) * (d[:-1] - d[1:])

    # Small arithmetic helpers so derived quantities stay on the grid.
    def _coerce(self, other):
        if isinstance(other, FuncGrid):
            if other.grid != self.grid:
                raise GridTooCoarse("FuncGrid arithmetic requires a shared grid")
            return other.values
        return other

    def __add__(self, other):
        return FuncGrid(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return FuncGrid(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return FuncGrid(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        return FuncGrid(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FuncGrid(self.grid, self.values / self._coerce(other))

    def __neg__(self):
        return FuncGrid(self.grid, -self.values)


def _fd_derivative(values, h):
    n = values.shape[0]
    if n < 5:
        raise GridTooCoarse("derivative needs at least 5 nodes")
    d = np.empty(n)
    d[2:-2] = (8.0 * (values[3:-1] - values[1:-3])
               - (values[4:] - values[:-4])) / (12.0 * h)
    d[0] = _EDGE0 @ (values[1:5] - values[0]) / (12.0 * h)
    head = np.concatenate([values[:1], values[2:5]])
    d[1] = _EDGE1 @ (head - values[1]) / (12.0 * h)
    rev = values[::-1]
    d[-1] = -(_EDGE0 @ (rev[1:5] - rev[0])) / (12.0 * h)
    tail = np.concatenate([rev[:1], rev[2:5]])
    d[-2] = -(_EDGE1 @ (tail - rev[1])) / (12.0 * h)
    return d


def derivative(f):
    """4th-order finite-difference derivative on the grid."""
    return FuncGrid(f.grid, _fd_derivative(f.values, f.grid.h))


def cumulative_integral(f):
    """Antiderivative with F(0) = 0, 4th-order (Hermite cell quadrature)."""
    v = f.values
    d = f.node_derivatives
    h = f.grid.h
    cells = 0.5 * h * (v[:-1] + v[1:]) + (h * h / 12.0) * (d[:-1] - d[1:])
    out = np.empty(f.grid.n)
    out[0] = 0.0
    np.cumsum(cells, out=out[1:])
    return FuncGrid(f.grid, out)


def integrate_ode(rhs, y0, grid):
    """Classical RK4 with fixed step h over the grid nodes.

    rhs(t, y) -> dy/dt for a state vector of dimension <= 16; returns an
    (n, dim) array with one state per node.
    """
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    if y0.size > 16:
        raise OdeBlowUp(0.0, "state dimension exceeds 16")
    h = grid.h
    t = grid.nodes
    out = np.empty((grid.n, y0.size))
    out[0] = y0
    y = y0
    for j in range(grid.n - 1):
        k1 = np.asarray(rhs(t[j], y), dtype=float)
        k2 = np.asarray(rhs(t[j] + 0.5 * h, y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(rhs(t[j] + 0.5 * h, y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(rhs(t[j + 1], y + h * k3), dtype=float)
        if not (np.all(np.isfinite(k1)) and np.all(np.isfinite(k2))
                and np.all(np.isfinite(k3)) and np.all(np.isfinite(k4))):
            raise OdeBlowUp(t[j])
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[j + 1] = y
    return out


def integrate_ode_sampled(rhs, y0, grid, coeffs):
    """RK4 where the rhs depends on t only through sampled coefficients.

    coeffs is a sequence of FuncGrids; rhs(vals, y) receives their values at
    the stage time (classical RK4 only evaluates at nodes and midpoints, so
    the coefficient lattice is precomputed and no interpolation happens in
    the loop).
    """
    node_vals = np.column_stack([c.values for c in coeffs])
    mid_vals = np.column_stack([c.midpoint_values() for c in coeffs])
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    h = grid.h
    out = np.empty((grid.n, y0.size))
    out[0] = y0
    y = y0
    for j in range(grid.n - 1):
        k1 = np.asarray(rhs(node_vals[j], y), dtype=float)
        k2 = np.asarray(rhs(mid_vals[j], y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(rhs(mid_vals[j], y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(rhs(node_vals[j + 1], y + h * k3), dtype=float)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise OdeBlowUp(grid.nodes[j])
        out[j + 1] = y
    return out


def resample_values(values, n_from, n_to, t_max):
    """Resample a per-node array onto a grid with n_to samples (Hermite)."""
    values = np.asarray(values, dtype=float)
    if n_to == n_from:
        return values.copy()
    src = FuncGrid(Grid(t_max, n_from), values)
    return np.asarray(src(Grid(t_max, n_to).nodes))
