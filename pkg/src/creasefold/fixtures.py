"""Analytic fixture patterns used by the test suite and shipped as JSON.

Each builder returns a CreaseRulePattern; `write_all(dir)` dumps the JSON
documents.  The fixtures are chosen so that expected folding behaviour has a
closed form:

* annulus -- concentric circular creases around a cone apex; folds to a
  right circular double cone, constants c3 = 1, c4 = 0.
* pleated sine cylinder -- two tangent-parallel sine creases on vertical
  rulings (both planar), a foldable pleat.
* catenary pair -- l = cosh(2t)/2 against l = cosh(t) with mirrored outer
  angles: a constant fold-angle pair with F1/F2 = 2, hence c3 = 2, c4 = -3.
* off-center annulus -- the negative control: crease 2 replaced by an
  off-center circle, which breaks the radial symmetry of the ruling angles.
* mixed planar/constant fixtures -- a curved planar crease paired with a
  constant fold-angle crease: never foldable on a cylinder; foldable on a
  cone exactly when the planar crease is perpendicular to the rulings.
"""

import os

import numpy as np

from .numerics import DEFAULT_SAMPLES, FuncGrid, Grid, integrate_ode
from .pattern import build_cone_radial, build_cylinder_graph, save_pattern


def annulus(samples=DEFAULT_SAMPLES, radii=(0.5, 1.0, 2.0, 2.5), t_max=np.pi / 2):
    grid = Grid(t_max, samples)
    lengths = [np.full(grid.n, r) for r in radii]
    return build_cone_radial((0.0, 0.0), t_max, samples, lengths)


def pleated_sine_cylinder(samples=DEFAULT_SAMPLES, t_max=np.pi):
    grid = Grid(t_max, samples)
    t = grid.nodes
    wave = 0.2 * np.sin(t)
    lengths = [np.full(grid.n, -0.5), wave, wave + 1.0, np.full(grid.n, 1.7)]
    return build_cylinder_graph(t_max, samples, lengths)


def scaled_sine_cylinder(samples=DEFAULT_SAMPLES, t_max=np.pi, alpha=2.0):
    """Scaled planar pair l2 = alpha l1 + 1 on vertical rulings (c4 > 0)."""
    grid = Grid(t_max, samples)
    t = grid.nodes
    l1 = 0.2 * np.sin(t)
    l2 = alpha * l1 + 1.0
    lengths = [l1 - 0.5, l1, l2, l2 + 0.3]
    return build_cylinder_graph(t_max, samples, lengths)


def catenary_pair(samples=DEFAULT_SAMPLES, t_max=0.8):
    """Constant fold-angle pair on a cylinder: l1 = cosh(2t)/2, l2 = cosh(t)."""
    grid = Grid(t_max, samples)
    t = grid.nodes
    l1 = np.cosh(2.0 * t) / 2.0
    l2 = np.cosh(t)
    lengths = [l1 - 0.25, l1, l2, l2 + 0.25]
    first_r = np.pi - np.arctan2(np.ones(grid.n), np.sinh(2.0 * t))
    last_l = np.pi - np.arctan2(np.ones(grid.n), np.sinh(t))
    return build_cylinder_graph(t_max, samples, lengths, first_r, last_l)


def off_center_annulus(samples=DEFAULT_SAMPLES, offset=0.6, t_max=np.pi / 2):
    """Negative control: crease 2 is a circle of radius 2 centered at (offset, 0)."""
    grid = Grid(t_max, samples)
    t = grid.nodes
    l2 = offset * np.cos(t) + np.sqrt(4.0 - (offset * np.sin(t)) ** 2)
    lengths = [np.full(grid.n, 0.5), np.full(grid.n, 1.0), l2, l2 + 0.5]
    return build_cone_radial((0.0, 0.0), t_max, samples, lengths)


def cylinder_mixed_planar_constant(samples=DEFAULT_SAMPLES, t_max=np.pi):
    """Curved planar crease + constant fold-angle crease on a cylinder (rejected)."""
    grid = Grid(t_max, samples)
    t = grid.nodes
    wave = 0.2 * np.sin(t)
    lengths = [np.full(grid.n, -0.5), wave, wave + 1.0, np.full(grid.n, 1.7)]
    last_l = np.pi - np.arctan2(np.ones(grid.n), 0.2 * np.cos(t))
    return build_cylinder_graph(t_max, samples, lengths, outer_last_l=last_l)


def _constant_fold_partner_cone(grid, c3, l0, lp0):
    """Length function with -f/(l sqrt(e)) = F identically equal to -1/c3."""
    def rhs(t, y):
        l, lp = y
        e = l * l + lp * lp
        return np.array([lp, l + 2.0 * lp * lp / l - np.sqrt(e) / c3])

    ys = integrate_ode(rhs, [l0, lp0], grid)
    return ys[:, 0]


def cone_mixed_perp(samples=DEFAULT_SAMPLES, t_max=np.pi / 2):
    """Planar circle (perpendicular to the rulings) + constant fold crease (accepted)."""
    grid = Grid(t_max, samples)
    t = grid.nodes
    l1 = np.full(grid.n, 1.0)
    l2 = _constant_fold_partner_cone(grid, 1.0, 2.0, 0.3)
    last_l = np.pi - np.arctan2(l2, FuncGrid(grid, l2).node_derivatives)
    lengths = [np.full(grid.n, 0.6), l1, l2, l2 + 0.4]
    return build_cone_radial((0.0, 0.0), t_max, samples, lengths,
                             outer_last_l=last_l)


def cone_mixed_tilted(samples=DEFAULT_SAMPLES, t_max=np.pi / 2):
    """Planar crease not perpendicular to the rulings + constant fold crease (rejected)."""
    grid = Grid(t_max, samples)
    t = grid.nodes
    l1 = 1.0 + 0.1 * np.sin(t)
    l2 = _constant_fold_partner_cone(grid, 1.0, 2.0, 0.3)
    last_l = np.pi - np.arctan2(l2, FuncGrid(grid, l2).node_derivatives)
    lengths = [np.full(grid.n, 0.6), l1, l2, l2 + 0.4]
    return build_cone_radial((0.0, 0.0), t_max, samples, lengths,
                             outer_last_l=last_l)


BUILDERS = {
    "annulus": annulus,
    "pleated-sine-cylinder": pleated_sine_cylinder,
    "scaled-sine-cylinder": scaled_sine_cylinder,
    "catenary-pair": catenary_pair,
    "off-center-annulus": off_center_annulus,
    "cylinder-mixed": cylinder_mixed_planar_constant,
    "cone-mixed-perp": cone_mixed_perp,
    "cone-mixed-tilted": cone_mixed_tilted,
}


def write_all(directory, samples=DEFAULT_SAMPLES):
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, builder in BUILDERS.items():
        path = os.path.join(directory, f"{name}.json")
        save_pattern(builder(samples), path)
        paths.append(path)
    return paths


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    for p in write_all(target):
        print(p)
