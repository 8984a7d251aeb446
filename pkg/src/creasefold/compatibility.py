"""Rigid-ruling foldability: pair conditions, integrated constants, verdicts.

For each interior patch the two adjacent creases carry

    F_1 = s_1' k_1 / sin(theta_1L),   F_2 = s_2' k_2 / sin(theta_2R),
    I_i = (1/2) int s_i' k_i (cot(theta_iL) + cot(theta_iR)) dt,

and the pair admits a rigid-ruling folding motion exactly when

    (A)  F_1'/F_1 - F_2'/F_2 + I_1' - I_2' = 0        and
    (B)  F_2^2 I_1' = F_1^2 I_2'

hold away from the (shared) inflection parameters.  Their integrated form
fits two constants per pair,

    c3 = F_1 e^{I_1} / (F_2 e^{I_2}) > 0,    c4 = e^{2 I_1} - c3^2 e^{2 I_2},

which later drive the fold-constant propagation c_2 = -c_1 c3 / sqrt(1 - c_1^2 c4).
Checking adjacent pairs is enough: pairwise motions assemble into a motion of
the whole pattern, one degree of freedom per pair near the flat state.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IncompatiblePattern, RulingTangentToCrease
from .numerics import FuncGrid, cumulative_integral, derivative
from .pattern import inflection_nodes, ruling_angles, validate

RES_TOL = 1e-5          # pair-condition tolerance at the default resolution
EPS_THETA = 1e-6        # planar / constant fold-angle classification
T0_BUFFER_CELLS = 3     # cells excluded around inflection nodes
FD_EDGE_TRIM = 8        # two stencil widths: the composed-FD edge band
STRAIGHT_K_FLOOR = 1e-9


@dataclass(frozen=True)
class CreaseClass:
    planar: bool
    constant_fold: bool
    straight: bool

    @property
    def label(self):
        if self.straight:
            return "both(straight)"
        if self.planar and self.constant_fold:
            return "planar+constant-fold-angle"
        if self.planar:
            return "planar"
        if self.constant_fold:
            return "constant-fold-angle"
        return "generic"


def classify_crease(pattern, i, eps_theta=EPS_THETA):
    """Planar (theta_L = theta_R), constant fold-angle (theta_L + theta_R = pi),
    both for straight creases, generic otherwise."""
    crease = pattern.crease(i)
    k_scale = np.max(np.abs(crease.curvature.values))
    diameter = pattern.diameter()
    if k_scale * diameter < STRAIGHT_K_FLOOR:
        return CreaseClass(True, True, True)
    th_l, th_r = ruling_angles(pattern, i)
    planar = bool(np.max(np.abs(th_l.values - th_r.values)) < eps_theta)
    constant = bool(np.max(np.abs(th_l.values + th_r.values - np.pi)) < eps_theta)
    return CreaseClass(planar, constant, False)


def crease_fold_integrand(pattern, i):
    """f_i = (1/2) s_i' k_i (cot theta_iL + cot theta_iR), the I_i integrand."""
    crease = pattern.crease(i)
    th_l, th_r = ruling_angles(pattern, i)
    sk = crease.speed.values * crease.curvature.values
    vals = 0.5 * sk * (1.0 / np.tan(th_l.values) + 1.0 / np.tan(th_r.values))
    return FuncGrid(pattern.grid, vals)


@dataclass(frozen=True)
class PairProfile:
    grid: object
    F1: FuncGrid
    F2: FuncGrid
    I1: FuncGrid
    I2: FuncGrid
    constant_fold_pair: bool

    def included_nodes(self, t0_nodes, buffer_cells=T0_BUFFER_CELLS,
                       edge_trim=FD_EDGE_TRIM):
        mask = np.ones(self.grid.n, dtype=bool)
        for j in np.atleast_1d(t0_nodes):
            lo = max(0, int(j) - buffer_cells)
            hi = min(self.grid.n, int(j) + buffer_cells + 1)
            mask[lo:hi] = False
        trim = min(edge_trim, max(2, (self.grid.n - 9) // 4))
        if trim:
            mask[:trim] = False
            mask[-trim:] = False
        return mask


def pair_profile(pattern, i):
    """Profile of the interior patch between creases i and i+1 (1 <= i <= n-1)."""
    if not 1 <= i <= pattern.n_creases - 1:
        raise IndexError(f"interior patch index {i} out of range")
    c1 = pattern.crease(i)
    c2 = pattern.crease(i + 1)
    th1_l, _ = ruling_angles(pattern, i)
    _, th2_r = ruling_angles(pattern, i + 1)
    if min(np.min(np.abs(np.sin(th1_l.values))),
           np.min(np.abs(np.sin(th2_r.values)))) < 1e-9:
        raise RulingTangentToCrease("pair profile undefined: sin theta ~ 0")
    g = pattern.grid
    F1 = FuncGrid(g, c1.speed.values * c1.curvature.values / np.sin(th1_l.values))
    F2 = FuncGrid(g, c2.speed.values * c2.curvature.values / np.sin(th2_r.values))
    I1 = cumulative_integral(crease_fold_integrand(pattern, i))
    I2 = cumulative_integral(crease_fold_integrand(pattern, i + 1))
    const_pair = (classify_crease(pattern, i).constant_fold
                  and classify_crease(pattern, i + 1).constant_fold)
    return PairProfile(g, F1, F2, I1, I2, const_pair)


def condition_residuals(profile, t0_nodes):
    """Dimensionless residuals (resA, resB) of the two pair conditions.

    resA is the worst value of |F_1'/F_1 - F_2'/F_2 + I_1' - I_2'| relative to
    the magnitude of its terms; resB is the worst |F_2^2 I_1' - F_1^2 I_2'|
    relative to max(F^2) * max|I'|.  Nodes within a few cells of the
    inflection set are excluded (F'/F is 0/0 there).
    """
    mask = profile.included_nodes(t0_nodes)
    if not np.any(mask):
        return 0.0, 0.0
    g = profile.grid
    F1, F2 = profile.F1.values, profile.F2.values
    dF1 = derivative(profile.F1).values
    dF2 = derivative(profile.F2).values
    dI1 = derivative(profile.I1).values
    dI2 = derivative(profile.I2).values

    with np.errstate(divide="ignore", invalid="ignore"):
        q1 = dF1 / F1
        q2 = dF2 / F2
    terms = np.abs(q1[mask]) + np.abs(q2[mask]) + np.abs(dI1[mask]) + np.abs(dI2[mask])
    if not np.all(np.isfinite(terms)):
        return np.inf, np.inf
    scale_a = max(float(np.max(terms)), 1.0 / g.t_max)
    res_a = float(np.max(np.abs(q1[mask] - q2[mask] + dI1[mask] - dI2[mask]))) / scale_a

    f_sq = max(float(np.max(F1[mask] ** 2)), float(np.max(F2[mask] ** 2)))
    i_scale = max(float(np.max(np.abs(dI1[mask]))), float(np.max(np.abs(dI2[mask]))),
                  1.0 / g.t_max)
    num_b = np.abs(F2[mask] ** 2 * dI1[mask] - F1[mask] ** 2 * dI2[mask])
    res_b = float(np.max(num_b)) / (f_sq * i_scale) if f_sq > 0 else 0.0
    return res_a, res_b


def integrated_constants(profile, t0_nodes):
    """(c3, c4, fit_residual) from the integrated pair conditions.

    c3 is the median of F_1 e^{I_1} / (F_2 e^{I_2}) over the included nodes
    and must be one positive constant; c4 the median of e^{2I_1} - c3^2 e^{2I_2}.
    Constant fold-angle pairs report c4 = 1 - c3^2 exactly.
    """
    mask = profile.included_nodes(t0_nodes)
    F1, F2 = profile.F1.values[mask], profile.F2.values[mask]
    if F1.size == 0 or np.max(np.abs(F1)) == 0.0 or np.max(np.abs(F2)) == 0.0:
        # straight pair: conditions are vacuous
        return 1.0, 0.0, 0.0
    e1 = np.exp(profile.I1.values[mask])
    e2 = np.exp(profile.I2.values[mask])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (F1 * e1) / (F2 * e2)
    if not np.all(np.isfinite(ratio)):
        raise IncompatiblePattern("F ratio undefined away from inflections")
    if np.min(ratio) <= 0.0 < np.max(ratio):
        raise IncompatiblePattern("F_1/F_2 changes sign: no single constant c3")
    if np.max(ratio) <= 0.0:
        raise IncompatiblePattern(
            "F_1 e^I1 / (F_2 e^I2) is negative: c3 must be positive. "
            "This typically means the second crease is oriented against the "
            "pattern's left-to-right convention.")
    c3 = float(np.median(ratio))
    if profile.constant_fold_pair:
        c4 = 1.0 - c3 * c3
        c4_fit = 0.0
    else:
        c4_pt = e1 ** 2 - c3 * c3 * e2 ** 2
        c4 = float(np.median(c4_pt))
        c4_fit = float(np.max(np.abs(c4_pt - c4))) / max(1.0, abs(c4))
    fit = max(float(np.max(np.abs(ratio - c3))) / abs(c3), c4_fit)
    return c3, c4, fit


@dataclass(frozen=True)
class PairReport:
    res_a: float
    res_b: float
    c3: float | None
    c4: float | None
    fit_residual: float | None
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class CompatibilityReport:
    verdict: str                 # "rigid-ruling foldable" | "incompatible" | "degenerate"
    pairs: tuple                 # PairReport per interior patch
    classifications: tuple       # CreaseClass per crease
    t0_nodes: np.ndarray
    diagnostics: tuple
    validation: object

    @property
    def foldable(self):
        return self.verdict == "rigid-ruling foldable"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "pairs": [{"resA": p.res_a, "resB": p.res_b, "c3": p.c3, "c4": p.c4,
                       "fit_residual": p.fit_residual, "passed": p.passed,
                       "note": p.note} for p in self.pairs],
            "classifications": [c.label for c in self.classifications],
            "inflection_nodes": [int(j) for j in self.t0_nodes],
            "diagnostics": list(self.diagnostics),
            "validation": {
                "regular": self.validation.regular,
                "candidate": self.validation.candidate,
                "diagnostics": list(self.validation.diagnostics),
            } if self.validation is not None else None,
        }


def compatibility_report(pattern, tol=RES_TOL, eps_theta=EPS_THETA):
    """Pairwise conditions, constants and classifications with one verdict."""
    val = validate(pattern)
    classes = tuple(classify_crease(pattern, i, eps_theta)
                    for i in range(1, pattern.n_creases + 1))
    if not (val.regular and val.candidate):
        return CompatibilityReport("degenerate", (), classes, val.t0_nodes,
                                   ("pattern is not a regular candidate",), val)
    t0 = val.t0_nodes
    pairs = []
    diags = []
    all_pass = True
    for i in range(1, pattern.n_creases):
        prof = pair_profile(pattern, i)
        res_a, res_b = condition_residuals(prof, t0)
        passed = res_a < tol and res_b < tol
        note = ""
        c3 = c4 = fit = None
        if passed:
            try:
                c3, c4, fit = integrated_constants(prof, t0)
            except IncompatiblePattern as exc:
                passed = False
                note = str(exc)
        else:
            note = "pair conditions violated"
        pairs.append(PairReport(res_a, res_b, c3, c4, fit, passed, note))
        all_pass = all_pass and passed

    verdict = "rigid-ruling foldable" if all_pass else "incompatible"

    # cross-checks that explain *why* mixed special-class patterns fail
    any_constant = any(c.constant_fold for c in classes)
    if any_constant and not all(c.constant_fold for c in classes):
        bad = [i + 1 for i, c in enumerate(classes) if not c.constant_fold]
        diags.append(
            f"creases {bad} are not constant fold-angle although the pattern "
            f"contains one: a foldable pattern with a constant fold-angle "
            f"crease must be constant fold-angle throughout")
        if verdict == "rigid-ruling foldable":
            verdict = "incompatible"
    if pattern.kind == "cylinder-graph":
        for i, c in enumerate(classes, start=1):
            if c.planar and not c.straight and any_constant and verdict != "rigid-ruling foldable":
                diags.append(
                    f"crease {i}: a curved planar crease on a cylinder cannot "
                    f"fold together with a constant fold-angle crease")
                break
    if pattern.kind == "cone-radial" and any_constant:
        for i, c in enumerate(classes, start=1):
            if c.planar and not c.straight:
                lp = FuncGrid(pattern.grid, pattern.lengths[i]).node_derivatives
                perp = float(np.max(np.abs(lp)))
                if perp < 1e-6:
                    diags.append(f"crease {i}: planar crease perpendicular to "
                                 f"the cone rulings (|l'| <= {perp:.2e})")
                else:
                    diags.append(
                        f"crease {i}: planar crease on a cone must be "
                        f"perpendicular to the rulings to fold with a constant "
                        f"fold-angle crease (max |l'| = {perp:.2e})")
    return CompatibilityReport(verdict, tuple(pairs), classes, t0,
                               tuple(diags), val)
