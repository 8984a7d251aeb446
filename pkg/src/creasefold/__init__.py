"""Curved-crease origami kernel.

Validates crease-rule patterns, decides rigid-ruling foldability, computes
folded states and folding motions, and constructs new foldable patterns.
"""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .append import (AppendSpec, append_crease_cone, append_crease_cylinder,
                     append_crease_general, constant_fold_pair_cone,
                     constant_fold_pair_cylinder)
from .compatibility import compatibility_report
from .folding import fold_pattern, sample_motion
from .numerics import FuncGrid, Grid
from .pattern import load_pattern, save_pattern, validate
from .transform import add_parallel_pleat, combescure_transform

__version__ = "0.1.0"

__all__ = [
    "AppendSpec", "FuncGrid", "Grid", "KERNEL_IMPLEMENTATION",
    "add_parallel_pleat", "append_crease_cone", "append_crease_cylinder",
    "append_crease_general", "combescure_transform", "compatibility_report",
    "constant_fold_pair_cone", "constant_fold_pair_cylinder", "fold_pattern",
    "load_pattern", "sample_motion", "save_pattern", "validate", "__version__",
]
