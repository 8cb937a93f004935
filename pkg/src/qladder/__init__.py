"""qladder: hypergeometric-type difference equations on nonuniform lattices,
their polynomial and orthonormal-function solutions, ladder operators, and
factorization identity checks for six q-polynomial families.
"""

from .qkernel import (
    NonConvergedError,
    QBase,
    QKernelError,
    SeriesSpec,
    alpha_q,
    basic_hypergeometric,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_inf,
)
from .lattice import DegenerateStepError, GridFunction, Lattice
from .hypergeometric_core import EquationData, WeightTable
from .families import (
    FamilyError,
    FamilySpec,
    eval_series,
    eval_ttrr,
    family_names,
    make_family,
    norm_sq,
    reference_params,
    weight_at,
)
from .ladder import OrthonormalFamily

__version__ = "0.1.0"

__all__ = [
    "QBase",
    "QKernelError",
    "NonConvergedError",
    "DegenerateStepError",
    "SeriesSpec",
    "q_number",
    "alpha_q",
    "q_factorial",
    "q_pochhammer",
    "q_pochhammer_inf",
    "basic_hypergeometric",
    "Lattice",
    "GridFunction",
    "EquationData",
    "WeightTable",
    "FamilyError",
    "FamilySpec",
    "make_family",
    "family_names",
    "reference_params",
    "eval_series",
    "eval_ttrr",
    "weight_at",
    "norm_sq",
    "OrthonormalFamily",
    "__version__",
]
