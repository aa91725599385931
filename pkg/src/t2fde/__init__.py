"""Type-1 and quasi-type-2 fuzzy arithmetic, Hukuhara calculus and a
solver for second-order linear type-2 fuzzy initial value problems."""

from .errors import (
    DegenerateMismatch,
    FuzzyError,
    GridMismatch,
    HypothesisViolated,
    IntegrationFailure,
    NoHukuharaDifference,
    NotDifferentiableInForm,
    OutOfSupport,
    SpecParseError,
    UnsupportedSpectrum,
)
from .interval import Interval
from .ivp import (
    FuzzyTrajectory,
    HukuharaMinusScaled,
    PlusScaled,
    ProblemSpec,
    TermMode,
    admissible_forms,
    build_cut_system,
    closed_form_solve,
    solve,
)
from .t1 import AlphaGrid, T1Fuzzy, TriangularT1, from_triangular
from .t2 import BetaGrid, T2Fuzzy, TriangularQT2, d_hung_yang, from_triangular_qt2

__version__ = "0.1.0"

__all__ = [
    "AlphaGrid",
    "BetaGrid",
    "DegenerateMismatch",
    "FuzzyError",
    "FuzzyTrajectory",
    "GridMismatch",
    "HukuharaMinusScaled",
    "HypothesisViolated",
    "IntegrationFailure",
    "Interval",
    "NoHukuharaDifference",
    "NotDifferentiableInForm",
    "OutOfSupport",
    "PlusScaled",
    "ProblemSpec",
    "SpecParseError",
    "T1Fuzzy",
    "T2Fuzzy",
    "TermMode",
    "TriangularQT2",
    "TriangularT1",
    "UnsupportedSpectrum",
    "admissible_forms",
    "build_cut_system",
    "closed_form_solve",
    "d_hung_yang",
    "from_triangular",
    "from_triangular_qt2",
    "solve",
]
