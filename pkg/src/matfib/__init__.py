"""Fibring by functions of finite logical matrices."""

from .core import (
    App,
    Entailment,
    Formula,
    FormulaSyntaxError,
    LogicError,
    Matrix,
    MatrixError,
    Signature,
    Var,
    entails,
    evaluate,
    format_formula,
    is_tautology,
    is_trivial,
    parse_formula,
    substitute,
)
from .fibring import (
    FibredMatrix,
    FibringPair,
    TaggedValue,
    count_admissible_pairs,
    enumerate_admissible_pairs,
    fibre,
    is_admissible,
    is_compatible,
    sfv_evaluate,
    star_lambda,
    star_mu,
)

__version__ = "0.1.0"
