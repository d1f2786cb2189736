"""Real-zero certification via Hermite matrices and determinantal representations."""

from .polynomials import (
    Polynomial,
    PolyMatrix,
    RationalFunction,
    exact_divide,
    parse_polynomial,
)
from .hermite import (
    HermiteMatrix,
    hermite_matrix,
    is_psd,
    newton_sums,
    rank_and_signature,
    univariate_hermite,
)
from .realzero import (
    RzReport,
    RzVerdict,
    nodal_plane_cubic,
    rz_check,
    rz_check_quadratic,
    rz_check_samples,
    square_free_probabilistic,
    vamos_polynomial,
)

__all__ = [
    "Polynomial", "PolyMatrix", "RationalFunction", "exact_divide",
    "parse_polynomial",
    "HermiteMatrix", "hermite_matrix", "is_psd", "newton_sums",
    "rank_and_signature", "univariate_hermite",
    "RzReport", "RzVerdict", "nodal_plane_cubic", "rz_check",
    "rz_check_quadratic", "rz_check_samples", "square_free_probabilistic",
    "vamos_polynomial",
]

__version__ = "0.1.0"
