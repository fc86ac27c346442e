"""Exact construction and machine verification of transgression forms for
characteristic classes, in the free differential-graded model of a connection
with curvature over a reductive splitting."""

from .algebra import (
    Context,
    Derivation,
    Generator,
    GradedElement,
    Monomial,
    Scalar,
    integrate_unit_interval,
    substitute_t,
    t_derivative,
)
from .invariants import (
    InvariantPolynomial,
    evaluate,
    pfaffian,
    symmetrized_trace,
)
from .lie import (
    LieAlgebra,
    LieValuedForm,
    ReductiveSplit,
    abelian_algebra,
    bracket,
    gl_algebra,
    project,
    so_algebra,
    su2_algebra,
    u_algebra,
    validate,
    validate_split,
)
from .transgression import (
    TransgressionResult,
    coefficient_A,
    tp_chern_euler,
    tp_integral,
    tp_johnson,
    verify_transgression,
)
from .weil import UniversalSetup

__version__ = "0.1.0"
