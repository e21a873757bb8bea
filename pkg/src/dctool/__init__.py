"""Exact and numerical models of differentiation with antiderivatives.

Three executable models of the same operator family (derive, coderive, the
degree operators K and J with their inverses, and the antiderivative integral
s), a commutative-semiring coefficient layer, a generic law suite, and a
command-line runner.
"""

from .rig import BOOLEAN, NONNEG_RATIONAL, RATIONAL, RIGS, NotInvertible, Rig
from .lawsuite import LAWS, run_law, run_suite, all_pass
from .bindings import make_poly_binding, make_rel_binding, make_smooth_binding

__version__ = "1.0.0"

__all__ = [
    "BOOLEAN",
    "NONNEG_RATIONAL",
    "RATIONAL",
    "RIGS",
    "Rig",
    "NotInvertible",
    "LAWS",
    "run_law",
    "run_suite",
    "all_pass",
    "make_poly_binding",
    "make_rel_binding",
    "make_smooth_binding",
    "__version__",
]
