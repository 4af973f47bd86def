"""Numerical and interval-certified experiments on the Sendov conjecture.

Modules: ``poly`` (polynomials and roots), ``instance`` and ``checks``
(the instance model and its identities), ``halfplane`` (bisector geometry),
``mahler`` (Mahler measures and Szego composition), ``certify`` (interval
branch-and-bound), ``generate``/``search``/``suite``/``cli`` (harness).
"""

from .instance import CheckResult, SendovInstance, build_instance
from .poly import Polynomial, find_roots, from_roots

__all__ = ["CheckResult", "Polynomial", "SendovInstance", "build_instance", "find_roots", "from_roots"]
