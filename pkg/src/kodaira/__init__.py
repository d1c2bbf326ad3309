"""Exact computations on Jacobian elliptic surfaces over finite fields.

Fiber classification by Tate's algorithm, quadratic twists and Frobenius base
change, infinitesimal group-scheme actions with their vector fields, and Igusa
curve genera.  Everything is exact arithmetic over F_q(t).
"""

from .errors import (DomainError, DomainMismatchError, FieldDivisionError, InternalConsistencyError,
                     KodairaError, NotApplicableError, ParseError)
from .fields import ExtensionField, PrimeField
from .invariants import SurfaceReport, analyze, fixed_point_ledger, lattice_check
from .modelio import load_model, parse_model, render_model
from .tate import KodairaType, tate_local
from .weierstrass import WeierstrassModel

__all__ = [
    "DomainError", "DomainMismatchError", "FieldDivisionError", "InternalConsistencyError",
    "KodairaError", "NotApplicableError", "ParseError", "ExtensionField", "PrimeField",
    "SurfaceReport", "analyze", "fixed_point_ledger", "lattice_check", "load_model",
    "parse_model", "render_model", "KodairaType", "tate_local", "WeierstrassModel",
]
