"""Sums of read-once polynomials: constructions, refutations and an exhaustive oracle."""

from .errors import RofsumError
from .mpoly import Poly, gen_M, gen_f, gen_symmetric
from .numfield import FieldCtx, Q

__version__ = "0.1.0"

__all__ = ["FieldCtx", "Poly", "Q", "RofsumError", "gen_M", "gen_f", "gen_symmetric"]
