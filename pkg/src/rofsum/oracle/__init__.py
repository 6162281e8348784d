"""Exhaustive ground truth over small prime fields."""

from .kernels import BACKEND
from .ropset import (
    Certificate,
    RopSet,
    cache_path,
    check_limits,
    cross_check_f_family,
    ropset_build,
    sum_membership,
)

__all__ = [
    "BACKEND",
    "Certificate",
    "RopSet",
    "cache_path",
    "check_limits",
    "cross_check_f_family",
    "ropset_build",
    "sum_membership",
]
