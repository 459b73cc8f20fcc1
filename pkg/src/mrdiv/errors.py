"""Exception taxonomy shared across the package."""
from __future__ import annotations


class StructuralError(ValueError):
    """Malformed operands: dimension mismatch, missing bipartition, bad index sets."""


class DomainError(ValueError):
    """Inputs outside an operation's mathematical domain."""


class ValidationError(ValueError):
    """An object fails its own invariants (POVM completeness, normalization, ...)."""


class SolverError(RuntimeError):
    """An iterative routine exhausted its budget without meeting its tolerance."""


class ResourceError(RuntimeError):
    """A configured resource cap (total dimension, bracket growth) was exceeded."""
