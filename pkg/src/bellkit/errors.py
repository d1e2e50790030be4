"""Exception types shared across the toolkit."""

from __future__ import annotations


class CommutationError(ValueError):
    """Raised when an operation requires commuting operators but got a non-commuting pair.

    Carries the Frobenius norm of the offending commutator in ``commutator_norm``.
    """

    def __init__(self, message: str, commutator_norm: float):
        super().__init__(f"{message} (||[A,B]|| = {commutator_norm:.3e})")
        self.commutator_norm = float(commutator_norm)


class InconsistentMarginalsError(ValueError):
    """Raised for marginal sets that violate basic probability consistency.

    Distinct from Bell-type infeasibility: a set that fails e.g. p_AB <= p_A is
    malformed input, not a physical no-joint-distribution verdict.
    """
