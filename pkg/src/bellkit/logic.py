"""Propositions as projectors: trivalent truth values, meet/join/negation on
commuting families, state probabilities, and the distance-based triangle and
quadrilateral inequality checkers.

Meet and join are implemented only for commuting projectors, where the lattice
meet is the operator product; a non-commuting pair raises
:class:`~bellkit.errors.CommutationError` instead of silently computing a
subspace intersection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CommutationError
from .linalg import (
    DEFAULT_TOL,
    DensityOperator,
    PureState,
    as_matrix,
    commutator,
    frobenius_norm,
    is_projector,
)

#: Frobenius norm below which a commutator counts as zero. Inputs are built
#: analytically, so this separates roundoff from genuine non-commutation by
#: many orders of magnitude.
COMMUTE_TOL = 1e-8
#: Default tolerance on inequality slacks.
SLACK_TOL = 1e-10


class TruthValue(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDEFINED = "undefined"


class Proposition:
    """A yes/no observable: a labelled Hermitian idempotent (projector)."""

    def __init__(self, label: str, projector, tol: float = DEFAULT_TOL):
        p = as_matrix(projector)
        if not is_projector(p, tol):
            raise ValueError(f"proposition {label!r}: matrix is not a projector within tolerance")
        p = p.copy()
        p.setflags(write=False)
        self.label = str(label)
        self._projector = p

    @property
    def projector(self) -> np.ndarray:
        return self._projector

    @property
    def dim(self) -> int:
        return self._projector.shape[0]

    def __repr__(self) -> str:
        return f"Proposition({self.label!r}, dim={self.dim})"


def sure(dim: int, label: str = "I") -> Proposition:
    """The always-true proposition (whole space)."""
    return Proposition(label, np.eye(dim, dtype=complex))


def absurd(dim: int, label: str = "0") -> Proposition:
    """The always-false proposition (null space)."""
    return Proposition(label, np.zeros((dim, dim), dtype=complex))


def _require_commuting(a: Proposition, b: Proposition, what: str) -> None:
    norm = frobenius_norm(commutator(a.projector, b.projector))
    if norm > COMMUTE_TOL:
        raise CommutationError(f"{what} requires commuting projectors {a.label!r}, {b.label!r}", norm)


def _require_same_dim(dim_a: int, dim_b: int, what: str) -> None:
    if dim_a != dim_b:
        raise ValueError(f"{what}: dimension mismatch ({dim_a} vs {dim_b})")


def truth_value(p: Proposition, psi: PureState, tol: float = DEFAULT_TOL) -> TruthValue:
    """Trivalent valuation: TRUE iff P|psi> = |psi>, FALSE iff P|psi> = 0, else UNDEFINED."""
    _require_same_dim(p.dim, psi.dim, "truth_value")
    image = p.projector @ psi.amplitudes
    if np.linalg.norm(image - psi.amplitudes) <= tol:
        return TruthValue.TRUE
    if np.linalg.norm(image) <= tol:
        return TruthValue.FALSE
    return TruthValue.UNDEFINED


def meet(a: Proposition, b: Proposition) -> Proposition:
    """Lattice meet (conjunction) of commuting propositions: the product AB."""
    _require_same_dim(a.dim, b.dim, "meet")
    _require_commuting(a, b, "meet")
    return Proposition(f"({a.label}&{b.label})", a.projector @ b.projector)


def join(a: Proposition, b: Proposition) -> Proposition:
    """Lattice join (disjunction) of commuting propositions: A + B - AB."""
    _require_same_dim(a.dim, b.dim, "join")
    _require_commuting(a, b, "join")
    return Proposition(f"({a.label}|{b.label})", a.projector + b.projector - a.projector @ b.projector)


def negate(a: Proposition) -> Proposition:
    """Negation: I - A."""
    return Proposition(f"~{a.label}", np.eye(a.dim, dtype=complex) - a.projector)


class LogicState:
    """A probability assignment on propositions, realized by a density operator."""

    def __init__(self, rho: DensityOperator):
        self.rho = rho

    @property
    def dim(self) -> int:
        return self.rho.dim


def _as_state(s) -> LogicState:
    return s if isinstance(s, LogicState) else LogicState(s)


def state_prob(p: Proposition, s: LogicState | DensityOperator) -> float:
    """Probability Tr(rho P), clamped to [0, 1]."""
    s = _as_state(s)
    _require_same_dim(p.dim, s.dim, "state_prob")
    return float(np.clip(s.rho.expectation(p.projector), 0.0, 1.0))


@dataclass(frozen=True)
class DistanceReport:
    """State-dependent distance between two commuting propositions."""
    d: float
    p_meet: float
    p_join: float


def distance(a: Proposition, b: Proposition, s: LogicState | DensityOperator) -> DistanceReport:
    """d(A, B) = p(A or B) - p(A and B): the probability the two disagree.

    Bounded by [0, 1]; 0 for identical propositions, 1 for a proposition and
    its negation.
    """
    s = _as_state(s)
    _require_same_dim(a.dim, s.dim, "distance")
    p_meet = state_prob(meet(a, b), s)
    p_join = state_prob(join(a, b), s)
    return DistanceReport(d=p_join - p_meet, p_meet=p_meet, p_join=p_join)


def indistinguishable_but_distinct(
    a: Proposition, b: Proposition, s: LogicState | DensityOperator, tol: float = DEFAULT_TOL
) -> bool:
    """Optional pseudometric probe: d(A,B) = 0 while A != B as operators."""
    zero_distance = distance(a, b, s).d <= tol
    distinct = frobenius_norm(a.projector - b.projector) > tol
    return zero_distance and distinct


@dataclass(frozen=True)
class TriangleReport:
    holds: bool
    slack: float
    distances: tuple[float, float, float]  # d(A,B), d(A,C), d(B,C)


def triangle_check(
    a: Proposition,
    b: Proposition,
    c: Proposition,
    s: LogicState | DensityOperator,
    tol: float = SLACK_TOL,
) -> TriangleReport:
    """Check |d(A,B) - d(A,C)| <= d(B,C) <= d(A,B) + d(A,C) for a commuting triple.

    The slack is the minimum margin over both sides; negative means violated.
    """
    for x, y in ((a, b), (a, c), (b, c)):
        _require_commuting(x, y, "triangle_check")
    d_ab = distance(a, b, s).d
    d_ac = distance(a, c, s).d
    d_bc = distance(b, c, s).d
    slack = min(d_bc - abs(d_ab - d_ac), d_ab + d_ac - d_bc)
    return TriangleReport(holds=slack >= -tol, slack=slack, distances=(d_ab, d_ac, d_bc))


@dataclass(frozen=True)
class QuadReport:
    holds: bool
    slack: float
    worst_permutation: str
    per_permutation: dict[str, float]


#: The four label permutations of the quadrilateral inequality: identity and
#: the swaps that exchange the two settings on either side.
_QUAD_PERMUTATIONS: dict[str, tuple[int, int, int, int]] = {
    "abcd": (0, 1, 2, 3),
    "cbad": (2, 1, 0, 3),  # swap a <-> c
    "adcb": (0, 3, 2, 1),  # swap b <-> d
    "cdab": (2, 3, 0, 1),  # both swaps
}


def quad_check(
    a: Proposition,
    b: Proposition,
    c: Proposition,
    d: Proposition,
    s: LogicState | DensityOperator,
    tol: float = SLACK_TOL,
) -> QuadReport:
    """Quadrilateral inequality d(A,D) <= d(A,B) + d(B,C) + d(C,D) over the four
    label permutations, each checked together with its complemented partner.

    Only the four adjacent pairs {A,B}, {B,C}, {C,D}, {A,D} must commute; the
    diagonals {A,C} and {B,D} may not. For each permutation the checker
    evaluates both the path inequality and the same inequality applied to
    (A, ~B, C, ~D), which uses d(X, ~Y) = 1 - d(X, Y), so both sides are
    expressible in the original four distances. Together the eight checks are
    the necessary conditions a classical joint distribution must satisfy.

    The report carries the tightest slack (negative when violated) and the
    permutation achieving it.
    """
    props = (a, b, c, d)
    for x, y in ((a, b), (b, c), (c, d), (a, d)):
        _require_commuting(x, y, "quad_check")
    dist_of = {}
    for i, j in ((0, 1), (1, 2), (2, 3), (0, 3)):
        dist_of[(i, j)] = dist_of[(j, i)] = distance(props[i], props[j], s).d

    per: dict[str, float] = {}
    for name, (i, j, k, l) in _QUAD_PERMUTATIONS.items():
        path = dist_of[(i, j)] + dist_of[(j, k)] + dist_of[(k, l)]
        endpoint = dist_of[(i, l)]
        direct = path - endpoint
        complemented = 2.0 + endpoint - path
        per[name] = min(direct, complemented)
    worst = min(per, key=lambda k: per[k])
    slack = per[worst]
    return QuadReport(holds=slack >= -tol, slack=slack, worst_permutation=worst, per_permutation=per)
