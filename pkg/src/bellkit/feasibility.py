"""Existence of a noncontextual joint probability distribution for a
four-observable scenario, decided two independent ways: exact LP feasibility
over the 16-atom joint distribution, and the four permuted CHSH inequalities
(Fine's criterion). The LP is the adjudicating oracle; the two must agree on
every consistent marginal set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InconsistentMarginalsError
from .hidden_vars import HVModel, ModelVerification, build_hv_model, verify_model
from .linalg import commutator, frobenius_norm, tensor_product
from .scenario import BellScenario, positive_projector

#: Phase-1 objective above this certifies infeasibility.
LP_FEASIBILITY_TOL = 1e-9
#: Closed-inequality tolerance on |CHSH| <= 2.
CHSH_TOL = 1e-9

_SINGLE_FIELDS = ("p_a", "p_b", "p_c", "p_d")
_PAIR_FIELDS = ("p_ab", "p_ad", "p_bc", "p_cd")


@dataclass(frozen=True)
class MarginalSet:
    """The eight measurable quantities of a four-observable scenario:
    the four singles and the four cross-side pair probabilities."""
    p_a: float
    p_b: float
    p_c: float
    p_d: float
    p_ab: float
    p_ad: float
    p_bc: float
    p_cd: float

    def validate(self, tol: float = 1e-9) -> None:
        """Raise InconsistentMarginalsError on basic probability violations."""
        problems = []
        for name in _SINGLE_FIELDS + _PAIR_FIELDS:
            v = getattr(self, name)
            if not -tol <= v <= 1.0 + tol:
                problems.append(f"{name} = {v} outside [0, 1]")
        for pair in _PAIR_FIELDS:
            x, y = pair[2], pair[3]
            pxy = getattr(self, pair)
            px, py = getattr(self, f"p_{x}"), getattr(self, f"p_{y}")
            if pxy > min(px, py) + tol:
                problems.append(f"{pair} = {pxy} exceeds min({px}, {py})")
            if pxy < px + py - 1.0 - tol:
                problems.append(f"{pair} = {pxy} below p_{x} + p_{y} - 1 = {px + py - 1}")
        if problems:
            raise InconsistentMarginalsError("; ".join(problems))

    def as_dict(self) -> dict[str, float]:
        return {name: float(getattr(self, name)) for name in _SINGLE_FIELDS + _PAIR_FIELDS}

    @classmethod
    def from_dict(cls, record: dict) -> "MarginalSet":
        missing = [k for k in _SINGLE_FIELDS + _PAIR_FIELDS if k not in record]
        if missing:
            raise ValueError(f"marginal record missing fields: {missing}")
        extra = [k for k in record if k not in _SINGLE_FIELDS + _PAIR_FIELDS]
        if extra:
            raise ValueError(f"marginal record has unknown fields: {extra}")
        return cls(**{k: float(v) for k, v in record.items()})


class JointDistribution:
    """Nonnegative weights on the 16 outcomes (A, B, C, D) in {0, 1}^4.

    Index layout: ``weights[8a + 4b + 2c + d]`` with 1 meaning "true".
    """

    def __init__(self, weights):
        q = np.asarray(weights, dtype=float)
        if q.shape != (16,):
            raise ValueError(f"expected 16 weights, got shape {q.shape}")
        if np.any(q < -1e-12):
            raise ValueError("weights must be nonnegative")
        if abs(q.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {q.sum()}, expected 1")
        q = np.clip(q, 0.0, None)
        q.setflags(write=False)
        self.weights = q

    def marginal(self, labels: str) -> float:
        """Probability that every named observable among 'abcd' is true."""
        bit = {"a": 8, "b": 4, "c": 2, "d": 1}
        total = 0.0
        for idx in range(16):
            if all(idx & bit[x] for x in labels):
                total += self.weights[idx]
        return float(total)

    def all_marginals(self) -> dict[str, float]:
        """All 15 nonempty-subset probabilities."""
        out = {}
        for size in range(1, 5):
            for subset in combinations("abcd", size):
                key = "".join(subset)
                out[key] = self.marginal(key)
        return out

    def to_marginal_set(self) -> MarginalSet:
        return MarginalSet(
            p_a=self.marginal("a"), p_b=self.marginal("b"),
            p_c=self.marginal("c"), p_d=self.marginal("d"),
            p_ab=self.marginal("ab"), p_ad=self.marginal("ad"),
            p_bc=self.marginal("bc"), p_cd=self.marginal("cd"),
        )

    def chains_hold(self, tol: float = 1e-12) -> bool:
        """Monotonicity under label-set inclusion, for every chain of subsets."""
        probs = self.all_marginals()
        for big, p_big in probs.items():
            for small in combinations(big, len(big) - 1):
                key = "".join(small)
                reference = 1.0 if not key else probs[key]
                if p_big > reference + tol:
                    return False
        return True


@dataclass(frozen=True)
class FineReport:
    """The four permuted CHSH values; satisfied iff all within the classical bound."""
    satisfied: bool
    chsh_values: tuple[float, float, float, float]


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    witness: JointDistribution | None
    fine_criterion: bool
    chsh_values: tuple[float, float, float, float]


def _pair_correlation(m: MarginalSet, x: str, y: str) -> float:
    """<xy> for +-1 observables from the 0/1 marginals: 4 p_XY - 2 p_X - 2 p_Y + 1."""
    key = f"p_{x}{y}" if f"p_{x}{y}" in m.__dataclass_fields__ else f"p_{y}{x}"
    pxy = getattr(m, key)
    return 4.0 * pxy - 2.0 * getattr(m, f"p_{x}") - 2.0 * getattr(m, f"p_{y}") + 1.0


def fine_criterion(m: MarginalSet, tol: float = CHSH_TOL) -> FineReport:
    """Evaluate the four CHSH combinations (original, a<->c, b<->d, both swaps).

    Each permutation puts the minus sign on a different measured pair, so in
    absolute value the four cover all eight signed Clauser-Horne inequalities.
    Satisfaction (all |values| <= 2) is equivalent to LP feasibility for
    consistent marginals.
    """
    m.validate()
    e = {pair: _pair_correlation(m, pair[0], pair[1]) for pair in ("ab", "bc", "cd", "ad")}
    values = (
        e["ab"] + e["bc"] + e["cd"] - e["ad"],
        e["bc"] + e["ab"] + e["ad"] - e["cd"],
        e["ad"] + e["cd"] + e["bc"] - e["ab"],
        e["cd"] + e["ad"] + e["ab"] - e["bc"],
    )
    return FineReport(
        satisfied=all(abs(v) <= 2.0 + tol for v in values),
        chsh_values=values,
    )


# ---------------------------------------------------------------------------
# Phase-1 simplex
# ---------------------------------------------------------------------------

def _phase1_simplex(a: np.ndarray, b: np.ndarray, pivot_tol: float = 1e-12):
    """Minimize the sum of artificial variables for A x = b, x >= 0 (b >= 0).

    Plain dense tableau simplex with Bland's anti-cycling rule (entering
    variable: lowest-index negative reduced cost; leaving: lowest-index among
    ratio-test ties), which guarantees termination on this tiny fixed-size
    problem. Returns (objective, x).
    """
    n_rows, n_cols = a.shape
    if np.any(b < 0):
        raise ValueError("right-hand side must be nonnegative")
    # tableau: [A | I | b], objective row below (phase-1 costs: artificials only)
    tableau = np.zeros((n_rows + 1, n_cols + n_rows + 1))
    tableau[:n_rows, :n_cols] = a
    tableau[:n_rows, n_cols:n_cols + n_rows] = np.eye(n_rows)
    tableau[:n_rows, -1] = b
    basis = list(range(n_cols, n_cols + n_rows))
    # reduced costs: c - c_B B^-1 A with c = (0 ... 0 | 1 ... 1)
    tableau[-1, :] = 0.0
    tableau[-1, n_cols:n_cols + n_rows] = 1.0
    for r in range(n_rows):
        tableau[-1, :] -= tableau[r, :]

    for _ in range(10_000):
        entering = -1
        for j in range(n_cols + n_rows):
            if tableau[-1, j] < -pivot_tol:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = np.inf
        for r in range(n_rows):
            coef = tableau[r, entering]
            if coef > pivot_tol:
                ratio = tableau[r, -1] / coef
                if ratio < best_ratio - 1e-15 or (
                    abs(ratio - best_ratio) <= 1e-15
                    and (leaving < 0 or basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            raise RuntimeError("phase-1 objective unbounded; malformed constraint matrix")
        pivot = tableau[leaving, entering]
        tableau[leaving, :] /= pivot
        for r in range(n_rows + 1):
            if r != leaving and tableau[r, entering] != 0.0:
                tableau[r, :] -= tableau[r, entering] * tableau[leaving, :]
        basis[leaving] = entering
    else:
        raise RuntimeError("simplex iteration limit exceeded")

    x = np.zeros(n_cols)
    objective = 0.0
    for r, var in enumerate(basis):
        if var < n_cols:
            x[var] = tableau[r, -1]
        else:
            objective += tableau[r, -1]
    return objective, x


def _marginal_rows() -> tuple[np.ndarray, list[str]]:
    rows = [np.ones(16)]
    names = ["total"]
    bit = {"a": 8, "b": 4, "c": 2, "d": 1}
    for name in _SINGLE_FIELDS + _PAIR_FIELDS:
        labels = name[2:]
        row = np.array([1.0 if all(i & bit[x] for x in labels) else 0.0 for i in range(16)])
        rows.append(row)
        names.append(name)
    return np.array(rows), names


_LP_MATRIX, _LP_ROW_NAMES = _marginal_rows()


def joint_feasible(m: MarginalSet, tol: float = LP_FEASIBILITY_TOL) -> FeasibilityVerdict:
    """Decide whether the eight marginals extend to a joint distribution.

    Solves the feasibility LP over the 16 atom weights (nonnegativity plus
    normalization and the eight marginal equalities); the monotone chains over
    unmeasured subsets follow automatically from nonnegative atoms, so they
    are implied rather than imposed. A witness distribution is attached when
    feasible. Inconsistent marginals raise InconsistentMarginalsError instead
    of reporting infeasibility.
    """
    m.validate()
    b = np.array([1.0] + [getattr(m, name) for name in _SINGLE_FIELDS + _PAIR_FIELDS])
    b = np.clip(b, 0.0, None)
    objective, x = _phase1_simplex(_LP_MATRIX, b)
    fine = fine_criterion(m)
    if objective > tol:
        return FeasibilityVerdict(
            feasible=False, witness=None,
            fine_criterion=fine.satisfied, chsh_values=fine.chsh_values,
        )
    total = x.sum()
    if abs(total - 1.0) > 1e-9:
        raise RuntimeError(f"simplex returned a non-normalized witness (sum {total})")
    witness = JointDistribution(x / total)
    return FeasibilityVerdict(
        feasible=True, witness=witness,
        fine_criterion=fine.satisfied, chsh_values=fine.chsh_values,
    )


# ---------------------------------------------------------------------------
# Quantum scenarios
# ---------------------------------------------------------------------------

def marginals_from_scenario(s: BellScenario) -> MarginalSet:
    """Measured marginals of a scenario: p_X = Tr(rho P_X), p_XY = Tr(rho P_X P_Y)
    for the four cross-side (hence commuting) pairs. The +1-eigenspace
    projectors are recovered from the dichotomic observables as (x + I)/2."""
    m, n = s.dims
    pa = tensor_product(positive_projector(s.a), np.eye(n))
    pc = tensor_product(positive_projector(s.c), np.eye(n))
    pb = tensor_product(np.eye(m), positive_projector(s.b))
    pd = tensor_product(np.eye(m), positive_projector(s.d))
    rho = s.state
    return MarginalSet(
        p_a=float(np.clip(rho.expectation(pa), 0.0, 1.0)),
        p_b=float(np.clip(rho.expectation(pb), 0.0, 1.0)),
        p_c=float(np.clip(rho.expectation(pc), 0.0, 1.0)),
        p_d=float(np.clip(rho.expectation(pd), 0.0, 1.0)),
        p_ab=float(np.clip(rho.expectation(pa @ pb), 0.0, 1.0)),
        p_ad=float(np.clip(rho.expectation(pa @ pd), 0.0, 1.0)),
        p_bc=float(np.clip(rho.expectation(pc @ pb), 0.0, 1.0)),
        p_cd=float(np.clip(rho.expectation(pc @ pd), 0.0, 1.0)),
    )


@dataclass(frozen=True)
class ContextualityReport:
    """Per-context hidden-variable models beside the joint-feasibility verdict.

    Each measurable context (here {a, b} and {a, d}) admits a valid model; when
    the marginals are jointly infeasible, no single model can serve both, which
    is the operational content of contextuality.
    """
    context_verifications: dict[str, ModelVerification]
    context_models: dict[str, HVModel]
    verdict: FeasibilityVerdict
    all_commuting: bool
    global_model: HVModel | None
    global_verification: ModelVerification | None


def contextuality_demo(s: BellScenario, tol: float = LP_FEASIBILITY_TOL) -> ContextualityReport:
    """Build HV models for the overlapping contexts {a, b} and {a, d} and set
    them against the joint-feasibility verdict for the same scenario."""
    m, n = s.dims
    joint_ops = {
        "a": tensor_product(s.a, np.eye(n)),
        "b": tensor_product(np.eye(m), s.b),
        "c": tensor_product(s.c, np.eye(n)),
        "d": tensor_product(np.eye(m), s.d),
    }
    models = {}
    verifications = {}
    for labels in (("a", "b"), ("a", "d")):
        ops = {k: joint_ops[k] for k in labels}
        model = build_hv_model(s.state, ops)
        models["".join(labels)] = model
        verifications["".join(labels)] = verify_model(model, s.state, ops)

    verdict = joint_feasible(marginals_from_scenario(s), tol=tol)

    all_commuting = all(
        frobenius_norm(commutator(joint_ops[x], joint_ops[y])) <= 1e-8
        for x, y in combinations("abcd", 2)
    )
    global_model = None
    global_verification = None
    if all_commuting:
        global_model = build_hv_model(s.state, joint_ops)
        global_verification = verify_model(global_model, s.state, joint_ops)

    return ContextualityReport(
        context_verifications=verifications,
        context_models=models,
        verdict=verdict,
        all_commuting=all_commuting,
        global_model=global_model,
        global_verification=global_verification,
    )
