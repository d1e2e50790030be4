"""Randomized property sweeps over states, scenarios, and marginal sets.

Every sweep returns rows of (seed, kind, slack) with the uniform convention
that slack >= -tolerance means the property held for that sample; the
per-sweep tolerances live in SWEEP_TOLERANCES. Rows are deterministic
functions of the base seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .entropy import (
    ClassicalDistribution,
    araki_lieb,
    bell_purity_bound,
    check_concavity,
    check_subadditivity,
    classical_monotonicity,
    linear_entropy_criterion,
)
from .feasibility import JointDistribution, joint_feasible, marginals_from_scenario
from .linalg import (
    DensityOperator,
    hermitian_eigensystem,
    random_density,
    random_dichotomic,
    tensor_product,
)
from .scenario import (
    TSIRELSON_BOUND,
    BellScenario,
    bell_operator,
    beta,
    direction_vector,
    maximize_violation,
    werner_state,
)


@dataclass(frozen=True)
class SweepRow:
    seed: int
    kind: str
    slack: float


LAMBDA_GRID = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
ENTROPY_KINDS = ("shannon", "von_neumann", "linear_classical", "linear_quantum")


def _random_classical(size: int, seed: int, dims=None) -> ClassicalDistribution:
    rng = np.random.default_rng(seed)
    w = rng.exponential(size=size)
    return ClassicalDistribution(w / w.sum(), dims=dims)


def random_traceless_scenario(m: int, n: int, seed: int) -> BellScenario:
    return BellScenario(
        a=random_dichotomic(m, traceless=True, seed=seed),
        b=random_dichotomic(n, traceless=True, seed=seed + 1),
        c=random_dichotomic(m, traceless=True, seed=seed + 2),
        d=random_dichotomic(n, traceless=True, seed=seed + 3),
        state=random_density(m * n, seed=seed + 4),
    )


def sweep_concavity(samples: int, seed: int = 0, dim: int = 4) -> list[SweepRow]:
    rows = []
    per_kind = max(1, samples // len(ENTROPY_KINDS))
    for kind in ENTROPY_KINDS:
        for i in range(per_kind):
            s = seed + i
            if kind in ("shannon", "linear_classical"):
                a = _random_classical(dim, 2 * s)
                b = _random_classical(dim, 2 * s + 1)
            else:
                a = random_density(dim, seed=2 * s)
                b = random_density(dim, seed=2 * s + 1)
            rows.append(SweepRow(s, kind, check_concavity(a, b, LAMBDA_GRID, kind)))
    return rows


def sweep_subadditivity(samples: int, seed: int = 0, dims: tuple[int, int] = (2, 2)) -> list[SweepRow]:
    m, n = dims
    rows = []
    per_kind = max(1, samples // len(ENTROPY_KINDS))
    for kind in ENTROPY_KINDS:
        for i in range(per_kind):
            s = seed + i
            if kind in ("shannon", "linear_classical"):
                slack = check_subadditivity(_random_classical(m * n, s, dims=dims), kind)
            else:
                slack = check_subadditivity(random_density(m * n, seed=s), kind, dims=dims)
            rows.append(SweepRow(s, kind, slack))
    return rows


def sweep_classical_monotonicity(samples: int, seed: int = 0, dims: tuple[int, int] = (2, 3)) -> list[SweepRow]:
    m, n = dims
    return [
        SweepRow(seed + i, "shannon", classical_monotonicity(_random_classical(m * n, seed + i, dims=dims)))
        for i in range(samples)
    ]


def sweep_araki_lieb(samples: int, seed: int = 0, dims: tuple[int, int] = (2, 2)) -> list[SweepRow]:
    m, n = dims
    return [
        SweepRow(seed + i, "von_neumann", araki_lieb(random_density(m * n, seed=seed + i), dims))
        for i in range(samples)
    ]


def sweep_purity_bound(samples: int, seed: int = 0) -> list[SweepRow]:
    """Purity-vs-CHSH bound on random two-qubit states with traceless observables."""
    return [
        SweepRow(seed + i, "purity_bound", bell_purity_bound(random_traceless_scenario(2, 2, 10 * (seed + i))))
        for i in range(samples)
    ]


def sweep_bell_traces(samples: int, seed: int = 0, dims_list: Iterable[tuple[int, int]] = ((2, 2), (2, 4), (4, 4))) -> list[SweepRow]:
    """Trace identities of the Bell operator for traceless observables:
    slack = -|Tr B| and -|Tr B^2 - 4MN| (zero deviation = zero slack)."""
    dims_list = tuple(dims_list)
    rows = []
    for i in range(samples):
        m, n = dims_list[i % len(dims_list)]
        s = random_traceless_scenario(m, n, 10 * (seed + i))
        bm = bell_operator(s).matrix
        rows.append(SweepRow(seed + i, f"trace_{m}x{n}", -abs(float(np.trace(bm).real))))
        rows.append(SweepRow(seed + i, f"trace_sq_{m}x{n}", -abs(float(np.trace(bm @ bm).real) - 4.0 * m * n)))
    return rows


def sweep_tsirelson(samples: int, seed: int = 0, dims_list: Iterable[tuple[int, int]] = ((2, 2), (2, 4), (4, 4))) -> list[SweepRow]:
    """Largest Bell-operator eigenvalue against the quantum ceiling."""
    dims_list = tuple(dims_list)
    rows = []
    for i in range(samples):
        m, n = dims_list[i % len(dims_list)]
        s = random_traceless_scenario(m, n, 10 * (seed + i))
        w, _ = hermitian_eigensystem(bell_operator(s).matrix)
        rows.append(SweepRow(seed + i, f"spectrum_{m}x{n}", TSIRELSON_BOUND - max(abs(w[0]), abs(w[-1]))))
    return rows


def sweep_product_beta(samples: int, seed: int = 0) -> list[SweepRow]:
    """Product states never beat the classical CHSH bound: slack = 2 - |beta|."""
    rows = []
    for i in range(samples):
        s0 = 10 * (seed + i)
        ra = random_density(2, seed=s0)
        rb = random_density(2, seed=s0 + 1)
        state = DensityOperator(tensor_product(ra.matrix, rb.matrix))
        s = BellScenario(
            a=random_dichotomic(2, True, s0 + 2), b=random_dichotomic(2, True, s0 + 3),
            c=random_dichotomic(2, True, s0 + 4), d=random_dichotomic(2, True, s0 + 5),
            state=state,
        )
        rows.append(SweepRow(seed + i, "product_beta", 2.0 - abs(beta(s))))
    return rows


CANONICAL_DIRECTIONS = tuple(direction_vector(t) for t in (0.0, 45.0, 90.0, 135.0))


def random_marginal_scenario(seed: int):
    """Marginal sets spanning feasible and infeasible territory:
    explicit joints, Werner states at canonical angles, and random
    states/directions (including pure entangled states near extremality)."""
    rng = np.random.default_rng(seed)
    case = seed % 4
    if case == 0:
        q = rng.exponential(size=16)
        return JointDistribution(q / q.sum()).to_marginal_set(), "joint"
    if case == 1:
        s = BellScenario.from_directions(werner_state(float(rng.uniform())), *CANONICAL_DIRECTIONS)
        return marginals_from_scenario(s), "werner"
    if case == 2:
        dirs = [direction_vector(float(rng.uniform(0, 180)), float(rng.uniform(0, 360))) for _ in range(4)]
        s = BellScenario.from_directions(random_density(4, seed=seed), *dirs)
        return marginals_from_scenario(s), "random_state"
    jitter = [direction_vector(t + float(rng.uniform(-15, 15)), float(rng.uniform(-10, 10)))
              for t in (0.0, 45.0, 90.0, 135.0)]
    s = BellScenario.from_directions(werner_state(float(rng.uniform(0.7, 1.0))), *jitter)
    return marginals_from_scenario(s), "near_extremal"


def sweep_fine_equivalence(samples: int, seed: int = 0) -> list[SweepRow]:
    """LP feasibility must agree with the four permuted CHSH inequalities, and
    every witness must reproduce its marginals: slack = +1 on agreement, -1 on
    any mismatch."""
    rows = []
    for i in range(samples):
        m, kind = random_marginal_scenario(seed + i)
        verdict = joint_feasible(m)
        ok = verdict.feasible == verdict.fine_criterion
        if verdict.feasible:
            got = verdict.witness.to_marginal_set()
            ok = ok and all(
                abs(getattr(got, k) - v) < 1e-9 for k, v in m.as_dict().items()
            )
        rows.append(SweepRow(seed + i, kind, 1.0 if ok else -1.0))
    return rows


def sweep_sufficiency(samples: int, seed: int = 0) -> list[SweepRow]:
    """States passing the linear-entropy condition must stay classical under
    optimization: slack = 2 - beta_max over such states."""
    rows = []
    attempts = 0
    while len(rows) < samples and attempts < 50 * samples:
        s = seed + attempts
        attempts += 1
        state = random_density(4, seed=s)
        if not linear_entropy_criterion(state, (2, 2)).holds:
            continue
        best = maximize_violation(state, seed=s).beta_max
        rows.append(SweepRow(s, "sufficiency", 2.0 - best))
    if len(rows) < samples:
        raise RuntimeError("could not draw enough states satisfying the condition")
    return rows


SWEEPS: dict[str, Callable[..., list[SweepRow]]] = {
    "concavity": sweep_concavity,
    "subadditivity": sweep_subadditivity,
    "classical-monotonicity": sweep_classical_monotonicity,
    "araki-lieb": sweep_araki_lieb,
    "purity-bound": sweep_purity_bound,
    "bell-traces": sweep_bell_traces,
    "tsirelson": sweep_tsirelson,
    "product-beta": sweep_product_beta,
    "fine-equivalence": sweep_fine_equivalence,
    "sufficiency": sweep_sufficiency,
}

#: Pass thresholds: a sweep passes when min slack >= -tolerance.
SWEEP_TOLERANCES: dict[str, float] = {
    "concavity": 1e-10,
    "subadditivity": 1e-10,
    "classical-monotonicity": 1e-10,
    "araki-lieb": 1e-10,
    "purity-bound": 1e-9,
    "bell-traces": 1e-8,
    "tsirelson": 1e-9,
    "product-beta": 1e-9,
    "fine-equivalence": 0.0,
    "sufficiency": 1e-6,
}


def run_sweep(name: str, samples: int, seed: int = 0, **params) -> tuple[list[SweepRow], float]:
    """Run a registered sweep; returns (rows, min_slack)."""
    if name not in SWEEPS:
        raise ValueError(f"unknown sweep {name!r}; available: {sorted(SWEEPS)}")
    rows = SWEEPS[name](samples, seed=seed, **params)
    return rows, min(r.slack for r in rows)
