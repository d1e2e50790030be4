"""EPR-type scenarios: dichotomic observables split across two subsystems,
Clauser-Horne and CHSH values, the Bell operator and its trace identities,
violation maximization over measurement directions, and the spacelike
separation estimate for a two-apparatus test.

Side convention: observables ``a`` and ``c`` act on subsystem 1, ``b`` and
``d`` on subsystem 2, matching the tensor positions in the Bell operator
a(x)b + c(x)b + c(x)d - a(x)d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DensityOperator,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_matrix,
    frobenius_norm,
    is_hermitian,
    is_projector,
    tensor_product,
)
from .logic import Proposition

#: Exact defined value of the speed of light, m/s.
SPEED_OF_LIGHT = 299_792_458.0
#: Quantum ceiling on the CHSH combination.
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

OBSERVABLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Preset states
# ---------------------------------------------------------------------------

def singlet_state() -> DensityOperator:
    """Two-qubit zero-total-spin pure state (|01> - |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / math.sqrt(2.0)
    v[2] = -1.0 / math.sqrt(2.0)
    return DensityOperator(np.outer(v, np.conj(v)))


def product00_state() -> DensityOperator:
    """|00><00|."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0
    return DensityOperator(m)


def maximally_mixed_state(dim: int = 4) -> DensityOperator:
    return DensityOperator(np.eye(dim, dtype=complex) / dim)


def werner_state(w: float) -> DensityOperator:
    """w * singlet + (1 - w) * I/4 for w in [0, 1]."""
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"werner weight must be in [0, 1], got {w}")
    return DensityOperator(w * singlet_state().matrix + (1.0 - w) * np.eye(4) / 4.0)


def preset_state(name: str) -> DensityOperator:
    """Resolve a named preset: singlet, product00, mixed, or werner:<w>."""
    if name == "singlet":
        return singlet_state()
    if name == "product00":
        return product00_state()
    if name == "mixed":
        return maximally_mixed_state(4)
    if name.startswith("werner:"):
        return werner_state(float(name.split(":", 1)[1]))
    raise ValueError(f"unknown state preset {name!r}")


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------

def direction_vector(theta_deg: float, phi_deg: float = 0.0) -> np.ndarray:
    """Unit 3-vector from polar/azimuthal angles in degrees."""
    t, p = math.radians(theta_deg), math.radians(phi_deg)
    return np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])


def spin_observable(direction) -> np.ndarray:
    """n . sigma for a unit 3-vector n: a traceless +-1 qubit observable."""
    n = np.asarray(direction, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > DEFAULT_TOL:
        raise ValueError(f"direction must be a unit 3-vector, got {direction!r}")
    return n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z


def spin_projector(direction, label: str | None = None) -> Proposition:
    """Rank-1 projector onto spin-up along a unit direction: (I + n.sigma)/2."""
    n = np.asarray(direction, dtype=float)
    p = (np.eye(2, dtype=complex) + spin_observable(n)) / 2.0
    if label is None:
        label = "P(" + ",".join(f"{x:+.3f}" for x in n) + ")"
    return Proposition(label, p)


def dichotomize(p: Proposition) -> np.ndarray:
    """Map a projector-valued proposition to the +-1 observable 2P - I."""
    return 2.0 * p.projector - np.eye(p.dim, dtype=complex)


def positive_projector(observable) -> np.ndarray:
    """Projector onto the +1 eigenspace of a +-1 observable: (x + I)/2."""
    x = as_matrix(observable)
    p = (x + np.eye(x.shape[0], dtype=complex)) / 2.0
    if not is_projector(p, 1e-7):
        raise ValueError("observable is not a +-1 observable (its (x+I)/2 is not a projector)")
    return p


def _check_dichotomic(name: str, x: np.ndarray, tol: float) -> None:
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"observable {name} must be square")
    if not is_hermitian(x, tol):
        raise ValueError(f"observable {name} is not Hermitian within tolerance")
    if frobenius_norm(x @ x - np.eye(x.shape[0])) > tol * x.shape[0]:
        raise ValueError(f"observable {name} does not square to the identity within tolerance")


class BellScenario:
    """Four dichotomic observables split across two subsystems, plus a joint state.

    ``a`` and ``c`` act on the first subsystem (dimension M), ``b`` and ``d``
    on the second (dimension N); the state lives on dimension M*N.
    """

    def __init__(self, a, b, c, d, state: DensityOperator, tol: float = OBSERVABLE_TOL):
        self.a = as_matrix(a)
        self.b = as_matrix(b)
        self.c = as_matrix(c)
        self.d = as_matrix(d)
        for name, x in (("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)):
            _check_dichotomic(name, x, tol)
        m = self.a.shape[0]
        n = self.b.shape[0]
        if self.c.shape[0] != m:
            raise ValueError("observables a and c must share the first subsystem's dimension")
        if self.d.shape[0] != n:
            raise ValueError("observables b and d must share the second subsystem's dimension")
        if state.dim != m * n:
            raise ValueError(f"state dimension {state.dim} != M*N = {m * n}")
        self.state = state
        self.dims = (m, n)

    @classmethod
    def from_directions(cls, state: DensityOperator, na, nb, nc, nd) -> "BellScenario":
        """Two-qubit scenario from four measurement directions (unit 3-vectors)."""
        return cls(
            spin_observable(na), spin_observable(nb), spin_observable(nc), spin_observable(nd), state
        )

    def __repr__(self) -> str:
        return f"BellScenario(dims={self.dims})"


@dataclass(frozen=True)
class CorrelationSet:
    """The four measured product expectations of a Bell scenario."""
    ab: float
    bc: float
    cd: float
    ad: float

    def __post_init__(self):
        for name in ("ab", "bc", "cd", "ad"):
            v = getattr(self, name)
            if not -1.0 - 1e-9 <= v <= 1.0 + 1e-9:
                raise ValueError(f"correlation {name} = {v} outside [-1, 1]")


def correlations(s: BellScenario) -> CorrelationSet:
    """Measured correlations <xy> = Tr(rho x(x)y) for the four cross pairs."""
    return CorrelationSet(
        ab=s.state.expectation(tensor_product(s.a, s.b)),
        bc=s.state.expectation(tensor_product(s.c, s.b)),
        cd=s.state.expectation(tensor_product(s.c, s.d)),
        ad=s.state.expectation(tensor_product(s.a, s.d)),
    )


def chsh_value(c: CorrelationSet) -> float:
    """<ab> + <bc> + <cd> - <ad>; classically bounded by |.| <= 2."""
    return c.ab + c.bc + c.cd - c.ad


def ch_value(m) -> float:
    """Clauser-Horne combination p_AB + p_BC + p_CD - p_AD - p_B - p_C (<= 0 classically).

    Related to the CHSH combination of the same scenario by chsh = 4*ch + 2.
    """
    return m.p_ab + m.p_bc + m.p_cd - m.p_ad - m.p_b - m.p_c


@dataclass(frozen=True)
class BellOperator:
    """The CHSH witness operator a(x)b + c(x)b + c(x)d - a(x)d."""
    matrix: np.ndarray
    dims: tuple[int, int]


def bell_operator(s: BellScenario) -> BellOperator:
    m = (
        tensor_product(s.a, s.b)
        + tensor_product(s.c, s.b)
        + tensor_product(s.c, s.d)
        - tensor_product(s.a, s.d)
    )
    return BellOperator(matrix=m, dims=s.dims)


def beta(s: BellScenario) -> float:
    """Tr(B rho): the scenario's CHSH value; |beta| > 2 violates the classical bound."""
    return s.state.expectation(bell_operator(s).matrix)


# ---------------------------------------------------------------------------
# Violation maximization (two qubits)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ViolationSearch:
    directions: dict[str, np.ndarray]
    beta_max: float


def correlation_matrix(state: DensityOperator) -> np.ndarray:
    """T[i, j] = Tr(rho sigma_i (x) sigma_j) for a two-qubit state."""
    if state.dim != 4:
        raise ValueError("correlation matrix requires a two-qubit state")
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    t = np.empty((3, 3))
    for i, si in enumerate(paulis):
        for j, sj in enumerate(paulis):
            t[i, j] = state.expectation(tensor_product(si, sj))
    return t


def _unit(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _units(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    st = np.sin(thetas)
    return np.stack([st * np.cos(phis), st * np.sin(phis), np.cos(thetas)], axis=-1)


def _abs_beta(t: np.ndarray, angles: np.ndarray) -> float:
    na, nb, nc, nd = (_unit(angles[2 * k], angles[2 * k + 1]) for k in range(4))
    return abs((na + nc) @ t @ nb + (nc - na) @ t @ nd)


def _candidate_values(t: np.ndarray, angles: np.ndarray, k: int, values: np.ndarray) -> np.ndarray:
    """|beta| with coordinate k replaced by each candidate, evaluated in one batch."""
    na, nb, nc, nd = (_unit(angles[2 * i], angles[2 * i + 1]) for i in range(4))
    which, is_theta = divmod(k, 2)
    thetas = values if is_theta == 0 else np.full_like(values, angles[2 * which])
    phis = values if is_theta == 1 else np.full_like(values, angles[2 * which + 1])
    cand = _units(thetas, phis)  # (n, 3)
    tb, td = t @ nb, t @ nd
    if which == 0:  # vary a
        out = cand @ (tb - td) + nc @ (tb + td)
    elif which == 2:  # vary c
        out = cand @ (tb + td) + na @ (tb - td)
    elif which == 1:  # vary b
        out = cand @ (t.T @ (na + nc)) + (nc - na) @ td
    else:  # vary d
        out = cand @ (t.T @ (nc - na)) + (na + nc) @ tb
    return np.abs(out)


def maximize_violation(state: DensityOperator, seed: int = 0) -> ViolationSearch:
    """Largest |CHSH value| over the four measurement directions of a two-qubit state.

    Deterministic coordinate ascent on the eight polar/azimuthal angles: each
    coordinate update scans a 12-point grid centred on the current value, the
    grid window shrinks between passes, and passes repeat until a full cycle
    improves the objective by less than 1e-10. The seed only adds random
    restarts on top of two deterministic ones.

    For product expectation values of spin observables the objective reduces
    to contractions of the state's 3x3 correlation matrix, which is how the
    grid points are evaluated; agreement with the Bell-operator trace is an
    invariant covered by the test suite.
    """
    t = correlation_matrix(state)
    rng = np.random.default_rng(seed)

    starts = [
        # z/x axes on side 1, diagonal directions on side 2
        np.array([0.0, 0.0, math.pi / 4, 0.0, math.pi / 2, 0.0, 3 * math.pi / 4, 0.0]),
        np.zeros(8),
    ]
    starts += [rng.uniform(0.0, math.pi, size=8) * np.tile([1.0, 2.0], 4) for _ in range(3)]

    best_angles = starts[0]
    best_value = -1.0
    grid = np.linspace(-1.0, 1.0, 12)
    for start in starts:
        angles = start.copy()
        value = _abs_beta(t, angles)
        width = math.pi
        for _ in range(500):
            before = value
            for k in range(8):
                candidates = angles[k] + width * grid
                scores = _candidate_values(t, angles, k, candidates)
                i = int(np.argmax(scores))
                if scores[i] > value + 1e-15:
                    value = float(scores[i])
                    angles[k] = candidates[i]
            # Shrink the window only once a full pass stalls at this scale.
            if value - before < 1e-10:
                if width <= 1e-9:
                    break
                width = max(width / 4.0, 1e-9)
        if value > best_value:
            best_value, best_angles = value, angles

    dirs = {
        name: _unit(best_angles[2 * k], best_angles[2 * k + 1])
        for k, name in enumerate(("a", "b", "c", "d"))
    }
    return ViolationSearch(directions=dirs, beta_max=best_value)


def epr_min_separation(length_m: float, velocity_ms: float) -> float:
    """Minimum apparatus separation 2 L c / v for spacelike-separated measurements.

    ``length_m`` is the length of each measuring apparatus, ``velocity_ms``
    the particle speed; measurement lasts L/v, so light must not be able to
    cross between the apparatuses within it.
    """
    if length_m <= 0.0:
        raise ValueError("apparatus length must be positive")
    if not 0.0 < velocity_ms < SPEED_OF_LIGHT:
        raise ValueError("velocity must be positive and below the speed of light")
    return 2.0 * length_m * SPEED_OF_LIGHT / velocity_ms
