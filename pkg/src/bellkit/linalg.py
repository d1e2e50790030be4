"""Dense complex linear algebra for small Hilbert spaces (dimension <= 64).

Everything here is a pure function of its inputs; the value types are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

#: Default tolerance for validity predicates (hermiticity, trace, norm ...).
DEFAULT_TOL = 1e-9
#: Default tolerance for algebraic identities checked in tests.
IDENTITY_TOL = 1e-10
#: Largest supported Hilbert-space dimension for the dense eigensolver.
MAX_DIM = 64

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(data) -> np.ndarray:
    """Coerce nested lists / arrays to a 2-D complex matrix."""
    m = np.asarray(data, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(m).T


def frobenius_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and frobenius_norm(m - dagger(m)) <= tol


def is_projector(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return is_hermitian(m, tol) and frobenius_norm(m @ m - m) <= tol


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return frobenius_norm(m @ dagger(m) - np.eye(m.shape[0])) <= tol


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply and (a@c) x (b@d) = (a x b)(c x d)."""
    return np.kron(as_matrix(a), as_matrix(b))


def matrix_from_lists(rows: Sequence[Sequence]) -> np.ndarray:
    """Parse a matrix literal: a list of rows whose entries are [re, im] pairs.

    Bare numbers are accepted as purely real entries. Used by the CLI config
    format.
    """
    parsed = []
    for i, row in enumerate(rows):
        out_row = []
        for j, entry in enumerate(row):
            if isinstance(entry, (int, float)):
                out_row.append(complex(entry))
            elif isinstance(entry, (list, tuple)) and len(entry) == 2:
                out_row.append(complex(float(entry[0]), float(entry[1])))
            else:
                raise ValueError(
                    f"matrix entry [{i}][{j}] must be a number or a [re, im] pair, got {entry!r}"
                )
        parsed.append(out_row)
    m = as_matrix(parsed)
    if any(len(row) != m.shape[1] for row in rows):
        raise ValueError("matrix rows have unequal lengths")
    return m


def matrix_to_lists(m) -> list[list[list[float]]]:
    """Inverse of :func:`matrix_from_lists`: rows of [re, im] pairs."""
    m = as_matrix(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------

def hermitian_eigensystem(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Full eigensystem of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, V)`` with eigenvalues ``w`` sorted ascending and orthonormal
    eigenvectors as the columns of ``V``, so that ``m = V @ diag(w) @ V†``.

    Each rotation zeroes one off-diagonal pair exactly; sweeps repeat until the
    off-diagonal Frobenius mass drops below ``1e-13 * ||m||``. At dimension
    <= 64 this is fast and numerically robust, which is all this toolkit needs.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")

    h = (a + dagger(a)) / 2.0
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([h[0, 0].real]), v

    target = 1e-13 * frobenius_norm(h)
    # Entries below this are numerically already zero; rotating them is wasted work.
    skip = target / (4.0 * n * n) + 1e-300
    upper = np.triu_indices(n, k=1)

    for _ in range(60):
        # Off-diagonal Frobenius mass, summed directly (a ||H||^2 - sum|diag|^2
        # subtraction would stall on cancellation noise long before the target).
        off = math.sqrt(2.0 * float(np.sum(np.abs(h[upper]) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                u = apq / r
                tau = (h[q, q].real - h[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ubar = np.conj(u)

                hp = h[:, p].copy()
                hq = h[:, q].copy()
                h[:, p] = c * hp - s * ubar * hq
                h[:, q] = s * hp + c * ubar * hq
                rp = h[p, :].copy()
                rq = h[q, :].copy()
                h[p, :] = c * rp - s * u * rq
                h[q, :] = s * rp + c * u * rq
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * ubar * vq
                v[:, q] = s * vp + c * ubar * vq
    else:
        raise RuntimeError("Jacobi eigensolver failed to converge in 60 sweeps")

    w = np.real(np.diag(h))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

class DensityOperator:
    """Trace-one positive Hermitian matrix on a finite-dimensional Hilbert space."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        m = as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"density operator must be square, got shape {m.shape}")
        if not is_hermitian(m, tol):
            raise ValueError("density operator is not Hermitian within tolerance")
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol:
            raise ValueError(f"density operator trace is {tr}, expected 1")
        dim = m.shape[0]
        # Positive semidefiniteness: rho + tol*I must admit a Cholesky factor.
        try:
            np.linalg.cholesky(m + (tol * 2.0) * np.eye(dim))
        except np.linalg.LinAlgError:
            raise ValueError("density operator has eigenvalues below -tol") from None
        purity = float(np.trace(m @ m).real)
        if not (1.0 / dim - tol <= purity <= 1.0 + tol):
            raise ValueError(f"purity {purity} outside [1/{dim}, 1]")
        m = m.copy()
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def purity(self) -> float:
        """Tr(rho^2), in [1/dim, 1]; 1 exactly for pure states."""
        return float(np.trace(self._matrix @ self._matrix).real)

    def expectation(self, observable) -> float:
        """Tr(rho A) for a Hermitian observable A."""
        return float(np.trace(self._matrix @ as_matrix(observable)).real)

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim}, purity={self.purity():.6f})"


class PureState:
    """Unit vector in a finite-dimensional Hilbert space."""

    def __init__(self, amplitudes, tol: float = DEFAULT_TOL):
        v = np.asarray(amplitudes, dtype=complex)
        if v.ndim != 1:
            raise ValueError(f"state vector must be 1-D, got shape {v.shape}")
        norm_sq = float(np.vdot(v, v).real)
        if abs(norm_sq - 1.0) > tol:
            raise ValueError(f"state vector squared norm is {norm_sq}, expected 1")
        v = v.copy()
        v.setflags(write=False)
        self._amplitudes = v

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        v = np.asarray(amplitudes, dtype=complex)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / norm)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return self._amplitudes.shape[0]

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self._amplitudes, np.conj(self._amplitudes)))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


def partial_trace(rho12: DensityOperator, dims: tuple[int, int], keep: int) -> DensityOperator:
    """Trace out one side of a bipartite state.

    ``dims = (M, N)`` are the subsystem dimensions; ``keep`` is 1 or 2 and
    selects the surviving side. Satisfies Tr(rho_1 X) = Tr(rho_12 (X x I)).
    """
    m, n = dims
    if m < 1 or n < 1:
        raise ValueError(f"dims must be positive, got {dims}")
    if rho12.dim != m * n:
        raise ValueError(f"state dimension {rho12.dim} does not match dims {dims}")
    r4 = rho12.matrix.reshape(m, n, m, n)
    if keep == 1:
        reduced = np.einsum("injn->ij", r4)
    elif keep == 2:
        reduced = np.einsum("inim->nm", r4)
    else:
        raise ValueError(f"keep must be 1 or 2, got {keep}")
    return DensityOperator(reduced)


# ---------------------------------------------------------------------------
# Random generation (explicitly seeded, bit-for-bit reproducible)
# ---------------------------------------------------------------------------

def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-ish random unitary: QR of a complex Gaussian matrix, phases fixed."""
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(dim: int, seed: int) -> DensityOperator:
    """Random mixed state: G G† / Tr(G G†) with G complex standard Gaussian."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ dagger(g)
    return DensityOperator(m / np.trace(m).real)


def random_pure(dim: int, seed: int) -> PureState:
    """Random pure state: normalized complex Gaussian vector."""
    rng = _rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.normalized(v)


def random_dichotomic(dim: int, traceless: bool, seed: int) -> np.ndarray:
    """Random Hermitian observable with spectrum contained in {-1, +1}.

    Built as U diag(+-1) U† with a Haar-ish random U. With ``traceless`` the
    spectrum is balanced (equal counts of +1 and -1), which requires even dim.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if traceless and dim % 2 != 0:
        raise ValueError("a balanced +-1 spectrum requires even dimension")
    rng = _rng(seed)
    if traceless:
        signs = np.array([1.0] * (dim // 2) + [-1.0] * (dim // 2))
        rng.shuffle(signs)
    else:
        signs = rng.choice([-1.0, 1.0], size=dim)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    u = q * (np.diag(r) / np.abs(np.diag(r)))
    return u @ np.diag(signs).astype(complex) @ dagger(u)
