"""Dense linear algebra on the bipartite space C^m (x) C^n.

Vectors are flat arrays of length ``m*n`` where the basis vector
``|i>|j>`` sits at index ``i*n + j``.  With that ordering the m x n matrix
of a vector is a plain ``reshape``, so Schmidt coefficients are singular
values of ``v.reshape(m, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EPS_HERM = 1e-10
EPS_TRACE = 1e-10
EPS_UNIT = 1e-10
EPS_ORTH = 1e-10
EPS_PSD = 1e-9
EPS_NUM = 1e-8
SR_TOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BipartiteDim:
    """Local dimensions ``(m, n)`` of a bipartite system."""

    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise ValueError(f"{name} must be at least 2, got {value}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    @property
    def mn(self) -> int:
        return self.m * self.n

    @property
    def min_dim(self) -> int:
        return min(self.m, self.n)

    def check_k(self, k: int) -> int:
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
            raise TypeError(f"k must be an integer, got {k!r}")
        if not 1 <= k <= self.min_dim:
            raise ValueError(f"k must lie in [1, {self.min_dim}], got {k}")
        return int(k)


def as_dim(dim) -> BipartiteDim:
    if isinstance(dim, BipartiteDim):
        return dim
    m, n = dim
    return BipartiteDim(m, n)


@dataclass(frozen=True)
class HermitianOp:
    """Hermitian matrix on C^m (x) C^n, stored as an immutable mn x mn array."""

    dim: BipartiteDim
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = as_dim(self.dim)
        object.__setattr__(self, "dim", dim)
        a = _readonly(self.matrix)
        if a.shape != (dim.mn, dim.mn):
            raise ValueError(f"expected a {dim.mn}x{dim.mn} matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        if np.max(np.abs(a - a.conj().T), initial=0.0) > EPS_HERM:
            raise ValueError("matrix is not Hermitian")
        # symmetrize away the sub-tolerance antihermitian part
        a = _readonly((a + a.conj().T) / 2)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def from_array(cls, matrix, m: int, n: int) -> "HermitianOp":
        return cls(BipartiteDim(m, n), matrix)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def is_state(self, tol: float = EPS_PSD) -> bool:
        return abs(self.trace - 1) <= EPS_TRACE and self.eigvalsh()[0] >= -tol

    def expectation(self, vec) -> float:
        v = np.asarray(vec, dtype=complex).ravel()
        return float(np.vdot(v, self.matrix @ v).real)

    def __add__(self, other):
        if isinstance(other, HermitianOp):
            _check_same_dim(self, other)
            return HermitianOp(self.dim, self.matrix + other.matrix)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, HermitianOp):
            _check_same_dim(self, other)
            return HermitianOp(self.dim, self.matrix - other.matrix)
        return NotImplemented

    def __mul__(self, scalar):
        if np.isscalar(scalar) and np.isreal(scalar):
            return HermitianOp(self.dim, float(np.real(scalar)) * self.matrix)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return HermitianOp(self.dim, -self.matrix)

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)


class State(HermitianOp):
    """Density matrix: Hermitian, PSD within ``EPS_PSD``, unit trace."""

    def __post_init__(self):
        super().__post_init__()
        if abs(self.trace - 1) > EPS_TRACE:
            raise ValueError(f"state must have unit trace, got {self.trace}")
        lmin = self.eigvalsh()[0]
        if lmin < -EPS_PSD:
            raise ValueError(f"state is not positive semidefinite (min eigenvalue {lmin:.3e})")


def as_state(op: HermitianOp) -> State:
    if isinstance(op, State):
        return op
    return State(op.dim, op.matrix)


def _check_same_dim(a: HermitianOp, b: HermitianOp):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class PureVector:
    """Unit vector in C^m (x) C^n."""

    dim: BipartiteDim
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = as_dim(self.dim)
        object.__setattr__(self, "dim", dim)
        v = _readonly(np.asarray(self.amplitudes).ravel())
        if v.shape != (dim.mn,):
            raise ValueError(f"expected {dim.mn} amplitudes, got {v.shape[0]}")
        if abs(np.linalg.norm(v) - 1) > EPS_UNIT:
            raise ValueError(f"vector is not normalized (norm {np.linalg.norm(v)})")
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, amplitudes, m: int, n: int) -> "PureVector":
        v = np.asarray(amplitudes, dtype=complex).ravel()
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(BipartiteDim(m, n), v / nrm)

    def projector(self) -> State:
        v = self.amplitudes
        return State(self.dim, np.outer(v, v.conj()))


@dataclass(frozen=True)
class SchmidtData:
    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    schmidt_rank: int

    def reconstruct(self) -> np.ndarray:
        """Return ``sum_i s_i |u_i>|w_i>`` as a flat vector."""
        mat = (self.left_vectors * self.coefficients) @ self.right_vectors.T
        return mat.ravel()


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^m (x) C^n given by an orthonormal basis (columns)."""

    ambient: BipartiteDim
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = as_dim(self.ambient)
        object.__setattr__(self, "ambient", dim)
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        if b.shape[0] != dim.mn or not 1 <= b.shape[1] <= dim.mn:
            raise ValueError(f"basis of shape {b.shape} does not fit C^{dim.m} x C^{dim.n}")
        if np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))) > EPS_ORTH:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", _readonly(b))

    @classmethod
    def span(cls, vectors, m: int, n: int, tol: float = 1e-10) -> "Subspace":
        """Orthonormalize the given vectors (rows or 1-d arrays) into a subspace."""
        a = np.array([np.asarray(v, dtype=complex).ravel() for v in vectors]).T
        u, s, _ = np.linalg.svd(a, full_matrices=False)
        if s.size == 0 or s[0] == 0:
            raise ValueError("cannot span a subspace from zero vectors")
        rank = int(np.sum(s > tol * s[0]))
        return cls(BipartiteDim(m, n), u[:, :rank])

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        if self.dimension == self.ambient.mn:
            raise ValueError("the whole space has a trivial orthogonal complement")
        u, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(self.ambient, u[:, self.dimension:])

    def contains(self, vec, tol: float = EPS_NUM) -> bool:
        v = np.asarray(vec, dtype=complex).ravel()
        residual = v - self.basis @ (self.basis.conj().T @ v)
        return float(np.linalg.norm(residual)) <= tol * max(1.0, float(np.linalg.norm(v)))


def _vec_and_dim(v, dim=None):
    if isinstance(v, PureVector):
        return np.asarray(v.amplitudes), v.dim
    if dim is None:
        raise TypeError("raw arrays need an explicit dim")
    dim = as_dim(dim)
    arr = np.asarray(v, dtype=complex).ravel()
    if arr.shape != (dim.mn,):
        raise ValueError(f"expected {dim.mn} amplitudes, got {arr.shape[0]}")
    return arr, dim


def reshape_to_matrix(v, dim=None) -> np.ndarray:
    """The m x n matrix whose (i, j) entry is the amplitude of |i>|j>."""
    arr, d = _vec_and_dim(v, dim)
    return arr.reshape(d.m, d.n)


def schmidt_decompose(v, dim=None) -> SchmidtData:
    arr, d = _vec_and_dim(v, dim)
    u, s, vh = np.linalg.svd(arr.reshape(d.m, d.n))
    k = d.min_dim
    rank = 0 if s[0] == 0 else int(np.sum(s > SR_TOL * s[0]))
    # right factors are transposed (not conjugated) so that v = sum s_i u_i (x) w_i
    return SchmidtData(s[:k], u[:, :k], vh[:k].T, rank)


def schmidt_rank(v, dim=None) -> int:
    return schmidt_decompose(v, dim).schmidt_rank


def tau_k(v, k: int, dim=None) -> float:
    """Sum of the ``k`` largest squared Schmidt coefficients of ``v``."""
    arr, d = _vec_and_dim(v, dim)
    k = d.check_k(k)
    s = np.linalg.svd(arr.reshape(d.m, d.n), compute_uv=False)
    return float(np.sum(s[:k] ** 2))


def hermitian_spectrum(op: HermitianOp) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in ascending order and the matching orthonormal eigenvectors."""
    if not isinstance(op, HermitianOp):
        op = HermitianOp(*op)
    return np.linalg.eigh(op.matrix)


def psd_sqrt(op: HermitianOp) -> HermitianOp:
    w, v = np.linalg.eigh(op.matrix)
    if w[0] < -EPS_PSD:
        raise ValueError(f"operator is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return HermitianOp(op.dim, root)


def partial_transpose(op: HermitianOp) -> HermitianOp:
    """Transpose on the second tensor factor."""
    d = op.dim
    t = op.matrix.reshape(d.m, d.n, d.m, d.n).transpose(0, 3, 2, 1)
    return HermitianOp(d, t.reshape(d.mn, d.mn))


def hs_inner(a: HermitianOp, b: HermitianOp) -> float:
    """Hilbert-Schmidt pairing tr(A^* B)."""
    _check_same_dim(a, b)
    return float(np.vdot(a.matrix, b.matrix).real)


def maximally_mixed(dim) -> State:
    dim = as_dim(dim)
    return State(dim, np.eye(dim.mn) / dim.mn)
