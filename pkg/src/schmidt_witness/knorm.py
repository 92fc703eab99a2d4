"""Operator k-norms over vectors of bounded Schmidt rank.

For a Hermitian ``H`` on C^m (x) C^n this module computes

* ``knorm``:      sup <xi|H|xi> over unit xi with Schmidt rank <= k
* ``min_knorm``:  the matching infimum

For ``k = min(m, n)`` these are the extreme eigenvalues.  Otherwise a
multistart seesaw is used: writing the m x n matrix of ``xi`` as
``U @ W.T`` with ``U`` m x k and ``W`` n x k, the objective is a Hermitian
quadratic form in ``U`` for fixed ``W`` (and vice versa), so each half step
is an exact top-eigenvector solve.  The ascent is monotone but only reaches
a local optimum; seesaw values are certified lower bounds of the supremum,
realized by the returned certificate vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import (
    EPS_NUM,
    BipartiteDim,
    HermitianOp,
    PureVector,
    State,
    Subspace,
    as_state,
    schmidt_rank,
)

METHODS = ("exact_spectral", "closed_form", "seesaw", "brute_force")


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 64
    max_iters: int = 500
    rel_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class KNormResult:
    value: float
    certificate: PureVector
    k: int
    method: str
    restarts_used: int
    converged: bool

    def to_dict(self) -> dict:
        amps = self.certificate.amplitudes
        return {
            "value": self.value,
            "k": self.k,
            "method": self.method,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "certificate": {
                "m": self.certificate.dim.m,
                "n": self.certificate.dim.n,
                "amplitudes": [[float(a.real), float(a.imag)] for a in amps],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def rank_k_overlap(s, k: int) -> tuple[float, np.ndarray]:
    """Best squared overlap of ``s`` with a unit-HS matrix of rank <= k.

    The maximizer is ``t0 = s Q / ||s Q||`` where ``Q`` projects onto the top-k
    right singular subspace of ``s``; the returned value is evaluated as
    ``|tr(s^* t0)|^2`` from that certificate.
    """
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2:
        raise ValueError("s must be a matrix")
    if not 1 <= k <= min(s.shape):
        raise ValueError(f"k must lie in [1, {min(s.shape)}], got {k}")
    if not np.any(s):
        raise ValueError("the zero matrix has no overlap certificate")
    _, _, vh = np.linalg.svd(s)
    q = vh[:k].conj().T @ vh[:k]
    sq = s @ q
    t0 = sq / np.linalg.norm(sq)
    value = abs(np.vdot(s, t0)) ** 2
    return float(value), t0


def _top_eigvecs(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(mats)
    return w[..., -1], v[..., :, -1]


def _orthonormal_cols(a: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(a)
    return q


def _haar_factors(dim: BipartiteDim, k: int, cfg: SolverConfig) -> list[tuple[np.ndarray, np.ndarray]]:
    starts = []
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        gu = rng.standard_normal((dim.m, k)) + 1j * rng.standard_normal((dim.m, k))
        gw = rng.standard_normal((dim.n, k)) + 1j * rng.standard_normal((dim.n, k))
        starts.append((_orthonormal_cols(gu), _orthonormal_cols(gw)))
    return starts


def _factors_from_vector(vec: np.ndarray, dim: BipartiteDim, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Split ``vec`` (Schmidt rank <= k) into U (m x k), W (n x k) with U W^T = reshape(vec)."""
    u, s, vh = np.linalg.svd(vec.reshape(dim.m, dim.n))
    U = u[:, :k] * s[:k]
    W = vh[:k].T
    return U, W


def _seesaw(h: np.ndarray, dim: BipartiteDim, k: int, starts, cfg: SolverConfig):
    """Run all starts as one batch; return (best vector, converged flag of the best)."""
    m, n = dim.m, dim.n
    R = h.reshape(m, n, m, n)
    U = np.stack([s[0] for s in starts]).astype(complex)
    W = np.stack([s[1] for s in starts]).astype(complex)
    batch = U.shape[0]
    scale = max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(h)))))
    prev = np.full(batch, -np.inf)
    done = np.zeros(batch, dtype=bool)
    for _ in range(cfg.max_iters):
        W = _orthonormal_cols(W)
        ku = np.einsum("bjl,ijpr,brq->bilpq", W.conj(), R, W).reshape(batch, m * k, m * k)
        _, u = _top_eigvecs(ku)
        U = _orthonormal_cols(u.reshape(batch, m, k))
        kw = np.einsum("bil,ijpr,bpq->bjlrq", U.conj(), R, U).reshape(batch, n * k, n * k)
        val, w = _top_eigvecs(kw)
        W = w.reshape(batch, n, k)
        done = np.abs(val - prev) <= cfg.rel_tol * scale
        prev = val
        if np.all(done):
            break
    xi = np.einsum("bil,bjl->bij", U, W).reshape(batch, m * n)
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    vals = np.einsum("bi,ij,bj->b", xi.conj(), h, xi).real
    best = int(np.argmax(vals))
    return xi[best], bool(done[best])


def _sup_over_rank(op: HermitianOp, k: int, cfg: SolverConfig, warm: list[np.ndarray] | None = None):
    """Seesaw supremum of <xi|op|xi> at a single Schmidt-rank level ``k``."""
    dim = op.dim
    h = op.matrix
    w, v = np.linalg.eigh(h)
    _, t0 = rank_k_overlap(v[:, -1].reshape(dim.m, dim.n), k)
    starts = [_factors_from_vector(t0.ravel(), dim, k)]
    for vec in warm or []:
        starts.append(_factors_from_vector(np.asarray(vec), dim, k))
    starts.extend(_haar_factors(dim, k, cfg))
    xi, converged = _seesaw(h, dim, k, starts, cfg)
    value = float(np.vdot(xi, h @ xi).real)
    lmax = float(w[-1])
    if value > lmax:
        value = lmax
    return KNormResult(value, PureVector(dim, xi), k, "seesaw", len(starts), converged)


def _spectral_max(op: HermitianOp) -> KNormResult:
    w, v = np.linalg.eigh(op.matrix)
    return KNormResult(float(w[-1]), PureVector(op.dim, v[:, -1]), op.dim.min_dim, "exact_spectral", 0, True)


def sup_profile(op: HermitianOp, cfg: SolverConfig | None = None, kmax: int | None = None) -> list[KNormResult]:
    """Suprema for k = 1..kmax with each level warm-started from the one below.

    The warm start makes the returned values non-decreasing in ``k``.
    Works for any Hermitian operator, not only states.
    """
    cfg = cfg or SolverConfig()
    dim = op.dim
    kmax = dim.min_dim if kmax is None else dim.check_k(kmax)
    out: list[KNormResult] = []
    for k in range(1, kmax + 1):
        if k == dim.min_dim:
            res = _spectral_max(op)
        else:
            warm = [out[-1].certificate.amplitudes] if out else None
            res = _sup_over_rank(op, k, cfg, warm)
        if out and res.value < out[-1].value:
            prev = out[-1]
            res = KNormResult(prev.value, prev.certificate, k, res.method, res.restarts_used, res.converged)
        out.append(res)
    return out


def knorm_profile(rho: State, cfg: SolverConfig | None = None) -> list[KNormResult]:
    return sup_profile(as_state(rho), cfg)


def knorm(rho: State, k: int, cfg: SolverConfig | None = None) -> KNormResult:
    """The k-th operator norm of a state: sup <xi|rho|xi> over Schmidt rank <= k.

    For ``k == min(m, n)`` the result is the largest eigenvalue (method
    ``exact_spectral``).  Otherwise the value comes from the seesaw and is a
    lower bound of the supremum attained by ``result.certificate``.
    """
    rho = as_state(rho)
    k = rho.dim.check_k(k)
    return sup_profile(rho, cfg, kmax=k)[-1]


def _shifted(op: HermitianOp) -> tuple[float, HermitianOp]:
    lmax = float(np.linalg.eigvalsh(op.matrix)[-1])
    return lmax, HermitianOp(op.dim, lmax * np.eye(op.dim.mn) - op.matrix)


def min_profile(op: HermitianOp, cfg: SolverConfig | None = None, kmax: int | None = None) -> list[KNormResult]:
    """Infima of <xi|op|xi> for k = 1..kmax (non-increasing in k)."""
    lmax, shifted = _shifted(op)
    out = []
    for res in sup_profile(shifted, cfg, kmax):
        # equals lmax - res.value up to rounding; evaluated directly so the certificate reproduces it
        value = op.expectation(res.certificate.amplitudes)
        out.append(KNormResult(value, res.certificate, res.k, res.method, res.restarts_used, res.converged))
    for i in range(1, len(out)):
        if out[i].value > out[i - 1].value:
            prev = out[i - 1]
            out[i] = KNormResult(prev.value, prev.certificate, out[i].k, out[i].method,
                                 out[i].restarts_used, out[i].converged)
    return out


def min_knorm(op: HermitianOp, k: int, cfg: SolverConfig | None = None) -> KNormResult:
    """inf <xi|op|xi> over unit xi of Schmidt rank <= k, for any Hermitian ``op``.

    Reduced to a supremum through ``lmax(op) * I - op``.  Seesaw values are
    upper bounds of the true infimum.
    """
    k = op.dim.check_k(k)
    return min_profile(op, cfg, kmax=k)[-1]


def subspace_max_tau(E: Subspace, k: int, cfg: SolverConfig | None = None) -> KNormResult:
    """Largest tau_k over unit vectors of ``E``.

    Equals ``sup <eta|P_E|eta>`` over Schmidt rank <= k; the certificate is the
    normalized projection of the optimal ``eta`` onto ``E`` (so it lies in ``E``
    but may have Schmidt rank above ``k``).
    """
    dim = E.ambient
    k = dim.check_k(k)
    p = HermitianOp(dim, E.projector())
    res = sup_profile(p, cfg, kmax=k)[-1]
    eta = res.certificate.amplitudes
    xi = E.basis @ (E.basis.conj().T @ eta)
    nrm = np.linalg.norm(xi)
    if nrm == 0:
        xi = E.basis[:, 0]
    else:
        xi = xi / nrm
    _, t0 = rank_k_overlap(xi.reshape(dim.m, dim.n), k)
    value = abs(np.vdot(t0.ravel(), xi)) ** 2
    return KNormResult(float(min(value, 1.0)), PureVector(dim, xi), k, res.method, res.restarts_used, res.converged)


def random_rank_k_vectors(dim: BipartiteDim, k: int, samples: int, rng) -> np.ndarray:
    """Haar vectors truncated to their best Schmidt rank <= k approximation (rows)."""
    g = rng.standard_normal((samples, dim.m, dim.n)) + 1j * rng.standard_normal((samples, dim.m, dim.n))
    u, s, vh = np.linalg.svd(g, full_matrices=False)
    t = np.einsum("bik,bk,bkj->bij", u[:, :, :k], s[:, :k], vh[:, :k, :])
    t = t.reshape(samples, dim.mn)
    return t / np.linalg.norm(t, axis=1, keepdims=True)


def brute_force_knorm(rho: HermitianOp, k: int, samples: int = 100_000, seed: int = 0) -> float:
    """Random-sampling lower bound for the k-norm (independent of the seesaw)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    dim = rho.dim
    k = dim.check_k(k)
    rng = np.random.default_rng(seed)
    best = -np.inf
    chunk = 10_000
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        xi = random_rank_k_vectors(dim, k, size, rng)
        vals = np.einsum("bi,ij,bj->b", xi.conj(), rho.matrix, xi).real
        best = max(best, float(vals.max()))
        done += size
    return best


def certificate_ok(res: KNormResult, op: HermitianOp, tol: float = EPS_NUM) -> bool:
    """True when the certificate has Schmidt rank <= k and reproduces the value."""
    xi = res.certificate.amplitudes
    return schmidt_rank(res.certificate) <= res.k and abs(op.expectation(xi) - res.value) <= tol
