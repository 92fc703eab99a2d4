"""Blockpositivity thresholds and where witnesses sit relative to faces.

For a state ``rho`` the line ``X_lambda = (1 - lambda) rho_* + lambda rho``
through the maximally mixed state ``rho_*`` is k-blockpositive exactly for
``beta_minus[k] <= lambda <= beta_plus[k]`` with

    beta_minus[k] = -1 / (mn ||rho||_S(k) - 1)
    beta_plus[k]  = -1 / (mn |rho|_S(k) - 1)

where ``||.||_S(k)`` / ``|.|_S(k)`` are the sup / inf of ``<xi|rho|xi>`` over
unit vectors of Schmidt rank <= k.

Faces of the state space correspond to subspaces ``E``; a non-positive
trace-one ``X`` lies outside the unique face whose interior is hit by the
segment from ``X`` to ``rho_*``.  Schmidt number k+1 witnesses exist outside
``F_E`` iff ``E^perp`` contains no nonzero vector of Schmidt rank <= k.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .knorm import (
    KNormResult,
    SolverConfig,
    knorm,
    knorm_profile,
    min_knorm,
    min_profile,
    subspace_max_tau,
)
from .linalg import (
    EPS_NUM,
    EPS_PSD,
    EPS_TRACE,
    BipartiteDim,
    HermitianOp,
    State,
    Subspace,
    as_state,
    hs_inner,
    maximally_mixed,
)

EPS_BP = 1e-7
EPS_ENT = 1e-7
EPS_FACE = 1e-8
RANK_TOL = 1e-8
EIG_CLUSTER_TOL = 1e-9


class DegenerateFamilyError(ValueError):
    """The family X_lambda is constant (rho is the maximally mixed state)."""


@dataclass(frozen=True)
class BetaThresholds:
    dim: BipartiteDim
    beta_minus: tuple[float, ...]
    beta_plus: tuple[float, ...]
    norms: tuple[float, ...] = field(default=(), repr=False)
    min_norms: tuple[float, ...] = field(default=(), repr=False)

    @property
    def delta_minus(self) -> float:
        return self.beta_minus[-1]

    @property
    def delta_plus(self) -> float:
        return self.beta_plus[-1]

    def interval(self, k: int) -> tuple[float, float]:
        k = self.dim.check_k(k)
        return self.beta_minus[k - 1], self.beta_plus[k - 1]

    def to_dict(self) -> dict:
        return {
            "m": self.dim.m,
            "n": self.dim.n,
            "beta_minus": list(self.beta_minus),
            "beta_plus": list(self.beta_plus),
            "delta_minus": self.delta_minus,
            "delta_plus": self.delta_plus,
            "knorms": list(self.norms),
            "min_knorms": list(self.min_norms),
        }


@dataclass(frozen=True)
class WitnessClass:
    max_bp_level: int
    is_state: bool
    witnessed_schmidt_number: int | None

    def describe(self) -> str:
        if self.is_state:
            return "state"
        if self.witnessed_schmidt_number is not None:
            return f"Schmidt number {self.witnessed_schmidt_number} witness"
        return "not blockpositive"

    def to_dict(self) -> dict:
        return asdict(self) | {"description": self.describe()}


@dataclass(frozen=True)
class FaceLocation:
    crossing: float
    boundary_state: State
    range_subspace: Subspace
    corank: int

    def to_dict(self) -> dict:
        return {
            "crossing": self.crossing,
            "range_dimension": self.range_subspace.dimension,
            "corank": self.corank,
        }


def x_lambda(rho: HermitianOp, lam: float) -> HermitianOp:
    """(1 - lam) rho_* + lam rho."""
    mn = rho.dim.mn
    return HermitianOp(rho.dim, (1 - lam) / mn * np.eye(mn) + lam * rho.matrix)


def _threshold(mn: int, t: float) -> float:
    return -1.0 / (mn * t - 1.0)


def beta_thresholds(rho: State, cfg: SolverConfig | None = None) -> BetaThresholds:
    rho = as_state(rho)
    dim = rho.dim
    w = np.linalg.eigvalsh(rho.matrix)
    if w[-1] - w[0] <= EPS_NUM:
        raise DegenerateFamilyError("rho is the maximally mixed state; X_lambda does not move")
    sup = [r.value for r in knorm_profile(rho, cfg)]
    inf = [r.value for r in min_profile(rho, cfg)]
    mn = dim.mn
    return BetaThresholds(
        dim,
        tuple(_threshold(mn, t) for t in sup),
        tuple(_threshold(mn, t) for t in inf),
        tuple(sup),
        tuple(inf),
    )


def is_k_blockpositive(X: HermitianOp, k: int, cfg: SolverConfig | None = None) -> bool:
    return min_knorm(X, k, cfg).value >= -EPS_BP


def _check_trace_one(X: HermitianOp):
    if abs(X.trace - 1) > EPS_TRACE:
        raise ValueError(f"expected a trace-one operator, got trace {X.trace}")


def classify_witness(X: HermitianOp, cfg: SolverConfig | None = None) -> WitnessClass:
    """Largest k with X k-blockpositive, and the Schmidt number it witnesses."""
    if not isinstance(X, HermitianOp):
        raise TypeError("X must be a HermitianOp")
    _check_trace_one(X)
    dim = X.dim
    # BP_k are nested, and the profile is monotone, so the first failure ends the chain
    level = 0
    for res in min_profile(X, cfg):
        if res.value < -EPS_BP:
            break
        level = res.k
    is_state = level == dim.min_dim
    witnessed = level + 1 if 1 <= level < dim.min_dim else None
    return WitnessClass(level, is_state, witnessed)


def witness_from_state(rho: State, k: int, cfg: SolverConfig | None = None) -> HermitianOp:
    """Trace-normalized ``alpha I - rho`` with ``alpha = ||rho||_S(k)``.

    The result is k-blockpositive; it is a Schmidt number k+1 witness when
    ``||rho||_S(k+1) > ||rho||_S(k)``.
    """
    rho = as_state(rho)
    dim = rho.dim
    k = dim.check_k(k)
    if k == dim.min_dim:
        raise ValueError(f"no Schmidt number {k + 1} witness exists in {dim.m} x {dim.n}")
    prof = knorm_profile(rho, cfg)[: k + 1]
    alpha, alpha_next = prof[k - 1].value, prof[k].value
    if not alpha_next > alpha + EPS_NUM:
        raise ValueError(f"||rho||_S({k + 1}) does not exceed ||rho||_S({k}); alpha I - rho is no witness")
    mat = alpha * np.eye(dim.mn) - rho.matrix
    return HermitianOp(dim, mat / (alpha * dim.mn - 1))


def face_outside(X: HermitianOp) -> FaceLocation:
    """Locate the face of the state space crossed by the segment from X to rho_*.

    Along ``(1 - s) rho_* + s X`` every eigenvalue is ``(1 - s)/mn + s lambda_i``
    with the eigenvectors of X, so the boundary is met at
    ``s* = 1 / (1 - mn lambda_min(X))``.
    """
    _check_trace_one(X)
    dim = X.dim
    w, v = np.linalg.eigh(X.matrix)
    if w[0] >= -EPS_PSD:
        raise ValueError("X is positive semidefinite; it lies in the state space")
    mn = dim.mn
    s = 1.0 / (1.0 - mn * w[0])
    bw = (1 - s) / mn + s * w
    lmax = bw[-1]
    keep = bw > RANK_TOL * lmax
    boundary = State(dim, (1 - s) / mn * np.eye(mn) + s * X.matrix)
    E = Subspace(dim, v[:, keep])
    return FaceLocation(float(s), boundary, E, int(np.sum(~keep)))


def is_k_entangled(E: Subspace, k: int, cfg: SolverConfig | None = None) -> bool:
    """True when no nonzero vector of E has Schmidt rank <= k."""
    dim = E.ambient
    k = dim.check_k(k)
    if k == dim.min_dim:
        return False
    # every subspace of dimension > (m-k)(n-k) meets the Schmidt rank <= k vectors
    if E.dimension > (dim.m - k) * (dim.n - k):
        return False
    return subspace_max_tau(E, k, cfg).value < 1 - EPS_ENT


def entanglement_order(E: Subspace, cfg: SolverConfig | None = None) -> int:
    """Largest k with E k-entangled (0 if E contains a product vector)."""
    order = 0
    for k in range(1, E.ambient.min_dim):
        if not is_k_entangled(E, k, cfg):
            break
        order = k
    return order


@dataclass(frozen=True)
class FaceWitnessReport:
    face_dimension: int
    complement_dimension: int
    max_witness_level: int
    admissible_levels: tuple[int, ...]
    dimension_bounds: dict

    def to_dict(self) -> dict:
        return {
            "face_dimension": self.face_dimension,
            "complement_dimension": self.complement_dimension,
            "max_witness_level": self.max_witness_level,
            "admissible_levels": list(self.admissible_levels),
            "dimension_bounds": self.dimension_bounds,
        }


def witnesses_outside_face(E: Subspace, cfg: SolverConfig | None = None) -> FaceWitnessReport:
    """Which Schmidt numbers are witnessed by matrices outside the face F_E."""
    dim = E.ambient
    if E.dimension >= dim.mn:
        raise ValueError("E must be a proper subspace")
    level = entanglement_order(E.complement(), cfg)
    admissible = tuple(range(2, level + 2)) if level >= 1 else ()
    bounds = {}
    for k in range(1, dim.min_dim):
        need = k * (dim.m + dim.n - k)
        bounds[str(k + 1)] = {"required_dim": need, "satisfied": E.dimension >= need}
    return FaceWitnessReport(E.dimension, dim.mn - E.dimension, level, admissible, bounds)


def opposite_face_data(E: Subspace) -> tuple[State, State]:
    """Projection states of F_E and of the opposite face F_{E^perp}."""
    dim = E.ambient
    if E.dimension >= dim.mn:
        raise ValueError("E must be a proper subspace")
    p = E.projector()
    rho_e = State(dim, p / E.dimension)
    rho_perp = State(dim, (np.eye(dim.mn) - p) / (dim.mn - E.dimension))
    return rho_e, rho_perp


def perpendicularity_defect(rho: State, E: Subspace) -> float:
    """<rho - rho_E, rho_* - rho_E>; zero whenever rho is supported in E."""
    rho_e, _ = opposite_face_data(E)
    star = maximally_mixed(E.ambient)
    return hs_inner(rho - rho_e, star - rho_e)


def _eigenspace(vals: np.ndarray, vecs: np.ndarray, target: float, dim: BipartiteDim) -> Subspace:
    scale = max(1.0, abs(target))
    mask = np.abs(vals - target) <= EIG_CLUSTER_TOL * scale
    return Subspace(dim, vecs[:, mask])


@dataclass(frozen=True)
class Theorem31Check:
    interior_minus: bool
    interior_plus: bool
    entangled_top: bool
    entangled_bottom: bool

    @property
    def holds(self) -> bool:
        return self.interior_minus == self.entangled_top and self.interior_plus == self.entangled_bottom


def theorem31_check(rho: State, k: int, cfg: SolverConfig | None = None) -> Theorem31Check:
    """Compare strictness of the k-norm bounds with entanglement of extreme eigenspaces.

    ``interior_minus``: ||rho||_S(k) < lambda_max, ``entangled_top``: the
    top eigenspace has no vector of Schmidt rank <= k; dually for the lowest
    eigenvalue.  The two pairs are expected to agree.
    """
    rho = as_state(rho)
    dim = rho.dim
    k = dim.check_k(k)
    w, v = np.linalg.eigh(rho.matrix)
    sup: KNormResult = knorm(rho, k, cfg)
    inf: KNormResult = min_profile(rho, cfg, kmax=k)[-1]
    interior_minus = sup.value < w[-1] - EPS_NUM
    interior_plus = inf.value > w[0] + EPS_NUM
    top = _eigenspace(w, v, w[-1], dim)
    bottom = _eigenspace(w, v, w[0], dim)
    return Theorem31Check(
        bool(interior_minus),
        bool(interior_plus),
        is_k_entangled(top, k, cfg),
        is_k_entangled(bottom, k, cfg),
    )
