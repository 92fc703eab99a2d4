"""Named states, witness points and one-parameter families.

The biqutrit catalog uses

    xi1 = |01>,  xi2 = (|01> + |10>)/sqrt(2),  xi3 = (|00> + |11> + |22>)/sqrt(3)

with ``rho_i`` the projector onto ``xi_i``.  Coefficients are kept as exact
fractions and only converted to floats when the matrix is assembled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import BipartiteDim, HermitianOp, State, Subspace, as_dim, partial_transpose

FAMILIES = (
    "max_entangled",
    "antisymmetric",
    "projection",
    "rho1",
    "rho2",
    "rho3",
    "rho1_lambda",
    "rho2_lambda",
    "sigma1",
    "sigma2",
    "omega",
    "isotropic",
    "werner",
    "rho_star",
    "tomiyama",
)
LAMBDA_FAMILIES = ("rho1_lambda", "rho2_lambda", "isotropic", "werner")
QUTRIT_FAMILIES = ("rho1", "rho2", "rho3", "rho1_lambda", "rho2_lambda", "sigma1", "sigma2", "omega")

QUTRITS = BipartiteDim(3, 3)

# exact squared norms ||rho_i||_S(k) for k = 1, 2, 3
CATALOG_KNORMS = {
    1: (Fraction(1), Fraction(1), Fraction(1)),
    2: (Fraction(1, 2), Fraction(1), Fraction(1)),
    3: (Fraction(1, 3), Fraction(2, 3), Fraction(1)),
}


def _proj(v) -> np.ndarray:
    return np.outer(v, np.conj(v))


def xi_vector(i: int) -> np.ndarray:
    """Unit vectors xi_1, xi_2, xi_3 of the biqutrit catalog."""
    v = np.zeros(9)
    if i == 1:
        v[1] = 1.0
    elif i == 2:
        v[[1, 3]] = 1.0
    elif i == 3:
        v[[0, 4, 8]] = 1.0
    else:
        raise ValueError(f"no catalog vector xi_{i}")
    return v / np.linalg.norm(v)


def _rho_i_matrix(i: int) -> np.ndarray:
    # entries of the projectors are exact ratios (1, 1/2, 1/3)
    support = {1: [1], 2: [1, 3], 3: [0, 4, 8]}[i]
    mat = np.zeros((9, 9))
    w = float(Fraction(1, len(support)))
    for a in support:
        for b in support:
            mat[a, b] = w
    return mat


def rho_i(i: int) -> State:
    return State(QUTRITS, _rho_i_matrix(i))


def rho_star(dim=QUTRITS) -> State:
    dim = as_dim(dim)
    return State(dim, np.eye(dim.mn) / dim.mn)


def _combo(dim: BipartiteDim, star: Fraction, terms) -> np.ndarray:
    """``star * rho_* + sum c * M`` from exact coefficients."""
    mat = float(star / dim.mn) * np.eye(dim.mn)
    for coef, m in terms:
        mat = mat + float(coef) * m
    return mat


def x_lambda_matrix(rho: np.ndarray, lam) -> np.ndarray:
    mn = rho.shape[0]
    lam = Fraction(lam) if isinstance(lam, (int, Fraction)) else lam
    if isinstance(lam, Fraction):
        return float((1 - lam) / mn) * np.eye(mn) + float(lam) * rho
    return (1 - lam) / mn * np.eye(mn) + lam * rho


def max_entangled(n: int) -> State:
    dim = BipartiteDim(n, n)
    omega = np.zeros(n * n)
    omega[[i * n + i for i in range(n)]] = 1.0
    return State(dim, _proj(omega) / n)


def antisymmetric(n: int) -> State:
    dim = BipartiteDim(n, n)
    mat = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(i):
            v = np.zeros(n * n)
            v[i * n + j] = 1.0
            v[j * n + i] = -1.0
            mat += _proj(v) / 2
    return State(dim, mat * float(Fraction(2, n * (n - 1))))


def projection_state(E: Subspace) -> State:
    return State(E.ambient, E.projector() / E.dimension)


def rho_lambda(i: int, lam: float) -> State:
    """(1 - lam) rho_3 + lam rho_i for i in {1, 2}; a state for lam in [0, 1]."""
    if i not in (1, 2):
        raise ValueError("rho_i^lambda is defined for i = 1, 2")
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    return State(QUTRITS, (1 - lam) * _rho_i_matrix(3) + lam * _rho_i_matrix(i))


def sigma(i: int) -> State:
    """(9 rho_* - rho_3 - rho_i) / 7, the projection state onto span{xi_3, xi_i}^perp."""
    if i not in (1, 2):
        raise ValueError("sigma_i is defined for i = 1, 2")
    mat = _combo(QUTRITS, Fraction(9, 7), [(Fraction(-1, 7), _rho_i_matrix(3)),
                                           (Fraction(-1, 7), _rho_i_matrix(i))])
    return State(QUTRITS, mat)


def omega_lambda(i: int, k: int) -> Fraction:
    """Exact parameter -1/(9 ||rho_i||_S(k) - 1) of the point omega_{i,k}."""
    if i not in CATALOG_KNORMS or not 1 <= k <= 3:
        raise ValueError(f"omega_{{{i},{k}}} is not defined")
    norm = CATALOG_KNORMS[i][k - 1]
    return Fraction(-1) / (9 * norm - 1)


def omega(i: int, k: int) -> HermitianOp:
    """omega_{i,k} = X_lambda of rho_i at the lower k-blockpositivity threshold.

    omega_{3,2} = 6/5 rho_* - 1/5 rho_3, omega_{3,1} = 3/2 rho_* - 1/2 rho_3 and
    omega_{2,1} = 9/7 rho_* - 2/7 rho_2.
    """
    lam = omega_lambda(i, k)
    mat = _combo(QUTRITS, 1 - lam, [(lam, _rho_i_matrix(i))])
    return HermitianOp(QUTRITS, mat)


def isotropic(n: int, lam: float) -> HermitianOp:
    return HermitianOp(BipartiteDim(n, n), x_lambda_matrix(max_entangled(n).matrix, lam))


def werner(n: int, lam: float) -> HermitianOp:
    return partial_transpose(isotropic(n, lam))


def tomiyama_point(n: int, k: int) -> HermitianOp:
    """X_lambda of the maximally entangled state at lambda = -1/(nk - 1)."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    lam = Fraction(-1, n * k - 1)
    return HermitianOp(BipartiteDim(n, n), x_lambda_matrix(max_entangled(n).matrix, lam))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    dim: BipartiteDim = QUTRITS
    lam: float | None = None
    k: int | None = None
    i: int | None = None
    subspace: Subspace | None = None

    def __post_init__(self):
        family = self.family.replace("-", "_")
        family = {"antisym": "antisymmetric", "uniform": "rho_star"}.get(family, family)
        if family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "dim", as_dim(self.dim))
        if (family in LAMBDA_FAMILIES) != (self.lam is not None):
            raise ValueError(f"lambda is {'required' if family in LAMBDA_FAMILIES else 'not allowed'} for {family}")
        if family in QUTRIT_FAMILIES and self.dim != QUTRITS:
            raise ValueError(f"{family} lives in 3 x 3")
        if family in ("max_entangled", "antisymmetric", "isotropic", "werner", "tomiyama") \
                and self.dim.m != self.dim.n:
            raise ValueError(f"{family} needs m == n")
        if family == "projection" and self.subspace is None:
            raise ValueError("projection family needs a subspace")


def build(spec: FamilySpec) -> HermitianOp:
    """Construct the operator described by ``spec`` (a ``State`` when it is one)."""
    f, n = spec.family, spec.dim.n
    if f == "max_entangled":
        return max_entangled(n)
    if f == "antisymmetric":
        return antisymmetric(n)
    if f == "projection":
        return projection_state(spec.subspace)
    if f in ("rho1", "rho2", "rho3"):
        return rho_i(int(f[-1]))
    if f in ("rho1_lambda", "rho2_lambda"):
        return rho_lambda(int(f[3]), spec.lam)
    if f in ("sigma1", "sigma2"):
        return sigma(int(f[-1]))
    if f == "omega":
        return omega(spec.i if spec.i is not None else 3, spec.k if spec.k is not None else 1)
    if f == "isotropic":
        return isotropic(n, spec.lam)
    if f == "werner":
        return werner(n, spec.lam)
    if f == "rho_star":
        return rho_star(spec.dim)
    if f == "tomiyama":
        return tomiyama_point(n, spec.k if spec.k is not None else 1)
    raise AssertionError(f)


def catalog_subspace(*names: str, perp: bool = False) -> Subspace:
    """Span of catalog vectors given by name ('xi1', 'xi2', 'xi3'), optionally its complement."""
    vecs = [xi_vector(int(name.lower().removeprefix("xi"))) for name in names]
    E = Subspace.span(vecs, 3, 3)
    return E.complement() if perp else E


def as_state_if_possible(op: HermitianOp) -> HermitianOp:
    return State(op.dim, op.matrix) if op.is_state() else op
