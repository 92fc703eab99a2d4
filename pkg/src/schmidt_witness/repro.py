"""Closed-form k-norm curves and boundary traces for the biqutrit planes.

Two one-parameter families of 3 x 3 states are studied,

    rho_i^lam = (1 - lam) rho_3 + lam rho_i,   i = 1, 2,

together with the planes H1, H2 through rho_3, rho_i and rho_*.  A point of
a plane is stored through affine coefficients ``(a, b, c)`` with
``P = a rho_3 + b rho_i + c rho_*``.  Drawing coordinates ``(x, y)`` come from
the Hilbert-Schmidt isometric frame with rho_i at the origin, rho_3 at
``(0, sqrt 2)`` and rho_* at ``(sqrt(7/18), sqrt(2)/2)``.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .families import QUTRITS, rho_i, rho_lambda, rho_star
from .geometry import EPS_BP, is_k_blockpositive
from .knorm import SolverConfig, knorm, min_knorm
from .linalg import HermitianOp, PureVector, schmidt_rank

RAY_TOL = 1e-8
MAX_BISECTION_STEPS = 64
SQRT2 = math.sqrt(2.0)
X_STAR = math.sqrt(7.0 / 18.0)

SWEEP_HEADER = ("lambda", "k", "closed_form", "optimizer", "gap")
PLANE_HEADER = ("plane", "k", "ray_index", "a", "b", "c", "x", "y")


def worker_count() -> int:
    raw = os.environ.get("SCHMIDT_WITNESS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items)) or 1
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_lambda(lam: float):
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")


def eigvals_family1(lam: float, alpha3: complex, alpha1: complex) -> tuple[float, float, float]:
    """Squared singular values (mu, mu_plus, mu_minus) of (rho_1^lam)^(1/2) xi.

    ``alpha_i = <xi_i|xi>``.
    """
    _check_lambda(lam)
    a3, a1 = abs(alpha3) ** 2, abs(alpha1) ** 2
    if a3 + a1 > 1 + 1e-12:
        raise ValueError("|alpha3|^2 + |alpha1|^2 must not exceed 1")
    mu = (1 - lam) / 3 * a3
    root = math.sqrt(a1) * math.sqrt(lam) * math.sqrt((1 - lam) / 3 * a3 + lam / 4 * a1)
    base = (1 - lam) / 3 * a3 + lam / 2 * a1
    return mu, base + root, base - root


def eigvals_family2(lam: float, alpha3: complex, alpha2: complex) -> tuple[float, float, float]:
    """Squared singular values (nu, nu_plus, nu_minus) of (rho_2^lam)^(1/2) xi."""
    _check_lambda(lam)
    a3, a2 = abs(alpha3) ** 2, abs(alpha2) ** 2
    if a3 + a2 > 1 + 1e-12:
        raise ValueError("|alpha3|^2 + |alpha2|^2 must not exceed 1")
    nu = (1 - lam) / 3 * a3
    cross = abs(alpha3 * np.conj(alpha2) + np.conj(alpha3) * alpha2)
    root = math.sqrt(lam * (1 - lam) / 6) * cross
    base = (1 - lam) / 3 * a3 + lam / 2 * a2
    return nu, base + root, base - root


def closed_form_knorm(family: int, lam: float, k: int) -> float:
    """||rho_family^lam||_S(k) from the piecewise closed forms."""
    _check_lambda(lam)
    if family not in (1, 2):
        raise ValueError(f"family must be 1 or 2, got {family}")
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    if k == 3:
        return max(1 - lam, lam)
    if family == 1:
        if k == 1:
            return 4 / 3 * (1 - lam) ** 2 / (4 - 7 * lam) if lam <= 0.4 else lam
        return (2 * math.sqrt((1 - lam) / (4 - 7 * lam)) + 1) * (1 - lam) / 3 if lam <= 0.5 else lam
    if k == 1:
        return (2 + lam) / 6
    return (4 - lam + math.sqrt(25 * lam**2 - 32 * lam + 16)) / 12 if lam <= 0.5 else lam


@dataclass(frozen=True)
class CurvePoint:
    lam: float
    k: int
    value_closed_form: float
    value_optimizer: float

    @property
    def abs_gap(self) -> float:
        return abs(self.value_closed_form - self.value_optimizer)

    def row(self) -> tuple:
        return (repr(self.lam), str(self.k), repr(self.value_closed_form),
                repr(self.value_optimizer), repr(self.abs_gap))


def sweep_family(family: int, k: int, grid, cfg: SolverConfig | None = None) -> list[CurvePoint]:
    grid = [float(x) for x in grid]
    for lam in grid:
        _check_lambda(lam)

    def point(lam):
        opt = knorm(rho_lambda(family, lam), k, cfg).value
        return CurvePoint(lam, k, closed_form_knorm(family, lam, k), opt)

    return _map(point, grid)


def default_grid(points: int = 21) -> list[float]:
    return [i / (points - 1) for i in range(points)]


def eta_vectors() -> dict[int, np.ndarray]:
    """Kets eta_1..eta_4 (unnormalized) certifying the straight boundary pieces.

    They are listed as bras (0,1,1)x(0,1,1), <00| + <11|, (1,i,0)x(1,i,0) and
    (1,1,0)x(1,1,0); the kets are the complex conjugates.
    """
    bras = {
        1: np.kron([0, 1, 1], [0, 1, 1]),
        2: np.kron([1, 0, 0], [1, 0, 0]) + np.kron([0, 1, 0], [0, 1, 0]),
        3: np.kron([1, 1j, 0], [1, 1j, 0]),
        4: np.kron([1, 1, 0], [1, 1, 0]),
    }
    return {i: np.conj(np.asarray(b, dtype=complex)) for i, b in bras.items()}


@dataclass(frozen=True)
class SegmentCheck:
    on_boundary: bool
    witness_vector: PureVector | None
    source: str


def boundary_segment_check(W1: HermitianOp, W2: HermitianOp, k: int, candidates=(),
                           cfg: SolverConfig | None = None) -> SegmentCheck:
    """Does the segment [W1, W2] lie on the boundary of BP_k?

    It does iff some unit xi of Schmidt rank <= k annihilates both quadratic
    forms.  Candidate vectors are tried first; otherwise, since both forms are
    non-negative on such vectors, the joint zero is searched as a minimizer of
    ``<xi|W1 + W2|xi>``.
    """
    dim = W1.dim
    k = dim.check_k(k)
    for W in (W1, W2):
        if not is_k_blockpositive(W, k, cfg):
            raise ValueError("both endpoints must be k-blockpositive")

    def joint_zero(xi):
        return abs(W1.expectation(xi)) <= EPS_BP and abs(W2.expectation(xi)) <= EPS_BP

    for cand in candidates:
        vec = cand if isinstance(cand, PureVector) else PureVector.normalized(cand, dim.m, dim.n)
        if schmidt_rank(vec) <= k and joint_zero(vec.amplitudes):
            return SegmentCheck(True, vec, "candidate")
    res = min_knorm(W1 + W2, k, cfg)
    if joint_zero(res.certificate.amplitudes):
        return SegmentCheck(True, res.certificate, "optimizer")
    return SegmentCheck(False, None, "optimizer")


@dataclass(frozen=True)
class PlaneCoord:
    plane: str
    a: float
    b: float
    c: float

    @property
    def xy(self) -> tuple[float, float]:
        return self.c * X_STAR, self.a * SQRT2 + self.c * SQRT2 / 2

    def operator(self) -> HermitianOp:
        i = _plane_index(self.plane)
        return HermitianOp(QUTRITS, self.a * rho_i(3).matrix + self.b * rho_i(i).matrix
                           + self.c * rho_star().matrix)


def _plane_index(plane: str) -> int:
    key = plane.upper()
    if key not in ("H1", "H2"):
        raise ValueError(f"plane must be H1 or H2, got {plane!r}")
    return int(key[1])


def plane_point(plane: str, x: float, y: float) -> PlaneCoord:
    """Affine coefficients of the plane point with drawing coordinates (x, y)."""
    _plane_index(plane)
    c = x / X_STAR
    a = (y - c * SQRT2 / 2) / SQRT2
    return PlaneCoord(plane.upper(), a, 1 - a - c, c)


def ray_direction(plane: str, angle: float) -> HermitianOp:
    """Unit (Hilbert-Schmidt) traceless direction in the plane at ``angle``."""
    i = _plane_index(plane)
    dx, dy = math.cos(angle), math.sin(angle)
    c = dx / X_STAR
    a = (dy - c * SQRT2 / 2) / SQRT2
    b = -a - c
    mat = a * rho_i(3).matrix + b * rho_i(i).matrix + c * rho_star().matrix
    return HermitianOp(QUTRITS, mat)


def ray_crossing(direction: HermitianOp, k: int, cfg: SolverConfig | None = None,
                 method: str = "direct") -> float:
    """Largest t with rho_* + t * direction in BP_k.

    ``direct``: <xi|rho_* + t d|xi> = 1/mn + t <xi|d|xi>, so the crossing is
    ``1 / (mn * -min_k(d))``.  ``bisect``: bisection on the sign of the
    k-blockpositivity test, kept as an independent check.
    """
    mn = direction.dim.mn
    star = np.eye(mn) / mn
    if method == "direct":
        mu = min_knorm(direction, k, cfg).value
        if mu >= 0:
            raise ValueError("direction never leaves BP_k")
        return 1.0 / (mn * -mu)
    if method != "bisect":
        raise ValueError(f"unknown method {method!r}")

    def inside(t):
        return is_k_blockpositive(HermitianOp(direction.dim, star + t * direction.matrix), k, cfg)

    lo, hi = 0.0, 1.0
    while inside(hi):
        lo, hi = hi, 2 * hi
    for _ in range(MAX_BISECTION_STEPS):
        if hi - lo <= RAY_TOL:
            break
        mid = (lo + hi) / 2
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def ray_point(plane: str, angle: float, t: float) -> PlaneCoord:
    x0, y0 = X_STAR, SQRT2 / 2
    return plane_point(plane, x0 + t * math.cos(angle), y0 + t * math.sin(angle))


def bp_boundary_on_plane(plane: str, k: int, num_rays: int, cfg: SolverConfig | None = None,
                         method: str = "direct") -> list[PlaneCoord]:
    """Boundary of BP_k on the plane, one point per ray from rho_*."""
    if num_rays < 3:
        raise ValueError("num_rays must be >= 3")
    QUTRITS.check_k(k)
    plane = plane.upper()
    _plane_index(plane)
    angles = [2 * math.pi * r / num_rays for r in range(num_rays)]

    def trace(angle):
        t = ray_crossing(ray_direction(plane, angle), k, cfg, method)
        return ray_point(plane, angle, t)

    return _map(trace, angles)


def state_triangle(plane: str) -> list[PlaneCoord]:
    """Vertices rho_3, rho_i, sigma_i of the state region on the plane."""
    plane = plane.upper()
    _plane_index(plane)
    return [PlaneCoord(plane, 1.0, 0.0, 0.0), PlaneCoord(plane, 0.0, 1.0, 0.0),
            PlaneCoord(plane, -1 / 7, -1 / 7, 9 / 7)]


def sweep_csv(points: list[CurvePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for p in points:
        w.writerow(p.row())
    return buf.getvalue()


def plane_csv(traces: dict[int, list[PlaneCoord]]) -> str:
    buf = io.StringIO()
    buf.write("# P = a*rho_3 + b*rho_i + c*rho_*; (x, y): rho_i at (0,0), rho_3 at (0,sqrt2), "
              "rho_* at (sqrt(7/18),sqrt2/2)\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLANE_HEADER)
    for k in sorted(traces):
        for idx, p in enumerate(traces[k]):
            x, y = p.xy
            w.writerow((p.plane, k, idx, repr(p.a), repr(p.b), repr(p.c), repr(x), repr(y)))
    return buf.getvalue()


_COLORS = {1: "#d62728", 2: "#1f77b4", 3: "#2ca02c"}


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def plane_svg(plane: str, traces: dict[int, list[PlaneCoord]], size: int = 480) -> str:
    pts = [p.xy for tr in traces.values() for p in tr] + [p.xy for p in state_triangle(plane)]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) * 1.1
    pad = 30

    def tx(x, y):
        return (pad + (x - x0) / span * (size - 2 * pad), size - pad - (y - y0) / span * (size - 2 * pad))

    def poly(coords, color, closed=True, dash=None):
        pts_s = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (tx(*c) for c in coords))
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        return f'  <{tag} points="{pts_s}" fill="none" stroke="{color}" stroke-width="1.5"{extra}/>\n'

    i = _plane_index(plane)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">\n',
           f'  <title>BP_k boundaries on plane {plane.upper()}</title>\n']
    out.append(poly([p.xy for p in state_triangle(plane)], "#000000", dash="4,2"))
    for k in sorted(traces):
        out.append(poly([p.xy for p in traces[k]], _COLORS.get(k, "#7f7f7f")))
    labels = {"rho_3": (0.0, SQRT2), f"rho_{i}": (0.0, 0.0), "rho_*": (X_STAR, SQRT2 / 2),
              f"sigma_{i}": state_triangle(plane)[2].xy}
    for name, (x, y) in labels.items():
        px, py = tx(x, y)
        out.append(f'  <circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.5" fill="#000000"/>\n')
        out.append(f'  <text x="{_fmt(px + 4)}" y="{_fmt(py - 4)}" font-size="11">{name}</text>\n')
    for j, k in enumerate(sorted(traces)):
        out.append(f'  <text x="{size - 110}" y="{18 + 14 * j}" font-size="11" '
                   f'fill="{_COLORS.get(k, "#7f7f7f")}">BP_{k} boundary</text>\n')
    out.append("</svg>\n")
    return "".join(out)


def curves_svg(title: str, points: list[CurvePoint], size: int = 480) -> str:
    pad = 40
    ks = sorted({p.k for p in points})

    def tx(lam, v):
        return pad + lam * (size - 2 * pad), size - pad - v * (size - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">\n', f"  <title>{title}</title>\n"]
    out.append(f'  <rect x="{pad}" y="{pad}" width="{size - 2 * pad}" height="{size - 2 * pad}" '
               f'fill="none" stroke="#000000"/>\n')
    for k in ks:
        row = sorted((p for p in points if p.k == k), key=lambda p: p.lam)
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (tx(p.lam, p.value_closed_form) for p in row))
        color = _COLORS.get(k, "#7f7f7f")
        out.append(f'  <polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>\n')
        for p in row:
            px, py = tx(p.lam, p.value_optimizer)
            out.append(f'  <circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2" fill="{color}"/>\n')
        out.append(f'  <text x="{size - pad - 40}" y="{pad + 14 * k}" font-size="11" fill="{color}">k = {k}</text>\n')
    out.append(f'  <text x="{pad}" y="{pad - 10}" font-size="12">{title}</text>\n')
    out.append("</svg>\n")
    return "".join(out)
