"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import shutil
import subprocess
import sys
import time

import numpy as np

from schmidt_witness.families import (
    antisymmetric,
    catalog_subspace,
    max_entangled,
    omega,
    rho_i,
    rho_lambda,
    sigma,
    tomiyama_point,
)
from schmidt_witness.geometry import (
    beta_thresholds,
    classify_witness,
    opposite_face_data,
    theorem31_check,
    witness_from_state,
    witnesses_outside_face,
    x_lambda,
)
from schmidt_witness.knorm import SolverConfig, knorm, knorm_profile, min_knorm, rank_k_overlap
from schmidt_witness.linalg import tau_k
from schmidt_witness.repro import closed_form_knorm, default_grid, eta_vectors, sweep_family

from conftest import ACCEPTANCE_LINES, random_state

CFG = SolverConfig()


def report(number: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_closed_form_reproduction():
    start = time.perf_counter()
    grid = default_grid(21)
    gaps = [p.abs_gap for fam in (1, 2) for k in (1, 2, 3) for p in sweep_family(fam, k, grid, CFG)]
    elapsed = time.perf_counter() - start
    worst = max(gaps)
    report(1, "closed-form k-norms", worst <= 1e-6 and len(gaps) == 126,
           f"{len(gaps)} points, worst gap {worst:.2e}, {elapsed:.1f} s")


def test_02_named_constants():
    errs = []
    for n in (2, 3, 4):
        errs += [abs(r.value - r.k / n) for r in knorm_profile(max_entangled(n), CFG)]
    errs += [abs(a - b) for a, b in zip((r.value for r in knorm_profile(antisymmetric(3), CFG)),
                                        (1 / 6, 1 / 3, 1 / 3))]
    errs.append(abs(knorm(rho_i(2), 1, CFG).value - 1 / 2))
    errs += [abs(r.value - r.k / 3) for r in knorm_profile(rho_i(3), CFG)]
    worst = max(errs)
    report(2, "named constants", worst <= 1e-8, f"{len(errs)} values, worst error {worst:.2e}")


def test_03_thresholds():
    r3 = beta_thresholds(rho_i(3), CFG).beta_minus
    e1 = np.max(np.abs(np.subtract(r3, (-1 / 2, -1 / 5, -1 / 8))))
    anti = beta_thresholds(antisymmetric(3), CFG).beta_minus
    e2 = np.max(np.abs(np.subtract(anti, (-2, -1 / 2, -1 / 2))))
    me = beta_thresholds(max_entangled(3), CFG).beta_minus
    verdicts = []
    for k in (1, 2):
        mid = (me[k - 1] + me[k]) / 2
        verdicts.append(classify_witness(x_lambda(max_entangled(3), mid), CFG).witnessed_schmidt_number)
    # the points lambda = -1/(nk - 1) themselves
    verdicts += [classify_witness(tomiyama_point(3, k), CFG).witnessed_schmidt_number for k in (1, 2)]
    ok = e1 <= 1e-8 and e2 <= 1e-8 and verdicts == [2, 3, 2, 3]
    report(3, "thresholds", ok, f"rho3 err {e1:.1e}, antisym err {e2:.1e}, witness levels {verdicts}")


def test_04_point_identities():
    errs = [np.max(np.abs(omega(3, 2).matrix - x_lambda(rho_i(3), -0.2).matrix))]
    errs.append(np.max(np.abs(omega(2, 1).matrix - witness_from_state(rho_i(2), 1, CFG).matrix)))
    for i in (1, 2):
        _, perp = opposite_face_data(catalog_subspace("xi3", f"xi{i}"))
        errs.append(np.max(np.abs(sigma(i).matrix - perp.matrix)))
    exact = max(errs)
    zeros = max(abs(min_knorm(omega(3, k), k, CFG).value) for k in (1, 2, 3))
    report(4, "point identities", exact <= 1e-12 and zeros <= 1e-7,
           f"assembly error {exact:.1e}, |min_knorm(omega_3k, k)| <= {zeros:.1e}")


def test_05_rank_k_overlap():
    rng = np.random.default_rng(5)
    worst_tau = worst_cert = worst_excess = 0.0
    cases = 0
    for _ in range(200):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 6))
        s = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
        s /= np.linalg.norm(s)
        for k in range(1, min(m, n) + 1):
            value, t0 = rank_k_overlap(s, k)
            sv = np.linalg.svd(s, compute_uv=False) ** 2
            tau = tau_k(s.ravel(), k, (m, n)) if min(m, n) >= 2 else float(np.sum(sv[:k]))
            worst_tau = max(worst_tau, abs(value - tau))
            worst_cert = max(worst_cert, abs(abs(np.vdot(s, t0)) ** 2 - value))
            a = rng.normal(size=(10_000, m, k)) + 1j * rng.normal(size=(10_000, m, k))
            b = rng.normal(size=(10_000, k, n)) + 1j * rng.normal(size=(10_000, k, n))
            t = a @ b
            t /= np.linalg.norm(t, axis=(1, 2), keepdims=True)
            sampled = np.abs(np.einsum("ij,bij->b", s.conj(), t)) ** 2
            worst_excess = max(worst_excess, float(sampled.max() - value))
            cases += 1
    ok = worst_tau <= 1e-10 and worst_cert <= 1e-10 and worst_excess <= 1e-10
    report(5, "rank-k overlap identity", ok,
           f"{cases} cases, |value - tau| {worst_tau:.1e}, certificate {worst_cert:.1e}, "
           f"oracle excess {worst_excess:.1e}")


def test_06_eigenspace_equivalence():
    rng = np.random.default_rng(6)
    states = [random_state(3, 3, rng) for _ in range(50)]
    states += [rho_lambda(i, lam) for i in (1, 2) for lam in (0.6, 0.8, 1.0)]
    failures = [(idx, k) for idx, rho in enumerate(states) for k in (1, 2)
                if not theorem31_check(rho, k, CFG).holds]
    report(6, "eigenspace entanglement equivalence", not failures,
           f"{2 * len(states)} cases, {len(failures)} failures")


def test_07_catalog_verdicts():
    cases = [
        (catalog_subspace("xi3", "xi1"), ()),
        (catalog_subspace("xi3", "xi2"), ()),
        (catalog_subspace("xi1", perp=True), ()),
        (catalog_subspace("xi2", perp=True), (2,)),
        (catalog_subspace("xi3", perp=True), (2, 3)),
    ]
    # rho3-rho_i edges live in span{xi3, xi_i}; rho3-sigma1 in xi1^perp; rho_i-sigma_i in xi3^perp;
    # rho3-sigma2 in xi2^perp
    got = [witnesses_outside_face(E, CFG).admissible_levels for E, _ in cases]
    ok = got == [want for _, want in cases]
    report(7, "witnesses outside faces", ok, f"levels {[list(g) for g in got]}")


def test_08_boundary_segments():
    eta = eta_vectors()
    forms = []
    for k in (1, 2):
        forms += [rho_i(i).expectation(eta[k]) for i in (1, 2)]
        forms.append(omega(3, k).expectation(eta[k]))
    forms += [rho_i(3).expectation(eta[3]), omega(2, 1).expectation(eta[3])]
    forms += [omega(2, 1).expectation(eta[4]), omega(3, 1).expectation(eta[4])]
    worst = max(abs(f) for f in forms)
    report(8, "boundary segment identities", worst < 1e-12, f"{len(forms)} quadratic forms, max {worst:.1e}")


def test_09_threshold_chain():
    rng = np.random.default_rng(9)
    bad = 0
    total = 0
    for m, n in ((3, 3), (2, 4)):
        for _ in range(100):
            th = beta_thresholds(random_state(m, n, rng), CFG)
            bm, bp = th.beta_minus, th.beta_plus
            chain = (all(a <= b for a, b in zip(bm, bm[1:])) and bm[-1] < 0 <= 1 <= bp[-1]
                     and all(a >= b for a, b in zip(bp, bp[1:])))
            bad += not chain
            total += 1
    report(9, "threshold chain", bad == 0, f"{total} random states, {bad} violations")


def _repro_fig3(out_dir):
    exe = shutil.which("schmidt-witness")
    cmd = [exe] if exe else [sys.executable, "-m", "schmidt_witness.cli"]
    subprocess.run(cmd + ["repro", "--fig", "3", "--seed", "7", "--out-dir", str(out_dir)],
                   check=True, capture_output=True)
    return (out_dir / "fig3.csv").read_bytes()


def test_10_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    first, second = _repro_fig3(a), _repro_fig3(b)
    report(10, "deterministic repro", first == second and len(first) > 0,
           f"{len(first)} bytes, identical={first == second}")
