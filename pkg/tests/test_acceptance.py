"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed in pytest's terminal summary and also when this file
is run directly (``python tests/test_acceptance.py``).
"""

import math
import sys
import time

import numpy as np
import pytest

from ncosc import dirac_osc, lie_core, spectra
from ncosc.fock2d import FockBasis
from ncosc.irrep import make_irrep
from ncosc.nc_hamiltonian import (NCParams, block_coupling, build_full_hamiltonian,
                                  build_hamiltonian, m0_matrix, recursion_report, sector_basis,
                                  sector_js, tensor_states)
from ncosc.operators import max_abs

RESULTS = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def k1(window=(1, 24)):
    return make_irrep("discrete_plus", k=1, window=window)


def lam_minus_one(window=(-11, 12)):
    return make_irrep("continuous", lam=-1.0, window=window)


def test_01_levi_pipeline():
    start = time.perf_counter()
    worst, dims, fingerprints = 0.0, set(), True
    for theta in (0.1, 1.0, 10.0):
        for kappa in (0.1, 1.0, 10.0):
            alg = lie_core.deformed_heisenberg(theta, kappa)
            derived = lie_core.derived_subalgebra(alg)
            target = lie_core.span([alg.unit(l) for l in ("1", "s0", "s1", "s2")], alg.dim)
            rep = lie_core.levi_decompose(alg)
            res = [target.residual(v) for v in derived.basis]
            res += [derived.residual(v) for v in target.basis]
            res += [rep.radical.residual(v)
                    for v in lie_core.shifted_radical_vectors(alg, theta, kappa)]
            worst = max(worst, max(res))
            dims.add((derived.dim, rep.radical.dim, rep.complement.dim))
            fingerprints &= rep.sl2r_fingerprint
    elapsed = time.perf_counter() - start
    ok = dims == {(4, 7, 3)} and worst <= 1e-10 and fingerprints and elapsed < 1.0
    record(1, "Levi pipeline", ok,
           f"dims (derived, radical, complement) {sorted(dims)}, membership residual "
           f"{worst:.1e}, sl(2,R) fingerprint {fingerprints}, {elapsed:.3f} s for 9 points")


def test_02_jacobi_suite():
    rng = np.random.default_rng(2)
    pts = rng.uniform(0.0, 10.0, size=(20, 2))
    worst = max(lie_core.jacobi_residual(lie_core.deformed_heisenberg(*p)) for p in pts)
    record(2, "Jacobi suite", worst <= 1e-12, f"max residual {worst:.2e} over 20 random points")


def test_03_commutative_limit():
    worst, sectors = 0.0, 0
    omega = 0.7
    params = NCParams(1.3, omega, 0.0, 0.0)
    for irrep in (k1((1, 10)), lam_minus_one((-5, 5))):
        n_max = 8
        for j in sector_js(irrep, n_max):
            sec = sector_basis(irrep, j, n_max)
            ev = spectra.eigenvalues(build_hamiltonian(params, sec))
            expected = np.sort([omega * (na + nb + 1) for na, nb, _ in sec.states])
            worst = max(worst, float(np.max(np.abs(ev - expected))))
            sectors += 1
    record(3, "Commutative limit", worst <= 1e-10,
           f"max eigenvalue error {worst:.1e} over {sectors} sectors (k=1 and lambda=-1)")


@pytest.mark.parametrize("name,irrep", [("k=1", k1()), ("lambda=-1", lam_minus_one())])
def test_04_small_z_scaling(name, irrep):
    start = time.perf_counter()
    rep = spectra.residual_scaling(NCParams(1.0, 1.0, 0.05, 0.05), irrep, 1.0,
                                   [1.0, 2.0, 4.0, 8.0], n_max=18, n_levels=10,
                                   reference="closed_form")
    elapsed = time.perf_counter() - start
    slopes = [rep.slopes[l] for l in rep.selected]
    r1 = [rep.residuals[l][0] for l in rep.selected]
    ok = (len(rep.selected) == 10 and all(s >= 2.8 for s in slopes)
          and max(r1) <= 1e-4 and elapsed < 120)
    record(4, f"Small-|z| scaling ({name})", ok,
           f"{len(rep.selected)} levels, slopes {min(slopes):.2f}..{max(slopes):.2f} "
           f"(need >= 2.8), max residual at t=1 {max(r1):.2e} (need <= 1e-4), "
           f"{elapsed:.1f} s")


def test_05_first_order_and_closed_form():
    rng = np.random.default_rng(5)
    worst_e1, worst_closed = 0.0, 0.0
    for _ in range(100):
        M, w = rng.uniform(0.5, 2.0, 2)
        theta, kappa = rng.uniform(0.0, 0.5, 2)
        params = NCParams(M, w, theta, kappa)
        k = rng.integers(1, 5) / 2
        irrep = make_irrep("discrete_plus", k=k, window=(k, k + 12))
        na, nb = (int(x) for x in rng.integers(0, 8, 2))
        m = k + int(rng.integers(0, 10))
        worst_e1 = max(worst_e1, abs(spectra.first_order_correction(params, irrep,
                                                                     (na, nb, m))))
        pt = spectra.pt_small_z(params, na, nb, m, irrep)
        closed = spectra.s27_closed_form(params, na, nb, m)
        worst_closed = max(worst_closed, abs(pt["E0"] + pt["E2"] - closed) / max(1.0, abs(closed)))
    ok = worst_e1 <= 1e-12 and worst_closed <= 4 * np.finfo(float).eps
    record(5, "First-order vanishing and closed form", ok,
           f"max |E1| {worst_e1:.1e}, max relative closure error {worst_closed:.1e} "
           f"over 100 tuples")


def test_06_degeneracy_breaking():
    parts, ok = [], True
    for abs_z in (0.05, 0.1):
        c = abs_z / math.sqrt(2)
        params = NCParams(1.0, 1.0, c, c)
        r = spectra.degeneracy_splitting(params, k1(), m=1.0, n_max=18)
        expected = 2 * params.abs_z2 / (2 * params.M) * 1.0
        rel = abs(r["measured"] - expected) / expected
        ok &= rel <= 10 * abs_z and r["converged"]
        parts.append(f"|z|={abs_z}: measured {r['measured']:.6e}, expected {expected:.6e}, "
                     f"rel err {rel:.1e} (bound {10 * abs_z:.1f})")
    record(6, "Degeneracy breaking", ok, "; ".join(parts))


@pytest.mark.parametrize("name,irrep", [("k=1", k1()), ("lambda=-1", lam_minus_one())])
def test_07_large_z(name, irrep):
    start = time.perf_counter()
    params = NCParams.from_z(1.0, 1e-3, 2.0, 0.1)
    r = spectra.large_z_check(params, irrep, 1.0, n_max=16)
    elapsed = time.perf_counter() - start
    bound = 5 * params.omega / params.M
    ok = (r["n_converged"] > 0 and r["max_relative_error"] <= bound
          and r["gap_ratio"] >= 10 and r["lowest_cluster_has_min_m2"] and elapsed < 120)
    record(7, f"Large-|z| regime ({name})", ok,
           f"{r['n_converged']} converged levels, max rel err {r['max_relative_error']:.2e} "
           f"(bound {bound:.0e}), gap ratio {r['gap_ratio']:.0f}, ground cluster m = "
           f"{r['ground_state_m']:g}, {elapsed:.1f} s")


def test_08_recursion_oracle():
    worst, flagged, checked = 0.0, True, 0
    params = NCParams(1.0, 1.0, 0.3, 0.2)
    for irrep in (k1((1, 12)), lam_minus_one((-6, 6))):
        for j in (1.0, 3.0):
            rep = recursion_report(params, sector_basis(irrep, j, 10), energy=0.37)
            worst = max(worst, rep["max_row_deviation"])
            flagged &= rep["printed_index_discrepancy"]
            checked += rep["interior_states_checked"]
    record(8, "Recursion oracle", worst <= 1e-12 and flagged and checked > 0,
           f"max row deviation {worst:.1e} on {checked} interior states, "
           f"printed index discrepancy flagged: {flagged}")


def test_09_dirac_equivalence():
    comm = dirac_osc.landau_equivalence_check(1.0, NCParams(1.0, 1.0), FockBasis(8))
    irrep = k1((1, 12))
    basis = dirac_osc.SpinorBasis(FockBasis(8), irrep)
    nc = dirac_osc.landau_equivalence_check(1.0, NCParams(1.0, 1.0, 0.1, 0.1), basis)
    ok = comm["unique"] and nc["unique"] and comm["sign"] == nc["sign"]
    record(9, "Dirac equivalence", ok,
           f"commutative: signs {comm['matching_signs']}, NC (0.1, 0.1): signs "
           f"{nc['matching_signs']}, max difference {nc['max_difference'][str(nc['sign'])]:.1e}"
           f" (dim {nc['dim']})")


def test_10_block_diagonality():
    worst_block, worst_comm = 0.0, 0.0
    params = NCParams(1.0, 1.0, 0.4, 0.3)
    for irrep in (k1((1, 10)), lam_minus_one((-5, 5))):
        H = build_full_hamiltonian(params, irrep, 8)
        states = tensor_states(irrep, 8)
        M0 = m0_matrix(states).matrix
        worst_block = max(worst_block, block_coupling(H, states))
        worst_comm = max(worst_comm, max_abs(H.matrix @ M0 - M0 @ H.matrix))
    record(10, "Block diagonality", worst_block == 0.0 and worst_comm == 0.0,
           f"max inter-sector element {worst_block}, max |[H, M0]| {worst_comm}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
