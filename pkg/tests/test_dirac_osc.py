import numpy as np
import pytest
import scipy.sparse as sp

from ncosc import dirac_osc as d
from ncosc.fock2d import FockBasis
from ncosc.irrep import make_irrep
from ncosc.nc_hamiltonian import NCParams
from ncosc.operators import max_abs


def test_dirac_matrices_and_epsilon_sign():
    m = d.dirac_matrices()
    assert m["eps12"] == -1
    assert np.array_equal(m["alpha1"] @ m["beta"], 1j * m["eps12"] * m["alpha2"])


def test_clifford_relations_exact():
    assert all(v == 0.0 for v in d.clifford_residuals().values())


def test_hermitian_and_zero_frequency_lowest_shell():
    params = NCParams(1.5, 1.0)
    H = d.dirac_oscillator(params, FockBasis(4))
    assert H.hermiticity_residual() == 0.0
    H0 = d.dirac_oscillator(params, FockBasis(4), omega=0.0).toarray()
    assert np.allclose(np.linalg.eigvalsh(H0[:2, :2]), [-1.5, 1.5])


def test_commutative_spectrum_closed_form():
    # E = +-sqrt(M^2 + 4 M w n) on states far from the cut-off
    M, w = 1.0, 0.3
    H = d.dirac_oscillator(NCParams(M, w), FockBasis(14)).toarray()
    ev = np.linalg.eigvalsh(H)
    for n in range(4):
        e = np.sqrt(M**2 + 4 * M * w * n)
        assert np.min(np.abs(ev - e)) < 1e-10
        if n:
            assert np.min(np.abs(ev + e)) < 1e-10


def test_landau_equivalence_sign_is_unique():
    rep = d.landau_equivalence_check(0.7, NCParams(1.0, 0.7), FockBasis(6))
    assert rep["unique"] and rep["sign"] == 1
    assert rep["max_difference"]["1"] <= 1e-15
    assert rep["max_difference"]["-1"] > 1.0


def test_zero_frequency_matches_both_signs():
    rep = d.landau_equivalence_check(0.0, NCParams(1.0, 1.0), FockBasis(5))
    assert rep["matching_signs"] == [1, -1]


def test_no_sign_matches_raises(monkeypatch):
    monkeypatch.setattr(d, "landau_hamiltonian",
                        lambda params, basis, eB, sign: d.dirac_oscillator(params, basis.fock) * 2)
    with pytest.raises(d.ConventionError, match="no sign matches"):
        d.landau_equivalence_check(1.0, NCParams(), FockBasis(3))


def test_nc_reduces_to_commutative_tensor_identity():
    irrep = make_irrep("discrete_plus", k=1, window=(1, 4))
    fock = FockBasis(4)
    params = NCParams(1.0, 0.8)
    H_nc = d.nc_dirac_oscillator(params, irrep, fock).matrix
    H_c = d.dirac_oscillator(params, fock).matrix
    # reorder Fock (x) spin (x) irrep into Fock (x) irrep (x) spin
    expected = sp.kron(H_c, sp.identity(irrep.dim)).toarray()
    nf, ni = fock.dim, irrep.dim
    perm = np.arange(nf * 2 * ni).reshape(nf, 2, ni).transpose(0, 2, 1).ravel()
    assert np.abs(H_nc.toarray() - expected[np.ix_(perm, perm)]).max() == 0.0


def test_conserved_rotation_generator_and_blocks():
    irrep = make_irrep("discrete_plus", k=1, window=(1, 8))
    basis = d.SpinorBasis(FockBasis(5), irrep)
    H = d.nc_dirac_oscillator(NCParams(1.0, 1.0, 0.2, 0.3), irrep, basis.fock)
    assert H.hermiticity_residual() == 0.0
    c = d.conserved_spin_term(H, basis)["c"]
    assert c == 0.5
    assert d.j_blocks(H, basis, c)["off_block_max"] == 0.0


def test_nonrelativistic_ladder():
    M, w = 1.0, 1e-3
    rep = d.nonrelativistic_levels(NCParams(M, w), 12)
    lv = np.array(rep["levels"])
    assert abs(lv[0] - M) < 10 * w
    sp_ = np.array(rep["spacings"])
    # uniform spacing 2w up to O(w^2 / M)
    assert np.abs(sp_ - 2 * w).max() < 10 * w**2 / M * len(sp_)
    assert np.abs(np.diff(sp_)).max() < 10 * w**2 / M


def test_theta_sign_spectrum():
    irrep = make_irrep("discrete_plus", k=1, window=(1, 6))
    rep = d.theta_sign_spectrum_check(NCParams(1.0, 1.0, 0.2, 0.1), irrep, 4)
    assert rep["max_difference"] < 1e-10
