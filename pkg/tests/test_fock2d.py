import numpy as np
import pytest

from ncosc.fock2d import FockBasis, h0_matrix, l0_matrix, ladder_matrices, position_momentum


def test_dimension_and_ordering():
    b = FockBasis(3)
    assert b.dim == 10 == len(b.states)
    assert b.states[:4] == ((0, 0), (0, 1), (1, 0), (0, 2))


def test_number_operators():
    b = FockBasis(5)
    L = ladder_matrices(b)
    na = (L["a_dag"] @ L["a"]).diagonal().real
    nb = (L["b_dag"] @ L["b"]).diagonal().real
    assert np.allclose(na, [s[0] for s in b.states], atol=1e-14)
    assert np.allclose(nb, [s[1] for s in b.states], atol=1e-14)


def test_canonical_commutator_on_interior():
    b = FockBasis(6)
    xp = position_momentum(b, 1.3, 0.7)
    mask = b.interior_mask(1)
    for i in ("1", "2"):
        c = (xp["x" + i] @ xp["p" + i] - xp["p" + i] @ xp["x" + i]).toarray()
        assert np.abs(c[np.ix_(mask, mask)] - 1j * np.eye(mask.sum())).max() < 1e-12
    c = (xp["x1"] @ xp["p2"] - xp["p2"] @ xp["x1"]).toarray()
    assert np.abs(c[np.ix_(mask, mask)]).max() < 1e-12


def test_oscillator_and_angular_momentum():
    M, w = 1.3, 0.7
    b = FockBasis(6)
    xp = position_momentum(b, M, w)
    mask = b.interior_mask(2)
    h = (xp["p1"] @ xp["p1"] + xp["p2"] @ xp["p2"]) / (2 * M) + \
        M * w**2 / 2 * (xp["x1"] @ xp["x1"] + xp["x2"] @ xp["x2"])
    assert np.abs((h - h0_matrix(b, w).matrix).toarray()[np.ix_(mask, mask)]).max() < 1e-12
    L = xp["x1"] @ xp["p2"] - xp["x2"] @ xp["p1"]
    assert np.abs((L - l0_matrix(b).matrix).toarray()[np.ix_(mask, mask)]).max() < 1e-12


def test_h0_requires_positive_frequency():
    with pytest.raises(ValueError):
        h0_matrix(FockBasis(2), 0.0)
