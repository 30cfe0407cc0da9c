import numpy as np
import pytest
import scipy.sparse as sp

from ncosc.operators import HermitianOperator, commutator, max_abs


def random_hermitian(rng, n=6):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianOperator(sp.csr_matrix(a + a.conj().T))


def test_text_round_trip_is_exact(rng):
    op = random_hermitian(rng)
    back = HermitianOperator.import_text(op.export_text())
    assert back.dim == op.dim
    assert max_abs(back.matrix - op.matrix) == 0.0


def test_export_keeps_dimension_of_zero_operator():
    op = HermitianOperator(sp.csr_matrix((4, 4), dtype=complex))
    assert HermitianOperator.import_text(op.export_text()).dim == 4


def test_hermiticity_check(rng):
    op = random_hermitian(rng)
    assert op.hermiticity_residual() == 0.0
    bad = HermitianOperator(sp.csr_matrix(np.triu(np.ones((3, 3)))))
    with pytest.raises(ValueError, match="non-Hermitian"):
        bad.check_hermitian()


def test_rejects_non_square():
    with pytest.raises(ValueError):
        HermitianOperator(sp.csr_matrix(np.ones((2, 3))))


def test_commutator_of_operator_with_itself_vanishes(rng):
    op = random_hermitian(rng)
    assert max_abs(commutator(op, op)) < 1e-12


def test_arithmetic(rng):
    a, b = random_hermitian(rng), random_hermitian(rng)
    assert max_abs((a + b - b).matrix - a.matrix) < 1e-12
    assert max_abs((2 * a).matrix - (a * 2).matrix) == 0.0
