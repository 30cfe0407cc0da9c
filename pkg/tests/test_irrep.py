import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncosc.irrep import (IrrepError, IrrepSpec, casimir_matrix, casimir_report, make_irrep,
                         s0_matrix, s1_s2_matrices, s_minus_matrix, s_plus_matrix)
from ncosc.operators import max_abs


def test_discrete_lowest_weight_is_annihilated():
    spec = make_irrep("discrete_plus", k=1.5, window=(None, 8.5))
    sm = s_minus_matrix(spec).toarray()
    assert spec.m_min == 1.5
    assert np.all(sm[:, 0] == 0)


def test_ladder_amplitudes_are_real_and_nonnegative(k1_irrep):
    data = s_plus_matrix(k1_irrep).matrix.data
    assert np.all(data.imag == 0) and np.all(data.real >= 0)


def test_window_is_clipped_to_support():
    spec = make_irrep("discrete_plus", k=2, window=(-5, 6))
    assert (spec.m_min, spec.m_max) == (2.0, 6.0)
    spec = make_irrep("discrete_minus", k=1, window=(-6, 4))
    assert (spec.m_min, spec.m_max) == (-6.0, -1.0)


@pytest.mark.parametrize("kwargs,msg", [
    (dict(cls="continuous", lam=-0.2, window=(-3, 3)), "lambda out of range"),
    (dict(cls="discrete_plus", k=1, window=(-5, -2)), "window outside irrep support"),
    (dict(cls="discrete_plus", k=0.7, window=(1, 3)), "half-integer"),
    (dict(cls="discrete_plus", k=1, window=(1.5, 3)), "grid"),
    (dict(cls="nonsense", k=1, window=(1, 3)), "unknown irrep class"),
])
def test_invalid_irreps(kwargs, msg):
    cls = kwargs.pop("cls")
    with pytest.raises(IrrepError, match=msg):
        make_irrep(cls, **kwargs)


def test_commutation_relations_on_interior(k1_irrep, cont_irrep):
    for spec in (k1_irrep, cont_irrep):
        s0 = s0_matrix(spec).matrix
        sp_ = s_plus_matrix(spec).matrix
        sm = s_minus_matrix(spec).matrix
        mask = spec.interior_mask(1)
        c = (sp_ @ sm - sm @ sp_ + 2 * s0).toarray()
        assert np.abs(c[np.ix_(mask, mask)]).max() < 1e-12
        # [s0, s+] = s+ holds everywhere
        assert max_abs(s0 @ sp_ - sp_ @ s0 - sp_) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(3, 15))
def test_casimir_discrete(two_k, width):
    k = two_k / 2
    spec = make_irrep("discrete_plus", k=k, window=(k, k + width))
    rep = casimir_report(spec)
    assert rep["max_deviation"] < 1e-10
    assert rep["lambda"] == pytest.approx(k * (k - 1))


@settings(max_examples=30, deadline=None)
@given(st.floats(-20.0, -0.3), st.sampled_from(["integer", "half-integer"]))
def test_casimir_continuous(lam, grid):
    off = 0.0 if grid == "integer" else 0.5
    spec = make_irrep("continuous", lam=lam, grid=grid, window=(-5 + off, 5 + off))
    assert casimir_report(spec)["max_deviation"] < 1e-9


def test_s1_s2_hermitian(cont_irrep):
    s1, s2 = s1_s2_matrices(cont_irrep)
    assert max_abs(s1 - s1.conj().T) == 0.0
    assert max_abs(s2 - s2.conj().T) == 0.0


def test_single_state_window_has_empty_interior():
    spec = make_irrep("continuous", lam=-1, window=(2, 2))
    assert casimir_report(spec)["empty_interior"]


def test_dict_round_trip(cont_irrep):
    assert IrrepSpec.from_dict(cont_irrep.to_dict()) == cont_irrep


def test_widened_moves_only_truncated_edges(k1_irrep):
    w = k1_irrep.widened(3)
    assert (w.m_min, w.m_max) == (1.0, 15.0)
