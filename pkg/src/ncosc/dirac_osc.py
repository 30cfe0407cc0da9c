"""Planar Dirac oscillator, its noncommutative extension and the Landau form.

``H = alpha_i (p_i - i w beta x_i) + M beta`` with ``alpha_1 = -sigma_1``,
``alpha_2 = -sigma_2``, ``beta = sigma_3``.  The states are
``|n_a, n_b> (x) |lambda, m> (x) |spin>`` (spin is the fastest index).
Positions and momenta come from :func:`ncosc.fock2d.position_momentum`;
the Fock length scale is ``1/sqrt(M w_ref)`` where ``w_ref`` defaults to
the physical frequency, so ``w = 0`` can still be represented.

Since ``alpha_i beta = i eps_ij alpha_j`` the oscillator term equals a
minimal coupling ``-e A_i`` in the symmetric gauge with ``eB = 2w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .fock2d import FockBasis, l0_matrix, position_momentum
from .irrep import IrrepSpec, s0_matrix, s1_s2_matrices
from .nc_hamiltonian import NCParams
from .operators import HermitianOperator, max_abs

SIGMA = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}

#: relative tolerance for "exact" matrix identities built in floating point
EXACT_RTOL = 1e-13

UP, DOWN = "up", "down"


class ConventionError(RuntimeError):
    """No sign convention reproduces the expected identity."""


def dirac_matrices() -> dict:
    """``alpha1, alpha2, beta`` and the sign ``eps12`` in ``alpha_i beta = i eps_ij alpha_j``."""
    a1, a2, beta = -SIGMA[1], -SIGMA[2], SIGMA[3].copy()
    matches = [e for e in (1, -1)
               if np.allclose(a1 @ beta, 1j * e * a2, atol=0)
               and np.allclose(a2 @ beta, -1j * e * a1, atol=0)]
    if len(matches) != 1:
        raise ConventionError("alpha_i beta = i eps_ij alpha_j fails for both signs")
    return {"alpha1": a1, "alpha2": a2, "beta": beta, "eps12": matches[0]}


def gamma_matrices() -> list[np.ndarray]:
    """``gamma^0 = sigma_3, gamma^1 = -i sigma_2, gamma^2 = i sigma_1``."""
    return [SIGMA[3].copy(), -1j * SIGMA[2], 1j * SIGMA[1]]


def clifford_residuals() -> dict:
    """Largest deviations from the Clifford relations of ``alpha, beta`` and ``gamma``."""
    d = dirac_matrices()
    a = [d["alpha1"], d["alpha2"]]
    b = d["beta"]
    one = np.eye(2)
    anti = lambda x, y: x @ y + y @ x
    alpha_res = max(np.abs(anti(a[i], a[j]) - 2 * (i == j) * one).max()
                    for i in range(2) for j in range(2))
    ab_res = max(np.abs(anti(ai, b)).max() for ai in a)
    g = gamma_matrices()
    metric = np.diag([1.0, -1.0, -1.0])
    gamma_res = max(np.abs(anti(g[mu], g[nu]) - 2 * metric[mu, nu] * one).max()
                    for mu in range(3) for nu in range(3))
    return {"alpha_alpha": float(alpha_res), "alpha_beta": float(ab_res),
            "beta_squared": float(np.abs(b @ b - one).max()),
            "gamma_anticommutator": float(gamma_res)}


@dataclass(frozen=True)
class SpinorBasis:
    """``FockBasis (x) irrep window (x) spin``; without an irrep the middle factor is absent."""

    fock: FockBasis
    irrep: Optional[IrrepSpec] = None

    @property
    def orbital_dim(self) -> int:
        return self.fock.dim * (self.irrep.dim if self.irrep is not None else 1)

    @property
    def dim(self) -> int:
        return 2 * self.orbital_dim

    @property
    def labels(self) -> tuple:
        ms = self.irrep.ms.tolist() if self.irrep is not None else [None]
        return tuple((na, nb, m, s) for na, nb in self.fock.states for m in ms
                     for s in (UP, DOWN))

    def interior_mask(self, margin: int = 1) -> np.ndarray:
        fm = self.fock.interior_mask(margin)
        im = self.irrep.interior_mask(margin) if self.irrep is not None else np.ones(1, bool)
        return np.repeat(np.kron(fm, im).astype(bool), 2)


def _orbital(basis: SpinorBasis, fock_op, irrep_op=None) -> sp.csr_matrix:
    """Embed a Fock operator (times an irrep operator) into the orbital space."""
    if basis.irrep is None:
        if irrep_op is not None:
            raise ValueError("irrep operator given for a basis without irrep factor")
        return sp.csr_matrix(fock_op)
    if irrep_op is None:
        irrep_op = sp.identity(basis.irrep.dim, dtype=complex, format="csr")
    return sp.kron(fock_op, irrep_op, format="csr")


def _full(orb, spin: np.ndarray) -> sp.csr_matrix:
    return sp.kron(orb, sp.csr_matrix(spin), format="csr")


def shifted_coordinates(params: NCParams, basis: SpinorBasis,
                        omega_ref: float | None = None) -> dict:
    """Orbital ``x_i + theta s_i`` and ``p_i + kappa s_i`` (``i = 1, 2``)."""
    w_ref = params.omega if omega_ref is None else omega_ref
    xp = position_momentum(basis.fock, params.M, w_ref)
    out = {k: _orbital(basis, v) for k, v in xp.items()}
    if basis.irrep is not None:
        s1, s2 = s1_s2_matrices(basis.irrep)
        eye_f = sp.identity(basis.fock.dim, dtype=complex, format="csr")
        for name, s in (("1", s1), ("2", s2)):
            out["x" + name] = out["x" + name] + params.theta * _orbital(basis, eye_f, s)
            out["p" + name] = out["p" + name] + params.kappa * _orbital(basis, eye_f, s)
    elif params.theta or params.kappa:
        raise ValueError("nonzero theta or kappa needs an irrep factor")
    return out


def _assemble_oscillator(params: NCParams, basis: SpinorBasis, omega: float,
                         omega_ref: float | None) -> HermitianOperator:
    d = dirac_matrices()
    alpha = (d["alpha1"], d["alpha2"])
    beta = d["beta"]
    q = shifted_coordinates(params, basis, omega_ref)
    eye = sp.identity(basis.orbital_dim, dtype=complex, format="csr")
    H = params.M * _full(eye, beta)
    for i, name in enumerate(("1", "2")):
        H = H + _full(q["p" + name], alpha[i])
        H = H + _full(q["x" + name], -1j * omega * alpha[i] @ beta)
    return HermitianOperator(H.tocsr(), basis.labels)


def dirac_oscillator(params: NCParams, basis: SpinorBasis | FockBasis,
                     omega: float | None = None) -> HermitianOperator:
    """Commutative Dirac oscillator on ``Fock (x) spin``.

    ``omega`` overrides the physical frequency (default ``params.omega``);
    the Fock length scale always uses ``params.omega``.
    """
    if params.theta or params.kappa:
        raise ValueError("dirac_oscillator needs theta = kappa = 0")
    if isinstance(basis, FockBasis):
        basis = SpinorBasis(basis)
    w = params.omega if omega is None else omega
    return _assemble_oscillator(params, basis, w, params.omega)


def nc_dirac_oscillator(params: NCParams, irrep: IrrepSpec, basis: FockBasis | int,
                        omega: float | None = None) -> HermitianOperator:
    """Dirac oscillator with the shifted variables on ``Fock (x) irrep (x) spin``."""
    fock = basis if isinstance(basis, FockBasis) else FockBasis(int(basis))
    w = params.omega if omega is None else omega
    return _assemble_oscillator(params, SpinorBasis(fock, irrep), w, params.omega)


def landau_hamiltonian(params: NCParams, basis: SpinorBasis, eB: float,
                       sign: int) -> HermitianOperator:
    """``alpha_i (p_i - e A_i) + M beta`` with ``A_i = sign * (-(B/2)) eps_ij x_j``.

    ``eps_12 = +1`` here; ``x`` and ``p`` are the shifted coordinates.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    d = dirac_matrices()
    alpha = (d["alpha1"], d["alpha2"])
    q = shifted_coordinates(params, basis)
    # e A_1 = -s (eB/2) x_2,  e A_2 = +s (eB/2) x_1
    eA = (-sign * eB / 2 * q["x2"], sign * eB / 2 * q["x1"])
    eye = sp.identity(basis.orbital_dim, dtype=complex, format="csr")
    H = params.M * _full(eye, d["beta"])
    for i, name in enumerate(("1", "2")):
        H = H + _full(q["p" + name] - eA[i], alpha[i])
    return HermitianOperator(H.tocsr(), basis.labels)


def landau_equivalence_check(omega: float, params: NCParams,
                             basis: SpinorBasis | FockBasis) -> dict:
    """Compare the oscillator with the Landau form at ``eB = 2 omega`` for both gauge signs.

    ``params.omega`` only fixes the Fock length scale; ``omega`` is the
    physical frequency.  Raises :class:`ConventionError` if neither sign
    gives the identity.
    """
    if isinstance(basis, FockBasis):
        basis = SpinorBasis(basis)
    if omega < 0:
        raise ValueError("omega must be non-negative")
    h_osc = _assemble_oscillator(params, basis, omega, params.omega)
    scale = max(1.0, max_abs(h_osc.matrix))
    diffs = {}
    for s in (1, -1):
        h_l = landau_hamiltonian(params, basis, 2 * omega, s)
        diffs[s] = max_abs(h_osc.matrix - h_l.matrix)
    matching = [s for s in (1, -1) if diffs[s] <= EXACT_RTOL * scale]
    if not matching:
        raise ConventionError("no sign matches")
    return {
        "omega": omega,
        "eB": 2 * omega,
        "params": params.to_dict(),
        "dim": basis.dim,
        "max_difference": {str(s): diffs[s] for s in (1, -1)},
        "matching_signs": matching,
        "unique": len(matching) == 1,
        "sign": matching[0] if len(matching) == 1 else None,
        "eps12": dirac_matrices()["eps12"],
    }


def rotation_generator(basis: SpinorBasis, c: float) -> HermitianOperator:
    """``J0 = L0 + s0 + c sigma_3`` (``s0`` omitted without an irrep factor)."""
    orb = _orbital(basis, l0_matrix(basis.fock).matrix)
    if basis.irrep is not None:
        eye_f = sp.identity(basis.fock.dim, dtype=complex, format="csr")
        orb = orb + _orbital(basis, eye_f, s0_matrix(basis.irrep).matrix)
    J = _full(orb, np.eye(2)) + c * _full(sp.identity(basis.orbital_dim, format="csr"),
                                          SIGMA[3])
    return HermitianOperator(J.tocsr(), basis.labels)


def conserved_spin_term(H: HermitianOperator, basis: SpinorBasis,
                        candidates=(0.5, -0.5)) -> dict:
    """Which ``c`` makes ``[H, L0 + s0 + c sigma_3]`` vanish."""
    scale = max(1.0, max_abs(H.matrix))
    res = {}
    for c in candidates:
        J = rotation_generator(basis, c).matrix
        res[c] = max_abs(H.matrix @ J - J @ H.matrix)
    good = [c for c in candidates if res[c] <= EXACT_RTOL * scale]
    if len(good) != 1:
        raise ConventionError(f"conserved rotation generator ambiguous: {res}")
    return {"c": good[0], "residuals": {str(c): r for c, r in res.items()}}


def j_blocks(H: HermitianOperator, basis: SpinorBasis, c: float) -> dict:
    """Split by eigenvalue of ``J0``; returns the blocks and the largest off-block entry."""
    jvals = rotation_generator(basis, c).matrix.diagonal().real
    keys = np.round(2 * jvals).astype(int)
    coo = H.matrix.tocoo()
    cross = keys[coo.row] != keys[coo.col]
    leak = float(np.abs(coo.data[cross]).max()) if cross.any() else 0.0
    blocks = {}
    for k in np.unique(keys):
        idx = np.flatnonzero(keys == k)
        blocks[k / 2] = (idx, H.matrix[idx][:, idx])
    return {"blocks": blocks, "off_block_max": leak}


def nonrelativistic_levels(params: NCParams, n_max: int, count: int = 6) -> dict:
    """Distinct positive eigenvalues of the commutative oscillator, lowest first.

    Only states far from the Fock cut-off are trusted: levels are kept if
    they appear unchanged at ``n_max`` and ``n_max + 2``.
    """
    vals = []
    for n in (n_max, n_max + 2):
        H = dirac_oscillator(params, FockBasis(n)).toarray()
        ev = np.linalg.eigvalsh(H)
        pos = np.sort(ev[ev > 0])
        distinct = [pos[0]]
        for e in pos[1:]:
            if e - distinct[-1] > 1e-9 * max(1.0, abs(e)):
                distinct.append(e)
        vals.append(np.array(distinct))
    a, b = vals
    keep = [e for e in a if np.min(np.abs(b - e)) <= 1e-10 * max(1.0, abs(e))][:count]
    keep = np.array(keep)
    spacings = np.diff(keep)
    return {"levels": keep.tolist(), "spacings": spacings.tolist(),
            "binding": (keep - params.M).tolist()}


def theta_sign_spectrum_check(params: NCParams, irrep: IrrepSpec, n_max: int) -> dict:
    """Spectra at ``theta`` and ``-theta`` (same ``|z|`` and ``kappa``).

    ``NCParams`` keeps ``theta >= 0``, so the negative branch is assembled
    by flipping the sign of the ``theta s_i`` shift directly.
    """
    fock = FockBasis(n_max)
    basis = SpinorBasis(fock, irrep)
    h_plus = nc_dirac_oscillator(params, irrep, fock)
    flipped = NCParams(params.M, params.omega, 0.0, params.kappa)
    h_zero = nc_dirac_oscillator(flipped, irrep, fock)
    # H is affine in theta
    h_minus = 2 * h_zero.matrix - h_plus.matrix
    ev_p = np.linalg.eigvalsh(h_plus.toarray())
    ev_m = np.linalg.eigvalsh(h_minus.toarray())
    return {"max_difference": float(np.max(np.abs(ev_p - ev_m))),
            "dim": basis.dim, "params": params.to_dict()}
