"""Two-mode Fock space of the planar isotropic oscillator.

States ``|n_a, n_b>`` with ``n_a + n_b <= n_max`` are ordered by shell
``n = n_a + n_b`` and lexicographically inside a shell.  Ladder matrices
are the usual ``sqrt(n)`` ones; matrix elements leading out of the
truncation are dropped, so ``a_dag`` kills the top shell.

Units: hbar = 1.  Positions and momenta are rebuilt from the ladder
operators with length scale ``1/sqrt(M * omega)``::

    x1 - i x2 = (a_dag + b) / sqrt(M w)      p1 - i p2 = i sqrt(M w) (a_dag - b)

which makes ``p^2 + (M w x)^2 = 2 M w (a_dag a + b_dag b + 1)`` and
``L0 = b_dag b - a_dag a`` the generator under which ``x1 + i x2`` has
charge +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .operators import HermitianOperator


@dataclass(frozen=True)
class FockBasis:
    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    @cached_property
    def states(self) -> tuple[tuple[int, int], ...]:
        return tuple((na, n - na) for n in range(self.n_max + 1) for na in range(n + 1))

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_max + 2) // 2

    def index(self, na: int, nb: int) -> int:
        return self._index[(na, nb)]

    def interior_mask(self, margin: int = 1) -> np.ndarray:
        return np.array([na + nb + margin <= self.n_max for na, nb in self.states])


def _lowering(basis: FockBasis, mode: int) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    for i, st in enumerate(basis.states):
        n = st[mode]
        if n == 0:
            continue
        tgt = list(st)
        tgt[mode] -= 1
        rows.append(basis.index(*tgt))
        cols.append(i)
        vals.append(math.sqrt(n))
    return sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)),
                         shape=(basis.dim, basis.dim)).tocsr()


def ladder_matrices(basis: FockBasis) -> dict[str, sp.csr_matrix]:
    a = _lowering(basis, 0)
    b = _lowering(basis, 1)
    return {"a": a, "a_dag": a.conj().T.tocsr(), "b": b, "b_dag": b.conj().T.tocsr()}


def number_diagonals(basis: FockBasis) -> tuple[np.ndarray, np.ndarray]:
    st = np.array(basis.states, dtype=float).reshape(-1, 2)
    return st[:, 0], st[:, 1]


def h0_matrix(basis: FockBasis, omega: float) -> HermitianOperator:
    if not omega > 0:
        raise ValueError("omega must be positive")
    na, nb = number_diagonals(basis)
    return HermitianOperator(sp.diags((omega * (na + nb + 1)).astype(complex)).tocsr(),
                             basis.states)


def l0_matrix(basis: FockBasis) -> HermitianOperator:
    na, nb = number_diagonals(basis)
    return HermitianOperator(sp.diags((nb - na).astype(complex)).tocsr(), basis.states)


def position_momentum(basis: FockBasis, mass: float, omega: float) -> dict[str, sp.csr_matrix]:
    """``x1, x2, p1, p2`` on the truncated basis, length scale ``1/sqrt(mass*omega)``."""
    if not (mass > 0 and omega > 0):
        raise ValueError("mass and omega must be positive")
    L = ladder_matrices(basis)
    a, ad, b, bd = L["a"], L["a_dag"], L["b"], L["b_dag"]
    r = math.sqrt(mass * omega)
    x1 = (a + ad + b + bd) / (2 * r)
    x2 = (ad + b - a - bd) * (0.5j / r)
    p1 = (ad - a + bd - b) * (0.5j * r)
    p2 = (a - bd + ad - b) * (-0.5 * r)
    return {k: v.tocsr() for k, v in dict(x1=x1, x2=x2, p1=p1, p2=p2).items()}
