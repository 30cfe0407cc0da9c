"""Noncommutative Schrödinger oscillator on fixed-``j`` sectors.

After the Bopp shift ``x -> x + theta s``, ``p -> p + kappa s`` the
oscillator Hamiltonian acts on ``|n_a, n_b> (x) |lambda, m>`` as::

    2M H = 2M w (n_a + n_b + 1) + 2M kappa s0 + |z|^2 (s0^2 - lambda)
           + sqrt(M w) (z a_dag s+ + conj(z) a s- + z b_dag s- + conj(z) b s+)

with ``z = theta M w + i kappa``.  Every hop conserves
``j = n_b - n_a + m`` (the eigenvalue of ``M0 = L0 + s0``), so the matrix
is block diagonal in ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .irrep import IrrepSpec, ladder_amplitude
from .operators import HermitianOperator


class SectorError(ValueError):
    pass


@dataclass(frozen=True)
class NCParams:
    M: float = 1.0
    omega: float = 1.0
    theta: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("mass must be positive")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.theta < 0 or self.kappa < 0:
            raise ValueError("theta and kappa must be non-negative")

    @property
    def z(self) -> complex:
        return complex(self.theta * self.M * self.omega, self.kappa)

    @property
    def zbar(self) -> complex:
        return self.z.conjugate()

    @property
    def abs_z2(self) -> float:
        return (self.theta * self.M * self.omega) ** 2 + self.kappa**2

    def scaled(self, t: float) -> "NCParams":
        """Scale both deformation parameters, ``z -> t z``."""
        return NCParams(self.M, self.omega, t * self.theta, t * self.kappa)

    @classmethod
    def from_z(cls, M: float, omega: float, abs_z2: float, kappa: float) -> "NCParams":
        """Parameters with given ``|z|^2`` and ``kappa``."""
        rest = abs_z2 - kappa**2
        if rest < 0:
            raise ValueError("|z|^2 must be at least kappa^2")
        return cls(M, omega, math.sqrt(rest) / (M * omega), kappa)

    def to_dict(self) -> dict:
        return {"M": self.M, "omega": self.omega, "theta": self.theta, "kappa": self.kappa}


@dataclass(frozen=True)
class SectorBasis:
    irrep: IrrepSpec
    j: float
    n_max: int
    states: tuple[tuple[int, int, float], ...]
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        return self._index[state]

    def __contains__(self, state) -> bool:
        return state in self._index

    def interior_mask(self) -> np.ndarray:
        """States whose four hop targets lie inside the truncation (or vanish physically)."""
        out = []
        for na, nb, m in self.states:
            ok = na + nb + 1 <= self.n_max
            ok &= m + 1 <= self.irrep.m_max + 1e-12 or self.irrep.upper_edge_physical
            ok &= m - 1 >= self.irrep.m_min - 1e-12 or self.irrep.lower_edge_physical
            out.append(bool(ok))
        return np.array(out, dtype=bool)

    def pt_labels(self) -> list[tuple[int, int, float]]:
        return list(self.states)


def _m_key(m: float) -> float:
    # canonical float for half-integers so dict lookups match
    return round(2 * m) / 2


def sector_basis(irrep: IrrepSpec, j: float, n_max: int) -> SectorBasis:
    """All ``(n_a, n_b, m)`` with ``n_b - n_a + m = j`` inside both truncations."""
    if abs((j - irrep.grid_offset) - round(j - irrep.grid_offset)) > 1e-12:
        raise SectorError(f"j = {j} incompatible with the irrep's m grid")
    states = []
    for n in range(n_max + 1):
        for na in range(n + 1):
            nb = n - na
            m = _m_key(j + na - nb)
            if irrep.contains(m):
                states.append((na, nb, m))
    if not states:
        raise SectorError("empty sector")
    return SectorBasis(irrep, _m_key(j), n_max, tuple(states))


def tensor_states(irrep: IrrepSpec, n_max: int) -> list[tuple[int, int, float]]:
    """Unsectored product basis, Fock-major."""
    return [(na, n - na, _m_key(m)) for n in range(n_max + 1) for na in range(n + 1)
            for m in irrep.ms]


def sector_js(irrep: IrrepSpec, n_max: int) -> list[float]:
    js = {_m_key(nb - na + m) for na, nb, m in tensor_states(irrep, n_max)}
    return sorted(js)


def _raising_hops(params: NCParams, irrep: IrrepSpec, state, conjugate: bool):
    """Hops that raise ``m``: ``a_dag s+`` and ``b s+``, as (target, <target|2MH|state>)."""
    na, nb, m = state
    z, zb = (params.zbar, params.z) if conjugate else (params.z, params.zbar)
    r = math.sqrt(params.M * params.omega)
    up = ladder_amplitude(m, irrep.lam, +1)
    if up == 0.0:
        return []
    hops = [((na + 1, nb, _m_key(m + 1)), r * z * math.sqrt(na + 1) * up)]
    if nb > 0:
        hops.append(((na, nb - 1, _m_key(m + 1)), r * zb * math.sqrt(nb) * up))
    return hops


def diagonal_energy(params: NCParams, lam: float, na: int, nb: int, m: float) -> float:
    """Diagonal of ``H``: ``w (n+1) + kappa m + |z|^2 (m^2 - lambda) / 2M``."""
    return (params.omega * (na + nb + 1) + params.kappa * m
            + params.abs_z2 * (m * m - lam) / (2 * params.M))


def assemble(params: NCParams, irrep: IrrepSpec, states: Sequence, *,
             conjugate: bool = False, couplings: bool = True) -> HermitianOperator:
    """``H`` on an explicit list of product states.

    Hops leaving the list are dropped.  ``conjugate`` swaps ``z`` and
    ``conj(z)`` in the couplings (the transposed convention); the spectrum
    is unchanged by it.
    """
    states = tuple(states)
    index = {s: i for i, s in enumerate(states)}
    rows, cols, vals = [], [], []
    two_m = 2 * params.M
    for i, (na, nb, m) in enumerate(states):
        if not irrep.contains(m):
            raise SectorError("sector/irrep mismatch")
        rows.append(i)
        cols.append(i)
        vals.append(diagonal_energy(params, irrep.lam, na, nb, m))
        if not couplings:
            continue
        for tgt, amp in _raising_hops(params, irrep, (na, nb, m), conjugate):
            k = index.get(tgt)
            if k is None or amp == 0:
                continue
            rows += [k, i]
            cols += [i, k]
            vals += [amp / two_m, np.conj(amp) / two_m]
    mat = sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)),
                        shape=(len(states), len(states))).tocsr()
    return HermitianOperator(mat, states)


def build_hamiltonian(params: NCParams, sector: SectorBasis, *,
                      conjugate: bool = False) -> HermitianOperator:
    for na, nb, m in sector.states:
        if abs(nb - na + m - sector.j) > 1e-12 or not sector.irrep.contains(m):
            raise SectorError("sector/irrep mismatch")
    return assemble(params, sector.irrep, sector.states, conjugate=conjugate)


def build_full_hamiltonian(params: NCParams, irrep: IrrepSpec, n_max: int) -> HermitianOperator:
    return assemble(params, irrep, tensor_states(irrep, n_max))


def m0_matrix(states: SectorBasis | Sequence) -> HermitianOperator:
    """``M0 = L0 + s0`` as the diagonal ``n_b - n_a + m``."""
    sts = states.states if isinstance(states, SectorBasis) else tuple(states)
    d = np.array([nb - na + m for na, nb, m in sts], dtype=complex)
    return HermitianOperator(sp.diags(d).tocsr(), sts)


def block_coupling(op: HermitianOperator, states: Sequence) -> float:
    """Largest matrix element between states of different ``j``."""
    js = np.array([nb - na + m for na, nb, m in states])
    coo = op.matrix.tocoo()
    off = js[coo.row] != js[coo.col]
    return float(np.max(np.abs(coo.data[off]), initial=0.0))


# --------------------------------------------------------------------------
# recursion relation for the expansion coefficients


def _amp(m: float, lam: float, step: int) -> float:
    rad = m * (m + step) - lam
    return math.sqrt(rad) if rad > 0 else 0.0


@dataclass
class RecursionRow:
    state: tuple
    diagonal: complex
    terms: list  # [(neighbor, coefficient)]
    flags: list = field(default_factory=list)


def recursion_row(params: NCParams, sector: SectorBasis, state, energy: float = 0.0) -> RecursionRow:
    """Coefficients of ``<state| 2M (H - E) |psi>`` in terms of ``C`` at each neighbor.

    Written out hop by hop from the raw matrix elements, independently of
    :func:`assemble`.  Each bra ``(n_a, n_b, m)`` meets the kets
    ``(n_a -+ 1, n_b, m -+ 1)`` and ``(n_a, n_b -+ 1, m +- 1)``.  Neighbors
    outside the sector are reported in ``flags`` and dropped.
    """
    if state not in sector:
        raise SectorError(f"state {state} not in sector")
    na, nb, m = state
    lam = sector.irrep.lam
    M, w, kap = params.M, params.omega, params.kappa
    z, zb, zz = params.z, params.zbar, params.abs_z2
    r = math.sqrt(M * w)
    diag = 2 * M * w * (na + nb + 1) - 2 * M * (energy - kap * m) + zz * (m * m - lam)
    candidates = [
        # ket one quantum lower in a and m: reached by a_dag s+ (coefficient z)
        ((na - 1, nb, m - 1), r * z * math.sqrt(na) * _amp(m - 1, lam, +1) if na > 0 else 0.0),
        # ket one higher: reached by a s- (conj z)
        ((na + 1, nb, m + 1), r * zb * math.sqrt(na + 1) * _amp(m + 1, lam, -1)),
        # ket with one more b quantum, m lower by one: b s+ (conj z)
        ((na, nb + 1, m - 1), r * zb * math.sqrt(nb + 1) * _amp(m - 1, lam, +1)),
        # ket with one fewer b quantum, m higher: b_dag s- (z)
        ((na, nb - 1, m + 1), r * z * math.sqrt(nb) * _amp(m + 1, lam, -1) if nb > 0 else 0.0),
    ]
    terms, flags = [], []
    for nbr, coeff in candidates:
        nbr = (nbr[0], nbr[1], _m_key(nbr[2]))
        if coeff == 0:
            continue
        if nbr in sector:
            terms.append((nbr, complex(coeff)))
        else:
            flags.append(f"neighbor {nbr} outside truncation")
    return RecursionRow(state, complex(diag), terms, flags)


def printed_recursion_terms(params: NCParams, lam: float, state) -> list:
    """The four off-diagonal terms of the recursion in its printed form.

    Kept only to document its discrepancies; see :func:`recursion_report`.
    """
    na, nb, m = state
    z, zb = params.z, params.zbar
    r = math.sqrt(params.M * params.omega)
    return [
        ((na + 1, nb, m + 1), r * z * math.sqrt(na + 1) * _amp(m, lam, +1)),
        ((na - 1, nb, m - 1), r * zb * math.sqrt(na) * _amp(m, lam, -1)),
        ((na, nb + 1, m + 1), r * z * math.sqrt(nb + 1) * _amp(m, lam, -1)),
        ((na, nb - 1, m - 1), r * zb * math.sqrt(nb) * _amp(m, lam, +1)),
    ]


def recursion_report(params: NCParams, sector: SectorBasis, op: HermitianOperator | None = None,
                     energy: float = 0.0) -> dict:
    """Compare assembled rows with :func:`recursion_row` on interior states.

    Also checks the printed recursion against the sector constraint and
    the Hermitian coupling convention, and lists every mismatch.
    """
    if op is None:
        op = build_hamiltonian(params, sector)
    dense = (op.matrix * (2 * params.M)).toarray()
    dense -= 2 * params.M * energy * np.eye(sector.dim)
    interior = sector.interior_mask()
    max_dev = 0.0
    checked = 0
    for i, st in enumerate(sector.states):
        if not interior[i]:
            continue
        row = recursion_row(params, sector, st, energy)
        expected = np.zeros(sector.dim, dtype=complex)
        expected[i] = row.diagonal
        for nbr, coeff in row.terms:
            expected[sector.index(nbr)] += coeff
        max_dev = max(max_dev, float(np.max(np.abs(dense[i] - expected))))
        checked += 1

    index_flags, conj_flags = set(), set()
    j = sector.j
    for st in sector.states:
        row = recursion_row(params, sector, st, energy)
        derived = {nbr: c for nbr, c in row.terms}
        for nbr, coeff in printed_recursion_terms(params, sector.irrep.lam, st):
            na, nb, m = nbr
            if coeff == 0 or na < 0 or nb < 0:
                continue
            if abs(nb - na + m - j) > 1e-12:
                index_flags.add(_describe(st, nbr))
            elif nbr in derived and abs(derived[nbr] - coeff) > 1e-12 * max(1.0, abs(coeff)):
                conj_flags.add(_describe(st, nbr))
    return {
        "interior_states_checked": checked,
        "max_row_deviation": max_dev,
        "printed_index_discrepancy": bool(index_flags),
        "printed_index_terms": sorted(index_flags),
        "printed_coefficient_mismatch_terms": sorted(conj_flags),
        "note": ("printed b-quantum terms C[n_a, n_b+1, m+1] and C[n_a, n_b-1, m-1] leave "
                 "the sector n_b - n_a + m = j; the Hermitian form couples "
                 "C[n_a, n_b+1, m-1] and C[n_a, n_b-1, m+1] instead"),
    }


def _describe(state, nbr) -> str:
    dna, dnb, dm = (b - a for a, b in zip(state, nbr))
    return f"(d n_a, d n_b, d m) = ({dna:+d}, {dnb:+d}, {dm:+g})"
