"""Eigensolving, perturbative spectra and truncation convergence.

Small |z|: the unperturbed energy is the diagonal of the Hamiltonian,
``E0 = w (n_a + n_b + 1) + kappa m + |z|^2 (m^2 - lambda) / 2M``, the first
order vanishes, and the closed-form second order is
``E2 = -|z|^2 (m^2 - lambda) / 2M - |z|^2 m l / 2M`` with ``l = n_b - n_a``.
:func:`rs2_shift` evaluates the Rayleigh-Schrödinger sum itself, which is
what exact diagonalization actually converges to.

Large |z|: the same diagonal is the zeroth order and the couplings give a
relative correction of order ``w / M``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import linear_sum_assignment

from .irrep import IrrepSpec, ladder_amplitude
from .nc_hamiltonian import (NCParams, SectorBasis, assemble, build_hamiltonian,
                             diagonal_energy, sector_basis)
from .operators import HermitianOperator

DENSE_LIMIT = 2000
EIG_RTOL = 1e-10
RESIDUAL_TOL = 1e-8
CONVERGENCE_RTOL = 1e-8


class NumericalError(RuntimeError):
    """Eigensolver or convergence failure."""


class LevelMatchingError(NumericalError):
    pass


# --------------------------------------------------------------------------
# eigensolver


def eigenpairs(op: HermitianOperator | sp.spmatrix | np.ndarray, count: int | None = None,
               check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Lowest ``count`` eigenpairs, ascending.

    Dense LAPACK below ``DENSE_LIMIT``, implicitly restarted Lanczos
    (ARPACK) above.  Every returned pair is checked against
    ``|H v - E v| <= RESIDUAL_TOL |v|``.
    """
    mat = op.matrix if isinstance(op, HermitianOperator) else op
    mat = sp.csr_matrix(mat, dtype=complex) if not sp.issparse(mat) else mat.tocsr()
    n = mat.shape[0]
    if check:
        diff = mat - mat.conj().T
        scale = max(1.0, float(abs(mat).max()) if mat.nnz else 0.0)
        if diff.nnz and float(abs(diff).max()) > 1e-13 * scale:
            raise ValueError("non-Hermitian input")
    count = n if count is None else min(count, n)
    if n <= DENSE_LIMIT or count >= n - 1:
        vals, vecs = np.linalg.eigh(mat.toarray())
        vals, vecs = vals[:count], vecs[:, :count]
    else:
        vals, vecs = spla.eigsh(mat, k=count, which="SA", tol=EIG_RTOL * 1e-2)
        order = np.argsort(vals, kind="stable")
        vals, vecs = vals[order], vecs[:, order]
    if count:
        res = np.linalg.norm(mat @ vecs - vecs * vals, axis=0)
        bad = res > RESIDUAL_TOL * np.linalg.norm(vecs, axis=0)
        if np.any(bad):
            raise NumericalError(f"eigenpair residual {res.max():.2e} above tolerance")
    return vals, vecs


def eigenvalues(op, count: int | None = None) -> np.ndarray:
    return eigenpairs(op, count)[0]


# --------------------------------------------------------------------------
# perturbative formulas


def _l(na, nb):
    return nb - na


def pt_small_z(params: NCParams, na: int, nb: int, m: float, irrep: IrrepSpec) -> dict:
    """Closed-form small-|z| expansion up to second order."""
    lam = irrep.lam
    zz, M = params.abs_z2, params.M
    l = _l(na, nb)
    e0 = diagonal_energy(params, lam, na, nb, m)
    e1 = 0.0
    e2 = -zz / (2 * M) * (m * m - lam) - zz / (2 * M) * m * l
    total = e0 + e1 + e2
    closed = s27_closed_form(params, na, nb, m)
    # the (m^2 - lambda) pieces cancel between E0 and E2
    if not math.isclose(total, closed, rel_tol=1e-12, abs_tol=1e-12 * max(1.0, abs(closed))):
        raise AssertionError("E0 + E2 does not collapse to the closed form")
    return {"E0": e0, "E1": e1, "E2": e2, "E_total": total}


def s27_closed_form(params: NCParams, na: int, nb: int, m: float) -> float:
    """``w (n_a + n_b + 1) + kappa m - |z|^2 m l / 2M``."""
    return (params.omega * (na + nb + 1) + params.kappa * m
            - params.abs_z2 / (2 * params.M) * m * _l(na, nb))


def pt_large_z(params: NCParams, na: int, nb: int, m: float, irrep: IrrepSpec) -> dict:
    return {
        "E0_large": diagonal_energy(params, irrep.lam, na, nb, m),
        "relative_correction_bound": params.omega / params.M,
    }


def coupling_matrix(params: NCParams, irrep: IrrepSpec, states) -> HermitianOperator:
    """Off-diagonal part ``V`` of the Hamiltonian on ``states``."""
    full = assemble(params, irrep, states)
    diag = sp.diags(full.matrix.diagonal())
    return HermitianOperator((full.matrix - diag).tocsr(), tuple(states))


def _neighborhood(state, irrep: IrrepSpec, reach: int = 1):
    na, nb, m = state
    out = []
    for dna in range(-reach, reach + 1):
        for dnb in range(-reach, reach + 1):
            for dm in range(-reach, reach + 1):
                s = (na + dna, nb + dnb, m + dm)
                if s[0] >= 0 and s[1] >= 0 and irrep.contains(s[2]):
                    out.append(s)
    return out


def rs2_shift(params: NCParams, irrep: IrrepSpec, state) -> float:
    """Second-order Rayleigh-Schrödinger shift by brute-force summation.

    Sums ``|<k|V|s>|^2 / (E0_s - E0_k)`` over every product state ``k``
    within one quantum of ``state`` (a superset of the states ``V`` reaches),
    with ``V`` read off the assembled matrix and exact unperturbed
    denominators.  The state itself is excluded.
    """
    states = _neighborhood(state, irrep)
    V = coupling_matrix(params, irrep, states).toarray()
    i = states.index(state)
    e_s = diagonal_energy(params, irrep.lam, *state)
    total = 0.0
    for k, other in enumerate(states):
        if k == i or V[k, i] == 0:
            continue
        denom = e_s - diagonal_energy(params, irrep.lam, *other)
        total += abs(V[k, i]) ** 2 / denom
    return float(total)


def rs2_leading(params: NCParams, na: int, nb: int, m: float, irrep: IrrepSpec) -> float:
    """Leading small-|z| part of :func:`rs2_shift` (denominators ``-+ w``)."""
    zz, M, lam = params.abs_z2, params.M, irrep.lam
    return -zz / (2 * M) * (m * m - lam) + zz / (2 * M) * m * _l(na, nb)


def first_order_correction(params: NCParams, irrep: IrrepSpec, state) -> complex:
    """``<s|V|s>`` from the assembled coupling matrix."""
    states = _neighborhood(state, irrep)
    V = coupling_matrix(params, irrep, states).toarray()
    i = states.index(state)
    return complex(V[i, i])


def second_order_effective_matrix(params: NCParams, irrep: IrrepSpec, n_max: int,
                                  n: int, m: float) -> tuple[list, np.ndarray]:
    """Effective second-order matrix on the degenerate group with fixed ``(n_a + n_b, m)``.

    ``W[s, s'] = sum_k <s|V|k><k|V|s'> / (E0 - E0_k)`` over all product
    states ``k`` outside the group, on the unsectored basis up to ``n_max``.
    """
    from .nc_hamiltonian import tensor_states

    states = tensor_states(irrep, n_max)
    group = [i for i, (na, nb, mm) in enumerate(states) if na + nb == n and mm == m]
    if not group:
        raise ValueError("no states with the requested (n, m)")
    V = coupling_matrix(params, irrep, states).toarray()
    e0 = np.array([diagonal_energy(params, irrep.lam, *s) for s in states])
    e_group = e0[group[0]]
    outside = np.array([i not in group for i in range(len(states))])
    denom = np.where(outside, e_group - e0, np.inf)
    W = (V[group][:, outside] / denom[outside]) @ V[outside][:, group]
    return [states[i] for i in group], W


# --------------------------------------------------------------------------
# level tracking


@dataclass
class TrackedLevels:
    labels: list
    ts: np.ndarray
    energies: np.ndarray  # (len(ts), len(labels))
    min_overlap: np.ndarray  # worst step-to-step overlap seen up to each t
    gaps: np.ndarray  # distance to the nearest other level at each t

    def energy(self, label, t_index: int) -> float:
        return float(self.energies[t_index, self.labels.index(label)])


def _assign(weights: np.ndarray) -> np.ndarray:
    """Column permutation maximizing total weight: result[row] = column."""
    rows, cols = linear_sum_assignment(-weights)
    out = np.empty(weights.shape[0], dtype=int)
    out[rows] = cols
    return out


def track_levels(params_base: NCParams, sector: SectorBasis, ts: Sequence[float],
                 t_start: float | None = None, steps_per_octave: int = 12) -> TrackedLevels:
    """Label exact levels of ``H(t z)`` by unperturbed states.

    Starts at a tiny ``t`` where every eigenvector is dominated by one
    product state, then follows eigenvectors by overlap along a geometric
    path through the requested ``ts``.
    """
    ts = np.asarray(sorted(ts), dtype=float)
    if ts.size == 0 or ts[0] <= 0:
        raise ValueError("t grid must be positive")
    t0 = ts[0] * 1e-3 if t_start is None else t_start
    n_steps = max(2, int(math.ceil(math.log2(ts[-1] / t0) * steps_per_octave)))
    path = np.unique(np.concatenate([np.geomspace(t0, ts[-1], n_steps), ts]))

    def solve(t):
        H = build_hamiltonian(params_base.scaled(t), sector)
        return np.linalg.eigh(H.toarray())

    vals, vecs = solve(path[0])
    # row = basis state (label), column = eigenvector
    perm = _assign(np.abs(vecs) ** 2)
    vecs = vecs[:, perm]
    vals = vals[perm]
    labels = list(sector.states)
    energies, min_ov, gaps = [], [], []
    worst = np.ones(len(labels))
    wanted = set(ts.tolist())
    for step, t in enumerate(path):
        if step:
            new_vals, new_vecs = solve(t)
            ov = np.abs(vecs.conj().T @ new_vecs) ** 2
            perm = _assign(ov)
            worst = np.minimum(worst, ov[np.arange(len(perm)), perm])
            vecs = new_vecs[:, perm]
            vals = new_vals[perm]
        if t in wanted:
            energies.append(vals.copy())
            min_ov.append(worst.copy())
            gaps.append(_nearest_gaps(vals))
    return TrackedLevels(labels, ts, np.array(energies), np.array(min_ov), np.array(gaps))


def _nearest_gaps(vals: np.ndarray) -> np.ndarray:
    order = np.argsort(vals, kind="stable")
    srt = vals[order]
    d = np.diff(srt)
    left = np.concatenate([[np.inf], d])
    right = np.concatenate([d, [np.inf]])
    g = np.empty(len(vals))
    g[order] = np.minimum(left, right)
    return g


# --------------------------------------------------------------------------
# small-|z| residual scaling


@dataclass
class ScalingReport:
    params_base: NCParams
    j: float
    reference: str
    ts: list
    labels: list
    energies: dict  # label -> list per t
    predictions: dict
    residuals: dict
    converged: dict  # label -> list of bools per t
    dropped: dict  # label -> list of t dropped for matching ambiguity
    slopes: dict
    selected: list  # labels used for the headline result

    def rows(self) -> list[dict]:
        out = []
        for idx, lab in enumerate(self.selected):
            for k, t in enumerate(self.ts):
                out.append({
                    "t": t, "j": self.j, "level_index": idx,
                    "label": list(lab),
                    "E_exact": self.energies[lab][k], "E_pt": self.predictions[lab][k],
                    "residual": self.residuals[lab][k], "converged": self.converged[lab][k],
                })
        return out

    def to_dict(self) -> dict:
        return {
            "params_base": self.params_base.to_dict(),
            "j": self.j,
            "reference": self.reference,
            "t_grid": self.ts,
            "levels": [
                {"label": list(lab), "slope": self.slopes[lab],
                 "E_exact": self.energies[lab], "E_pt": self.predictions[lab],
                 "residual": self.residuals[lab], "converged": self.converged[lab],
                 "dropped_t": self.dropped[lab]}
                for lab in self.selected
            ],
        }


def fit_slope(ts, rs) -> float:
    ts, rs = np.asarray(ts, float), np.asarray(rs, float)
    keep = rs > 0
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(ts[keep]), np.log(rs[keep]), 1)
    return float(slope)


REFERENCES = ("closed_form", "corrected", "rs2")


def _reference_energy(reference, params, irrep, label):
    na, nb, m = label
    if reference == "closed_form":
        return s27_closed_form(params, na, nb, m)
    if reference == "corrected":
        return diagonal_energy(params, irrep.lam, na, nb, m) + rs2_leading(params, na, nb, m, irrep)
    if reference == "rs2":
        return diagonal_energy(params, irrep.lam, na, nb, m) + rs2_shift(params, irrep, label)
    raise ValueError(f"unknown reference {reference!r}")


def residual_scaling(params_base: NCParams, irrep: IrrepSpec, j: float,
                     t_grid: Sequence[float], n_max: int = 18, n_levels: int = 10,
                     reference: str = "closed_form", refine: int = 4,
                     fit_points: int = 5, min_overlap: float = 0.5) -> ScalingReport:
    """Exact-vs-perturbative residuals along ``z -> t z``.

    Levels are labelled by adiabatic continuation from small ``t``.  A
    level counts as converged at ``t`` when enlarging both truncations by
    ``refine`` moves it by at most ``CONVERGENCE_RTOL`` (relative).  A ``t``
    is dropped for a level when its gap to a neighbour is below ten times
    the eigensolver tolerance or the continuation overlap fell below
    ``min_overlap``.  The headline set is the ``n_levels`` lowest levels
    converged at the smallest ``t``; each slope is fitted over the first
    ``fit_points`` converged, undropped ``t`` values.
    """
    ts = sorted(float(t) for t in t_grid)
    sector = sector_basis(irrep, j, n_max)
    big = sector_basis(irrep.widened(refine), j, n_max + refine)
    tr = track_levels(params_base, sector, ts)
    tr_big = track_levels(params_base, big, ts)
    eig_tol = EIG_RTOL * max(1.0, float(np.max(np.abs(tr.energies))))

    energies, preds, resid, conv, dropped, slopes = {}, {}, {}, {}, {}, {}
    for lab in tr.labels:
        i, ib = tr.labels.index(lab), tr_big.labels.index(lab)
        e = tr.energies[:, i]
        eb = tr_big.energies[:, ib]
        energies[lab] = e.tolist()
        p = [_reference_energy(reference, params_base.scaled(t), irrep, lab) for t in ts]
        preds[lab] = p
        resid[lab] = np.abs(e - np.array(p)).tolist()
        conv[lab] = (np.abs(e - eb) <= CONVERGENCE_RTOL * np.maximum(1.0, np.abs(e))).tolist()
        dropped[lab] = [t for k, t in enumerate(ts)
                        if tr.gaps[k, i] < 10 * eig_tol or tr.min_overlap[k, i] < min_overlap]
        use = [(t, r) for t, r, c in zip(ts, resid[lab], conv[lab])
               if c and t not in dropped[lab]][:fit_points]
        slopes[lab] = fit_slope([u[0] for u in use], [u[1] for u in use])
    ok = [lab for lab in tr.labels if conv[lab][0] and ts[0] not in dropped[lab]]
    ok.sort(key=lambda lab: energies[lab][0])
    selected = ok[:n_levels]
    return ScalingReport(params_base, j, reference, ts, tr.labels, energies, preds, resid,
                         conv, dropped, slopes, selected)


def degeneracy_splitting(params: NCParams, irrep: IrrepSpec, m: float = 1.0,
                         n_max: int = 18, refine: int = 4) -> dict:
    """``E(0,1,m) - E(1,0,m)`` from exact diagonalization of the two sectors.

    The closed-form second order predicts ``-|z|^2 m / M``; the Rayleigh-Schrödinger
    sum predicts ``+|z|^2 m / M``.
    """
    out = {}
    for lab in ((0, 1, m), (1, 0, m)):
        j = lab[1] - lab[0] + m
        sec = sector_basis(irrep, j, n_max)
        big = sector_basis(irrep.widened(refine), j, n_max + refine)
        e = track_levels(params, sec, [1.0]).energy(lab, 0)
        eb = track_levels(params, big, [1.0]).energy(lab, 0)
        out[lab] = (e, abs(e - eb) <= CONVERGENCE_RTOL * max(1.0, abs(e)))
    measured = out[(0, 1, m)][0] - out[(1, 0, m)][0]
    scale = params.abs_z2 / (2 * params.M)
    return {
        "measured": measured,
        "magnitude_expected": 2 * scale * m,
        "closed_form_expected": (pt_small_z(params, 0, 1, m, irrep)["E_total"]
                           - pt_small_z(params, 1, 0, m, irrep)["E_total"]),
        "rs2_expected": (rs2_leading(params, 0, 1, m, irrep) - rs2_leading(params, 1, 0, m, irrep)),
        "converged": out[(0, 1, m)][1] and out[(1, 0, m)][1],
    }


# --------------------------------------------------------------------------
# large |z|


def large_z_check(params: NCParams, irrep: IrrepSpec, j: float, n_max: int = 16,
                  refine: int = 4) -> dict:
    """Compare exact levels with the large-|z| zeroth order.

    Each converged level is paired one-to-one with an unperturbed label
    (minimum total mismatch); levels are grouped into clusters by that
    label's ``m``.  The lowest cluster is the one holding the ground state
    (its dominant product state), converged or not: clusters next to small
    ``m`` gaps can be softened by the couplings until they converge only
    very slowly in ``n_max``.
    """
    ratio = params.omega / params.M
    if ratio > 1e-2:
        raise ValueError("large-|z| check needs omega/M <= 1e-2")
    if params.abs_z2 / (2 * params.M) < 100 * params.omega:
        raise ValueError("large-|z| check needs |z|^2/2M >= 100 omega")
    sector = sector_basis(irrep, j, n_max)
    big = sector_basis(irrep.widened(refine), j, n_max + refine)
    vals, vecs = eigenpairs(build_hamiltonian(params, sector))
    vals_big = eigenvalues(build_hamiltonian(params, big))
    # a level is converged if the refined spectrum has a level within tolerance
    conv = np.array([np.min(np.abs(vals_big - v)) <= CONVERGENCE_RTOL * max(1.0, abs(v))
                     for v in vals])
    labels = list(sector.states)
    e0 = np.array([pt_large_z(params, *lab, irrep)["E0_large"] for lab in labels])
    cv = vals[conv]
    cost = np.abs(cv[:, None] - e0[None, :]) / np.abs(e0[None, :])
    rows, cols = linear_sum_assignment(cost)
    matched = sorted(((cv[r], labels[c], e0[c], cost[r, c]) for r, c in zip(rows, cols)),
                     key=lambda x: x[0])
    rel = np.array([x[3] for x in matched])
    clusters: dict = {}
    for e, lab, _, _ in matched:
        clusters.setdefault(lab[2], []).append(e)
    ms = sorted(clusters, key=lambda m: min(clusters[m]))
    intra = [np.diff(sorted(clusters[m])) for m in ms]
    intra_max = max((float(d.max()) for d in intra if d.size), default=float("nan"))
    inter = [min(clusters[b]) - max(clusters[a]) for a, b in zip(ms, ms[1:])]
    inter_min = min(inter) if inter else float("nan")
    all_m2 = min(lab[2] ** 2 for lab in labels)
    # the cluster holding the ground state, whether or not it converged
    ground_m = labels[int(np.argmax(np.abs(vecs[:, 0]) ** 2))][2]
    return {
        "omega_over_M": ratio,
        "n_levels": int(vals.size),
        "n_converged": int(conv.sum()),
        "max_relative_error": float(rel.max()) if rel.size else float("nan"),
        "C": float(rel.max() / ratio) if rel.size else float("nan"),
        "cluster_ms": [float(m) for m in ms],
        "intra_cluster_gap_max": intra_max,
        "intra_cluster_gap_median_over_omega": float(np.median(np.concatenate(intra)) / params.omega)
        if any(d.size for d in intra) else float("nan"),
        "inter_cluster_gap_min": float(inter_min),
        "gap_ratio": float(inter_min / intra_max) if inter and intra_max > 0 else float("nan"),
        "lowest_converged_cluster_m": float(ms[0]),
        "ground_state_m": float(ground_m),
        "lowest_cluster_has_min_m2": bool(ground_m ** 2 == all_m2),
        "levels": [{"E_exact": float(e), "label": list(lab), "E0_large": float(p),
                    "relative_error": float(r)} for e, lab, p, r in matched],
    }


# --------------------------------------------------------------------------
# truncation convergence


@dataclass
class ConvergenceTable:
    truncations: list
    values: list  # per truncation: lowest eigenvalues
    converged_mask: list
    edge_flags: list

    def to_dict(self) -> dict:
        return {"truncations": self.truncations, "values": self.values,
                "converged": self.converged_mask, "edge_dominated": self.edge_flags,
                "differences": [np.abs(np.subtract(b[: len(a)], a)).tolist()
                                for a, b in zip(self.values, self.values[1:])]}


def convergence_study(builder: Callable, ladder: Sequence, count: int | None = None,
                      rtol: float = CONVERGENCE_RTOL) -> ConvergenceTable:
    """Stability of the lowest levels along a ladder of truncations.

    ``builder(truncation)`` returns ``(operator, interior_mask)``.  Level
    ``i`` is converged when the last two refinements differ by at most
    ``rtol`` (relative) and its eigenvector at the finest truncation is not
    dominated by an edge (non-interior) state.
    """
    if len(ladder) < 3:
        raise ValueError("need at least 3 truncations")
    values, edge = [], []
    for trunc in ladder:
        op, interior = builder(trunc)
        k = op.dim if count is None else min(count, op.dim)
        v, vec = eigenpairs(op, k)
        values.append(v.tolist())
        dominant = np.argmax(np.abs(vec) ** 2, axis=0)
        edge.append([not bool(interior[d]) for d in dominant])
    k = min(len(v) for v in values)
    a, b = np.array(values[-2][:k]), np.array(values[-1][:k])
    stable = np.abs(b - a) <= rtol * np.maximum(1.0, np.abs(b))
    mask = [bool(s and not e) for s, e in zip(stable, edge[-1][:k])]
    return ConvergenceTable(list(ladder), values, mask, edge[-1][:k])


def sector_builder(params: NCParams, irrep: IrrepSpec, j: float):
    """Builder for :func:`convergence_study` over ``(n_max, extra_window)`` pairs."""
    def build(trunc):
        n_max, extra = trunc
        sec = sector_basis(irrep.widened(extra) if extra else irrep, j, n_max)
        return build_hamiltonian(params, sec), sec.interior_mask()
    return build


# --------------------------------------------------------------------------
# single-sector spectrum report


@dataclass
class SpectrumReport:
    params: NCParams
    irrep: IrrepSpec
    j: float
    eigenvalues: list
    converged_mask: list
    labels: list
    pt_small: list
    pt_large: list
    residual_max: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(), "irrep": self.irrep.to_dict(), "j": self.j,
            "eigenvalues": self.eigenvalues, "converged": self.converged_mask,
            "labels": [list(l) for l in self.labels],
            "pt_small": self.pt_small, "pt_large": self.pt_large,
            "max_eigenpair_residual": self.residual_max, **self.extra,
        }

    def rows(self) -> list[dict]:
        return [{"t": 1.0, "j": self.j, "level_index": i, "E_exact": e,
                 "E_pt": self.pt_small[i], "residual": abs(e - self.pt_small[i]),
                 "converged": c}
                for i, (e, c) in enumerate(zip(self.eigenvalues, self.converged_mask))]


def spectrum_report(params: NCParams, irrep: IrrepSpec, j: float, n_max: int,
                    count: int | None = None, refine: int = 4) -> SpectrumReport:
    sector = sector_basis(irrep, j, n_max)
    H = build_hamiltonian(params, sector)
    vals, vecs = eigenpairs(H, count)
    res = float(np.max(np.linalg.norm(H.matrix @ vecs - vecs * vals, axis=0), initial=0.0))
    big = sector_basis(irrep.widened(refine), j, n_max + refine)
    vals_big = eigenvalues(build_hamiltonian(params, big), min(len(big.states), len(vals) + 50))
    conv = [bool(np.min(np.abs(vals_big - v)) <= CONVERGENCE_RTOL * max(1.0, abs(v)))
            for v in vals]
    dom = _assign(np.abs(vecs.T) ** 2) if vecs.shape[1] == vecs.shape[0] else np.argmax(
        np.abs(vecs) ** 2, axis=0)
    labels = [sector.states[d] for d in dom]
    small = [pt_small_z(params, *lab, irrep)["E_total"] for lab in labels]
    large = [pt_large_z(params, *lab, irrep)["E0_large"] for lab in labels]
    return SpectrumReport(params, irrep, sector.j, vals.tolist(), conv, labels, small, large, res)


def rows_to_csv(rows: list[dict]) -> str:
    cols = ["t", "j", "level_index", "E_exact", "E_pt", "residual", "converged"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(float(r[k])) if isinstance(r[k], float) else r[k]) for k in cols})
    return buf.getvalue()


def report_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


__all__ = [
    "eigenpairs", "eigenvalues", "pt_small_z", "pt_large_z", "s27_closed_form",
    "rs2_shift", "rs2_leading", "first_order_correction", "second_order_effective_matrix",
    "track_levels", "residual_scaling", "degeneracy_splitting", "large_z_check",
    "convergence_study", "sector_builder", "spectrum_report", "ScalingReport",
    "SpectrumReport", "ConvergenceTable", "NumericalError", "ladder_amplitude",
]
